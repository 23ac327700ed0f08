"""Residual computation, classification, and the named regression catalog.

``classify`` sweeps a field with jet-based Laplacian / bi-Laplacian
evaluations over a deterministic sample set and sorts it into
harmonic / quasi-harmonic / proper-biharmonic / not-biharmonic:

  harmonic          max |lap f|  < tol (1 + scale)
  quasi-harmonic    lap f is a nonzero constant to tolerance and
                    max |lap^2 f| < tol (1 + scale)
  proper-biharmonic max |lap^2 f| < tol (1 + scale) and
                    max |lap f|  > 10 tol (1 + scale), not quasi
  not-biharmonic    otherwise

A quasi-harmonic function is in particular a proper biharmonic one; the
report carries an explicit ``proper_biharmonic`` flag alongside the
exclusive verdict so both views are available.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry, jets, sphere
from .errors import DomainError, EvaluationError, SamplingError
from .geometry import (ModelSpace, SeparableField,
                       bilaplacian_radial, bilaplacian_separable_radial_factor,
                       laplacian_radial, laplacian_separable_radial_factor)
from .jets import euclidean_bilaplacian, euclidean_laplacian
from .sphere import SphereFunction, sphere_bilaplacian, sphere_laplacian

__all__ = [
    "Sampler", "ResidualReport", "SphereSpace", "EuclideanSpace",
    "classify", "eigen_residual", "buckling_residual", "run_catalog",
    "CatalogEntry", "catalog_entries",
]


@dataclass(frozen=True)
class SphereSpace:
    """The unit sphere S^m, sampled through its ambient embedding."""
    m: int


@dataclass(frozen=True)
class EuclideanSpace:
    """Punctured Euclidean space R^n \\ {0} in ambient coordinates."""
    n: int


@dataclass(frozen=True)
class Sampler:
    """Deterministic sample generator.

    kind "radial-grid": `count` points strictly inside `region=(lo, hi)`.
    kind "log-radial": log-spaced radii in region.
    kind "sphere-gaussian": unit vectors from seeded normalized Gaussians;
        `region` may carry ("cap", axis, height) exclusions.
    kind "product-grid": (r, theta) pairs, theta unit vectors on S^{m-1}.
    """

    kind: str
    count: int
    seed: int = 0
    region: tuple = ()
    dim: int = 0
    exclude: tuple = ()

    def points(self):
        if self.kind == "radial-grid":
            lo, hi = self.region
            # strictly interior: the domain endpoints are open
            return list(np.linspace(lo, hi, self.count + 2)[1:-1])
        if self.kind == "log-radial":
            lo, hi = self.region
            return list(np.exp(np.linspace(math.log(lo), math.log(hi),
                                           self.count)))
        if self.kind == "sphere-gaussian":
            return [list(p) for p in
                    sphere_points(self.dim, self.count, self.seed,
                                  self.exclude)]
        if self.kind == "gaussian":
            rng = np.random.default_rng(self.seed)
            pts = rng.standard_normal((self.count, self.dim))
            lo, hi = self.region if self.region else (0.2, 5.0)
            radii = np.exp(rng.uniform(math.log(lo), math.log(hi),
                                       self.count))
            nrm = np.linalg.norm(pts, axis=1)
            pts = pts / nrm[:, None] * radii[:, None]
            return [list(p) for p in pts]
        if self.kind == "product-grid":
            lo, hi = self.region
            rs = np.linspace(lo, hi, max(2, self.count) + 2)[1:-1]
            thetas = sphere_points(self.dim, max(6, self.count // 2),
                                   self.seed)
            return [(float(r), list(th)) for r in rs for th in thetas]
        raise DomainError("unknown sampler kind %r" % self.kind)


def sphere_points(n, count, seed=0, exclude=()):
    """`count` seeded unit vectors in R^n, rejecting excluded caps
    ("cap", axis, height): points with x[axis] > height are redrawn."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        v = rng.standard_normal(n)
        nrm = np.linalg.norm(v)
        if nrm < 1e-8:
            continue
        v = v / nrm
        bad = False
        for kind, axis, height in exclude:
            if kind == "cap" and v[axis] > height:
                bad = True
            if kind == "belt" and abs(v[axis]) > height:
                bad = True
        if not bad:
            out.append(v)
    return out


@dataclass
class ResidualReport:
    """Max/mean Laplacian and bi-Laplacian residuals over a sample set,
    with the classification verdict."""

    max_laplacian: float
    mean_laplacian: float
    max_bilaplacian: float
    mean_bilaplacian: float
    scale: float
    verdict: str
    tolerance: float
    excluded: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def proper_biharmonic(self):
        """Biharmonic with lap f not identically zero (the paper-level
        notion; quasi-harmonic fields qualify)."""
        t = self.tolerance * (1.0 + self.scale)
        return self.max_bilaplacian < t and self.max_laplacian > 10.0 * t

    def to_json_dict(self):
        out = {
            "max_laplacian": self.max_laplacian,
            "mean_laplacian": self.mean_laplacian,
            "max_bilaplacian": self.max_bilaplacian,
            "mean_bilaplacian": self.mean_bilaplacian,
            "scale": self.scale,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "excluded": self.excluded,
        }
        out.update(self.detail)
        return out


def _operators_for(field_obj, space):
    """(value, lap, bilap) callables for a field on a given space."""
    if isinstance(space, ModelSpace):
        if isinstance(field_obj, SeparableField):
            u, k = field_obj.radial, field_obj.degree
            ang = field_obj.angular

            def value(pt):
                r, th = pt
                a = ang(th) if ang is not None else 1.0
                return _value_of(u, r) * a

            def lap(pt):
                r, th = pt
                a = ang(th) if ang is not None else 1.0
                return laplacian_separable_radial_factor(space, u, k, r) * a

            def bilap(pt):
                r, th = pt
                a = ang(th) if ang is not None else 1.0
                return bilaplacian_separable_radial_factor(space, u, k, r) * a

            return value, lap, bilap
        u = field_obj

        def value(r):
            return _value_of(u, r)

        return (value,
                lambda r: laplacian_radial(space, u, r),
                lambda r: bilaplacian_radial(space, u, r))
    if isinstance(space, SphereSpace):
        f = field_obj

        def value(x):
            return f.restriction(x)

        return (value,
                lambda x: sphere_laplacian(f, x),
                lambda x: sphere_bilaplacian(f, x))
    if isinstance(space, EuclideanSpace):
        f = field_obj
        return (lambda x: f([float(t) for t in x]),
                lambda x: euclidean_laplacian(f, x),
                lambda x: euclidean_bilaplacian(f, x))
    raise DomainError("unknown space descriptor %r" % (space,))


def _value_of(u, r):
    v = u(r)
    return v.value if hasattr(v, "value") else v


def default_sampler(space, count=50, seed=0):
    if isinstance(space, ModelSpace):
        lo, hi = space.warp.domain
        if space.warp.tag == "spherical":
            region = (0.3, math.pi - 0.3)
        else:
            region = (max(lo, 0.3), min(hi, 2.5))
        return Sampler("radial-grid", count, seed, region)
    if isinstance(space, SphereSpace):
        return Sampler("sphere-gaussian", count, seed, dim=space.m + 1)
    if isinstance(space, EuclideanSpace):
        return Sampler("gaussian", count, seed, region=(0.2, 5.0),
                       dim=space.n)
    raise DomainError("unknown space descriptor %r" % (space,))


def classify(field_obj, space, sampler=None, tol=1e-6):
    """Classify a field by its Laplacian / bi-Laplacian residual sweep."""
    if sampler is None:
        sampler = default_sampler(space)
    pts = sampler.points() if isinstance(sampler, Sampler) else list(sampler)
    value, lap, bilap = _operators_for(field_obj, space)

    vals, laps, bils = [], [], []
    excluded = 0
    for p in pts:
        try:
            vals.append(value(p))
            laps.append(lap(p))
            bils.append(bilap(p))
        except (EvaluationError, ZeroDivisionError):
            excluded += 1
    if excluded > 0.1 * len(pts):
        raise SamplingError("%d of %d sample points were singular"
                            % (excluded, len(pts)))
    if not vals:
        raise SamplingError("no usable sample points")

    vals = np.asarray(vals, dtype=float)
    laps = np.asarray(laps, dtype=float)
    bils = np.asarray(bils, dtype=float)
    scale = float(np.max(np.abs(vals)))
    max_lap = float(np.max(np.abs(laps)))
    max_bil = float(np.max(np.abs(bils)))
    t = tol * (1.0 + scale)

    verdict = "not-biharmonic"
    detail = {}
    if max_lap < t:
        verdict = "harmonic"
    elif max_bil < t:
        mean_lap = float(np.mean(laps))
        std_lap = float(np.std(laps))
        if std_lap < tol * (1.0 + abs(mean_lap)) and abs(mean_lap) > 10 * tol:
            verdict = "quasi-harmonic"
            detail["quasi_constant"] = mean_lap
        elif max_lap > 10.0 * t:
            verdict = "proper-biharmonic"

    return ResidualReport(
        max_laplacian=max_lap,
        mean_laplacian=float(np.mean(np.abs(laps))),
        max_bilaplacian=max_bil,
        mean_bilaplacian=float(np.mean(np.abs(bils))),
        scale=scale, verdict=verdict, tolerance=tol,
        excluded=excluded, detail=detail)


def eigen_residual(field_obj, space, mu, sampler=None):
    """max |lap^2 f - mu f| over the samples."""
    if sampler is None:
        sampler = default_sampler(space)
    pts = sampler.points() if isinstance(sampler, Sampler) else list(sampler)
    value, _, bilap = _operators_for(field_obj, space)
    worst = 0.0
    for p in pts:
        worst = max(worst, abs(bilap(p) - mu * value(p)))
    return worst


def buckling_residual(field_obj, space, nu, sampler=None):
    """max |lap^2 f + nu lap f| over the samples."""
    if sampler is None:
        sampler = default_sampler(space)
    pts = sampler.points() if isinstance(sampler, Sampler) else list(sampler)
    _, lap, bilap = _operators_for(field_obj, space)
    worst = 0.0
    for p in pts:
        worst = max(worst, abs(bilap(p) + nu * lap(p)))
    return worst


# ---------------------------------------------------------------------------
# the named regression catalog

@dataclass(frozen=True)
class CatalogEntry:
    """One closed-form construction with its expected classification.

    ``build()`` returns (field, space, sampler).  ``quasi_constant`` is
    the expected constant Laplacian for quasi-harmonic entries.
    ``proper`` records whether the field is biharmonic with lap f not
    identically zero (quasi-harmonic entries are).
    """

    name: str
    expected: str
    build: object
    quasi_constant: float | None = None
    proper: bool | None = None
    note: str = ""


def _radial_entry(name, tag, m, fn, expected, const=None, note=""):
    def build(seed):
        space = ModelSpace.from_tag(tag, m)
        return fn, space, default_sampler(space, 50, seed)

    proper = expected in ("quasi-harmonic", "proper-biharmonic")
    return CatalogEntry(name, expected, build, const, proper, note)


def _cot(r):
    return jets.cos(r) / jets.sin(r)


def _coth(r):
    return jets.cosh(r) / jets.sinh(r)


def catalog_entries():
    """The full named catalog of closed-form constructions."""
    from .harmonics import harmonic_basis
    from .punctured import PositiveLaplacianFamily, family_field
    from .radial import (closed_form_basis, conformal_basis,
                         conformal_closed_form_basis)

    e = []

    # Euclidean radial basis rows, all three dimension classes
    e.append(_radial_entry("R2-ln-r", "r", 2, jets.log, "harmonic"))
    e.append(_radial_entry("R2-r2", "r", 2, lambda r: r * r,
                           "quasi-harmonic", 4.0))
    e.append(_radial_entry("R2-r2-ln-r", "r", 2,
                           lambda r: r * r * jets.log(r),
                           "proper-biharmonic",
                           note="lap is 4(1 + ln r), sign-changing"))
    e.append(_radial_entry("R4-r^-2", "r", 4, lambda r: r ** (-2),
                           "harmonic"))
    e.append(_radial_entry("R4-ln-r", "r", 4, jets.log,
                           "proper-biharmonic"))
    e.append(_radial_entry("R4-r2", "r", 4, lambda r: r * r,
                           "quasi-harmonic", 8.0))
    e.append(_radial_entry("R5-r^-3", "r", 5, lambda r: r ** (-3),
                           "harmonic"))
    e.append(_radial_entry("R5-r^-1", "r", 5, lambda r: r ** (-1),
                           "proper-biharmonic"))
    e.append(_radial_entry("R5-r2", "r", 5, lambda r: r * r,
                           "quasi-harmonic", 10.0))

    # 3-sphere / hyperbolic 3-space rows
    e.append(_radial_entry("S3-cot-r", "sin", 3, _cot, "harmonic"))
    e.append(_radial_entry("S3-r", "sin", 3, lambda r: r * 1.0,
                           "proper-biharmonic",
                           note="distance function, proper in dim 3"))
    e.append(_radial_entry("S3-r-cot-r", "sin", 3, lambda r: r * _cot(r),
                           "quasi-harmonic", -2.0))
    e.append(_radial_entry("H3-coth-r", "sinh", 3, _coth, "harmonic"))
    e.append(_radial_entry("H3-r", "sinh", 3, lambda r: r * 1.0,
                           "proper-biharmonic"))
    e.append(_radial_entry("H3-r-coth-r", "sinh", 3,
                           lambda r: r * _coth(r), "quasi-harmonic", 2.0))

    # 2-sphere / hyperbolic plane rows (with the quadrature tails)
    e.append(_radial_entry("S2-ln-tan-half", "sin", 2,
                           lambda r: jets.log(jets.tan(r / 2.0)),
                           "harmonic"))
    e.append(_radial_entry("S2-ln-sin-r", "sin", 2,
                           lambda r: jets.log(jets.sin(r)),
                           "quasi-harmonic", -1.0))
    e.append(_radial_entry("H2-ln-tanh-half", "sinh", 2,
                           lambda r: jets.log(jets.tanh(r / 2.0)),
                           "harmonic"))
    e.append(_radial_entry("H2-ln-sinh-r", "sinh", 2,
                           lambda r: jets.log(jets.sinh(r)),
                           "quasi-harmonic", 1.0,
                           note="hyperbolic spelling of the plane row"))

    def build_s2_w4(seed):
        basis = closed_form_basis("sin", 2)
        space = basis.space
        return basis.functions[3], space, default_sampler(space, 40, seed)

    e.append(CatalogEntry("S2-w4-quadrature", "proper-biharmonic",
                          build_s2_w4, None, True))

    def build_h2_w4(seed):
        basis = closed_form_basis("sinh", 2)
        space = basis.space
        return basis.functions[3], space, default_sampler(space, 40, seed)

    e.append(CatalogEntry("H2-w4-quadrature", "proper-biharmonic",
                          build_h2_w4, None, True))

    # ambient sphere examples
    def build_ln_1_x3(seed):
        f = SphereFunction(
            2, lambda xs: jets.log(
                1.0 - xs[2] / jets.sqrt(xs[0] ** 2 + xs[1] ** 2
                                        + xs[2] ** 2)),
            check=False, name="ln(1 - x3)")
        smp = Sampler("sphere-gaussian", 50, seed, dim=3,
                      exclude=(("cap", 2, 0.9),))
        return f, SphereSpace(2), smp

    e.append(CatalogEntry("S2-ln(1-x3)", "quasi-harmonic", build_ln_1_x3,
                          -1.0, True,
                          note="lap = -1 under the div-grad convention"))

    def build_s3_linear(seed):
        a, b, c = 1.0, -0.5, 0.25

        def fn(xs):
            rho = jets.sqrt(xs[0] ** 2 + xs[1] ** 2 + xs[2] ** 2)
            return (a * xs[0] + b * xs[1] + c * xs[2]) / rho

        f = SphereFunction(3, fn, homogeneous=True, check=False,
                           name="linear/rho on S3")
        smp = Sampler("sphere-gaussian", 50, seed, dim=4,
                      exclude=(("belt", 3, 0.9),))
        return f, SphereSpace(3), smp

    e.append(CatalogEntry("S3-linear-over-rho", "proper-biharmonic",
                          build_s3_linear, None, True))

    # conformally flat models
    def build_conf(sign, which):
        def build(seed):
            basis = conformal_closed_form_basis(sign)
            space = basis.warped_space()
            fields = basis.as_radial_fields()
            return fields[which], space, default_sampler(space, 40, seed)
        return build

    e.append(CatalogEntry("S2-conformal-w4", "proper-biharmonic",
                          build_conf(1, 3), None, True))
    e.append(CatalogEntry("H2-conformal-w4", "proper-biharmonic",
                          build_conf(-1, 3), None, True))

    def build_arctan(seed):
        space = ModelSpace.spherical(3)

        def u(r):
            return jets.atan(jets.tan(r / 2.0))

        smp = Sampler("radial-grid", 40, seed, region=(0.65, 1.5))
        return u, space, smp

    e.append(CatalogEntry("S3-conformal-arctan", "proper-biharmonic",
                          build_arctan, None, True,
                          note="pullback of atan t; equals r/2"))

    # separable products
    def build_r4_v2(seed):
        space = ModelSpace.euclidean(2)
        v2 = harmonic_basis(2, 2)[0]
        fld = SeparableField(lambda r: 1.0 + r ** 4, 2, v2)
        smp = Sampler("product-grid", 24, seed, region=(0.3, 2.5), dim=2)
        return fld, space, smp

    e.append(CatalogEntry("R2-(1+r4)v2", "proper-biharmonic",
                          build_r4_v2, None, True))

    def build_angle(which):
        def build(seed):
            from .punctured import bounded_fixtures
            fx = bounded_fixtures(2)[which]
            smp = Sampler("gaussian", 50, seed, region=(0.3, 3.0), dim=2)
            return fx.field, EuclideanSpace(2), smp
        return build

    e.append(CatalogEntry("R2-cos-2theta", "proper-biharmonic",
                          build_angle(1), None, True,
                          note="bounded on the punctured plane"))
    e.append(CatalogEntry("R2-sin-2theta", "proper-biharmonic",
                          build_angle(2), None, True,
                          note="bounded on the punctured plane"))

    def build_sep_s2k1(seed):
        space = ModelSpace.spherical(2)

        def u(r):
            h = r / 2.0
            return (2.0 * jets.tan(h) * jets.log(jets.sin(h))
                    + 2.0 * _cot(h) * jets.log(jets.cos(h)))

        v1 = harmonic_basis(2, 1)[0]
        fld = SeparableField(u, 1, v1)
        smp = Sampler("product-grid", 24, seed,
                      region=(0.3, math.pi - 0.3), dim=2)
        return fld, space, smp

    e.append(CatalogEntry("S2-separable-k1", "proper-biharmonic",
                          build_sep_s2k1, None, True))

    def build_sep_h2k1(seed):
        space = ModelSpace.hyperbolic(2)

        def u(r):
            h = r / 2.0
            return (2.0 * jets.tanh(h) * jets.log(jets.sinh(h))
                    - 2.0 * _coth(h) * jets.log(jets.cosh(h)))

        v1 = harmonic_basis(2, 1)[0]
        fld = SeparableField(u, 1, v1)
        smp = Sampler("product-grid", 24, seed, region=(0.3, 2.5), dim=2)
        return fld, space, smp

    e.append(CatalogEntry("H2-separable-k1", "proper-biharmonic",
                          build_sep_h2k1, None, True))

    def build_sep_s2k2(seed):
        space = ModelSpace.spherical(2)

        def u(r):
            h = r / 2.0
            t, c = jets.tan(h), _cot(h)
            return (1.0 + 4.0 * t * t * jets.log(jets.sin(h))
                    - 2.0 * c * c * jets.log(jets.cos(h)))

        v2 = harmonic_basis(2, 2)[0]
        fld = SeparableField(u, 2, v2)
        smp = Sampler("product-grid", 24, seed,
                      region=(0.3, math.pi - 0.3), dim=2)
        return fld, space, smp

    e.append(CatalogEntry("S2-separable-k2", "proper-biharmonic",
                          build_sep_s2k2, None, True,
                          note="printed log coefficients (+4, -2) verify"))

    # positive-Laplacian families on punctured space
    def build_family(m, coeffs, count=50):
        def build(seed):
            fam = PositiveLaplacianFamily(m, *coeffs)
            smp = Sampler("gaussian", count, seed, region=(0.3, 3.0), dim=m)
            return family_field(fam), EuclideanSpace(m), smp
        return build

    e.append(CatalogEntry("R5-positive-family", "proper-biharmonic",
                          build_family(5, (0.0, 0.0, 1.0, -1.0)),
                          None, True))
    e.append(CatalogEntry("R2-positive-family", "quasi-harmonic",
                          build_family(2, (3.0, 2.0, 5.0)), 20.0, True))

    # negative control
    e.append(_radial_entry("R3-r3", "r", 3, lambda r: r ** 3,
                           "not-biharmonic", note="lap^2 = 24/r"))

    return e


@dataclass
class CatalogReport:
    rows: list
    ok: bool
    tolerance: float
    seed: int

    def to_json_dict(self):
        return {"ok": self.ok, "tolerance": self.tolerance,
                "seed": self.seed, "entries": self.rows}

    def format_table(self):
        w = max(len(r["name"]) for r in self.rows) + 2
        lines = ["%-*s %-18s %-18s %-9s %-9s %s"
                 % (w, "entry", "expected", "observed", "max|lap|",
                    "max|lap2|", "status")]
        for r in self.rows:
            lines.append("%-*s %-18s %-18s %-9.2e %-9.2e %s"
                         % (w, r["name"], r["expected"], r["observed"],
                            r["max_laplacian"], r["max_bilaplacian"],
                            "PASS" if r["ok"] else "FAIL"))
        lines.append("catalog: %d/%d entries matched"
                     % (sum(r["ok"] for r in self.rows), len(self.rows)))
        return "\n".join(lines)


def run_catalog(tol=1e-6, seed=0):
    """Classify every catalog entry and compare against expectations."""
    rows = []
    ok_all = True
    for i, entry in enumerate(catalog_entries()):
        field_obj, space, sampler = entry.build(seed + 17 * i)
        try:
            rep = classify(field_obj, space, sampler, tol=tol)
            row = {"name": entry.name, "expected": entry.expected,
                   "observed": rep.verdict,
                   "max_laplacian": rep.max_laplacian,
                   "max_bilaplacian": rep.max_bilaplacian,
                   "scale": rep.scale, "excluded": rep.excluded}
            good = rep.verdict == entry.expected
            if entry.quasi_constant is not None:
                observed = rep.detail.get("quasi_constant")
                row["quasi_constant"] = observed
                good = good and observed is not None and (
                    abs(observed - entry.quasi_constant)
                    <= 1e-5 * (1.0 + abs(entry.quasi_constant)))
            if entry.proper is not None:
                row["proper_biharmonic"] = rep.proper_biharmonic
                good = good and rep.proper_biharmonic == entry.proper
        except (EvaluationError, SamplingError, DomainError) as exc:
            row = {"name": entry.name, "expected": entry.expected,
                   "observed": "error: %s" % exc,
                   "max_laplacian": math.nan, "max_bilaplacian": math.nan,
                   "scale": math.nan, "excluded": -1}
            good = False
        if entry.note:
            row["note"] = entry.note
        row["ok"] = bool(good)
        ok_all = ok_all and good
        rows.append(row)
    return CatalogReport(rows, ok_all, tol, seed)
