"""Intrinsic sphere operators through the ambient Euclidean ones.

Any function f on S^m is represented by an ambient field F on R^{m+1};
the working extension is the degree-0 homogeneous F(x/|x|).  Then

    lap_{S^m} f   = lap_{R^{m+1}} (f o pi)            restricted to S^m
    lap^2_{S^m} f = lap^2_{R^{m+1}} (f o pi) + 2(m-3) lap_{S^m} f

where pi(x) = x/|x| is the radial projection.  Two routes are exposed
for the bi-Laplacian: "rs1" evaluates the correction term with the
embedding formula (ambient Laplacian of the *raw* field minus its radial
derivatives), "rs2" uses the ambient Laplacian of the projected
extension.  For degree-0 homogeneous raw fields the two coincide; for a
general raw field they are genuinely different computations that must
agree, which makes the route comparison a real consistency check.

Restrictions of homogeneous polynomials additionally get an exact
polynomial path that needs no jets at all.
"""

import math
from dataclasses import dataclass, field

from .errors import ConstructionError, DomainError
from .jets import (ScalarField, directional_derivatives,
                   euclidean_bilaplacian, euclidean_laplacian, sqrt)

__all__ = [
    "SphereFunction", "SpectrumEntry", "sphere_laplacian",
    "sphere_bilaplacian", "laplacian_poly_restriction",
    "bilaplacian_poly_restriction", "spectra", "buckling_check",
]

_UNIT_TOL = 1e-12
_RENORM_TOL = 1e-8


class SphereFunction:
    """A function on S^m given by an ambient field on R^{m+1}.

    If ``homogeneous`` the raw field is declared degree-0 homogeneous
    (it already equals its own projection and is spot-checked for
    F(2x) = F(x)); otherwise the working extension composes the raw
    field with x -> x/|x|.
    """

    def __init__(self, m, fn, homogeneous=False, name="", check=True):
        if m < 1:
            raise ConstructionError("sphere dimension must be >= 1")
        self.m = m
        self.fn = fn if not isinstance(fn, ScalarField) else fn.fn
        if isinstance(fn, ScalarField) and fn.dim != m + 1:
            raise ConstructionError("ambient field has dimension %d, "
                                    "expected %d" % (fn.dim, m + 1))
        self.homogeneous = homogeneous
        self.name = name
        if homogeneous and check:
            self._check_homogeneous()

    def _check_homogeneous(self):
        # deterministic probe points, away from coordinate planes
        probes = [[0.3 + 0.1 * i + 0.05 * j for j in range(self.m + 1)]
                  for i in range(3)]
        for x in probes:
            try:
                a = self.fn(x)
                b = self.fn([2.0 * t for t in x])
            except Exception:
                continue
            if abs(a - b) > 1e-12 * (1.0 + abs(a)):
                raise ConstructionError(
                    "field declared homogeneous but F(2x) != F(x): "
                    "%r vs %r" % (a, b))

    def extension(self, xs):
        """The degree-0 homogeneous working extension."""
        if self.homogeneous:
            return self.fn(xs)
        n2 = xs[0] * xs[0]
        for t in xs[1:]:
            n2 = n2 + t * t
        nrm = sqrt(n2)
        return self.fn([t / nrm for t in xs])

    def raw(self, xs):
        return self.fn(xs)

    def restriction(self, x):
        """Plain value f(x) for unit x."""
        return self.fn(list(_unit_point(x)))

    def __repr__(self):
        return "SphereFunction(m=%d%s)" % (
            self.m, ", name=%r" % self.name if self.name else "")


def _unit_point(x):
    nrm = math.sqrt(sum(t * t for t in x))
    if abs(nrm - 1.0) <= _UNIT_TOL:
        return tuple(float(t) for t in x)
    if abs(nrm - 1.0) <= _RENORM_TOL:
        return tuple(float(t) / nrm for t in x)
    raise DomainError("point has |x| = %.17g, too far from the unit sphere"
                      % nrm)


def sphere_laplacian(f, x, route="projection"):
    """Laplacian of f on S^m at unit x.

    route "projection": ambient Laplacian of the degree-0 extension.
    route "embedding": ambient Laplacian of the raw field minus its
    radial first and second derivatives (independent computation when
    the raw field is not homogeneous).
    """
    x = _unit_point(x)
    if route == "projection":
        return euclidean_laplacian(f.extension, x)
    if route == "embedding":
        d = directional_derivatives(f.raw, x, x, order=2)
        return euclidean_laplacian(f.raw, x) - d[2] - f.m * d[1]
    raise DomainError("unknown laplacian route %r" % route)


def sphere_bilaplacian(f, x, route="rs1", ambient_radius=1.0):
    """Bi-Laplacian of f on S^m at unit x.

    Both routes evaluate the ambient bi-Laplacian of the extension; they
    differ in the 2(m-3) correction term (intrinsic-via-embedding for
    "rs1", ambient-of-extension for "rs2").  ``ambient_radius`` scales
    the evaluation point of the ambient sweeps; by homogeneity the
    result is radius-independent up to the exact power-law factors
    applied here, which turns the route comparison into a genuine
    off-sphere consistency check.
    """
    x = _unit_point(x)
    rho = float(ambient_radius)
    if rho <= 0.0:
        raise DomainError("ambient_radius must be positive")
    xr = [rho * t for t in x]
    amb = rho ** 4 * euclidean_bilaplacian(f.extension, xr)
    corr = 2.0 * (f.m - 3)
    if route == "rs1":
        return amb + corr * sphere_laplacian(f, x, route="embedding")
    if route == "rs2":
        return amb + corr * rho ** 2 * euclidean_laplacian(f.extension, xr)
    raise DomainError("unknown bilaplacian route %r" % route)


def _euler_spot_check(F, x):
    lhs = F.gradient_dot(x)
    rhs = F.k * F(x)
    if abs(lhs - rhs) > 1e-8 * (1.0 + abs(rhs)):
        raise DomainError(
            "declared degree %d fails the Euler identity at %r "
            "(%.3g vs %.3g)" % (F.k, x, lhs, rhs))


def laplacian_poly_restriction(F, x):
    """Exact-polynomial sphere Laplacian of F|_{S^m}:
    -k(k-1+m) F(x) + (lap F)(x) for unit x, m = n - 1."""
    x = _unit_point(x)
    m = F.n - 1
    k = F.k
    _euler_spot_check(F, x)
    return -k * (k - 1 + m) * F(x) + F.laplacian()(x)


def bilaplacian_poly_restriction(F, x):
    """Exact-polynomial sphere bi-Laplacian of F|_{S^m}:

        k^2 (k-1+m)^2 F + lap^2 F - 2 [k^2 + (k-1)(m-3)] lap F

    evaluated at unit x with exact polynomial derivatives (no jets).
    """
    x = _unit_point(x)
    m = F.n - 1
    k = F.k
    _euler_spot_check(F, x)
    lap = F.laplacian()
    bilap = lap.laplacian()
    coeff = 2.0 * (k * k + (k - 1) * (m - 3))
    return (float(k * k * (k - 1 + m) ** 2) * F(x)
            + bilap(x) - coeff * lap(x))


@dataclass(frozen=True)
class SpectrumEntry:
    """Closed-form spectral data of S^m at polynomial degree k."""

    k: int
    laplace: float          # lambda_k = k (m + k - 1)
    bi: float               # lambda_k^2
    buckling: float         # lambda_k
    k_laplacian: dict = field(default_factory=dict)  # order -> lambda_k^order
    # the degree-2 buckling eigenspace contains *all* degree-2
    # restrictions, harmonic or not (one dimension more than the
    # Laplace eigenspace)
    buckling_includes_all_degree2: bool = False

    def to_json_dict(self):
        out = {"k": self.k, "lambda": self.laplace, "bi": self.bi,
               "buckling": self.buckling}
        if self.k_laplacian:
            out["k_laplacian"] = {str(o): v
                                  for o, v in sorted(self.k_laplacian.items())}
        if self.buckling_includes_all_degree2:
            out["buckling_includes_all_degree2"] = True
        return out


def spectra(m, k_max, orders=()):
    """Closed-form Laplace / bi-Laplace / buckling spectra of S^m for
    degrees 0..k_max, plus iterated-Laplacian eigenvalues lambda_k^j for
    each requested order j."""
    if m < 1:
        raise DomainError("need m >= 1")
    if k_max < 0:
        raise DomainError("need k_max >= 0")
    out = []
    for k in range(k_max + 1):
        lam = float(k * (m + k - 1))
        out.append(SpectrumEntry(
            k=k, laplace=lam, bi=lam * lam, buckling=lam,
            k_laplacian={int(j): lam ** int(j) for j in orders},
            buckling_includes_all_degree2=(k == 2),
        ))
    return out


def restriction_of(h):
    """SphereFunction for the restriction of a harmonic polynomial (or a
    bare HomogeneousPolynomial) to the unit sphere."""
    poly = getattr(h, "poly", h)
    m = poly.n - 1
    return SphereFunction(m, lambda xs: poly(xs), homogeneous=False,
                          name="restriction(deg %d)" % poly.k, check=False)


def buckling_check(h, c, samples, method="jets", nu=None):
    """Residual report for the buckling identity
    lap^2 f = -nu lap f with f = (h + c |x|^2)|_{S^m}, nu = lambda_k.

    method "jets" runs the ambient jet sweeps on the projected field;
    method "poly" uses the exact polynomial restriction path per
    homogeneous part.
    """
    from .verify import ResidualReport  # local import to avoid a cycle

    poly = h.poly
    m = poly.n - 1
    k = poly.k
    if nu is None:
        nu = float(k * (m + k - 1))
    lam2_sphere = 2.0 * (m + 1)

    vals = []
    resid = []
    if method == "jets":
        f = SphereFunction(
            m, lambda xs: poly(xs) + c * sum(t * t for t in xs),
            homogeneous=False, check=False)
        for x in samples:
            fv = f.restriction(x)
            lap = sphere_laplacian(f, x)
            bil = sphere_bilaplacian(f, x)
            vals.append(fv)
            resid.append(abs(bil + nu * lap))
    elif method == "poly":
        r2 = None
        for x in samples:
            hv_l = laplacian_poly_restriction(poly, x)
            hv_b = bilaplacian_poly_restriction(poly, x)
            if r2 is None:
                from .harmonics import radial_power_squared
                r2 = radial_power_squared(m + 1).to_float()
            cv_l = c * laplacian_poly_restriction(r2, x)
            cv_b = c * bilaplacian_poly_restriction(r2, x)
            vals.append(poly(list(_unit_point(x))) + c)
            resid.append(abs((hv_b + cv_b) + nu * (hv_l + cv_l)))
    else:
        raise DomainError("unknown buckling_check method %r" % method)

    scale = max(abs(v) for v in vals) if vals else 0.0
    worst = max(resid) if resid else 0.0
    meanr = sum(resid) / len(resid) if resid else 0.0
    return ResidualReport(
        max_laplacian=float("nan"), mean_laplacian=float("nan"),
        max_bilaplacian=worst, mean_bilaplacian=meanr,
        scale=scale, verdict="buckling" if worst < 1e-6 * (1 + scale)
        else "not-buckling",
        tolerance=1e-6, excluded=0,
        detail={"nu": nu, "degree2_buckling": lam2_sphere})
