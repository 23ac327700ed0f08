"""Radial biharmonic bases on model spaces via nested adaptive quadrature.

Every radial biharmonic function on a model space with warp sigma is a
combination of four functions: the constants, the harmonic primitive
y1 = int sigma^{1-m} dr, and two proper pieces

    w3 = y1 * int sigma^{m-1} dr     - int y1   sigma^{m-1} dr
    w4 = y1 * int y1 sigma^{m-1} dr  - int y1^2 sigma^{m-1} dr.

Antiderivatives are fixed by a base point r0 and evaluated by adaptive
Gauss-Kronrod 15(7) quadrature with a monotone cache of cumulative
values, so the triple nesting reuses inner integrals instead of
recomputing them.  Antiderivatives are jet-evaluable: the value part
comes from quadrature and the derivative parts from a jet sweep of the
integrand, which keeps bi-Laplacian residuals at roundoff level.

Space forms get explicit closed-form bases as well (the numeric path is
the thing under test and is never silently replaced by them), and the
conformally flat models of the sphere and hyperbolic space get their own
bases in the conformal coordinate t, pulled back to the warped model for
verification through r = 2 atan t / 2 atanh t.
"""

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import DomainError, FitError, QuadratureError
from .geometry import ModelSpace
from .jets import Jet1

__all__ = [
    "QuadratureConfig", "RadialBasis", "Antiderivative", "primitive",
    "primitive_with_error", "radial_biharmonic_basis", "closed_form_basis",
    "conformal_basis", "conformal_closed_form_basis", "span_match",
]

# Gauss-Kronrod 15(7) abscissae and weights on [-1, 1] (QUADPACK dqk15).
_XGK = (0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
        0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
        0.2077849550078985, 0.0)
_WGK = (0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
        0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
        0.2044329400752989, 0.2094821410847278)
_WG = (0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
       0.4179591836734694)


def _gk15(g, a, b):
    """Kronrod estimate and |Kronrod - Gauss| error gauge on [a, b]."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = g(c)
    resk = _WGK[7] * fc
    resg = _WG[3] * fc
    for j in range(7):
        x = h * _XGK[j]
        s = g(c - x) + g(c + x)
        resk += _WGK[j] * s
        if j % 2 == 1:
            resg += _WG[(j - 1) // 2] * s
    return resk * h, abs(resk - resg) * abs(h)


def _adaptive(g, a, b, abs_tol, rel_tol, max_depth):
    """Globally adaptive bisection; returns (integral, error bound)."""
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0
    val, err = _gk15(g, a, b)
    segs = [(-err, a, b, val, 0)]
    total, bound = val, err
    while bound > max(abs_tol, rel_tol * abs(total)):
        neg_err, lo, hi, sval, depth = heapq.heappop(segs)
        if depth >= max_depth:
            raise QuadratureError(
                "quadrature did not converge at depth %d on [%g, %g]: "
                "estimate %.17g, bound %.3g" % (max_depth, lo, hi,
                                                sign * total, bound),
                estimate=sign * total, error_bound=bound)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(g, lo, mid)
        v2, e2 = _gk15(g, mid, hi)
        total += v1 + v2 - sval
        bound += e1 + e2 + neg_err
        heapq.heappush(segs, (-e1, lo, mid, v1, depth + 1))
        heapq.heappush(segs, (-e2, mid, hi, v2, depth + 1))
    return sign * total, bound


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances, subdivision cap, and antiderivative base point."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivision_depth: int = 40
    base_point: float | None = None

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise DomainError("quadrature tolerances must be positive")

    def resolve_base(self, space):
        if self.base_point is not None:
            if isinstance(space, ModelSpace):
                space.check_radius(self.base_point)
            return self.base_point
        if isinstance(space, ModelSpace) and space.warp.tag == "spherical":
            return math.pi / 2.0
        return 1.0


def primitive_with_error(g, r0, r, config=None):
    """int_{r0}^{r} g with its error bound."""
    cfg = config or QuadratureConfig()
    return _adaptive(g, float(r0), float(r), cfg.abs_tol, cfg.rel_tol,
                     cfg.max_subdivision_depth)


def primitive(g, r0, r, config=None):
    """int_{r0}^{r} g by adaptive Gauss-Kronrod quadrature."""
    return primitive_with_error(g, r0, r, config)[0]


class Antiderivative:
    """r -> int_{base}^{r} g with a monotone cache of cumulative values.

    Each new evaluation integrates from the nearest previously computed
    breakpoint, so scattered requests (as issued by an outer adaptive
    integral whose integrand contains this one) cost short segments only.
    Calling with a Jet1 returns the full jet: the value part from
    quadrature, derivative parts from a jet sweep of the integrand.
    Cache writes make construction single-threaded; evaluation of a
    warmed instance is read-only.
    """

    def __init__(self, integrand, base, config=None, name=""):
        self.integrand = integrand
        self.base = float(base)
        self.config = config or QuadratureConfig()
        self.name = name
        self._keys = [self.base]
        self._vals = [0.0]
        self._errs = [0.0]

    def value_with_error(self, r):
        r = float(r)
        keys = self._keys
        import bisect
        i = bisect.bisect_left(keys, r)
        if i < len(keys) and keys[i] == r:
            return self._vals[i], self._errs[i]
        # nearest cached breakpoint on either side
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(keys):
                if best is None or abs(keys[j] - r) < abs(keys[best] - r):
                    best = j
        inc, err = _adaptive(self.integrand, keys[best], r,
                             self.config.abs_tol, self.config.rel_tol,
                             self.config.max_subdivision_depth)
        val = self._vals[best] + inc
        tot = self._errs[best] + err
        keys.insert(i, r)
        self._vals.insert(i, val)
        self._errs.insert(i, tot)
        return val, tot

    def value(self, r):
        return self.value_with_error(r)[0]

    def warm(self, lo, hi, count=17):
        for r in np.linspace(lo, hi, count):
            self.value(float(r))
        return self

    def __call__(self, x):
        if isinstance(x, Jet1):
            v = self.value(x.value)
            gj = self.integrand(Jet1.variable(x.value))
            if isinstance(gj, Jet1):
                d = (v, gj.c[0], gj.c[1], gj.c[2], gj.c[3])
            else:  # constant integrand
                d = (v, gj, 0.0, 0.0, 0.0)
            return x.compose(d)
        return self.value(x)

    def __repr__(self):
        return "Antiderivative(%sbase=%g, %d cached)" % (
            "%s, " % self.name if self.name else "", self.base,
            len(self._keys))


@dataclass
class RadialBasis:
    """Four radial functions spanning the biharmonic kernel, each
    evaluable at floats or Jet1."""

    space: ModelSpace | None
    functions: list
    labels: list
    config: QuadratureConfig
    base_point: float
    kind: str = "numeric"
    meta: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.functions)

    def __len__(self):
        return len(self.functions)

    def sample(self, rs):
        """len(rs) x 4 array of basis values."""
        return np.array([[_fval(w, r) for w in self.functions]
                         for r in rs], dtype=float)

    def default_interval(self):
        if self.space is not None and self.space.warp.tag == "spherical":
            return (0.3, math.pi - 0.3)
        return (0.3, 2.5)


def _fval(fn, r):
    v = fn(r)
    return v.value if isinstance(v, Jet1) else float(v)


def _one(r):
    return r * 0.0 + 1.0


def _integral_basis(space, w_minus, w_plus, base, config, kind, labels,
                    meta):
    y1 = Antiderivative(w_minus, base, config, name="y1")
    i1 = Antiderivative(w_plus, base, config, name="I1")
    i2 = Antiderivative(lambda t: y1(t) * w_plus(t), base, config, name="I2")
    i3 = Antiderivative(lambda t: y1(t) * y1(t) * w_plus(t), base, config,
                        name="I3")

    def w3(r):
        return y1(r) * i1(r) - i2(r)

    def w4(r):
        return y1(r) * i2(r) - i3(r)

    return RadialBasis(space, [_one, y1, w3, w4], labels, config, base,
                       kind, meta)


def radial_biharmonic_basis(space, config=None):
    """The four-function radial biharmonic basis {1, y1, w3, w4} on a
    model space, built numerically from its warp."""
    cfg = config or QuadratureConfig()
    base = cfg.resolve_base(space)
    space.check_radius(base)
    sig = space.warp
    mm = space.m - 1

    def w_minus(t):
        return sig(t) ** (-mm)

    def w_plus(t):
        return sig(t) ** mm

    meta = {"sigma": sig.tag, "m": space.m, "r0": base,
            "abs_tol": cfg.abs_tol, "rel_tol": cfg.rel_tol}
    return _integral_basis(space, w_minus, w_plus, base, cfg, "numeric",
                           ["1", "y1", "w3", "w4"], meta)


def _cot(r):
    return jets.cos(r) / jets.sin(r)


def _coth(r):
    return jets.cosh(r) / jets.sinh(r)


def closed_form_basis(tag, m, config=None):
    """The explicit radial biharmonic bases on space forms: every
    Euclidean dimension, and the spherical/hyperbolic cases m in {2, 3}.
    The single non-elementary antiderivative in the m=2 curved cases is
    evaluated by quadrature."""
    cfg = config or QuadratureConfig()
    if tag in ("r", "euclidean"):
        space = ModelSpace.euclidean(m)
        if m == 2:
            fns = [_one, jets.log, lambda r: r * r,
                   lambda r: r * r * jets.log(r)]
            labels = ["1", "ln r", "r^2", "r^2 ln r"]
        elif m == 4:
            fns = [_one, lambda r: r ** (-2), lambda r: r * r, jets.log]
            labels = ["1", "r^-2", "r^2", "ln r"]
        else:
            fns = [_one, lambda r: r ** (2 - m), lambda r: r * r,
                   lambda r: r ** (4 - m)]
            labels = ["1", "r^%d" % (2 - m), "r^2", "r^%d" % (4 - m)]
        return RadialBasis(space, fns, labels, cfg, cfg.resolve_base(space),
                           "closed-form", {"sigma": "euclidean", "m": m})
    if tag in ("sin", "spherical"):
        space = ModelSpace.spherical(m)
        base = cfg.resolve_base(space)
        if m == 3:
            fns = [_one, _cot, lambda r: r * 1.0, lambda r: r * _cot(r)]
            labels = ["1", "cot r", "r", "r cot r"]
        elif m == 2:
            tail = Antiderivative(
                lambda t: _cot(t) * jets.log(jets.tan(t / 2.0)),
                base, cfg, name="int cot ln tan(r/2)")
            fns = [_one,
                   lambda r: jets.log(jets.tan(r / 2.0)),
                   lambda r: jets.log(jets.sin(r)),
                   lambda r: (jets.log(jets.sin(r))
                              * jets.log(jets.tan(r / 2.0))
                              - 2.0 * tail(r))]
            labels = ["1", "ln tan(r/2)", "ln sin r", "w4"]
        else:
            raise DomainError("no closed spherical basis for m=%d" % m)
        return RadialBasis(space, fns, labels, cfg, base, "closed-form",
                           {"sigma": "spherical", "m": m})
    if tag in ("sinh", "hyperbolic"):
        space = ModelSpace.hyperbolic(m)
        base = cfg.resolve_base(space)
        if m == 3:
            fns = [_one, _coth, lambda r: r * 1.0, lambda r: r * _coth(r)]
            labels = ["1", "coth r", "r", "r coth r"]
        elif m == 2:
            # the analogue of the spherical m=2 row, with ln sinh r (the
            # circular-function spelling cannot be positive here)
            tail = Antiderivative(
                lambda t: _coth(t) * jets.log(jets.tanh(t / 2.0)),
                base, cfg, name="int coth ln tanh(r/2)")
            fns = [_one,
                   lambda r: jets.log(jets.tanh(r / 2.0)),
                   lambda r: jets.log(jets.sinh(r)),
                   lambda r: (jets.log(jets.sinh(r))
                              * jets.log(jets.tanh(r / 2.0))
                              - 2.0 * tail(r))]
            labels = ["1", "ln tanh(r/2)", "ln sinh r", "w4"]
        else:
            raise DomainError("no closed hyperbolic basis for m=%d" % m)
        return RadialBasis(space, fns, labels, cfg, base, "closed-form",
                           {"sigma": "hyperbolic", "m": m})
    raise DomainError("unknown closed-form kind %r" % tag)


@dataclass
class ConformalBasis:
    """Radial biharmonic basis of the conformally flat sphere/hyperbolic
    model, in the conformal coordinate t.  ``as_radial_fields`` pulls the
    functions back to the warped model through r = 2 atan t (sphere,
    sign +1) or r = 2 atanh t (hyperbolic, sign -1) for verification."""

    sign: int
    m: int
    functions: list
    labels: list
    config: QuadratureConfig
    base_point: float
    meta: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.functions)

    def warped_space(self):
        return (ModelSpace.spherical(self.m) if self.sign > 0
                else ModelSpace.hyperbolic(self.m))

    def coordinate(self, r):
        """t as a function of the warped radial coordinate r."""
        if self.sign > 0:
            return jets.tan(r / 2.0)
        return jets.tanh(r / 2.0)

    def as_radial_fields(self):
        return [lambda r, w=w: w(self.coordinate(r))
                for w in self.functions]

    def t_interval(self, r_interval=None):
        if r_interval is None:
            r_interval = ((0.3, math.pi - 0.3) if self.sign > 0
                          else (0.3, 2.5))
        lo, hi = r_interval
        f = math.tan if self.sign > 0 else math.tanh
        return (f(lo / 2.0), f(hi / 2.0))


def conformal_basis(sign, m, config=None):
    """Numeric four-function basis in the conformal coordinate t, from
    the weights t^{m-1}/(1 +- t^2)^m and (1 +- t^2)^{m-2}/t^{m-1}."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 (sphere) or -1 (hyperbolic)")
    cfg = config or QuadratureConfig()
    base = cfg.base_point
    if base is None:
        base = 1.0 if sign > 0 else math.tanh(0.5)
    s = float(sign)

    def w_minus(t):
        return (1.0 + s * t * t) ** (m - 2) / t ** (m - 1)

    def w_plus(t):
        return t ** (m - 1) / (1.0 + s * t * t) ** m

    fake = _integral_basis(None, w_minus, w_plus, base, cfg, "conformal",
                           ["1", "u2", "w3", "w4"],
                           {"model": "conformal", "sign": sign, "m": m,
                            "t0": base})
    return ConformalBasis(sign, m, fake.functions, fake.labels, cfg, base,
                          fake.meta)


def conformal_closed_form_basis(sign, config=None):
    """Closed m=2 conformal bases: {1, ln t, ln(1 +- t^2), ln t
    ln(1 +- t^2) - 2 int ln(1 +- t^2)/t dt}."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 (sphere) or -1 (hyperbolic)")
    cfg = config or QuadratureConfig()
    base = cfg.base_point
    if base is None:
        base = 1.0 if sign > 0 else math.tanh(0.5)
    s = float(sign)
    tail = Antiderivative(lambda t: jets.log(1.0 + s * t * t) / t,
                          base, cfg, name="int ln(1 +- t^2)/t")
    fns = [_one,
           jets.log,
           lambda t: jets.log(1.0 + s * t * t),
           lambda t: jets.log(t) * jets.log(1.0 + s * t * t)
           - 2.0 * tail(t)]
    labels = ["1", "ln t", "ln(1%st^2)" % ("+" if sign > 0 else "-"), "w4"]
    return ConformalBasis(sign, 2, fns, labels, cfg, base,
                          {"model": "conformal-closed", "sign": sign, "m": 2})


def span_match(fns_a, fns_b, samples):
    """Least-squares certification that every function in `fns_a` lies in
    the span of `fns_b` on the given samples; returns the worst relative
    residual.  Needs at least 2 |fns_b| samples and a full-rank design."""
    samples = [float(s) for s in samples]
    if len(samples) < 2 * len(fns_b):
        raise FitError("need at least %d samples for a %d-function span"
                       % (2 * len(fns_b), len(fns_b)))
    design = np.array([[_fval(b, s) for b in fns_b] for s in samples])
    col_scale = np.max(np.abs(design), axis=0)
    if np.any(col_scale == 0.0):
        raise FitError("a span function vanishes on all samples")
    scaled = design / col_scale
    rank = np.linalg.matrix_rank(scaled, tol=1e-10)
    if rank < len(fns_b):
        raise FitError("ill-conditioned comparison: design rank %d < %d"
                       % (rank, len(fns_b)))
    worst = 0.0
    for a in fns_a:
        va = np.array([_fval(a, s) for s in samples])
        beta, *_ = np.linalg.lstsq(scaled, va, rcond=None)
        resid = np.max(np.abs(va - scaled @ beta))
        worst = max(worst, resid / (1.0 + np.max(np.abs(va))))
    return worst
