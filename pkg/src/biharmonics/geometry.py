"""Warped-product model spaces and the intrinsic Laplacian / bi-Laplacian
on radial and separable fields.

A model space is ``((0, R) x S^{m-1}, dr^2 + sigma(r)^2 g_{S^{m-1}})`` for
a positive warp ``sigma``.  For a radial field u(r),

    lap u  = u'' + (m-1) (sigma'/sigma) u'

and for a separable field u(r) v_k(theta) with v_k a degree-k spherical
harmonic on S^{m-1}, the angular part is eliminated analytically through
its eigenvalue k(m+k-2), leaving the radial factor

    u'' + (m-1) (sigma'/sigma) u' - k(m+k-2) / sigma^2 u.

Bi-Laplacians apply the same operator twice; everything is evaluated by
running the radial field and the warp through univariate jets, so fourth
derivatives of u and third derivatives of sigma are exact to roundoff.
"""

import math
from dataclasses import dataclass, field

from . import jets
from .errors import ConstructionError, DomainError
from .jets import Jet1


class WarpFunction:
    """Positive radial profile sigma(r), evaluable in jet arithmetic with
    derivatives through order 3 (custom warps must supply this; no
    numerical differentiation is done on user code)."""

    __slots__ = ("fn", "domain", "tag")

    def __init__(self, fn, domain, tag="custom", check=True):
        self.fn = fn
        self.domain = (float(domain[0]), float(domain[1]))
        self.tag = tag
        if self.domain[0] >= self.domain[1]:
            raise ConstructionError("empty warp domain %r" % (domain,))
        if check:
            self._check_positive()

    def _check_positive(self, samples=33):
        lo, hi = self.domain
        hi = min(hi, lo + 1e6)  # probe a finite stretch of unbounded domains
        for i in range(1, samples + 1):
            r = lo + (hi - lo) * i / (samples + 1.0)
            if self.fn(r) <= 0.0:
                raise ConstructionError(
                    "warp is not positive at r=%g" % r)

    @staticmethod
    def euclidean():
        return WarpFunction(lambda r: r, (0.0, math.inf), "euclidean",
                            check=False)

    @staticmethod
    def spherical():
        return WarpFunction(jets.sin, (0.0, math.pi), "spherical",
                            check=False)

    @staticmethod
    def hyperbolic():
        return WarpFunction(jets.sinh, (0.0, math.inf), "hyperbolic",
                            check=False)

    def __call__(self, r):
        return self.fn(r)

    def contains(self, r):
        return self.domain[0] < r < self.domain[1]

    def __repr__(self):
        return "WarpFunction(%s, domain=%r)" % (self.tag, self.domain)


@dataclass(frozen=True)
class ModelSpace:
    """Dimension m >= 2 plus a warp function; immutable after construction."""

    m: int
    warp: WarpFunction

    def __post_init__(self):
        if self.m < 2:
            raise ConstructionError("model space needs m >= 2")
        if self.warp.tag == "spherical" and self.warp.domain[1] > math.pi:
            raise ConstructionError("spherical warp domain must lie in (0, pi)")

    @staticmethod
    def euclidean(m):
        return ModelSpace(m, WarpFunction.euclidean())

    @staticmethod
    def spherical(m):
        return ModelSpace(m, WarpFunction.spherical())

    @staticmethod
    def hyperbolic(m):
        return ModelSpace(m, WarpFunction.hyperbolic())

    @staticmethod
    def from_tag(tag, m):
        if tag in ("r", "euclidean"):
            return ModelSpace.euclidean(m)
        if tag in ("sin", "spherical"):
            return ModelSpace.spherical(m)
        if tag in ("sinh", "hyperbolic"):
            return ModelSpace.hyperbolic(m)
        raise ConstructionError("unknown space tag %r" % tag)

    def check_radius(self, r):
        if not self.warp.contains(r):
            raise DomainError("r=%g outside warp domain %r"
                              % (r, self.warp.domain))


@dataclass(frozen=True)
class SeparableField:
    """Product field u(r) * v_k(theta) on a model space: a radial factor,
    its separation degree, and the angular harmonic (with ambient
    dimension equal to the space dimension m)."""

    radial: object
    degree: int
    angular: object = None  # SphericalHarmonic on S^{m-1}, optional

    def __post_init__(self):
        if self.degree < 0:
            raise ConstructionError("separation degree must be >= 0")


def _operator_jets(space, u, r, k):
    """Jets through order 2 of the (degree-k) radial operator applied
    to u, evaluated at r.  Returns (L u, (L u)', (L u)'')."""
    space.check_radius(r)
    seed = Jet1.variable(float(r))
    uj = u(seed)
    sj = space.warp(seed)
    s0, s1, s2, s3, _ = sj.c
    if not s0 > 0.0:
        raise DomainError("warp non-positive at r=%g" % r)
    f0, f1, f2, f3, f4 = uj.c
    # a = (m-1) sigma'/sigma as a jet through order 2; the order-3 slot of
    # the quotient is garbage (it would need sigma'''') and is never read.
    num = Jet1((s1, s2, s3, 0.0, 0.0))
    den = Jet1((s0, s1, s2, s3, 0.0))
    a0, a1, a2 = ((space.m - 1) * (num / den)).c[:3]
    l0 = f2 + a0 * f1
    l1 = f3 + a1 * f1 + a0 * f2
    l2 = f4 + a2 * f1 + 2.0 * a1 * f2 + a0 * f3
    if k:
        lam = k * (space.m + k - 2)
        b0, b1, b2 = (lam / (den * den)).c[:3]
        l0 -= b0 * f0
        l1 -= b1 * f0 + b0 * f1
        l2 -= b2 * f0 + 2.0 * b1 * f1 + b0 * f2
    return l0, l1, l2, (a0, a1, a2), (f0, f1, f2)


def laplacian_radial(space, u, r):
    """u''(r) + (m-1) sigma'(r)/sigma(r) u'(r)."""
    return _operator_jets(space, u, r, 0)[0]


def bilaplacian_radial(space, u, r):
    """The radial Laplacian applied twice, via jets of the first image."""
    l0, l1, l2, (a0, _, _), _ = _operator_jets(space, u, r, 0)
    return l2 + a0 * l1


def laplacian_separable_radial_factor(space, u, k, r):
    """Radial factor of lap(u v_k): the full Laplacian is this times
    v_k(theta)."""
    return _operator_jets(space, u, r, k)[0]


def bilaplacian_separable_radial_factor(space, u, k, r):
    """Radial factor of lap^2(u v_k): the degree-k operator applied twice."""
    l0, l1, l2, (a0, _, _), _ = _operator_jets(space, u, r, k)
    out = l2 + a0 * l1
    if k:
        seed = Jet1.variable(float(r))
        s0 = space.warp(seed).c[0]
        out -= k * (space.m + k - 2) / (s0 * s0) * l0
    return out


def separation_eigenvalue(m, k):
    """Eigenvalue k(m+k-2) of -lap on S^{m-1} for degree-k harmonics,
    re-derived from (m, k) so the two sphere conventions never mix."""
    return k * (m + k - 2)
