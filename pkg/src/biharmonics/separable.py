"""Separable biharmonic fields u(r) v_k(theta) on model spaces.

A product u(r) v_k(theta) with v_k a degree-k spherical harmonic on
S^{m-1} is harmonic iff u solves the homogeneous radial equation

    u'' + (m-1)(sigma'/sigma) u' - k(m+k-2)/sigma^2 u = 0        (*)

and biharmonic iff the degree-k radial operator maps u into the span of
a fundamental pair (u1, u2) of (*).  Particular solutions come from
variation of parameters,

    up1 = u1 int(-u1 u2 / W) + u2 int(u1^2  / W)
    up2 = u1 int(-u2^2 / W)  + u2 int(u1 u2 / W),

with the Wronskian evaluated through the Abel identity
W(r) = W(r0) (sigma(r0)/sigma(r))^{m-1}, never by re-differentiation.
By construction the radial operator maps up1 to u1 and up2 to u2, which
is the verifiable defining property.

Fundamental pairs are closed-form where available (Euclidean any m;
spherical/hyperbolic m=2 in half-angle powers) and otherwise come from a
high-order initial-value integration of (*) started at r0 with states
(1, 0) and (0, 1); numeric solutions are lifted to jets through the ODE,
so fourth derivatives are consistent with the equation by construction.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import jets
from .errors import ConstructionError, DomainError
from .geometry import ModelSpace, laplacian_separable_radial_factor
from .jets import Jet1
from .radial import Antiderivative, QuadratureConfig

__all__ = [
    "HomSolutionPair", "SeparableBiharmonic", "NumericRadialSolution",
    "fundamental_pair", "wronskian", "particular_solutions", "build",
]


def _warp_jets(space, r, order=3):
    return space.warp(Jet1.variable(float(r)))


def _coefficient_jets(space, k, r):
    """Jets through order 2 of A = (m-1) sigma'/sigma and
    B = k(m+k-2)/sigma^2 at r."""
    sj = _warp_jets(space, r)
    s0, s1, s2, s3, _ = sj.c
    if not s0 > 0.0:
        raise DomainError("warp non-positive at r=%g" % r)
    num = Jet1((s1, s2, s3, 0.0, 0.0))
    den = Jet1((s0, s1, s2, s3, 0.0))
    a = ((space.m - 1) * (num / den)).c[:3]
    lam = k * (space.m + k - 2)
    b = (lam / (den * den)).c[:3]
    return a, b


class NumericRadialSolution:
    """Dense-output solution of the homogeneous radial equation, lifted
    to jets through the equation itself: u'' = -A u' + B u, and the two
    further derivatives obtained by differentiating that identity."""

    def __init__(self, space, k, segments, r0, label=""):
        self.space = space
        self.k = k
        self.r0 = r0
        self.label = label
        # segments: list of (lo, hi, dense_sol, column)
        self.segments = segments
        self.valid_interval = (min(s[0] for s in segments),
                               max(s[1] for s in segments))

    def _state(self, r):
        lo, hi = self.valid_interval
        if not (lo <= r <= hi):
            raise DomainError(
                "r=%g outside the solved interval [%g, %g]" % (r, lo, hi))
        for slo, shi, sol, col in self.segments:
            if slo <= r <= shi:
                y = sol(r)
                return float(y[2 * col]), float(y[2 * col + 1])
        raise DomainError("r=%g not covered by any dense segment" % r)

    def dense_value(self, r):
        return self._state(r)[0]

    def dense_slope(self, r):
        return self._state(r)[1]

    def __call__(self, x):
        if isinstance(x, Jet1):
            r = x.value
        else:
            return self._state(float(x))[0]
        u0, u1 = self._state(r)
        (a0, a1, a2), (b0, b1, b2) = _coefficient_jets(self.space, self.k, r)
        u2 = -a0 * u1 + b0 * u0
        u3 = -a1 * u1 - a0 * u2 + b1 * u0 + b0 * u1
        u4 = (-a2 * u1 - 2.0 * a1 * u2 - a0 * u3
              + b2 * u0 + 2.0 * b1 * u1 + b0 * u2)
        return x.compose((u0, u1, u2, u3, u4))

    def __repr__(self):
        return "NumericRadialSolution(%s on [%g, %g])" % (
            self.label or "u", *self.valid_interval)


@dataclass
class HomSolutionPair:
    """Fundamental pair of the homogeneous radial equation with the
    Wronskian pinned at the base point."""

    u1: object
    u2: object
    w0: float
    r0: float
    space: ModelSpace
    k: int
    source: str = "closed-form"
    valid_interval: tuple = (0.0, math.inf)


def _jet_value_slope(u, r):
    j = u(Jet1.variable(float(r)))
    return j.c[0], j.c[1]


def _closed_pair(space, k):
    m = space.m
    tag = space.warp.tag
    if tag == "euclidean":
        p, q = k, 2 - m - k

        def u1(r):
            return r ** p

        def u2(r):
            return r ** q

        return u1, u2
    if tag == "spherical" and m == 2:
        def u1(r):
            return (jets.cos(r / 2.0) / jets.sin(r / 2.0)) ** k

        def u2(r):
            return (jets.sin(r / 2.0) / jets.cos(r / 2.0)) ** k

        return u1, u2
    if tag == "hyperbolic" and m == 2:
        def u1(r):
            return (jets.cosh(r / 2.0) / jets.sinh(r / 2.0)) ** k

        def u2(r):
            return (jets.sinh(r / 2.0) / jets.cosh(r / 2.0)) ** k

        return u1, u2
    return None


def _default_interval(space):
    if space.warp.tag == "spherical":
        return (0.15, math.pi - 0.15)
    return (0.15, 3.0)


def _numeric_pair(space, k, r0, interval, rtol=1e-11, atol=1e-13):
    """Integrate the 4-state system (u1, u1', u2, u2') from r0 both ways."""

    def rhs(r, y):
        (a0, _, _), (b0, _, _) = _coefficient_jets(space, k, r)
        return [y[1], -a0 * y[1] + b0 * y[0],
                y[3], -a0 * y[3] + b0 * y[2]]

    y0 = [1.0, 0.0, 0.0, 1.0]
    segments = []
    reached = [r0, r0]
    for idx, stop in enumerate(interval):
        if stop == r0:
            continue
        sol = solve_ivp(rhs, (r0, stop), y0, method="DOP853",
                        dense_output=True, rtol=rtol, atol=atol)
        if sol.t.size > 1:
            lo, hi = min(r0, sol.t[-1]), max(r0, sol.t[-1])
            segments.append((lo, hi, sol.sol))
            reached[idx] = sol.t[-1]
    if not segments:
        raise ConstructionError("initial-value integration failed at r0=%g"
                                % r0)
    valid = (min(reached), max(reached))
    seg1 = [(lo, hi, sol, 0) for lo, hi, sol in segments]
    seg2 = [(lo, hi, sol, 1) for lo, hi, sol in segments]
    u1 = NumericRadialSolution(space, k, seg1, r0, label="u1")
    u2 = NumericRadialSolution(space, k, seg2, r0, label="u2")
    return u1, u2, valid


def fundamental_pair(space, k, config=None, interval=None):
    """Independent solutions (u1, u2) of the homogeneous radial equation:
    closed forms where available, numeric initial-value integration
    otherwise.  If the integration stops early the pair carries the
    partial valid interval."""
    if k < 1:
        raise DomainError("separation degree k must be >= 1 "
                          "(k = 0 is the radial module)")
    cfg = config or QuadratureConfig()
    r0 = cfg.resolve_base(space)
    closed = _closed_pair(space, k)
    if closed is not None:
        u1, u2 = closed
        v1, s1 = _jet_value_slope(u1, r0)
        v2, s2 = _jet_value_slope(u2, r0)
        w0 = v1 * s2 - s1 * v2
        lo, hi = space.warp.domain
        return HomSolutionPair(u1, u2, w0, r0, space, k, "closed-form",
                               (lo, hi))
    interval = interval or _default_interval(space)
    u1, u2, valid = _numeric_pair(space, k, r0, interval)
    return HomSolutionPair(u1, u2, 1.0, r0, space, k, "numeric-ivp", valid)


def wronskian(pair, space, r):
    """W(r) by the Abel identity W0 (sigma(r0)/sigma(r))^{m-1}; also
    usable inside jet-evaluated integrands."""
    s0 = space.warp(pair.r0)
    s0 = s0.value if isinstance(s0, Jet1) else s0
    s = space.warp(r)
    return pair.w0 * (s0 / s) ** (space.m - 1)


def particular_solutions(pair, space=None, config=None):
    """(up1, up2) by variation of parameters against (u1, u2), with all
    antiderivatives based at the pair's base point."""
    space = space or pair.space
    cfg = config or QuadratureConfig()
    u1, u2, r0 = pair.u1, pair.u2, pair.r0

    def inv_w(t):
        return 1.0 / wronskian(pair, space, t)

    g1 = Antiderivative(lambda t: -u1(t) * u2(t) * inv_w(t), r0, cfg,
                        name="int -u1 u2 / W")
    g2 = Antiderivative(lambda t: u1(t) * u1(t) * inv_w(t), r0, cfg,
                        name="int u1^2 / W")
    h1 = Antiderivative(lambda t: -u2(t) * u2(t) * inv_w(t), r0, cfg,
                        name="int -u2^2 / W")
    h2 = Antiderivative(lambda t: u1(t) * u2(t) * inv_w(t), r0, cfg,
                        name="int u1 u2 / W")

    def up1(r):
        return u1(r) * g1(r) + u2(r) * g2(r)

    def up2(r):
        return u1(r) * h1(r) + u2(r) * h2(r)

    return up1, up2


@dataclass
class SeparableBiharmonic:
    """Assembled 4-parameter radial factor times an angular harmonic."""

    space: ModelSpace
    k: int
    angular: object  # SphericalHarmonic on S^{m-1} (n = m), or None
    coefficients: tuple
    pair: HomSolutionPair
    up1: object
    up2: object

    def radial(self, r):
        c1, c2, c3, c4 = self.coefficients
        out = 0.0
        if c1:
            out = out + c1 * self.pair.u1(r)
        if c2:
            out = out + c2 * self.pair.u2(r)
        if c3:
            out = out + c3 * self.up1(r)
        if c4:
            out = out + c4 * self.up2(r)
        if not isinstance(out, Jet1) and hasattr(r, "c"):
            out = r * 0.0 + out
        return out

    def __call__(self, r, theta):
        """Value at radius r and unit direction theta in R^m."""
        v = self.angular(list(theta)) if self.angular is not None else 1.0
        u = self.radial(r)
        u = u.value if isinstance(u, Jet1) else u
        return u * v

    def as_separable_field(self):
        from .geometry import SeparableField
        return SeparableField(self.radial, self.k, self.angular)


def build(space, k, angular, coefficients, config=None):
    """Assemble c1 u1 + c2 u2 + c3 up1 + c4 up2 times v_k(theta)."""
    if angular is not None:
        if angular.n != space.m:
            raise DomainError(
                "angular harmonic lives on S^%d but the space needs S^%d"
                % (angular.n - 1, space.m - 1))
        if angular.k != k:
            raise DomainError("angular degree %d != separation degree %d"
                              % (angular.k, k))
    pair = fundamental_pair(space, k, config)
    up1, up2 = particular_solutions(pair, space, config)
    coefficients = tuple(float(c) for c in coefficients)
    if len(coefficients) != 4:
        raise DomainError("need exactly four coefficients c1..c4")
    return SeparableBiharmonic(space, k, angular, coefficients, pair,
                               up1, up2)
