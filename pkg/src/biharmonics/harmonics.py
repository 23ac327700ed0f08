"""Exact homogeneous-polynomial algebra and harmonic basis generation.

Polynomials are sparse maps from exponent multi-indices to coefficients;
all structural operations (Laplacian, partials, products) are exact when
the coefficients are integers or rationals.  ``harmonic_basis`` computes
the kernel of the polynomial Laplacian on degree-k monomials: in the
grading by the first exponent the coefficient matrix is already in
echelon form (row beta has pivot column beta + 2 e_1), so the kernel is
obtained by exact rational back-substitution from the free columns (the
monomials with first exponent 0 or 1), then cleared to primitive integer
coefficient vectors.
"""

import math
from fractions import Fraction
from functools import lru_cache

from .errors import ConstructionError, DomainError

__all__ = [
    "HomogeneousPolynomial", "SphericalHarmonic", "poly_laplacian",
    "harmonic_basis", "harmonic_space_dimension", "decompose_degree2",
    "euler_radial_identities", "monomial", "radial_power_squared",
]


def _ipow(x, e):
    out = None
    base = x
    while e:
        if e & 1:
            out = base if out is None else out * base
        e >>= 1
        if e:
            base = base * base
    return out


class HomogeneousPolynomial:
    """Homogeneous polynomial of degree k in n variables with sparse
    exponent->coefficient storage and exact arithmetic."""

    __slots__ = ("n", "k", "terms", "_lap")

    def __init__(self, n, k, terms):
        self.n = int(n)
        self.k = int(k)
        if self.n < 1 or self.k < 0:
            raise ConstructionError("need n >= 1 and k >= 0")
        clean = {}
        for expo, coef in terms.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != self.n:
                raise ConstructionError("exponent %r has wrong arity" % (expo,))
            if any(e < 0 for e in expo):
                raise ConstructionError("negative exponent in %r" % (expo,))
            if sum(expo) != self.k:
                raise ConstructionError(
                    "term %r is not of total degree %d" % (expo, self.k))
            if coef != 0:
                clean[expo] = clean.get(expo, 0) + coef
        self.terms = {e: c for e, c in clean.items() if c != 0}
        self._lap = None

    def __call__(self, xs):
        if len(xs) != self.n:
            raise DomainError("polynomial in %d variables evaluated at a "
                              "%d-dimensional point" % (self.n, len(xs)))
        total = 0.0
        for expo, coef in self.terms.items():
            term = None
            for x, e in zip(xs, expo):
                if e:
                    p = _ipow(x, e)
                    term = p if term is None else term * p
            total = total + (coef if term is None else coef * term)
        return total

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if other.n != self.n or other.k != self.k:
            raise ConstructionError("degree/arity mismatch in polynomial sum")
        out = dict(self.terms)
        for expo, coef in other.terms.items():
            out[expo] = out.get(expo, 0) + coef
        return HomogeneousPolynomial(self.n, self.k, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return HomogeneousPolynomial(
            self.n, self.k, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return self.scale(other)
        if other.n != self.n:
            raise ConstructionError("arity mismatch in polynomial product")
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(a + b for a, b in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return HomogeneousPolynomial(self.n, self.k + other.k, out)

    __rmul__ = scale

    def partial(self, i):
        """Exact partial derivative with respect to variable i."""
        out = {}
        for expo, coef in self.terms.items():
            e = expo[i]
            if e:
                key = expo[:i] + (e - 1,) + expo[i + 1:]
                out[key] = out.get(key, 0) + e * coef
        return HomogeneousPolynomial(self.n, max(self.k - 1, 0), out)

    def laplacian(self):
        """Exact coefficient-level Laplacian (degree k-2, zero if k < 2)."""
        if self._lap is None:
            out = {}
            for expo, coef in self.terms.items():
                for i, e in enumerate(expo):
                    if e >= 2:
                        key = expo[:i] + (e - 2,) + expo[i + 1:]
                        out[key] = out.get(key, 0) + e * (e - 1) * coef
            self._lap = HomogeneousPolynomial(self.n, max(self.k - 2, 0), out)
        return self._lap

    def gradient_dot(self, xs):
        """<x, grad p> evaluated at xs (for the Euler identity check)."""
        return sum(self.partial(i)(xs) * xs[i] for i in range(self.n))

    def to_float(self):
        return HomogeneousPolynomial(
            self.n, self.k, {e: float(c) for e, c in self.terms.items()})

    def to_json_dict(self):
        return {"n": self.n, "k": self.k,
                "terms": [{"exponents": list(e), "coeff": float(c)}
                          for e, c in sorted(self.terms.items())]}

    @staticmethod
    def from_json_dict(data):
        terms = {tuple(t["exponents"]): t["coeff"] for t in data["terms"]}
        return HomogeneousPolynomial(data["n"], data["k"], terms)

    def __repr__(self):
        return "HomogeneousPolynomial(n=%d, k=%d, %d terms)" % (
            self.n, self.k, len(self.terms))


def monomial(n, expo, coef=1):
    expo = tuple(expo)
    return HomogeneousPolynomial(n, sum(expo), {expo: coef})


def radial_power_squared(n):
    """|x|^2 as an exact polynomial in n variables."""
    terms = {}
    for i in range(n):
        e = tuple(2 if j == i else 0 for j in range(n))
        terms[e] = 1
    return HomogeneousPolynomial(n, 2, terms)


def poly_laplacian(p):
    """Exact polynomial Laplacian of p (module-level spelling)."""
    return p.laplacian()


class SphericalHarmonic:
    """A harmonic homogeneous polynomial together with the eigenvalue of
    minus the sphere Laplacian on its restriction to S^{n-1}:
    lambda = k (n + k - 2)."""

    __slots__ = ("poly", "eigenvalue")

    def __init__(self, poly, check=True):
        if check and not poly.laplacian().is_zero():
            raise ConstructionError(
                "polynomial is not exactly harmonic: laplacian has %d terms"
                % len(poly.laplacian().terms))
        self.poly = poly
        self.eigenvalue = poly.k * (poly.n + poly.k - 2)

    @property
    def n(self):
        return self.poly.n

    @property
    def k(self):
        return self.poly.k

    def __call__(self, xs):
        return self.poly(xs)

    def __repr__(self):
        return "SphericalHarmonic(n=%d, k=%d, lambda=%g)" % (
            self.n, self.k, self.eigenvalue)


def harmonic_space_dimension(n, k):
    """C(n+k-1, k) - C(n+k-3, k-2)."""
    d = math.comb(n + k - 1, k)
    if k >= 2:
        d -= math.comb(n + k - 3, k - 2)
    return d


def _monomials(n, k):
    """All exponent multi-indices of total degree k in n variables."""
    if n == 1:
        return [(k,)]
    out = []
    for e in range(k + 1):
        out.extend((e,) + rest for rest in _monomials(n - 1, k - e))
    return out


def _complete_harmonic(n, k, free):
    """Kernel vector of the Laplacian matrix whose free part (columns with
    first exponent <= 1) is the single monomial `free`, by back
    substitution along the first-exponent grading."""
    v = {free: Fraction(1)}
    level = [free]
    c = free[0]
    while level:
        rows = set()
        for alpha in level:
            for i in range(1, n):
                if alpha[i] >= 2:
                    rows.add(alpha[:i] + (alpha[i] - 2,) + alpha[i + 1:])
        nxt = []
        for beta in rows:
            acc = Fraction(0)
            for i in range(1, n):
                col = beta[:i] + (beta[i] + 2,) + beta[i + 1:]
                if col in v:
                    acc += (beta[i] + 2) * (beta[i] + 1) * v[col]
            if acc:
                # pivot column of row beta is beta + 2 e_1
                col = (beta[0] + 2,) + beta[1:]
                v[col] = -acc / ((beta[0] + 2) * (beta[0] + 1))
                nxt.append(col)
        level = nxt
        c += 2
    # clear denominators to a primitive integer vector
    denom = 1
    for val in v.values():
        denom = denom * val.denominator // math.gcd(denom, val.denominator)
    ints = {e: int(val * denom) for e, val in v.items()}
    g = 0
    for val in ints.values():
        g = math.gcd(g, abs(val))
    if g > 1:
        ints = {e: val // g for e, val in ints.items()}
    return HomogeneousPolynomial(n, k, ints)


@lru_cache(maxsize=None)
def _harmonic_basis_cached(n, k):
    free_cols = [e for e in _monomials(n, k) if e[0] <= 1]
    basis = tuple(SphericalHarmonic(_complete_harmonic(n, k, e))
                  for e in free_cols)
    assert len(basis) == harmonic_space_dimension(n, k)
    return basis

def harmonic_basis(n, k):
    """Basis of the kernel of poly_laplacian on degree-k homogeneous
    polynomials in n variables (exactly harmonic, integer coefficients).
    The returned list is freshly allocated; the harmonics are shared and
    must not be mutated."""
    if n < 2 or k < 0:
        raise DomainError("need n >= 2 and k >= 0")
    return list(_harmonic_basis_cached(n, k))


def decompose_degree2(p):
    """Split a degree-2 polynomial as p = h2 + c |x|^2 with h2 exactly
    harmonic; c is the trace of p's quadratic form over n."""
    if p.k != 2:
        raise DomainError("decompose_degree2 needs degree 2, got %d" % p.k)
    n = p.n
    exact = all(isinstance(c, int) or isinstance(c, Fraction)
                for c in p.terms.values())
    trace = 0
    for i in range(n):
        e = tuple(2 if j == i else 0 for j in range(n))
        trace = trace + p.terms.get(e, 0)
    c = Fraction(trace, n) if exact else trace / n
    h2 = p - radial_power_squared(n).scale(c)
    return SphericalHarmonic(h2), c


def euler_radial_identities(p, x, alpha=2.0):
    """Self-test diagnostics: both sides of the Euler identity
    <x, grad p(x)> = k p(x), and of the radial-power identity
    lap |x|^alpha = alpha (alpha + n - 2) |x|^{alpha-2} evaluated by a
    jet sweep in p's ambient dimension."""
    from .jets import euclidean_laplacian, sqrt as jsqrt

    n = p.n
    r2 = sum(t * t for t in x)

    def power_field(xs):
        s = xs[0] * xs[0]
        for t in xs[1:]:
            s = s + t * t
        return jsqrt(s) ** alpha

    return {
        "euler_lhs": p.gradient_dot(x),
        "euler_rhs": p.k * p(x),
        "power_lhs": euclidean_laplacian(power_field, x),
        "power_rhs": alpha * (alpha + n - 2) * r2 ** ((alpha - 2) / 2.0),
    }
