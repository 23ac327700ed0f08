"""Truncated-Taylor (jet) arithmetic, exact to roundoff through order 4.

Convention: jets store *raw derivatives*, not Taylor coefficients.  A
``Jet1`` holds ``(f, f', f'', f''', f'''')`` with respect to one scalar
parameter; a ``Jet2`` holds the mixed partials ``d^{i+j} f / ds^i dt^j``
for ``0 <= i, j <= 2`` along two independent directions.  All factorial
bookkeeping is confined to the two composition helpers ``Jet1.compose``
and ``Jet2.compose`` (univariate Faa di Bruno, and a scale-to-Taylor /
truncated-product / scale-back round trip, respectively).

Elementary functions (``sin``, ``cos``, ``exp``, ``log``, ``sqrt``,
``sinh``, ``cosh``, ``tan``, ``tanh``, ``atan``) are provided as module
functions that accept plain floats or jets, so the same field definition
evaluates in either arithmetic.
"""

import math

from .errors import DomainError, EvaluationError

# Division by a jet whose value part is this close to zero is an error,
# not infinity: fail loudly at coordinate singularities.
_TINY = 1e-300


def _check_div(v):
    if abs(v) < _TINY:
        raise EvaluationError("jet division by (near-)zero value part")


class Jet1:
    """Univariate jet: value and derivatives 1..4 along one direction."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = coeffs

    @staticmethod
    def variable(v):
        """Seed jet for the differentiation variable itself."""
        return Jet1((v, 1.0, 0.0, 0.0, 0.0))

    @staticmethod
    def seed(value, slope):
        """Seed jet for a coordinate moving with speed `slope`."""
        return Jet1((value, slope, 0.0, 0.0, 0.0))

    @staticmethod
    def constant(v):
        return Jet1((v, 0.0, 0.0, 0.0, 0.0))

    @property
    def value(self):
        return self.c[0]

    def __repr__(self):
        return "Jet1" + repr(tuple(self.c))

    # arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a = self.c
        if isinstance(other, Jet1):
            b = other.c
            return Jet1((a[0] + b[0], a[1] + b[1], a[2] + b[2],
                         a[3] + b[3], a[4] + b[4]))
        return Jet1((a[0] + other, a[1], a[2], a[3], a[4]))

    __radd__ = __add__

    def __sub__(self, other):
        a = self.c
        if isinstance(other, Jet1):
            b = other.c
            return Jet1((a[0] - b[0], a[1] - b[1], a[2] - b[2],
                         a[3] - b[3], a[4] - b[4]))
        return Jet1((a[0] - other, a[1], a[2], a[3], a[4]))

    def __rsub__(self, other):
        a = self.c
        return Jet1((other - a[0], -a[1], -a[2], -a[3], -a[4]))

    def __neg__(self):
        a = self.c
        return Jet1((-a[0], -a[1], -a[2], -a[3], -a[4]))

    def __mul__(self, other):
        a = self.c
        if isinstance(other, Jet1):
            b = other.c
            a0, a1, a2, a3, a4 = a
            b0, b1, b2, b3, b4 = b
            return Jet1((
                a0 * b0,
                a1 * b0 + a0 * b1,
                a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
                a3 * b0 + 3.0 * a2 * b1 + 3.0 * a1 * b2 + a0 * b3,
                a4 * b0 + 4.0 * a3 * b1 + 6.0 * a2 * b2
                + 4.0 * a1 * b3 + a0 * b4,
            ))
        return Jet1((a[0] * other, a[1] * other, a[2] * other,
                     a[3] * other, a[4] * other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet1):
            return self * other._reciprocal()
        _check_div(other)
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def _reciprocal(self):
        v = self.c[0]
        _check_div(v)
        iv = 1.0 / v
        iv2 = iv * iv
        return self.compose((iv, -iv2, 2.0 * iv2 * iv,
                             -6.0 * iv2 * iv2, 24.0 * iv2 * iv2 * iv))

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer()):
            p = int(p)
            if p >= 0:
                return _ipow(self, p)
            return _ipow(self, -p)._reciprocal()
        v = self.c[0]
        return self.compose(_pow_table(v, p))

    def compose(self, d):
        """Chain rule: derivatives of g(u(t)) from g's derivatives `d`
        at u(t0) (univariate Faa di Bruno through order 4)."""
        _, u1, u2, u3, u4 = self.c
        d0, d1, d2, d3, d4 = d
        u1u1 = u1 * u1
        return Jet1((
            d0,
            d1 * u1,
            d1 * u2 + d2 * u1u1,
            d1 * u3 + 3.0 * d2 * u1 * u2 + d3 * u1u1 * u1,
            d1 * u4 + d2 * (4.0 * u1 * u3 + 3.0 * u2 * u2)
            + 6.0 * d3 * u1u1 * u2 + d4 * u1u1 * u1u1,
        ))


class Jet2:
    """Bivariate jet: mixed partials d^{i+j}f/ds^i dt^j, 0 <= i, j <= 2.

    Stored row-major: ``c[3*i + j]``.
    """

    __slots__ = ("c",)

    # i! * j! divisors for the raw-derivative <-> Taylor round trip
    _FACT = (1.0, 1.0, 2.0, 1.0, 1.0, 2.0, 2.0, 2.0, 4.0)

    def __init__(self, coeffs):
        self.c = coeffs

    @staticmethod
    def seed(value, ds, dt):
        """Coordinate jet moving with speed `ds` along s and `dt` along t."""
        return Jet2((value, dt, 0.0, ds, 0.0, 0.0, 0.0, 0.0, 0.0))

    @staticmethod
    def constant(v):
        return Jet2((v, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0))

    @property
    def value(self):
        return self.c[0]

    @property
    def d_ss(self):
        return self.c[6]

    @property
    def d_st(self):
        return self.c[4]

    @property
    def d_sstt(self):
        return self.c[8]

    def __repr__(self):
        return "Jet2" + repr(tuple(self.c))

    def __add__(self, other):
        a = self.c
        if isinstance(other, Jet2):
            b = other.c
            return Jet2(tuple(x + y for x, y in zip(a, b)))
        return Jet2((a[0] + other,) + tuple(a[1:]))

    __radd__ = __add__

    def __sub__(self, other):
        a = self.c
        if isinstance(other, Jet2):
            b = other.c
            return Jet2(tuple(x - y for x, y in zip(a, b)))
        return Jet2((a[0] - other,) + tuple(a[1:]))

    def __rsub__(self, other):
        a = self.c
        return Jet2((other - a[0],) + tuple(-x for x in a[1:]))

    def __neg__(self):
        return Jet2(tuple(-x for x in self.c))

    def __mul__(self, other):
        a = self.c
        if isinstance(other, Jet2):
            b = other.c
            a00, a01, a02, a10, a11, a12, a20, a21, a22 = a
            b00, b01, b02, b10, b11, b12, b20, b21, b22 = b
            # Leibniz with binomial weights on raw derivatives
            return Jet2((
                a00 * b00,
                a01 * b00 + a00 * b01,
                a02 * b00 + 2.0 * a01 * b01 + a00 * b02,
                a10 * b00 + a00 * b10,
                a11 * b00 + a10 * b01 + a01 * b10 + a00 * b11,
                a12 * b00 + 2.0 * a11 * b01 + a10 * b02
                + a02 * b10 + 2.0 * a01 * b11 + a00 * b12,
                a20 * b00 + 2.0 * a10 * b10 + a00 * b20,
                a21 * b00 + a20 * b01 + 2.0 * a11 * b10
                + 2.0 * a10 * b11 + a01 * b20 + a00 * b21,
                a22 * b00 + 2.0 * a21 * b01 + a20 * b02
                + 2.0 * a12 * b10 + 4.0 * a11 * b11 + 2.0 * a10 * b12
                + a02 * b20 + 2.0 * a01 * b21 + a00 * b22,
            ))
        return Jet2(tuple(x * other for x in a))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other._reciprocal()
        _check_div(other)
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def _reciprocal(self):
        v = self.c[0]
        _check_div(v)
        iv = 1.0 / v
        iv2 = iv * iv
        return self.compose((iv, -iv2, 2.0 * iv2 * iv,
                             -6.0 * iv2 * iv2, 24.0 * iv2 * iv2 * iv))

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer()):
            p = int(p)
            if p >= 0:
                return _ipow(self, p)
            return _ipow(self, -p)._reciprocal()
        v = self.c[0]
        return self.compose(_pow_table(v, p))

    def compose(self, d):
        """Chain rule for g(u(s,t)): scale raw derivatives to Taylor
        coefficients, expand g as a quartic in (u - u0) with truncated
        products, and scale back.  Terms beyond total degree 4 vanish in
        the (2,2) truncation, so degree 4 is exact."""
        F = Jet2._FACT
        c = self.c
        p = (0.0, c[1] / F[1], c[2] / F[2], c[3] / F[3], c[4] / F[4],
             c[5] / F[5], c[6] / F[6], c[7] / F[7], c[8] / F[8])
        d0, d1, d2, d3, d4 = d
        p2 = _tmul(p, p)
        p3 = _tmul(p2, p)
        p4 = _tmul(p3, p)
        g = [d1 * p[l] + (d2 / 2.0) * p2[l] + (d3 / 6.0) * p3[l]
             + (d4 / 24.0) * p4[l] for l in range(9)]
        g[0] += d0
        return Jet2(tuple(g[l] * F[l] for l in range(9)))


def _tmul(a, b):
    """Truncated product of two 3x3 bivariate Taylor tables."""
    a00, a01, a02, a10, a11, a12, a20, a21, a22 = a
    b00, b01, b02, b10, b11, b12, b20, b21, b22 = b
    return (
        a00 * b00,
        a00 * b01 + a01 * b00,
        a00 * b02 + a01 * b01 + a02 * b00,
        a00 * b10 + a10 * b00,
        a00 * b11 + a01 * b10 + a10 * b01 + a11 * b00,
        a00 * b12 + a01 * b11 + a02 * b10 + a10 * b02
        + a11 * b01 + a12 * b00,
        a00 * b20 + a10 * b10 + a20 * b00,
        a00 * b21 + a01 * b20 + a10 * b11 + a11 * b10
        + a20 * b01 + a21 * b00,
        a00 * b22 + a01 * b21 + a02 * b20 + a10 * b12 + a11 * b11
        + a12 * b10 + a20 * b02 + a21 * b01 + a22 * b00,
    )


def _ipow(x, n):
    if n == 0:
        return x * 0.0 + 1.0
    out = None
    base = x
    while n:
        if n & 1:
            out = base if out is None else out * base
        n >>= 1
        if n:
            base = base * base
    return out


# derivative tables for elementary functions ------------------------------

def _pow_table(v, p):
    return (v ** p,
            p * v ** (p - 1),
            p * (p - 1) * v ** (p - 2),
            p * (p - 1) * (p - 2) * v ** (p - 3),
            p * (p - 1) * (p - 2) * (p - 3) * v ** (p - 4))


def _dispatch(x, table):
    if isinstance(x, (Jet1, Jet2)):
        return x.compose(table(x.value))
    return table(x)[0]


def sin(x):
    def table(v):
        s, c = math.sin(v), math.cos(v)
        return (s, c, -s, -c, s)
    return _dispatch(x, table)


def cos(x):
    def table(v):
        s, c = math.sin(v), math.cos(v)
        return (c, -s, -c, s, c)
    return _dispatch(x, table)


def tan(x):
    def table(v):
        t = math.tan(v)
        t2 = t * t
        return (t,
                1.0 + t2,
                2.0 * t + 2.0 * t2 * t,
                2.0 + 8.0 * t2 + 6.0 * t2 * t2,
                16.0 * t + 40.0 * t2 * t + 24.0 * t2 * t2 * t)
    return _dispatch(x, table)


def exp(x):
    def table(v):
        e = math.exp(v)
        return (e, e, e, e, e)
    return _dispatch(x, table)


def log(x):
    def table(v):
        if v <= 0.0:
            raise EvaluationError("log of non-positive value %r" % v)
        iv = 1.0 / v
        iv2 = iv * iv
        return (math.log(v), iv, -iv2, 2.0 * iv2 * iv, -6.0 * iv2 * iv2)
    return _dispatch(x, table)


ln = log


def sqrt(x):
    def table(v):
        if v <= 0.0:
            raise EvaluationError("sqrt of non-positive value %r" % v)
        s = math.sqrt(v)
        iv = 1.0 / v
        return (s, 0.5 * s * iv, -0.25 * s * iv * iv,
                0.375 * s * iv * iv * iv, -0.9375 * s * iv * iv * iv * iv)
    return _dispatch(x, table)


def sinh(x):
    def table(v):
        s, c = math.sinh(v), math.cosh(v)
        return (s, c, s, c, s)
    return _dispatch(x, table)


def cosh(x):
    def table(v):
        s, c = math.sinh(v), math.cosh(v)
        return (c, s, c, s, c)
    return _dispatch(x, table)


def tanh(x):
    def table(v):
        u = math.tanh(v)
        u2 = u * u
        return (u,
                1.0 - u2,
                -2.0 * u + 2.0 * u2 * u,
                -2.0 + 8.0 * u2 - 6.0 * u2 * u2,
                16.0 * u - 40.0 * u2 * u + 24.0 * u2 * u2 * u)
    return _dispatch(x, table)


def atan(x):
    def table(v):
        q = 1.0 / (1.0 + v * v)
        q2 = q * q
        return (math.atan(v),
                q,
                -2.0 * v * q2,
                (6.0 * v * v - 2.0) * q2 * q,
                (24.0 * v - 24.0 * v ** 3) * q2 * q2)
    return _dispatch(x, table)


# fields and derivative operators ------------------------------------------

class ScalarField:
    """An evaluable mapping from points to reals, generic over the scalar
    kind: the wrapped callable receives a sequence of plain floats, Jet1,
    or Jet2 values and must combine them with the generic operations of
    this module."""

    __slots__ = ("fn", "dim", "name")

    def __init__(self, fn, dim, name=""):
        self.fn = fn
        self.dim = dim
        self.name = name

    def __call__(self, xs):
        if len(xs) != self.dim:
            raise DomainError(
                "field %r expects dimension %d, got %d"
                % (self.name or "<anonymous>", self.dim, len(xs)))
        return self.fn(xs)

    def __repr__(self):
        return "ScalarField(dim=%d%s)" % (
            self.dim, ", name=%r" % self.name if self.name else "")


def _as_field(field, n):
    if isinstance(field, ScalarField):
        if field.dim != n:
            raise DomainError("field dimension %d does not match point "
                              "dimension %d" % (field.dim, n))
        return field.fn
    return field


def _eval(fn, seeds):
    try:
        out = fn(seeds)
    except (ZeroDivisionError, OverflowError, EvaluationError) as exc:
        raise EvaluationError("field evaluation failed: %s" % exc) from exc
    except ValueError as exc:
        raise EvaluationError("field evaluation failed: %s" % exc) from exc
    for coeff in out.c:
        if not math.isfinite(coeff):
            raise EvaluationError("non-finite jet coefficient %r" % coeff)
    return out


def directional_derivatives(field, x, v, order=4):
    """[f, D_v f, ..., D_v^order f] at x along the direction v."""
    if order not in (1, 2, 3, 4):
        raise DomainError("order must be in 1..4, got %r" % order)
    n = len(x)
    if len(v) != n:
        raise DomainError("point and direction dimensions differ")
    fn = _as_field(field, n)
    seeds = [Jet1.seed(float(x[l]), float(v[l])) for l in range(n)]
    jet = _eval(fn, seeds)
    return list(jet.c[:order + 1])


def euclidean_laplacian(field, x):
    """Sum of pure second partials, one univariate jet sweep per axis."""
    n = len(x)
    fn = _as_field(field, n)
    total = 0.0
    for i in range(n):
        seeds = [Jet1.seed(float(x[l]), 1.0 if l == i else 0.0)
                 for l in range(n)]
        total += _eval(fn, seeds).c[2]
    return total


def euclidean_bilaplacian(field, x):
    """Sum over i, j of d^4 f / dx_i^2 dx_j^2.

    Diagonal terms come from order-4 univariate sweeps, off-diagonal
    pairs from one bivariate sweep each (counted twice by symmetry).
    """
    n = len(x)
    fn = _as_field(field, n)
    total = 0.0
    for i in range(n):
        seeds = [Jet1.seed(float(x[l]), 1.0 if l == i else 0.0)
                 for l in range(n)]
        total += _eval(fn, seeds).c[4]
    for i in range(n):
        for j in range(i + 1, n):
            seeds = [Jet2.seed(float(x[l]),
                               1.0 if l == i else 0.0,
                               1.0 if l == j else 0.0)
                     for l in range(n)]
            total += 2.0 * _eval(fn, seeds).d_sstt
    return total
