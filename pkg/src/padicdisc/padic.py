"""Exact arithmetic in Q_p and small declared extensions.

Scalars are vectors of base-field "digits" over a declared field: Q_p itself,
one Eisenstein extension (totally ramified, basis 1, pi, ..., pi^{e-1}) or one
unramified extension (basis 1, w, ..., w^{f-1}).  Each coordinate is stored as
``unit * p^val`` known modulo ``p^prec``; valuations are exact rationals with
denominator dividing e, normalized so that valuation(p) = 1.  All radii in the
library are exponents q meaning radius |p|^q.

Every value is immutable after construction; operations are pure functions.
An operation that cannot certify any digit raises instead of returning noise.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DivisionByZeroAtPrecision,
    HenselHypothesisFailed,
    NoConvergence,
    UnsupportedRoot,
)

INF = float("inf")

# Absolute-precision ceiling for exact (rational) values.  Far beyond any
# tracked precision (digit caps are ~64), yet small enough that p^_EXACT is a
# computable modulus; every produced precision is clamped here so "exact"
# stays absorbing under arithmetic.
_EXACT = 4096


# ----------------------------------------------------------------------------
# base-field digit helpers
#
# A "digit" is a triple (u, v, k): the value is u * p^v, known modulo p^k,
# with u == 0 encoding "zero at precision k" (then v == k as a valuation
# lower bound).  u is kept coprime to p and reduced modulo p^(k - v).
# ----------------------------------------------------------------------------

def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


_POWS = {}


def _ppow(p: int, n: int) -> int:
    # cached small powers; the cache stays tiny (exponents ~ 2 * digit cap)
    if n > 4096:
        return p ** n
    cache = _POWS.get(p)
    if cache is None:
        cache = _POWS[p] = [1, p]
    while len(cache) <= n:
        cache.append(cache[-1] * p)
    return cache[n]


def _bzero(k: int) -> tuple:
    if k > _EXACT:
        k = _EXACT
    return (0, k, k)


def _bnorm(p: int, m: int, e: int, k: int):
    if k > _EXACT:
        k = _EXACT
    if m == 0 or e >= k:
        return (0, k, k)
    m %= _ppow(p, k - e)
    if m == 0:
        return (0, k, k)
    w = _vp_int(m, p)
    v = e + w
    u = (m // _ppow(p, w)) % _ppow(p, k - v)
    return (u, v, k)


def _badd(p: int, x: tuple, y: tuple):
    ux, vx, kx = x
    uy, vy, ky = y
    k = min(kx, ky)
    if not ux and not uy:
        return (0, k, k)
    e = min(vx, vy)
    m = 0
    if ux:
        m += ux * _ppow(p, vx - e)
    if uy:
        m += uy * _ppow(p, vy - e)
    return _bnorm(p, m, e, k)


def _bneg(p: int, x: tuple):
    u, v, k = x
    if not u:
        return x
    return ((-u) % _ppow(p, k - v), v, k)


def _bmul(p: int, x: tuple, y: tuple):
    ux, vx, kx = x
    uy, vy, ky = y
    k = min(vx + ky, vy + kx)
    if not ux or not uy:
        return _bzero(k)
    return _bnorm(p, ux * uy, vx + vy, k)


def _binv(p: int, x: tuple):
    u, v, k = x
    if not u:
        raise DivisionByZeroAtPrecision(
            "inverse of a value that vanishes at precision %s" % k)
    rel = k - v
    ui = 1 if u == 1 else pow(u, -1, _ppow(p, rel))
    return _bnorm(p, ui, -v, rel - v) if rel - v > _EXACT else (ui, -v, rel - v)


def _bscale(p: int, x: tuple, q: Fraction):
    # exact multiplication by a nonzero rational: no precision loss
    u, v, k = x
    num, den = q.numerator, q.denominator
    vn = _vp_int(num, p)
    vd = _vp_int(den, p) if den % p == 0 else 0
    w = vn - vd
    if not u:
        return _bzero(k + w)
    rel = k - v
    mod = _ppow(p, rel)
    u2 = u * ((num // _ppow(p, vn)) % mod)
    den_unit = (den // _ppow(p, vd)) % mod
    if den_unit != 1:
        u2 *= pow(den_unit, -1, mod)
    return _bnorm(p, u2 % mod, v + w, k + w)


def _bfrom_fraction(p: int, q: Fraction, rel: int):
    if q == 0:
        return _bzero(_EXACT)
    num, den = q.numerator, q.denominator
    vn = _vp_int(num, p)
    vd = _vp_int(den, p)
    v = vn - vd
    mod = _ppow(p, rel)
    u = ((num // _ppow(p, vn)) % mod) * pow((den // _ppow(p, vd)) % mod, -1, mod) % mod
    return (u, v, v + rel)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ----------------------------------------------------------------------------
# residue-field polynomial helpers (for unramified irreducibility checks)
# ----------------------------------------------------------------------------

def _fp_polymulmod(a, b, g, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce modulo monic g
    dg = len(g) - 1
    for k in range(len(out) - 1, dg - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for i in range(dg):
                out[k - dg + i] = (out[k - dg + i] - c * g[i]) % p
    return out[:dg]


def _fp_powmod_x(exp, g, p):
    # X^exp modulo monic g over F_p
    result = [1]
    base = [0, 1]
    while exp:
        if exp & 1:
            result = _fp_polymulmod(result, base, g, p)
        base = _fp_polymulmod(base, base, g, p)
        exp >>= 1
    return result


def _fp_gcd(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    while any(b):
        while b and b[-1] == 0:
            b.pop()
        if not b:
            break
        inv = pow(b[-1], -1, p)
        r = list(a)
        while len(r) >= len(b) and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) < len(b):
                break
            c = r[-1] * inv % p
            sh = len(r) - len(b)
            for i, x in enumerate(b):
                r[sh + i] = (r[sh + i] - c * x) % p
        a, b = b, r
    return a


def _fp_irreducible(g, p):
    # g monic over F_p.  Frobenius criterion: X^{p^n} == X mod g and
    # gcd(X^{p^{n/q}} - X, g) = 1 for every prime q | n.
    n = len(g) - 1
    if n == 1:
        return True
    xq = _fp_powmod_x(p ** n, g, p)
    xq = [(xq[i] if i < len(xq) else 0) - (1 if i == 1 else 0) for i in range(max(len(xq), 2))]
    if any(c % p for c in xq):
        return False
    m, primes, d = n, [], 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    for q in primes:
        h = _fp_powmod_x(p ** (n // q), g, p)
        h = [(h[i] if i < len(h) else 0) - (1 if i == 1 else 0) for i in range(max(len(h), 2))]
        gc = _fp_gcd(g, h, p)
        if len([c for c in gc if c % p]) != 1 or (gc + [0])[0] % p == 0:
            return False
    return True


# ----------------------------------------------------------------------------
# field descriptors
# ----------------------------------------------------------------------------

class FieldDescriptor:
    """Q_p or one Eisenstein/unramified extension with a digit cap.

    ``poly`` is the monic defining polynomial (list of rationals, ascending,
    leading coefficient 1) or None for the base field.  ``digits`` is the
    relative precision cap R: every scalar carries R significant p-adic
    digits beyond its valuation.
    """

    def __init__(self, p: int, digits: int = 64, poly=None, e: int = 1, f: int = 1):
        if not _is_prime(p):
            raise ValueError("p = %s is not prime" % p)
        if digits < 1:
            raise ValueError("precision cap must be >= 1")
        self.p = p
        self.digits = digits
        if poly is None:
            if e != 1 or f != 1:
                raise ValueError("base field has e = f = 1")
            self.poly = None
            self.kind = "base"
            self.e, self.f, self.n = 1, 1, 1
        else:
            poly = [Fraction(c) for c in poly]
            if poly[-1] != 1:
                raise ValueError("defining polynomial must be monic")
            n = len(poly) - 1
            if n < 2 or e * f != n:
                raise ValueError("degree must equal e*f >= 2")
            self.poly = tuple(poly)
            self.e, self.f, self.n = e, f, n
            vals = [INF if c == 0 else Fraction(_vp_int(c.numerator, p) - _vp_int(c.denominator, p))
                    for c in poly[:-1]]
            if e == n and f == 1:
                # Eisenstein: one Newton-polygon slope 1/e, hence irreducible
                if vals[0] != 1 or any(v < 1 for v in vals):
                    raise ValueError("not an Eisenstein polynomial at p")
                self.kind = "eisenstein"
            elif f == n and e == 1:
                if any(v < 0 for v in vals):
                    raise ValueError("unramified polynomial must be integral")
                g = [int(c) % p for c in poly]
                if not _fp_irreducible(g, p):
                    raise ValueError("residue polynomial is reducible over F_p")
                self.kind = "unramified"
            else:
                raise ValueError("only Eisenstein or unramified extensions; towers out of scope")
        if self.kind == "eisenstein":
            self.shifts = tuple(Fraction(i, self.e) for i in range(self.n))
        else:
            self.shifts = (Fraction(0),) * self.n
        self._pow_table = self._build_pow_table()

    def _build_pow_table(self):
        # X^k mod poly as exact rational coordinate vectors, n <= k <= 2n-2
        if self.poly is None:
            return {}
        n = self.n
        table = {}
        cur = [-c for c in self.poly[:-1]]  # X^n
        table[n] = list(cur)
        for k in range(n + 1, 2 * n - 1):
            nxt = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            if top:
                for i in range(n):
                    nxt[i] += top * table[n][i]
            table[k] = list(nxt)
            cur = nxt
        return table

    # -- constructors ---------------------------------------------------------

    def zero(self) -> "PadicScalar":
        cached = getattr(self, "_zero_scalar", None)
        if cached is None:
            cached = PadicScalar(self, tuple(_bzero(_EXACT) for _ in range(self.n)))
            self._zero_scalar = cached
        return cached

    def one(self) -> "PadicScalar":
        return self.from_rational(1)

    def from_rational(self, q) -> "PadicScalar":
        q = Fraction(q)
        coords = [_bfrom_fraction(self.p, q, self.digits)]
        coords += [_bzero(_EXACT)] * (self.n - 1)
        return PadicScalar(self, tuple(coords))

    def from_coords(self, coords) -> "PadicScalar":
        """Build a scalar from rational coordinates in the power basis."""
        if len(coords) != self.n:
            raise ValueError("expected %d coordinates" % self.n)
        return PadicScalar(self, tuple(
            _bfrom_fraction(self.p, Fraction(c), self.digits) for c in coords))

    def uniformizer(self) -> "PadicScalar":
        if self.kind == "eisenstein":
            coords = [_bzero(_EXACT)] * self.n
            coords[1] = _bfrom_fraction(self.p, Fraction(1), self.digits)
            return PadicScalar(self, tuple(coords))
        return self.from_rational(self.p)

    # -- plumbing -------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldDescriptor)
                and self.p == other.p and self.poly == other.poly
                and self.e == other.e and self.f == other.f
                and self.digits == other.digits)

    def __repr__(self):
        if self.kind == "base":
            return "Q_%d(digits=%d)" % (self.p, self.digits)
        return "Q_%d[x]/(%s)(e=%d,f=%d,digits=%d)" % (
            self.p, list(map(str, self.poly)), self.e, self.f, self.digits)

    # -- coordinate arithmetic ------------------------------------------------

    def _add(self, a, b):
        p = self.p
        return tuple(_badd(p, x, y) for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple(_bneg(p, x) for x in a)

    def _mul(self, a, b):
        p, n = self.p, self.n
        if n == 1:
            return (_bmul(p, a[0], b[0]),)
        if n == 2:
            a0, a1 = a
            b0, b1 = b
            conv0 = _bmul(p, a0, b0)
            conv1 = _badd(p, _bmul(p, a0, b1), _bmul(p, a1, b0))
            conv2 = _bmul(p, a1, b1)
            out0, out1 = conv0, conv1
            if conv2[0] or conv2[2] < _EXACT:
                # a zero at finite precision still caps the output precision
                g0, g1 = self._pow_table[2]
                if g0:
                    out0 = _badd(p, out0, _bscale(p, conv2, g0))
                if g1:
                    out1 = _badd(p, out1, _bscale(p, conv2, g1))
            return (out0, out1)
        conv = [None] * (2 * n - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                t = _bmul(p, x, y)
                conv[i + j] = t if conv[i + j] is None else _badd(p, conv[i + j], t)
        out = list(conv[:n])
        for k in range(2 * n - 2, n - 1, -1):
            t = conv[k]
            if t is None or (not t[0] and t[2] >= _EXACT):
                continue
            for i, q in enumerate(self._pow_table[k]):
                if q:
                    out[i] = _badd(p, out[i], _bscale(p, t, q))
        return tuple(out)

    def _solve(self, mat, rhs):
        """Solve an n x n system over base digits by valuation-pivoted elimination."""
        p, n = self.p, self.n
        m = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
        for col in range(n):
            piv, best = None, None
            for r in range(col, n):
                u, v, k = m[r][col]
                if u and (best is None or v < best):
                    piv, best = r, v
            if piv is None:
                raise DivisionByZeroAtPrecision("singular system at precision")
            m[col], m[piv] = m[piv], m[col]
            inv = _binv(p, m[col][col])
            m[col] = [_bmul(p, inv, x) for x in m[col]]
            for r in range(n):
                if r != col and m[r][col][0]:
                    c = m[r][col]
                    m[r] = [_badd(p, x, _bneg(p, _bmul(p, c, y)))
                            for x, y in zip(m[r], m[col])]
        return tuple(m[i][n] for i in range(n))

    def _inv(self, a):
        if self.n == 1:
            return (_binv(self.p, a[0]),)
        basis = []
        for j in range(self.n):
            ej = [_bzero(_EXACT)] * self.n
            ej[j] = (1, 0, _EXACT)
            basis.append(self._mul(a, tuple(ej)))
        mat = [[basis[j][i] for j in range(self.n)] for i in range(self.n)]
        rhs = [(1, 0, _EXACT)] + [_bzero(_EXACT)] * (self.n - 1)
        return self._solve(mat, rhs)


class PadicScalar:
    """An element of the declared field with tracked valuation and precision."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldDescriptor, coords: tuple):
        self.field = field
        self.coords = coords

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(u == 0 for u, _, _ in self.coords)

    def valuation(self):
        """Exact valuation, or +inf when zero at precision.

        When every nonzero coordinate sits above some zero coordinate's
        precision floor this is still a certified lower bound.
        """
        best = INF
        for (u, v, k), s in zip(self.coords, self.field.shifts):
            if u:
                best = min(best, Fraction(v) + s)
        return best

    def precision(self):
        best = INF
        for (u, v, k), s in zip(self.coords, self.field.shifts):
            if k < _EXACT:
                best = min(best, Fraction(k) + s)
        return best

    def is_exact_zero(self) -> bool:
        return all(u == 0 and k >= _EXACT for u, v, k in self.coords)

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("field mismatch")
            return other
        return self.field.from_rational(other)

    def __add__(self, other):
        other = self._coerce(other)
        return PadicScalar(self.field, self.field._add(self.coords, other.coords))

    __radd__ = __add__

    def __neg__(self):
        return PadicScalar(self.field, self.field._neg(self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        other = self._coerce(other)
        return PadicScalar(self.field, self.field._mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZeroAtPrecision(
                "divisor vanishes at precision %s" % other.precision())
        return self * PadicScalar(self.field, self.field._inv(other.coords))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def inverse(self):
        return self.field.one() / self

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def with_precision(self, prec) -> "PadicScalar":
        """Artificially cap the absolute precision (used to model rough inputs)."""
        prec = Fraction(prec)
        p = self.field.p
        out = []
        for (u, v, k), s in zip(self.coords, self.field.shifts):
            cap = prec - s
            cap_i = int(cap) if cap == int(cap) else int(cap) + 1
            if k <= cap_i:
                out.append((u, v, k))
            elif u:
                out.append(_bnorm(p, u, v, cap_i))
            else:
                out.append(_bzero(cap_i))
        return PadicScalar(self.field, tuple(out))

    def __repr__(self):
        v = self.valuation()
        ps = []
        for (u, vv, k), s in zip(self.coords, self.field.shifts):
            ps.append("0" if not u else "%d*p^%d" % (u % 10 ** 6, vv))
        body = " + pi*".join(ps) if self.field.kind == "eisenstein" else ", ".join(ps)
        return "<%s | v=%s prec=%s>" % (body, v, self.precision())


# ----------------------------------------------------------------------------
# module-level operations
# ----------------------------------------------------------------------------

def element_from_rational(q, field: FieldDescriptor) -> PadicScalar:
    """Image of the rational q in the declared field, full precision cap."""
    return field.from_rational(q)


def arithmetic(x: PadicScalar, y: PadicScalar, kind: str) -> PadicScalar:
    if kind == "add":
        return x + y
    if kind == "sub":
        return x - y
    if kind == "mul":
        return x * y
    if kind == "div":
        return x / y
    raise ValueError("unknown arithmetic kind %r" % kind)


def poly_eval(coeffs, x: PadicScalar) -> PadicScalar:
    acc = x.field.zero()
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs):
    return [c * j for j, c in enumerate(coeffs)][1:]


def hensel_lift(g, x0: PadicScalar) -> PadicScalar:
    """Newton-lift a simple root of g from the seed x0.

    Classical hypothesis v(g(x0)) > 2 v(g'(x0)) is checked up front; the
    iteration doubles correct digits per step.
    """
    g = list(g)
    dg = poly_derivative(g)
    r0 = poly_eval(g, x0)
    d0 = poly_eval(dg, x0)
    v_r = INF if r0.is_zero() else r0.valuation()
    v_d = INF if d0.is_zero() else d0.valuation()
    if v_d == INF or not v_r > 2 * v_d:
        raise HenselHypothesisFailed(
            "v(g(x0))=%s must exceed 2*v(g'(x0))=%s" % (v_r, 2 * v_d if v_d != INF else INF))
    x = x0
    for _ in range(x0.field.digits + 4):
        r = poly_eval(g, x)
        if r.is_zero():
            return x
        x = x - r / poly_eval(dg, x)
    if poly_eval(g, x).is_zero():
        return x
    raise NoConvergence("residual did not vanish at the precision cap")


def _primitive_root_mod_p(p: int) -> int:
    order = p - 1
    primes = []
    m, d = order, 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    for g in range(2, p):
        if all(pow(g, order // q, p) != 1 for q in primes):
            return g
    raise ValueError("no primitive root found")


def root_of_unity(n: int, field: FieldDescriptor) -> PadicScalar:
    """A primitive n-th root of unity in the declared field.

    Supported: n = 1; n = 2 in any field; n = 3 in Q_3(pi) with pi^2 = -3;
    n | p - 1 by Teichmueller lifting.
    """
    p = field.p
    if n < 1:
        raise UnsupportedRoot("n must be positive")
    if n == 1:
        return field.one()
    if n == 2:
        return field.from_rational(-1)
    if n == 3 and p == 3 and field.kind == "eisenstein" and field.n == 2 \
            and field.poly == (Fraction(3), Fraction(0), Fraction(1)):
        zeta = field.from_coords([Fraction(-1, 2), Fraction(1, 2)])
    elif (p - 1) % n == 0:
        g = _primitive_root_mod_p(p)
        r = pow(g, (p - 1) // n, p)
        poly = [field.from_rational(-1)] + [field.zero()] * (n - 1) + [field.one()]
        zeta = hensel_lift(poly, field.from_rational(r))
    else:
        raise UnsupportedRoot("no primitive %d-th root of unity in %r" % (n, field))
    if not (zeta ** n - 1).is_zero():
        raise NoConvergence("root of unity failed verification")
    for m in range(1, n):
        if (zeta ** m - 1).is_zero():
            raise UnsupportedRoot("constructed root is not primitive")
    return zeta
