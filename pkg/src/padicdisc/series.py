"""Truncated power series at a declared center.

Ring operations, composition, reversion (Lagrange inversion), recentering,
valuation polygons, tail-slope radius estimation, and series-coefficient root
solving.  Truncation order N is fixed per series; binary operations take the
minimum of the two orders and never silently extend it.  The constant
coefficient of a series equals its evaluation at the center.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CenterMismatch,
    NoConvergence,
    NonUnitConstantTerm,
    NotInvertibleAtOrderOne,
    ShiftOutsideDisc,
    SingularFiberPoint,
    SubstitutionOutsideDisc,
    VariableMismatch,
    ZeroSeries,
)
from .padic import PadicScalar, poly_eval, poly_derivative


class TruncatedSeries:
    """Coefficients c_0 .. c_{N-1} of sum c_i (x - center)^i, x the tagged variable."""

    __slots__ = ("field", "var", "center", "coeffs")

    def __init__(self, field: FieldDescriptor, var: str, center: PadicScalar, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("truncation order must be >= 1")
        self.field = field
        self.var = var
        self.center = center
        self.coeffs = coeffs

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_rationals(cls, field, var, center, rationals, order=None):
        coeffs = [field.from_rational(q) for q in rationals]
        if order is not None:
            coeffs += [field.zero()] * (order - len(coeffs))
        return cls(field, var, field.from_rational(center)
                   if not isinstance(center, PadicScalar) else center, coeffs)

    @classmethod
    def constant(cls, field, var, center, value, order):
        coeffs = [value if isinstance(value, PadicScalar) else field.from_rational(value)]
        coeffs += [field.zero()] * (order - 1)
        return cls(field, var, center, coeffs)

    @classmethod
    def identity(cls, field, var, center, order):
        """The coordinate itself: center + (x - center)."""
        coeffs = [center, field.one()] + [field.zero()] * (order - 2)
        return cls(field, var, center, coeffs)

    # -- queries ----------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def degree(self):
        """Largest index with a nonzero coefficient, or None."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[i].is_zero():
                return i
        return None

    def constant_term(self) -> PadicScalar:
        return self.coeffs[0]

    def equals(self, other) -> bool:
        return (self - other).is_zero()

    def min_precision(self):
        return min(c.precision() for c in self.coeffs)

    # -- arithmetic ---------------------------------------------------------------

    def _check_compatible(self, other):
        if self.var != other.var:
            raise VariableMismatch("%r vs %r" % (self.var, other.var))
        if self.center is not other.center and not (self.center - other.center).is_zero():
            raise CenterMismatch("series centers differ at precision")

    def _wrap(self, coeffs):
        return TruncatedSeries(self.field, self.var, self.center, coeffs)

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compatible(other)
            n = min(self.order, other.order)
            return self._wrap([self.coeffs[i] + other.coeffs[i] for i in range(n)])
        c = list(self.coeffs)
        c[0] = c[0] + other
        return self._wrap(c)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return self + (-other)
        return self + (-(other if isinstance(other, PadicScalar)
                         else self.field.from_rational(other)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            s = other if isinstance(other, PadicScalar) else self.field.from_rational(other)
            return self._wrap([c * s for c in self.coeffs])
        self._check_compatible(other)
        n = min(self.order, other.order)
        field = self.field
        fmul, fadd = field._mul, field._add
        zero_coords = field.zero().coords
        xs = [c.coords for c in self.coeffs[:n]]
        ys = [c.coords for c in other.coeffs[:n]]
        x_live = [not c.is_exact_zero() for c in self.coeffs[:n]]
        y_live = [not c.is_exact_zero() for c in other.coeffs[:n]]
        out = [zero_coords] * n
        for i in range(n):
            if not x_live[i]:
                continue
            xi = xs[i]
            for j in range(n - i):
                if not y_live[j]:
                    continue
                k = i + j
                term = fmul(xi, ys[j])
                out[k] = term if out[k] is zero_coords else fadd(out[k], term)
        return self._wrap([PadicScalar(field, c) for c in out])

    __rmul__ = __mul__

    def truncate(self, order: int):
        if order >= self.order:
            return self
        return self._wrap(self.coeffs[:order])

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs[:6]):
            if not c.is_zero():
                parts.append("c%d(v=%s)" % (i, c.valuation()))
        return "<series %s N=%d %s%s>" % (self.var, self.order, " ".join(parts) or "0",
                                          "..." if self.order > 6 else "")


# ----------------------------------------------------------------------------
# public operations
# ----------------------------------------------------------------------------

def series_arithmetic(f: TruncatedSeries, g: TruncatedSeries, kind: str) -> TruncatedSeries:
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    raise ValueError("unknown series arithmetic kind %r" % kind)


def mult_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """Series g with f*g = 1 + O(x^N); needs an invertible constant term."""
    c0 = f.coeffs[0]
    if c0.is_zero():
        raise NonUnitConstantTerm("constant term vanishes at precision")
    n = f.order
    inv0 = c0.inverse()
    out = [inv0] + [f.field.zero()] * (n - 1)
    for k in range(1, n):
        acc = f.field.zero()
        for i in range(1, k + 1):
            if not f.coeffs[i].is_exact_zero():
                acc = acc + f.coeffs[i] * out[k - i]
        out[k] = -(acc * inv0)
    return f._wrap(out)


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise j*c_j shift; order drops to N-1."""
    if f.order == 1:
        return f._wrap([f.field.zero()])
    return f._wrap([f.coeffs[j] * j for j in range(1, f.order)])


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(x)) to order min(N_f, N_g); output takes g's tag and center.

    Requires the substituted constant to fall inside f's disc at precision:
    valuation(g_0 - center_f) > 0.
    """
    delta0 = g.coeffs[0] - f.center
    if not delta0.is_zero() and not delta0.valuation() > 0:
        raise SubstitutionOutsideDisc(
            "substituted constant has valuation %s" % delta0.valuation())
    n = min(f.order, g.order)
    h_coeffs = [delta0] + list(g.coeffs[1:n])
    h = TruncatedSeries(g.field, g.var, g.center, h_coeffs)
    acc = TruncatedSeries.constant(g.field, g.var, g.center, g.field.zero(), n)
    for c in reversed(f.coeffs[:n]):
        acc = acc * h + c
    return acc


def reversion(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse by Lagrange inversion.

    Requires c_0 = 0 at precision and c_1 invertible; then
    g_n = [x^{n-1}] (x / f(x))^n / n and f(g(x)) = x + O(x^N).
    """
    if not f.coeffs[0].is_zero():
        raise NotInvertibleAtOrderOne("constant term does not vanish")
    if f.order < 2 or f.coeffs[1].is_zero():
        raise NotInvertibleAtOrderOne("linear coefficient vanishes at precision")
    n = f.order
    shifted = f._wrap(list(f.coeffs[1:]))       # f(x)/x, order N-1
    h = mult_inverse(shifted)                   # x/f(x), order N-1
    out = [f.field.zero(), h.coeffs[0]]
    power = h
    for k in range(2, n):
        power = power * h
        out.append(power.coeffs[k - 1] / k)
    return f._wrap(out)


def taylor_shift(f: TruncatedSeries, a: PadicScalar) -> TruncatedSeries:
    """f_a with f_a(x) = f(a + x) - f(a): recentered at a, constant term 0."""
    delta = a - f.center
    if not delta.is_zero() and delta.valuation() < 0:
        raise ShiftOutsideDisc("shift target has valuation %s" % delta.valuation())
    n = f.order
    field = f.field
    # Horner in (delta + x) over length-n coefficient vectors
    acc = [field.zero()] * n
    for c in reversed(f.coeffs):
        nxt = [acc[i] * delta for i in range(n)]
        for i in range(n - 1, 0, -1):
            nxt[i] = nxt[i] + acc[i - 1]
        nxt[0] = nxt[0] + c
        acc = nxt
    acc[0] = field.zero()
    return TruncatedSeries(field, f.var, a, acc)


def evaluate(f: TruncatedSeries, a: PadicScalar) -> PadicScalar:
    """Horner sum of the truncation at a.  Exact for polynomial tails; for a
    genuine series it is the order-N partial sum."""
    delta = a - f.center
    return poly_eval(f.coeffs, delta)


# ----------------------------------------------------------------------------
# valuation polygons
# ----------------------------------------------------------------------------

def lower_hull(points):
    """Lower convex hull of (x, y) pairs with exact rational y, x increasing."""
    pts = sorted(points)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) <= (pt[0] - x1) * (y2 - y1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


@dataclass(frozen=True)
class ValuationPolygon:
    """Lower hull of (i, valuation(c_i)); exposes the concave function
    vq(f, l) = min_i (valuation(c_i) + i*l) and its slopes."""

    vertices: tuple

    def value_at(self, ell) -> Fraction:
        ell = Fraction(ell)
        return min(Fraction(v) + i * ell for i, v in self.vertices)

    def _attaining(self, ell):
        ell = Fraction(ell)
        best = self.value_at(ell)
        return [i for i, v in self.vertices if Fraction(v) + i * ell == best]

    def right_slope(self, ell) -> int:
        """Slope of vq just right of ell: the least attaining index."""
        return min(self._attaining(ell))

    def left_slope(self, ell) -> int:
        """Slope of vq just left of ell: the greatest attaining index."""
        return max(self._attaining(ell))

    def max_slope(self) -> int:
        """Slope of vq as l -> 0+: the least index among minimal valuations.

        This counts geometric preimages inside the open disc, so trailing
        series junk above the minimal valuation does not inflate it.
        """
        return self.right_slope(0)

    def breakpoints(self):
        out = []
        for (x1, y1), (x2, y2) in zip(self.vertices, self.vertices[1:]):
            out.append(Fraction(y1 - y2, x2 - x1))
        return out


def valuation_polygon(f: TruncatedSeries) -> ValuationPolygon:
    points = [(i, c.valuation()) for i, c in enumerate(f.coeffs) if not c.is_zero()]
    if not points:
        raise ZeroSeries("series vanishes at precision")
    return ValuationPolygon(tuple(lower_hull(points)))


# ----------------------------------------------------------------------------
# radius estimation
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RadiusEstimate:
    """Radius of convergence as an exponent q (radius |p|^q), capped at q >= 0.

    mode is "exact-from-closed-form" when supplied analytically, else
    "tail-slope-estimate".  unclamped keeps the raw slope as a diagnostic for
    series converging beyond the unit disc.
    """

    exponent: Fraction
    mode: str
    window: tuple
    stable: bool
    unclamped: object = None


def _digit_sum(j: int, p: int) -> int:
    s = 0
    while j:
        s += j % p
        j //= p
    return s


def _dominant_edge(points):
    """(slope, x_left, x_right) of the widest lower-hull edge (later edge on ties)."""
    hull = lower_hull(points)
    if len(hull) < 2:
        return None
    best = None
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if best is None or x2 - x1 >= best[2] - best[1]:
            best = (Fraction(y2 - y1, x2 - x1), x1, x2)
    return best


def radius_estimate(f: TruncatedSeries, window=None) -> RadiusEstimate:
    """Tail-slope radius estimator over a window of high-order coefficients.

    Tries the Newton polygon of raw coefficient valuations first, then of the
    Legendre-normalized valuations v_j + v_p(j!): horizontal solutions carry a
    universal 1/j! factor, so the normalized tail is exactly linear (or
    periodic-linear with its support on one line) for every radius the
    estimator must certify.  An estimate is stable when the widest hull edge
    covers at least half the window and reaches its right end (a short
    boundary uptick after the supporting line is tolerated).  Degenerate
    windows report the maximal radius exponent 0, flagged unstable.
    """
    n = f.order
    if window is None:
        window = (n // 2, n)
    lo, hi = window
    if not (n // 2 <= lo < hi <= n):
        raise ValueError("window must be a nonempty subinterval of [N/2, N)")
    pts = [(j, Fraction(f.coeffs[j].valuation()))
           for j in range(lo, hi) if not f.coeffs[j].is_zero()]
    if len(pts) < 2:
        return RadiusEstimate(Fraction(0), "tail-slope-estimate", (lo, hi), False, None)
    p = f.field.p
    width = Fraction(hi - 1 - lo)
    legendre = [(j, v + Fraction(j - _digit_sum(j, p), p - 1)) for j, v in pts]
    for gauge, gpts in (("raw", pts), ("legendre", legendre)):
        edge = _dominant_edge(gpts)
        if edge is None:
            continue
        slope, x1, x2 = edge
        if 2 * (x2 - x1) >= width and x2 >= hi - 3:
            q = -slope if gauge == "raw" else Fraction(1, p - 1) - slope
            return RadiusEstimate(max(Fraction(0), q), "tail-slope-estimate",
                                  (lo, hi), True, q)
    hull = lower_hull(pts)
    (x1, y1), (x2, y2) = hull[-2], hull[-1]
    q = -Fraction(y2 - y1, x2 - x1)
    return RadiusEstimate(max(Fraction(0), q), "tail-slope-estimate", (lo, hi), False, q)


# ----------------------------------------------------------------------------
# root solving with series coefficients
# ----------------------------------------------------------------------------

def newton_solve(poly, x0: PadicScalar) -> TruncatedSeries:
    """The unique series u with P(s, u(s)) = O((s-b)^N) and u(b) = x0.

    ``poly`` lists TruncatedSeries coefficients of P in ascending X powers,
    all at the same center b.  Requires P(b, x0) = 0 at precision and
    dP/dX(b, x0) invertible (non-branching hypothesis).
    """
    poly = list(poly)
    base = poly[0]
    for c in poly[1:]:
        base._check_compatible(c)
    const = [c.coeffs[0] for c in poly]
    if not poly_eval(const, x0).is_zero():
        raise ValueError("x0 is not a root of P at the center")
    dconst = poly_eval(poly_derivative(const), x0)
    if dconst.is_zero():
        raise SingularFiberPoint(
            "dP/dX vanishes at the fiber point (branching or non-etale)")
    n = min(c.order for c in poly)
    field = base.field
    u = TruncatedSeries.constant(field, base.var, base.center, x0, n)
    dpoly = [poly[k] * k for k in range(1, len(poly))]

    def peval(cs, series):
        acc = TruncatedSeries.constant(field, base.var, base.center, field.zero(), n)
        for c in reversed(cs):
            acc = acc * series + c.truncate(n)
        return acc

    steps = 1
    while (1 << steps) < n:
        steps += 1
    for _ in range(steps + 1):
        residual = peval(poly, u)
        if residual.is_zero():
            break
        u = u - residual * mult_inverse(peval(dpoly, u))
    if not peval(poly, u).is_zero():
        raise NoConvergence("newton_solve residual did not vanish to order N")
    return u
