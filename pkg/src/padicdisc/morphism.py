"""Finite morphisms of open p-adic discs.

A degree-d morphism is carried by its coordinate representation s = f(t).
This module computes image radii and local degrees from valuation polygons,
fibers over a rational point (by polygon-guided Hensel lifting), the
branching tree over the point, local inverse solutions, sections, and the
monic relation P(s, X) annihilating t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .errors import (
    FiberNotReduced,
    NotEtale,
    RootsNotInDeclaredField,
    SingularFiberPoint,
)
from .padic import INF, FieldDescriptor, PadicScalar, hensel_lift, poly_derivative, poly_eval
from .series import (
    TruncatedSeries,
    compose,
    derivative,
    evaluate,
    lower_hull,
    reversion,
    taylor_shift,
    valuation_polygon,
)


@dataclass(frozen=True)
class DiscMorphism:
    """s = f(t) on the open unit disc, of declared degree d.

    The degree must equal the highest slope of the valuation polygon of f,
    i.e. the largest hull index.  The morphism is etale when f'(t) is a unit
    of the open-disc ring: every coefficient valuation of f' at least the
    constant one (no zero of f' inside the disc).
    """

    f: TruncatedSeries
    degree: int
    open_disc: bool = True

    def __post_init__(self):
        if not self.f.center.is_zero():
            raise ValueError("morphisms are written in the unit-disc coordinate (center 0)")
        poly = valuation_polygon(self.f)
        if poly.max_slope() != self.degree:
            raise ValueError(
                "declared degree %d but polygon slope %d" % (self.degree, poly.max_slope()))
        onto = min((c.valuation() for c in self.f.coeffs[1:] if not c.is_zero()),
                   default=None)
        if onto is None or onto > 0:
            raise ValueError("f does not map the open unit disc onto the open unit disc")

    def derivative_series(self) -> TruncatedSeries:
        return derivative(self.f)

    def is_etale(self) -> bool:
        df = self.derivative_series()
        c0 = df.coeffs[0]
        if c0.is_zero():
            return False
        v0 = c0.valuation()
        return all(c.is_zero() or c.valuation() >= v0 for c in df.coeffs[1:])

    def require_etale(self):
        if not self.is_etale():
            raise NotEtale("f'(t) has a zero inside the open unit disc")


@dataclass(frozen=True)
class Fiber:
    """The d preimages of the target point b, in a deterministic order."""

    target: PadicScalar
    points: tuple

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class BranchPoint:
    """One branching point of the tree over b.

    ``parts`` partitions the indices of the fiber points at pairwise
    valuation >= t_exponent into branches (pairwise valuation > t_exponent);
    delta = len(parts) >= 2.
    """

    rep: int
    t_exponent: Fraction
    branch_exponent: Fraction
    delta: int
    parts: tuple


@dataclass(frozen=True)
class TreeOverPoint:
    fiber: Fiber
    branch_points: tuple

    def members(self, center_index: int, exponent) -> tuple:
        """Indices of fiber points inside the open disc D(a_center, |p|^exponent)."""
        exponent = Fraction(exponent)
        a = self.fiber.points[center_index]
        out = []
        for j, aj in enumerate(self.fiber.points):
            d = aj - a
            if d.is_zero() or d.valuation() > exponent:
                out.append(j)
        return tuple(out)


@dataclass(frozen=True)
class MonicRelation:
    """P(s, X) = a_0(s) + ... + a_{d-1}(s) X^{d-1} + X^d with P(s, t) = 0."""

    coeffs: tuple          # a_0 .. a_{d-1}, TruncatedSeries at the target center
    center: PadicScalar

    @property
    def degree(self) -> int:
        return len(self.coeffs)


# ----------------------------------------------------------------------------
# radii and degrees
# ----------------------------------------------------------------------------

def image_radius(phi: DiscMorphism, a: PadicScalar, ell) -> Fraction:
    """Exponent of the radius of phi(D(a, |p|^ell)): vq of f recentered at a."""
    if not a.is_zero() and a.valuation() < 0:
        raise ValueError("a must lie in the unit disc")
    ell = Fraction(ell)
    shifted = taylor_shift(phi.f, a)
    return valuation_polygon(shifted).value_at(ell)


def local_degree(phi: DiscMorphism, a: PadicScalar, ell, closed: bool = False) -> int:
    """Degree of the restriction to D(a, |p|^ell): polygon slope at ell.

    Right slope for open discs, left slope for closed ones.
    """
    ell = Fraction(ell)
    shifted = taylor_shift(phi.f, a)
    poly = valuation_polygon(shifted)
    return poly.left_slope(ell) if closed else poly.right_slope(ell)


# ----------------------------------------------------------------------------
# fibers
# ----------------------------------------------------------------------------

def _residue_candidates(fld: FieldDescriptor):
    """Nonzero residue-class representatives of the residue field."""
    p = fld.p
    if fld.kind == "unramified":
        reps = []
        for digits in iter_product(range(p), repeat=fld.f):
            if any(digits):
                reps.append(fld.from_coords([Fraction(d) for d in digits]))
        return reps
    return [fld.from_rational(r) for r in range(1, p)]


def _scaled_uniformizer(fld: FieldDescriptor, ell: Fraction) -> PadicScalar:
    """An element of valuation ell, or None when ell is not in the value group."""
    times_e = ell * fld.e
    if times_e.denominator != 1:
        return None
    k = times_e.numerator
    if fld.kind == "eisenstein":
        return fld.uniformizer() ** k
    return fld.from_rational(Fraction(fld.p) ** k)


def _poly_roots(coeffs, fld: FieldDescriptor, depth: int = 0):
    """Roots with valuation > 0 of a scalar polynomial, assumed simple.

    Newton-polygon slopes give the root valuations; each slope is rescaled to
    a unit problem, residue roots are enumerated and Hensel-lifted, and
    residue clusters recurse on the recentered polynomial.
    """
    if depth > 64:
        raise RootsNotInDeclaredField("root cluster did not separate")
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    roots = []
    zero_count = 0
    while len(coeffs) > 1 and coeffs[0].is_zero():
        zero_count += 1
        coeffs = coeffs[1:]
    if zero_count > 1:
        raise FiberNotReduced("multiple root at 0")
    if zero_count == 1:
        roots.append(fld.zero())
    if len(coeffs) <= 1:
        return roots
    pts = [(i, c.valuation()) for i, c in enumerate(coeffs) if not c.is_zero()]
    hull = lower_hull(pts)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        lam = Fraction(y1 - y2, x2 - x1)      # root valuation on this edge
        if lam <= 0:
            # roots on or outside the boundary: not fiber points of the open disc
            continue
        sigma = _scaled_uniformizer(fld, lam)
        if sigma is None:
            raise RootsNotInDeclaredField(
                "root valuation %s not in the value group" % lam)
        scaled = []
        power = fld.one()
        for c in coeffs:
            scaled.append(c * power)
            power = power * sigma
        floor = min(c.valuation() for c in scaled if not c.is_zero())
        norm = _scaled_uniformizer(fld, floor)
        if norm is None:
            raise RootsNotInDeclaredField("normalization valuation not in value group")
        unit_poly = [c / norm for c in scaled]
        dpoly = poly_derivative(unit_poly)
        for r in _residue_candidates(fld):
            val_at = poly_eval(unit_poly, r)
            if not val_at.is_zero() and not val_at.valuation() > 0:
                continue
            dv = poly_eval(dpoly, r)
            if not dv.is_zero() and dv.valuation() == 0:
                tau = hensel_lift(unit_poly, r)
                roots.append(sigma * tau)
            else:
                shifted = _shift_poly(unit_poly, r)
                for sub in _poly_roots(shifted, fld, depth + 1):
                    roots.append(sigma * (r + sub))
    return roots


def _shift_poly(coeffs, r):
    """Coefficients of P(r + X)."""
    n = len(coeffs)
    fld = r.field
    out = [fld.zero()] * n
    for c in reversed(coeffs):
        # out = out * (r + X) + c
        nxt = [out[i] * r for i in range(n)]
        for i in range(n - 1, 0, -1):
            nxt[i] = nxt[i] + out[i - 1]
        nxt[0] = nxt[0] + c
        out = nxt
    return out


def _sort_key(a: PadicScalar):
    v = a.valuation()
    key_v = (1, Fraction(0)) if v == INF else (0, Fraction(v))
    mantissas = tuple(u for u, _, _ in a.coords)
    return (key_v, mantissas)


def fiber(phi: DiscMorphism, b: PadicScalar, hints=None) -> Fiber:
    """The d preimages of b, verified and deterministically ordered.

    With hints the given order is kept (the canned example runners pin their
    fiber order this way); otherwise f must be polynomial and the roots of
    f(t) - b are found by residue enumeration and Hensel lifting, sorted by
    (valuation, coordinate mantissas).
    """
    d = phi.degree
    if hints is not None:
        pts = [a if isinstance(a, PadicScalar) else phi.f.field.from_rational(a)
               for a in hints]
    else:
        deg = phi.f.degree()
        if deg is None or deg != d:
            raise RootsNotInDeclaredField(
                "automatic fibers need a polynomial representation of degree d")
        coeffs = list(phi.f.coeffs[: d + 1])
        coeffs[0] = coeffs[0] - b
        pts = _poly_roots(coeffs, phi.f.field)
        pts.sort(key=_sort_key)
    if len(pts) != d:
        raise RootsNotInDeclaredField(
            "found %d fiber points, expected %d" % (len(pts), d))
    for a in pts:
        if not (evaluate(phi.f, a) - b).is_zero():
            raise RootsNotInDeclaredField("fiber candidate fails f(a) = b at precision")
    for i in range(d):
        for j in range(i + 1, d):
            if (pts[i] - pts[j]).is_zero():
                raise FiberNotReduced("fiber points %d and %d collide at precision" % (i, j))
    return Fiber(target=b, points=tuple(pts))


# ----------------------------------------------------------------------------
# the tree over a point
# ----------------------------------------------------------------------------

def _pairwise_valuations(points):
    d = len(points)
    vals = {}
    for i in range(d):
        for j in range(i + 1, d):
            vals[(i, j)] = Fraction((points[i] - points[j]).valuation())
    return vals


def _clusters(indices, vals, threshold, strict):
    """Connected components under valuation >= threshold (or > when strict)."""
    parent = {i: i for i in indices}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    idx = sorted(indices)
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            i, j = idx[a], idx[b]
            v = vals[(min(i, j), max(i, j))]
            if (v > threshold) if strict else (v >= threshold):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    return sorted((tuple(sorted(g)) for g in groups.values()), key=lambda g: g[0])


def tree_over_point(phi: DiscMorphism, fib: Fiber) -> TreeOverPoint:
    """Branching points from the pairwise valuation matrix of the fiber.

    At each distinct pairwise valuation ell, a cluster (pairwise valuation
    >= ell) that splits into delta >= 2 parts under > ell is a branching
    point with t-radius exponent ell and branching radius the image radius
    at that level.
    """
    points = fib.points
    d = len(points)
    vals = _pairwise_valuations(points)
    levels = sorted(set(vals.values()), reverse=True)
    branch_points = []
    for ell in levels:
        for cluster in _clusters(range(d), vals, ell, strict=False):
            if len(cluster) < 2:
                continue
            parts = _clusters(cluster, vals, ell, strict=True)
            if len(parts) < 2:
                continue
            rep = cluster[0]
            branch_points.append(BranchPoint(
                rep=rep,
                t_exponent=ell,
                branch_exponent=image_radius(phi, points[rep], ell),
                delta=len(parts),
                parts=tuple(parts),
            ))
    return TreeOverPoint(fiber=fib, branch_points=tuple(branch_points))


def euler_count(tree: TreeOverPoint, disc) -> tuple:
    """(lhs, rhs) of the branch-counting identity on the disc.

    ``disc`` is (center index, radius exponent): the open disc around that
    fiber point.  lhs = 1 + sum over branching points inside of (delta - 1);
    rhs = number of fiber points inside.  The contract is lhs == rhs.
    """
    ci, ell = disc
    ell = Fraction(ell)
    members = tree.members(ci, ell)
    a_center = tree.fiber.points[ci]
    lhs = 1
    for bp in tree.branch_points:
        if bp.t_exponent <= ell:
            continue
        delta_c = tree.fiber.points[bp.rep] - a_center
        if delta_c.is_zero() or delta_c.valuation() > ell:
            lhs += bp.delta - 1
    return (lhs, len(members))


# ----------------------------------------------------------------------------
# local solutions, sections, the monic relation
# ----------------------------------------------------------------------------

def local_solution(phi: DiscMorphism, a: PadicScalar, b: PadicScalar,
                   var: str = "s") -> TruncatedSeries:
    """The series u_a(s) = a + ... with f(u_a(s)) = s + O((s-b)^N), u_a(b) = a."""
    if not (evaluate(phi.f, a) - b).is_zero():
        raise ValueError("f(a) != b at precision")
    shifted = taylor_shift(phi.f, a)
    if shifted.order < 2 or shifted.coeffs[1].is_zero():
        raise SingularFiberPoint("f'(a) vanishes at precision: a is not a simple preimage")
    rev = reversion(shifted)
    coeffs = [a] + list(rev.coeffs[1:])
    return TruncatedSeries(phi.f.field, var, b, coeffs)


def monic_relation(phi: DiscMorphism, fib: Fiber, var: str = "s") -> MonicRelation:
    """P(s, X) = prod_i (X - u_{a_i}(s)) expanded over the local solutions."""
    us = [local_solution(phi, a, fib.target, var=var) for a in fib.points]
    n = us[0].order
    fld = phi.f.field
    zero = TruncatedSeries.constant(fld, var, fib.target, fld.zero(), n)
    one = TruncatedSeries.constant(fld, var, fib.target, fld.one(), n)
    poly = [one]
    for u in us:
        nxt = [zero] * (len(poly) + 1)
        for k, c in enumerate(poly):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] - c * u
        poly = nxt
    return MonicRelation(coeffs=tuple(poly[:-1]), center=fib.target)


def relation_vanishes_on_identity(rel: MonicRelation, phi: DiscMorphism) -> bool:
    """Check P(f(t), t) = 0 to truncation order: substitute s = f(t), X = t."""
    f = phi.f
    n = min(min(c.order for c in rel.coeffs), f.order)
    fld = f.field
    t_series = TruncatedSeries.identity(fld, "t", fld.zero(), n)
    acc = TruncatedSeries.constant(fld, "t", fld.zero(), fld.one(), n)
    total = TruncatedSeries.constant(fld, "t", fld.zero(), fld.zero(), n)
    for c in rel.coeffs:
        total = total + compose(c, f.truncate(n)) * acc
        acc = acc * t_series
    total = total + acc
    return total.is_zero()


def section_apply(g_coords, u: TruncatedSeries) -> TruncatedSeries:
    """Pullback along the section: sum_m g_m(s) * u_a(s)^m by Horner."""
    coords = list(g_coords)
    n = min(min(c.order for c in coords), u.order)
    fld = u.field
    acc = TruncatedSeries.constant(fld, u.var, u.center, fld.zero(), n)
    for g in reversed(coords):
        acc = acc * u.truncate(n) + g.truncate(n)
    return acc
