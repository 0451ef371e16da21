"""p-adic differential modules over a disc.

A module is presented by its derivation matrix A in a fixed basis: row i
gives D(e_i) = sum_j a_{ij} e_j.  Horizontal elements in coordinates solve
the associated system dY/dx = -A^T Y.  The direct image along a finite etale
morphism is computed in the basis e_1, t e_1, ..., t^{d-1} e_r (blocks per
e_j, ascending t-powers) by reducing 1/f'(t) and the derivation inside the
rank-d quotient algebra O_s[X]/P(s, X).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonInvertibleTransition, NotEtale
from .padic import PadicScalar
from .series import (
    TruncatedSeries,
    derivative,
    evaluate,
    mult_inverse,
    radius_estimate,
    taylor_shift,
)
from .morphism import DiscMorphism, MonicRelation


@dataclass(frozen=True)
class DiffModule:
    """rank, derivation matrix (rows = images of basis vectors), variable tag."""

    rank: int
    matrix: tuple          # rank x rank of TruncatedSeries
    var: str
    center: PadicScalar

    def system_matrix(self):
        """The associated system is dY = -A^T Y; returns -A^T."""
        r = self.rank
        return tuple(tuple(-self.matrix[j][i] for j in range(r)) for i in range(r))

    def order(self) -> int:
        return min(c.order for row in self.matrix for c in row)

    @property
    def field(self):
        return self.matrix[0][0].field


@dataclass(frozen=True)
class HorizontalMatrix:
    """Columns of candidate horizontal elements at a base point, with radii."""

    base_point: PadicScalar
    columns: tuple         # tuple of columns; each column a tuple of TruncatedSeries
    radii: tuple           # per-column RadiusEstimate


# ----------------------------------------------------------------------------
# matrices of series
# ----------------------------------------------------------------------------

def mat_mul(a, b):
    rows, mid, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = a[i][0] * b[0][j]
            for k in range(1, mid):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(a, v):
    return tuple(col[0] for col in mat_mul(a, tuple((x,) for x in v)))


def mat_identity(field, var, center, n, order):
    one = TruncatedSeries.constant(field, var, center, field.one(), order)
    zero = TruncatedSeries.constant(field, var, center, field.zero(), order)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def mat_derivative(a):
    return tuple(tuple(derivative(c) for c in row) for row in a)


def mat_inverse(a, error=NonInvertibleTransition):
    """Gauss-Jordan over the series ring; pivots need invertible entries."""
    n = len(a)
    work = [list(row) for row in a]
    inv = [list(row) for row in mat_identity(a[0][0].field, a[0][0].var,
                                             a[0][0].center, n,
                                             min(c.order for r in a for c in r))]
    for col in range(n):
        piv, best = None, None
        for r in range(col, n):
            c0 = work[r][col].coeffs[0]
            if not c0.is_zero():
                v = c0.valuation()
                if best is None or v < best:
                    piv, best = r, v
        if piv is None:
            raise error("no invertible pivot in column %d" % col)
        work[col], work[piv] = work[piv], work[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        pivot_inv = mult_inverse(work[col][col])
        work[col] = [x * pivot_inv for x in work[col]]
        inv[col] = [x * pivot_inv for x in inv[col]]
        for r in range(n):
            if r != col:
                c = work[r][col]
                if c.is_zero():
                    continue
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
                inv[r] = [x - c * y for x, y in zip(inv[r], inv[col])]
    return tuple(tuple(row) for row in inv)


# ----------------------------------------------------------------------------
# public operations
# ----------------------------------------------------------------------------

def change_basis(module: DiffModule, transition) -> DiffModule:
    """Derivation matrix after e = B e': A' = d(B^{-1}) B + B^{-1} A B."""
    b = tuple(tuple(row) for row in transition)
    b_inv = mat_inverse(b, error=NonInvertibleTransition)
    new_a = mat_mul(mat_derivative(b_inv), b)
    ab = mat_mul(module.matrix, b)
    new_a = tuple(tuple(x + y for x, y in zip(r1, r2))
                  for r1, r2 in zip(new_a, mat_mul(b_inv, ab)))
    return DiffModule(rank=module.rank, matrix=new_a, var=module.var,
                      center=module.center)


def local_solution_matrix(module: DiffModule, a: PadicScalar, order=None) -> HorizontalMatrix:
    """Fundamental matrix Y with Y(a) = I solving dY/dx = -A^T Y.

    Built by the coefficient recursion Y_{k+1} = (sum S_i Y_{k-i}) / (k+1)
    with S = -A^T recentered at a; the division by k+1 is where p-adic digits
    are genuinely spent.
    """
    n = order or module.order()
    r = module.rank
    fld = module.field
    system = module.system_matrix()
    s_shift = tuple(tuple(_recenter(c, a) for c in row) for row in system)
    s_coeff = [[[s_shift[i][j].coeffs[k] if k < s_shift[i][j].order else fld.zero()
                 for j in range(r)] for i in range(r)] for k in range(n)]
    y = [[[fld.one() if i == j else fld.zero() for j in range(r)] for i in range(r)]]
    for k in range(n - 1):
        acc = [[fld.zero() for _ in range(r)] for _ in range(r)]
        for i_ in range(k + 1):
            s_k = s_coeff[i_]
            y_k = y[k - i_]
            for i in range(r):
                for j in range(r):
                    t = fld.zero()
                    for m in range(r):
                        t = t + s_k[i][m] * y_k[m][j]
                    acc[i][j] = acc[i][j] + t
        y.append([[acc[i][j] / (k + 1) for j in range(r)] for i in range(r)])
    columns = []
    radii = []
    for j in range(r):
        col = tuple(TruncatedSeries(fld, module.var, a, [y[k][i][j] for k in range(n)])
                    for i in range(r))
        columns.append(col)
        radii.append(element_radius(col, a))
    return HorizontalMatrix(base_point=a, columns=tuple(columns), radii=tuple(radii))


def _recenter(c: TruncatedSeries, a: PadicScalar) -> TruncatedSeries:
    """Expand the series at a new center inside its disc (constant included)."""
    return taylor_shift(c, a) + evaluate(c, a)


def horizontal_check(column, module: DiffModule):
    """(ok, worst_violation): residual dY/dx + A^T Y must vanish to order N-1.

    worst_violation is +inf when every residual coefficient is zero at its
    tracked precision, otherwise the least valuation among surviving
    coefficients.  The certified vanishing level is reported separately by
    residual_certified_precision.
    """
    residual = _horizontal_residual(column, module)
    ok = True
    worst = float("inf")
    for entry in residual:
        for c in entry.coeffs:
            if not c.is_zero():
                ok = False
                v = c.valuation()
                if v < worst:
                    worst = v
    return ok, worst


def residual_certified_precision(column, module: DiffModule):
    """Min tracked precision over residual coefficients (diagnostic)."""
    residual = _horizontal_residual(column, module)
    return min(c.precision() for entry in residual for c in entry.coeffs)


def _horizontal_residual(column, module: DiffModule):
    column = tuple(column)
    r = module.rank
    a_t = tuple(tuple(module.matrix[j][i] for j in range(r)) for i in range(r))
    center = column[0].center
    if not (center - module.center).is_zero():
        a_t = tuple(tuple(_recenter(c, center) for c in row) for row in a_t)
    n = min(min(c.order for c in column), module.order())
    residual = []
    for i in range(r):
        acc = derivative(column[i].truncate(n))
        for j in range(r):
            acc = acc + (a_t[i][j].truncate(n) * column[j].truncate(n)).truncate(acc.order)
        residual.append(acc)
    return residual


def element_radius(column, a: PadicScalar, window=None) -> RadiusEstimate:
    """Vector radius: minimum of component radii = maximum exponent q."""
    best = None
    for entry in column:
        est = radius_estimate(entry, window)
        if best is None or est.exponent > best.exponent:
            best = est
    return best


def reduce_to_basis(g: TruncatedSeries, relation: MonicRelation):
    """Coordinates (g_0(s), ..., g_{d-1}(s)) of a t-polynomial modulo P(s, X).

    g has scalar coefficients in t; each t-power above d-1 is rewritten with
    t^d = -sum a_j(s) t^j, strictly lowering the degree.
    """
    d = relation.degree
    table = _power_table(relation, max(g.order - 1, 2 * d - 2))
    n = min(c.order for c in relation.coeffs)
    fld = g.field
    zero = TruncatedSeries.constant(fld, relation.coeffs[0].var, relation.center,
                                    fld.zero(), n)
    out = [zero] * d
    for k, c in enumerate(g.coeffs):
        if c.is_exact_zero():
            continue
        for m in range(d):
            if not table[k][m].is_zero():
                out[m] = out[m] + table[k][m] * c
    return tuple(out)


def _power_table(relation: MonicRelation, max_power: int):
    """t^k as quotient-algebra coordinate vectors of s-series, k <= max_power."""
    d = relation.degree
    n = min(c.order for c in relation.coeffs)
    fld = relation.coeffs[0].field
    var = relation.coeffs[0].var
    zero = TruncatedSeries.constant(fld, var, relation.center, fld.zero(), n)
    one = TruncatedSeries.constant(fld, var, relation.center, fld.one(), n)
    table = []
    for k in range(min(d, max_power + 1)):
        table.append(tuple(one if m == k else zero for m in range(d)))
    for k in range(d, max_power + 1):
        prev = table[k - 1]
        shifted = [zero] + list(prev[:-1])
        top = prev[d - 1]
        row = [shifted[m] - top * relation.coeffs[m].truncate(n) for m in range(d)]
        table.append(tuple(row))
    return table


class QuotientAlgebra:
    """O_s[X]/P(s, X) with multiplication through the power table."""

    def __init__(self, relation: MonicRelation):
        self.relation = relation
        self.d = relation.degree
        self.table = _power_table(relation, 2 * self.d - 2)
        self.order = min(c.order for c in relation.coeffs)
        fld = relation.coeffs[0].field
        self.zero = TruncatedSeries.constant(fld, relation.coeffs[0].var,
                                             relation.center, fld.zero(), self.order)

    def mul(self, x, y):
        d = self.d
        out = [self.zero] * d
        for i in range(d):
            if x[i].is_zero():
                continue
            for j in range(d):
                if y[j].is_zero():
                    continue
                prod = x[i] * y[j]
                for m in range(d):
                    t = self.table[i + j][m]
                    if not t.is_zero():
                        out[m] = out[m] + prod * t
        return tuple(out)

    def unit(self, index=0):
        d = self.d
        fld = self.zero.field
        one = TruncatedSeries.constant(fld, self.zero.var, self.relation.center,
                                       fld.one(), self.order)
        return tuple(one if m == index else self.zero for m in range(d))

    def invert(self, x):
        """Solve x * z = 1 by a d x d linear system over s-series."""
        d = self.d
        cols = [self.mul(x, self.unit(j)) for j in range(d)]
        mat = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
        inv = mat_inverse(mat, error=NotEtale)
        return tuple(inv[i][0] for i in range(d))


def direct_image(module: DiffModule, phi: DiscMorphism, relation: MonicRelation) -> DiffModule:
    """The rank r*d module downstairs in the basis e_1, t e_1, ..., t^{d-1} e_r.

    D_s(t^m e_j) = (1/f') (m t^{m-1} e_j + t^m sum_l A_{jl}(t) e_l), with every
    t-coefficient reduced to quotient coordinates over s.
    """
    phi.require_etale()
    r = module.rank
    d = relation.degree
    quot = QuotientAlgebra(relation)
    fprime = reduce_to_basis(phi.derivative_series(), relation)
    inv_fprime = quot.invert(fprime)
    a_reduced = [[None] * r for _ in range(r)]
    for j in range(r):
        for l in range(r):
            a_reduced[j][l] = reduce_to_basis(module.matrix[j][l], relation)
    rows = []
    for j in range(r):
        for m in range(d):
            row_blocks = []
            for l in range(r):
                vec = quot.mul(quot.unit(m), a_reduced[j][l])
                if l == j and m >= 1:
                    shifted = list(quot.unit(m - 1))
                    vec = tuple(v + s * m for v, s in zip(vec, shifted))
                vec = quot.mul(inv_fprime, vec)
                row_blocks.extend(vec)
            rows.append(tuple(row_blocks))
    return DiffModule(rank=r * d, matrix=tuple(rows), var=relation.coeffs[0].var,
                      center=relation.center)


def inverse_derivative_coordinates(phi: DiscMorphism, relation: MonicRelation):
    """Quotient coordinates of 1/f'(t) over s (the displayed decomposition)."""
    quot = QuotientAlgebra(relation)
    return quot.invert(reduce_to_basis(phi.derivative_series(), relation))
