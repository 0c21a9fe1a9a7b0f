"""Exact linear algebra helpers.

Two flavors live here:

* dense row reduction / solving / null spaces over any of the coefficient
  fields (entries are Scalars, all arithmetic exact), and
* integer lattice routines (Hermite normal form, kernels) used for quantum
  torus centers.
"""

from __future__ import annotations

from .scalars import FieldDescriptor, Scalar


def rref(rows: list[list[Scalar]], field: FieldDescriptor):
    """Reduced row echelon form. Returns (rows, pivot column list)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def solve(matrix: list[list[Scalar]], rhs: list[Scalar], field: FieldDescriptor):
    """Solve M x = rhs exactly; returns a solution vector or None.

    Free variables (if any) are set to zero.
    """
    if not matrix:
        return None if any(not v.is_zero() for v in rhs) else []
    ncols = len(matrix[0])
    aug = [row + [v] for row, v in zip(matrix, rhs)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None  # inconsistent
    x = [field.zero()] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    return x


def nullspace(matrix: list[list[Scalar]], field: FieldDescriptor):
    """Basis of the right null space, one vector per free column."""
    if not matrix or not matrix[0]:
        return []
    ncols = len(matrix[0])
    red, pivots = rref(matrix, field)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [field.zero()] * ncols
        v[free] = field.one()
        for r, c in enumerate(pivots):
            v[c] = -red[r][free]
        basis.append(v)
    return basis


class SpanBasis:
    """A linear span of elements keyed by monomials, kept in reduced
    echelon form with respect to a fixed monomial order.

    `order_key` maps a monomial to a sortable key; the pivot of an element
    is its largest monomial. Elements are dicts monomial -> Scalar.
    """

    def __init__(self, field: FieldDescriptor, order_key):
        self.field = field
        self.order_key = order_key
        self.pivots: dict = {}  # pivot monomial -> reduced element

    def __len__(self):
        return len(self.pivots)

    def reduce(self, terms: dict) -> dict:
        """Fully reduce `terms` against the basis; returns the remainder."""
        work = dict(terms)
        out = {}
        while work:
            lead = max(work, key=self.order_key)
            coef = work.pop(lead)
            if coef.is_zero():
                continue
            row = self.pivots.get(lead)
            if row is None:
                out[lead] = coef
                continue
            for m, c in row.items():
                if m == lead:
                    continue
                nc = work.get(m, self.field.zero()) - coef * c
                if nc.is_zero():
                    work.pop(m, None)
                else:
                    work[m] = nc
        return out

    def add(self, terms: dict) -> bool:
        """Insert an element; returns True if the span grew."""
        rem = self.reduce(terms)
        if not rem:
            return False
        lead = max(rem, key=self.order_key)
        inv = rem[lead].inv()
        row = {m: c * inv for m, c in rem.items()}
        # back-substitute into existing rows
        for p, existing in list(self.pivots.items()):
            c = existing.get(lead)
            if c is not None and not c.is_zero():
                new = dict(existing)
                for m, cm in row.items():
                    nc = new.get(m, self.field.zero()) - c * cm
                    if nc.is_zero():
                        new.pop(m, None)
                    else:
                        new[m] = nc
                self.pivots[p] = new
        self.pivots[lead] = row
        return True

    def _head_reduce(self, terms: dict) -> dict:
        terms = dict(terms)
        while terms:
            lead = max(terms, key=self.order_key)
            row = self.pivots.get(lead)
            if row is None:
                return terms
            coef = terms[lead]
            for m, c in row.items():
                nc = terms.get(m, self.field.zero()) - coef * c
                if nc.is_zero():
                    terms.pop(m, None)
                else:
                    terms[m] = nc
        return {}

    def contains(self, terms: dict) -> bool:
        return not self._head_reduce(terms)

    def basis_rows(self):
        """Reduced basis rows in descending pivot order (canonical)."""
        return [
            self.pivots[p]
            for p in sorted(self.pivots, key=self.order_key, reverse=True)
        ]

    def copy(self) -> "SpanBasis":
        out = SpanBasis(self.field, self.order_key)
        out.pivots = {p: dict(row) for p, row in self.pivots.items()}
        return out


# ---------------------------------------------------------------------------
# integer lattices


def hnf_row(mat: list[list[int]]):
    """Row-style Hermite normal form of an integer matrix.

    Returns the list of nonzero HNF rows: row-echelon, positive pivots,
    entries above each pivot reduced into [0, pivot).
    """
    m = [list(r) for r in mat]
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        # clear below via Euclid
        for i in range(r + 1, rows):
            while m[i][c] != 0:
                if abs(m[i][c]) < abs(m[r][c]):
                    m[r], m[i] = m[i], m[r]
                f = m[i][c] // m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        if m[r][c] < 0:
            m[r] = [-a for a in m[r]]
        for i in range(r):
            f = m[i][c] // m[r][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return [row for row in m[:r] if any(row)]


def integer_kernel(mat: list[list[int]]):
    """Basis (list of integer vectors) of {x : mat @ x = 0} over Z."""
    if not mat:
        return []
    rows, cols = len(mat), len(mat[0])
    # column operations on mat, mirrored on an identity block
    m = [list(r) for r in mat]
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_swap(a, b):
        for row in m:
            row[a], row[b] = row[b], row[a]
        for row in u:
            row[a], row[b] = row[b], row[a]

    def col_addmul(dst, src, f):
        for row in m:
            row[dst] += f * row[src]
        for row in u:
            row[dst] += f * row[src]

    r = 0
    for i in range(rows):
        piv = next((j for j in range(r, cols) if m[i][j] != 0), None)
        if piv is None:
            continue
        col_swap(r, piv)
        for j in range(r + 1, cols):
            while m[i][j] != 0:
                if abs(m[i][j]) < abs(m[i][r]):
                    col_swap(r, j)
                f = m[i][j] // m[i][r]
                col_addmul(j, r, -f)
        r += 1
        if r == cols:
            break
    kernel = []
    for j in range(cols):
        if all(m[i][j] == 0 for i in range(rows)):
            kernel.append([u[i][j] for i in range(cols)])
    return kernel
