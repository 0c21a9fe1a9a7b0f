"""Computable invariants: bounded centers, quantum-torus lattice centers,
growth tables and GK-dimension estimates, local algebraicity / nilpotency
of tower maps, and stratiform-length bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import BadParamsError, InsufficientDataError, ResourceLimitError
from .linalg import SpanBasis, hnf_row, integer_kernel, nullspace
from .presentation import (
    Element,
    Morphism,
    Presentation,
    commutator,
    grlex_key,
    mono_degree,
)


@dataclass
class GrowthTable:
    dims: list  # dims[n] = dim of span of products of <= n generators
    gen_space: str
    exact: bool = True


@dataclass
class CenterBasis:
    degree_bound: int
    basis: list  # Elements, ascending leading monomial
    structure: str | None = None

    def monomials(self):
        return [e.leading_monomial() for e in self.basis]


@dataclass
class StratTower:
    steps: list  # entries "FINITE" | "ORE"

    @property
    def length(self) -> int:
        return sum(1 for s in self.steps if s == "ORE")


# ---------------------------------------------------------------------------
# centers


def center_bounded(p: Presentation, d: int) -> CenterBasis:
    """Basis of {f : deg f <= d, [f, g] = 0 for every generator g}."""
    p.require_validated()
    basis_monos = p.filtration_basis(d)
    gens = [p.generator(g.name) for g in p.gens]
    # rows: for each generator, each monomial of the commutators
    columns = []
    for m in basis_monos:
        columns.append([commutator(Element(p, {m: p.field.one()}), g) for g in gens])
    row_monos = []
    seen = set()
    for col in columns:
        for gi, c in enumerate(col):
            for mono in c.terms:
                if (gi, mono) not in seen:
                    seen.add((gi, mono))
                    row_monos.append((gi, mono))
    row_monos.sort(key=lambda t: (t[0], grlex_key(t[1])))
    matrix = [
        [columns[j][gi].coefficient(mono) for j in range(len(basis_monos))]
        for gi, mono in row_monos
    ]
    if not matrix:
        vectors = [
            [p.field.one() if i == j else p.field.zero() for j in range(len(basis_monos))]
            for i in range(len(basis_monos))
        ]
    else:
        vectors = nullspace(matrix, p.field)
    out = []
    for v in vectors:
        terms = {m: c for m, c in zip(basis_monos, v) if not c.is_zero()}
        out.append(Element(p, terms))
    out.sort(key=lambda e: grlex_key(e.leading_monomial()))
    return CenterBasis(d, out)


def center_torus(n: int, l: int, a: list) -> dict:
    """Central sublattice of the quantum torus with q_ij = zeta_l^{a_ij}.

    Returns {"lattice_basis": HNF rows of L, "index": [Z^n : L]} where
    L = {u : sum_j a_ij u_j = 0 mod l for all i}.
    """
    if l < 1:
        raise BadParamsError("l must be >= 1")
    if len(a) != n or any(len(r) != n for r in a):
        raise BadParamsError("a must be an n x n integer matrix")
    for i in range(n):
        for j in range(n):
            if a[i][j] != -a[j][i]:
                raise BadParamsError("a must be antisymmetric")
    stacked = [list(a[i]) + [l if j == i else 0 for j in range(n)] for i in range(n)]
    kernel = integer_kernel(stacked)
    basis = hnf_row([v[:n] for v in kernel])
    if len(basis) != n:
        raise BadParamsError("central lattice unexpectedly degenerate")
    index = 1
    for i, row in enumerate(basis):
        pivot = next(x for x in row if x != 0)
        index *= pivot
    return {"lattice_basis": basis, "index": index}


# ---------------------------------------------------------------------------
# growth


def growth_dims(p: Presentation, N: int, max_dim: int = 20000) -> GrowthTable:
    """dims[n] = dim span(products of <= n factors from V),
    V = span(1, generators, inverses of invertible generators)."""
    p.require_validated()
    v_elements = []
    for g in p.gens:
        v_elements.append(p.generator(g.name))
        if g.invertible:
            v_elements.append(p.gen_inverse(g.name))
    span = SpanBasis(p.field, grlex_key)
    span.add(p.one().terms)
    dims = [len(span)]
    frontier = [p.one()]
    for _ in range(N):
        new_frontier = []
        for f in frontier:
            for v in v_elements:
                prod = f * v
                if span.add(prod.terms):
                    new_frontier.append(prod)
                if len(span) > max_dim:
                    raise ResourceLimitError("growth span exceeded the dimension ceiling")
        dims.append(len(span))
        frontier = new_frontier
    gen_space = "span(1, generators, inverses of invertible generators)"
    return GrowthTable(dims, gen_space)


def gk_estimate(table: GrowthTable) -> dict:
    """Windowed slope estimate of log dims[n] / log n with integer snap.

    Polynomial growth d*n^e has local log-log slope e + O(1/n); fitting
    the local slopes against 1/n over the tail half and reporting the
    intercept removes the leading finite-size bias.
    """
    dims = table.dims
    if len(dims) < 6:
        raise InsufficientDataError("need at least 6 growth entries")
    N = len(dims) - 1
    start = max(2, N // 2)
    xs, ys = [], []
    for n in range(start, N + 1):
        if dims[n] <= 0 or dims[n - 1] <= 0:
            raise InsufficientDataError("growth table has nonpositive entries")
        s = (math.log(dims[n]) - math.log(dims[n - 1])) / (
            math.log(n) - math.log(n - 1)
        )
        xs.append(1.0 / n)
        ys.append(s)
    k = len(xs)
    if k == 1:
        intercept, slope = ys[0], 0.0
    else:
        mx = sum(xs) / k
        my = sum(ys) / k
        sxx = sum((x - mx) ** 2 for x in xs)
        sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        slope = sxy / sxx if sxx > 0 else 0.0
        intercept = my - slope * mx
    residual = math.sqrt(
        sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys)) / k
    )
    snapped = None
    nearest = round(intercept)
    if abs(intercept - nearest) <= 0.25:
        snapped = int(nearest)
    return {
        "estimate": intercept,
        "snap": snapped,
        "window_fit": {
            "window": [start, N],
            "points": k,
            "slope_vs_inv_n": slope,
            "residual": residual,
        },
    }


# ---------------------------------------------------------------------------
# local algebraicity / nilpotency


def is_locally_algebraic(p: Presentation, sigma: Morphism, bound: int = 20) -> dict:
    """Search for a sigma-stable finite-dimensional space containing the
    generators by iterating sigma on their span."""
    p.require_validated()
    span = SpanBasis(p.field, grlex_key)
    elements = [p.one()] + [p.generator(g.name) for g in p.gens]
    for e in elements:
        span.add(e.terms)
    frontier = list(elements)
    trace = []
    for _ in range(bound):
        trace.append(
            {
                "dim": len(span),
                "max_degree": max(
                    mono_degree(m) for row in span.pivots.values() for m in row
                ),
            }
        )
        new_frontier = []
        for e in frontier:
            img = sigma.apply(e)
            if span.add(img.terms):
                new_frontier.append(img)
        if not new_frontier:
            return {
                "status": "TRUE",
                "witness": {
                    "dim": len(span),
                    "basis": [str(Element(p, row)) for row in span.basis_rows()],
                },
                "trace": trace,
            }
        frontier = new_frontier
    return {"status": "UNKNOWN", "witness": None, "trace": trace}


def _apply_derivation(p: Presentation, delta: dict, x: Element) -> Element:
    """Extend generator images by the (untwisted) Leibniz rule."""
    out = p.zero()
    for m, c in x.terms.items():
        letters = p._letters(m)
        for k, (pos, sign) in enumerate(letters):
            name = p.gens[pos].name
            dg = delta[name]
            if sign == -1:
                ginv = p.gen_inverse(name)
                dg = (-ginv) * dg * ginv
            if dg.is_zero():
                continue
            prefix = p.one()
            for pp, ss in letters[:k]:
                nm = p.gens[pp].name
                prefix = prefix * (p.generator(nm) if ss == 1 else p.gen_inverse(nm))
            suffix = p.one()
            for pp, ss in letters[k + 1:]:
                nm = p.gens[pp].name
                suffix = suffix * (p.generator(nm) if ss == 1 else p.gen_inverse(nm))
            out = out + (prefix * dg * suffix).scale(c)
    return out


def is_locally_nilpotent(p: Presentation, delta: dict, bound: int = 20) -> dict:
    """delta: generator name -> Element (an ordinary derivation)."""
    p.require_validated()
    trace = []
    all_nil = True
    for g in p.gens:
        current = p.generator(g.name)
        seen = []
        gen_trace = []
        status = "UNKNOWN"
        for step in range(bound + 1):
            if current.is_zero():
                status = "TRUE"
                gen_trace.append("0")
                break
            for i, prev in enumerate(seen):
                if prev == current:
                    return {
                        "status": "FALSE",
                        "trace": trace
                        + [{"generator": g.name, "cycle": (i, step), "value": str(current)}],
                    }
            seen.append(current)
            gen_trace.append(str(current))
            current = _apply_derivation(p, delta, current)
        trace.append({"generator": g.name, "images": gen_trace, "status": status})
        if status != "TRUE":
            all_nil = False
    return {"status": "TRUE" if all_nil else "UNKNOWN", "trace": trace}


# ---------------------------------------------------------------------------
# stratiform bookkeeping


def stratiform_length(t: StratTower) -> int:
    return t.length


def tower_compose(a: StratTower, ore_steps: int) -> StratTower:
    if ore_steps < 0:
        raise BadParamsError("ore_steps must be nonnegative")
    return StratTower(list(a.steps) + ["ORE"] * ore_steps)


def strat_tower(p: Presentation) -> StratTower:
    """The tower recorded for a built family (via its STRATIFORM flag)."""
    length = p.flag("STRATIFORM")
    if isinstance(length, bool) or not isinstance(length, int):
        raise BadParamsError("presentation has no recorded stratiform length")
    return StratTower(["ORE"] * length)
