"""Desk-scale cohomology: exact Betti numbers over Q on finite sector bases.

Exact when the base is a point; over a nontrivial base the sectors are
truncated at a base-polynomial degree cap and the results are tagged as
truncated, never claimed exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .algebra import Element, MonomialKey
from .algebroid import AlgebroidSpec
from .derivations import apply
from .weight_modules import CapClosureError, sector_basis


@dataclass
class FiniteComplex:
    spec: AlgebroidSpec
    i: int
    sector_bases: List[List[MonomialKey]]
    matrices: List[List[List[Fraction]]]   # matrices[j] maps sector j -> j+1
    cap: Optional[int]                     # None when the base is a point
    exact: bool

    @property
    def dims(self) -> List[int]:
        return [len(b) for b in self.sector_bases]

    def is_closed(self) -> bool:
        """Consecutive products vanish."""
        for j in range(len(self.matrices) - 1):
            if not _is_zero_product(self.matrices[j + 1], self.matrices[j]):
                return False
        return True


def _is_zero_product(a, b) -> bool:
    if not a or not b:
        return True
    rows_a, cols_a = len(a), len(a[0]) if a else 0
    for r in range(rows_a):
        for c in range(len(b[0]) if b else 0):
            s = sum(a[r][k] * b[k][c] for k in range(len(b)))
            if s != 0:
                return False
    return True


def build_complex(spec: AlgebroidSpec, i: int, cap: int = 4) -> FiniteComplex:
    """Assemble the sector bases of the weight-i subcomplex and the induced
    differential matrices.  Raises CapClosureError when the cap is too small
    over a nontrivial base."""
    table = spec.table
    point = not table.base_generators()
    jmax = len(table.odd_generators())  # beyond this every sector is empty
    bases = [sector_basis(spec, i, j, cap) for j in range(jmax + 2)]
    while len(bases) > 1 and not bases[-1]:
        bases.pop()
    matrices = []
    for j in range(len(bases) - 1):
        index = {k: n for n, k in enumerate(bases[j + 1])}
        m = [[Fraction(0)] * len(bases[j]) for _ in bases[j + 1]]
        for col, key in enumerate(bases[j]):
            image = apply(spec.d, Element(table, {key: Fraction(1)}))
            for k, c in image.terms.items():
                row = index.get(k)
                if row is None:
                    from .algebra import monomial_str
                    raise CapClosureError(
                        f"cap {cap} does not close the weight-{i} complex: "
                        f"d({monomial_str(table, key)}) leaves the truncated span")
                m[row][col] += c
        matrices.append(m)
    # the top sector maps to zero
    matrices.append([])
    return FiniteComplex(spec, i, bases, matrices[:len(bases)], None if point else cap,
                         exact=point)


def rank(matrix: List[List[Fraction]]) -> int:
    """Exact rank by fraction-free (Bareiss-style) elimination."""
    if not matrix or not matrix[0]:
        return 0
    m = [[Fraction(x) for x in row] for row in matrix]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        pivot = None
        for rr in range(r, rows):
            if m[rr][c] != 0:
                pivot = rr
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        for rr in range(r + 1, rows):
            if m[rr][c] != 0:
                f = m[rr][c] / pv
                m[rr] = [a - f * b for a, b in zip(m[rr], m[r])]
        r += 1
        if r == rows:
            break
    return r


def betti(c: FiniteComplex) -> List[int]:
    """dim ker d_j minus rank d_(j-1), per sector."""
    if not c.is_closed():
        raise ValueError("complex is not closed (consecutive products nonzero)")
    dims = c.dims
    ranks = []
    for j in range(len(dims)):
        mat = c.matrices[j] if j < len(c.matrices) else []
        ranks.append(rank(mat))
    out = []
    for j in range(len(dims)):
        incoming = ranks[j - 1] if j > 0 else 0
        out.append(dims[j] - ranks[j] - incoming)
    return out
