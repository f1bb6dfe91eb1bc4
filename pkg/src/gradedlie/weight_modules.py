"""Weight decomposition of the CE complex.

W^(i,j) is spanned by monomials in positive-weight generators only:
symmetric powers of the positive even fibers times exterior products of
positive-weight odd generators, with total bi-weight (i, j).  This realises
the quotient of weight-i forms by the ideal generated by weight-zero forms
of positive form degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import Element, Generator, GeneratorTable, MonomialKey
from .algebroid import AlgebroidSpec
from .derivations import apply


class CapClosureError(RuntimeError):
    """The base-polynomial degree cap does not close the complex."""


SpecOrTable = Union[AlgebroidSpec, GeneratorTable]


def _table(spec: SpecOrTable) -> GeneratorTable:
    return spec.table if isinstance(spec, AlgebroidSpec) else spec


@dataclass
class WeightModuleBasis:
    i: int
    j: int
    keys: List[MonomialKey]            # coefficient-1 monomials, graded-lex order
    spec: SpecOrTable

    def __len__(self) -> int:
        return len(self.keys)

    def elements(self) -> List[Element]:
        table = _table(self.spec)
        return [Element(table, {k: Fraction(1)}) for k in self.keys]

    def labels(self) -> List[str]:
        from .algebra import monomial_str
        table = _table(self.spec)
        return [monomial_str(table, k) for k in self.keys]


def _positive_even(table: GeneratorTable) -> Tuple[Generator, ...]:
    return tuple(g for g in table.even_generators() if g.h_weight > 0)


def _positive_odd(table: GeneratorTable) -> Tuple[Generator, ...]:
    return tuple(g for g in table.odd_generators() if g.h_weight > 0)


def _even_multisets(gens: Sequence[Generator], weight: int):
    """Yield even parts ((position, exponent), ...) of total h-weight `weight`."""
    def rec(idx: int, remaining: int, acc):
        if remaining == 0:
            yield tuple(acc)
            return
        if idx == len(gens):
            return
        g = gens[idx]
        max_e = remaining // g.h_weight
        for e in range(max_e, -1, -1):
            if e:
                acc.append((g.position, e))
            yield from rec(idx + 1, remaining - e * g.h_weight, acc)
            if e:
                acc.pop()
    yield from rec(0, weight, [])


def w_basis(spec: SpecOrTable, i: int, j: int) -> WeightModuleBasis:
    """Monomial basis of W^(i,j): products of positive-weight generators with
    total bi-weight (i, j)."""
    if i < 1:
        raise ValueError("w_basis requires weight i >= 1")
    table = _table(spec)
    evens = _positive_even(table)
    odds = _positive_odd(table)
    keys: List[MonomialKey] = []
    for subset in combinations(odds, j):
        odd_w = sum(g.h_weight for g in subset)
        if odd_w > i:
            continue
        odd_part = tuple(sorted(g.position for g in subset))
        for even_part in _even_multisets(evens, i - odd_w):
            keys.append((tuple(sorted(even_part)), odd_part))
    keys.sort()
    return WeightModuleBasis(i, j, keys, spec)


def _multichoose(n: int, k: int) -> int:
    if k == 0:
        return 1
    return comb(n + k - 1, k) if n > 0 else 0


def dim_w(spec: SpecOrTable, i: int, j: int) -> int:
    """Closed-form dimension of W^(i,j): sum over (l_u, m_u) with
    sum_u u*(l_u + m_u) = i and sum_u m_u = j of products of symmetric and
    exterior power dimensions of the weight-u blocks."""
    if j > i or i < 0 or j < 0:
        return 0
    table = _table(spec)
    k = table.degree
    b = {u: 0 for u in range(1, k + 1)}
    c = {u: 0 for u in range(1, k + 1)}
    for g in _positive_even(table):
        b[g.h_weight] += 1
    for g in _positive_odd(table):
        c[g.h_weight] += 1

    def rec(u: int, weight_left: int, odd_left: int) -> int:
        if u > k:
            return 1 if weight_left == 0 and odd_left == 0 else 0
        total = 0
        for l in range(weight_left // u + 1):
            for m in range(min(c[u], odd_left, (weight_left - u * l) // u) + 1):
                rest = weight_left - u * (l + m)
                total += _multichoose(b[u], l) * comb(c[u], m) * rec(u + 1, rest, odd_left - m)
        return total

    if i == 0:
        return 1 if j == 0 else 0
    return rec(1, i, j)


def _base_monomials(table: GeneratorTable, cap: int):
    """All monomials in base generators of total degree <= cap, as even parts."""
    base = table.base_generators()
    out = [()]
    for d in range(1, cap + 1):
        for combo in combinations_with_replacement(base, d):
            acc: Dict[int, int] = {}
            for g in combo:
                acc[g.position] = acc.get(g.position, 0) + 1
            out.append(tuple(sorted(acc.items())))
    return out


def sector_basis(spec: SpecOrTable, i: int, j: int, cap: int) -> List[MonomialKey]:
    """Monomial basis of the (i, j) sector of the weight-i subcomplex:
    base polynomials of degree <= cap, times exterior products of weight-0
    odd generators, times W^(i, .) monomials."""
    table = _table(spec)
    ys = tuple(g for g in table.odd_generators() if g.h_weight == 0)
    keys: List[MonomialKey] = []
    for q in range(min(j, len(ys)) + 1):
        jw = j - q
        if i == 0:
            if jw != 0:
                continue
            w_keys: List[MonomialKey] = [((), ())]
        else:
            if jw > i:
                continue
            w_keys = w_basis(spec, i, jw).keys
        for y_subset in combinations(ys, q):
            y_part = tuple(sorted(g.position for g in y_subset))
            for wk in w_keys:
                for base_even in _base_monomials(table, cap):
                    even = tuple(sorted(base_even + wk[0]))
                    odd = tuple(sorted(y_part + wk[1]))
                    keys.append((even, odd))
    keys.sort()
    return keys


def subcomplex_check(spec: AlgebroidSpec, i: int, base_degree_cap: int = 2) -> bool:
    """Re-verify that d_E preserves the weight-i sector: d of every spanning
    monomial (up to the base-degree cap) is h-homogeneous of weight i."""
    table = spec.table
    max_j = len(table.odd_generators())
    for j in range(max_j + 1):
        for key in sector_basis(spec, i, j, base_degree_cap):
            image = apply(spec.d, Element(table, {key: Fraction(1)}))
            if not (image.is_zero() or image.is_bihomogeneous((i, j + 1))):
                return False
    return True


@dataclass
class SectorMatrix:
    """The induced differential from the (i, j) sector to the (i, j+1) sector."""
    i: int
    j: int
    domain: List[MonomialKey]
    codomain: List[MonomialKey]
    entries: List[List[Fraction]]   # entries[row][col], rows indexed by codomain

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.codomain), len(self.domain))


def induced_differential_matrix(spec: AlgebroidSpec, i: int, j: int,
                                base_degree_cap: int = 4) -> SectorMatrix:
    """Matrix of d_E on the monomial basis of the (i, j) sector.

    Raises CapClosureError when an image term has base degree beyond the cap
    (the truncated span does not close)."""
    table = spec.table
    domain = sector_basis(spec, i, j, base_degree_cap)
    codomain = sector_basis(spec, i, j + 1, base_degree_cap)
    index = {k: n for n, k in enumerate(codomain)}
    entries = [[Fraction(0)] * len(domain) for _ in codomain]
    for col, key in enumerate(domain):
        image = apply(spec.d, Element(table, {key: Fraction(1)}))
        for k, c in image.terms.items():
            row = index.get(k)
            if row is None:
                from .algebra import monomial_str
                raise CapClosureError(
                    f"base degree cap {base_degree_cap} does not close the complex: "
                    f"d({monomial_str(table, key)}) contains {monomial_str(table, k)}")
            entries[row][col] += c
    return SectorMatrix(i, j, domain, codomain, entries)


def _projector_by_extraction(e: Element, k: int) -> Element:
    return e.weight_component(k)


def _projector_by_derivative(e: Element, k: int) -> Element:
    """(1/k!) d^k/dt^k at t=0 of the pullback h_t^* e, computed formally.

    h_t^* e = sum_w t^w e_w; the k-th t-derivative at 0 keeps the w = k term
    with coefficient k!."""
    table = e.table
    out: Dict = {}
    for key, c in e.terms.items():
        w = table.key_bi_weight(key).h_weight
        if w < k:
            continue
        coeff = Fraction(1)
        for n in range(k):          # falling factorial w(w-1)...(w-k+1)
            coeff *= (w - n)
        if w > k:                    # t^(w-k) evaluated at t = 0
            continue
        out[key] = c * coeff / factorial(k)
    return Element(table, out)


def homogenization_projector(e: Element, k: int) -> Element:
    """Weight-k homogenization projector, computed along both routes
    (formal t-derivative of the pullback, and direct weight extraction),
    which must agree."""
    if k < 0:
        raise ValueError("projector weight must be non-negative")
    a = _projector_by_derivative(e, k)
    b = _projector_by_extraction(e, k)
    if a != b:
        raise AssertionError("projector implementations disagree")
    return a
