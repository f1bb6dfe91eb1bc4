"""Exact graded-commutative algebra on bi-weighted generators.

Generators carry a bi-weight (h_weight, form_degree): the first component is
the weight under the homogeneity action, the second the cohomological degree.
Single generators have form degree 0 (even) or 1 (odd); odd generators
anticommute and square to zero.  Coefficients are exact rationals.

Sign convention: Koszul, with odd factors stored in the global generator
order and the sign normalised on insertion.  The global order is
(kind, h_weight, name, index), so all even factors precede all odd ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Tuple, Union


class AlgebraError(ValueError):
    pass


class BiWeight(NamedTuple):
    h_weight: int
    form_degree: int

    def __add__(self, other):  # type: ignore[override]
        return BiWeight(self.h_weight + other[0], self.form_degree + other[1])


KINDS = ("base", "even_fiber", "odd_fiber")
_KIND_ORDER = {k: n for n, k in enumerate(KINDS)}


@dataclass(frozen=True)
class Generator:
    name: str
    index: int            # 1-based index within its block
    h_weight: int
    form_degree: int      # 0 or 1
    kind: str
    position: int         # slot in the canonical global order

    @property
    def bi_weight(self) -> BiWeight:
        return BiWeight(self.h_weight, self.form_degree)

    def __str__(self) -> str:
        return f"{self.name}[{self.index}]"


# A monomial key is (even, odd) with even = ((position, exponent), ...) sorted
# by position, exponent >= 1, and odd = (position, ...) strictly increasing.
EvenPart = Tuple[Tuple[int, int], ...]
OddPart = Tuple[int, ...]
MonomialKey = Tuple[EvenPart, OddPart]

Scalar = Union[int, Fraction]


class GeneratorTable:
    """Frozen chart: named generator blocks with a fixed total order."""

    def __init__(self, declarations: Sequence[Tuple[str, str, int, int]]):
        seen = set()
        gens = []
        blocks = []
        for name, kind, h_weight, dim in declarations:
            if name in seen:
                raise AlgebraError(f"duplicate generator block name {name!r}")
            seen.add(name)
            if kind not in KINDS:
                raise AlgebraError(f"unknown generator kind {kind!r}")
            if dim < 1:
                raise AlgebraError(f"block {name!r} has non-positive dimension")
            if h_weight < 0:
                raise AlgebraError(f"block {name!r} has negative weight")
            if kind == "base" and h_weight != 0:
                raise AlgebraError(f"base block {name!r} must have weight 0")
            if kind == "even_fiber" and h_weight == 0:
                raise AlgebraError(
                    f"even fiber block {name!r} with weight 0 would be a second base block")
            blocks.append((name, kind, h_weight, dim))
            fd = 1 if kind == "odd_fiber" else 0
            for i in range(1, dim + 1):
                gens.append((name, i, h_weight, fd, kind))
        gens.sort(key=lambda g: (_KIND_ORDER[g[4]], g[2], g[0], g[1]))
        self.gens: Tuple[Generator, ...] = tuple(
            Generator(name, i, w, fd, kind, pos)
            for pos, (name, i, w, fd, kind) in enumerate(gens))
        self.blocks: Tuple[Tuple[str, str, int, int], ...] = tuple(blocks)
        self._by_name = {(g.name, g.index): g for g in self.gens}

    @property
    def degree(self) -> int:
        return max((g.h_weight for g in self.gens), default=0)

    def generator(self, name: str, index: int = 1) -> Generator:
        try:
            return self._by_name[(name, index)]
        except KeyError:
            raise AlgebraError(f"unknown generator {name}[{index}]") from None

    def generators(self, kind: Optional[str] = None) -> Tuple[Generator, ...]:
        if kind is None:
            return self.gens
        return tuple(g for g in self.gens if g.kind == kind)

    def even_generators(self) -> Tuple[Generator, ...]:
        return tuple(g for g in self.gens if g.form_degree == 0)

    def odd_generators(self) -> Tuple[Generator, ...]:
        return tuple(g for g in self.gens if g.form_degree == 1)

    def base_generators(self) -> Tuple[Generator, ...]:
        return self.generators("base")

    def key_bi_weight(self, key: MonomialKey) -> BiWeight:
        even, odd = key
        hw = sum(self.gens[p].h_weight * e for p, e in even)
        hw += sum(self.gens[p].h_weight for p in odd)
        return BiWeight(hw, len(odd))

    def gen(self, name: str, index: int = 1) -> "Element":
        """The generator as an Element."""
        g = self.generator(name, index)
        if g.form_degree:
            key: MonomialKey = ((), (g.position,))
        else:
            key = (((g.position, 1),), ())
        return Element(self, {key: Fraction(1)})

    def scalar(self, value: Scalar) -> "Element":
        c = Fraction(value)
        if c == 0:
            return Element(self, {})
        return Element(self, {((), ()): c})

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return self.scalar(1)

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratorTable) and sorted(self.blocks) == sorted(other.blocks)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.blocks)))

    def __repr__(self) -> str:
        parts = ", ".join(f"{n}:{k}({w},dim {d})" for n, k, w, d in self.blocks)
        return f"GeneratorTable({parts})"


def make_generator_table(declarations: Sequence[Tuple[str, str, int, int]]) -> GeneratorTable:
    return GeneratorTable(declarations)


def _merge_even(a: EvenPart, b: EvenPart) -> EvenPart:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for p, e in b:
        acc[p] = acc.get(p, 0) + e
    return tuple(sorted(acc.items()))


def _merge_odd(a: OddPart, b: OddPart) -> Optional[Tuple[OddPart, int]]:
    """Merge two sorted odd tuples; returns (merged, sign) or None on a repeat."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    merged = []
    inversions = 0
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            merged.append(b[j])
            inversions += len(a) - i
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), (-1) ** inversions


class Element:
    """Canonical sparse element: a dict of monomial keys to rational coefficients."""

    __slots__ = ("table", "terms")

    def __init__(self, table: GeneratorTable, terms: dict):
        self.table = table
        self.terms = {k: c for k, c in terms.items() if c != 0}

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def bi_weights(self) -> set:
        return {self.table.key_bi_weight(k) for k in self.terms}

    def homogeneous_bi_weight(self) -> Optional[BiWeight]:
        """The common bi-weight of all terms, or None if mixed or zero."""
        ws = self.bi_weights()
        if len(ws) == 1:
            return ws.pop()
        return None

    def is_bihomogeneous(self, bw: Tuple[int, int]) -> bool:
        return all(self.table.key_bi_weight(k) == tuple(bw) for k in self.terms)

    def base_degree(self) -> int:
        """Highest total exponent of base generators over all terms (0 if zero)."""
        best = 0
        for (even, _odd) in self.terms:
            d = sum(e for p, e in even if self.table.gens[p].kind == "base")
            best = max(best, d)
        return best

    def constant_term(self) -> Fraction:
        return self.terms.get(((), ()), Fraction(0))

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Element") -> None:
        if self.table != other.table:
            raise AlgebraError("elements over different generator tables")

    def __add__(self, other: Union["Element", Scalar]) -> "Element":
        if isinstance(other, (int, Fraction)):
            other = self.table.scalar(other)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return Element(self.table, terms)

    def __radd__(self, other: Scalar) -> "Element":
        return self + other

    def __sub__(self, other: Union["Element", Scalar]) -> "Element":
        if isinstance(other, (int, Fraction)):
            other = self.table.scalar(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Element":
        return (-self) + other

    def __neg__(self) -> "Element":
        return Element(self.table, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other: Union["Element", Scalar]) -> "Element":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Element(self.table, {k: v * c for k, v in self.terms.items()})
        self._check(other)
        terms: dict = {}
        for (ea, oa), ca in self.terms.items():
            for (eb, ob), cb in other.terms.items():
                m = _merge_odd(oa, ob)
                if m is None:
                    continue
                odd, sign = m
                key = (_merge_even(ea, eb), odd)
                terms[key] = terms.get(key, Fraction(0)) + sign * ca * cb
        return Element(self.table, terms)

    def __rmul__(self, other: Scalar) -> "Element":
        return self * other

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            raise AlgebraError("negative powers are not defined")
        out = self.table.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.table, tuple(sorted(self.terms.items()))))

    # -- graded operations ----------------------------------------------

    def weight_component(self, i: int) -> "Element":
        """Sum of terms of h-weight exactly i."""
        return Element(self.table, {
            k: c for k, c in self.terms.items()
            if self.table.key_bi_weight(k).h_weight == i})

    def form_component(self, j: int) -> "Element":
        return Element(self.table, {
            k: c for k, c in self.terms.items()
            if len(k[1]) == j})

    def max_h_weight(self) -> int:
        return max((self.table.key_bi_weight(k).h_weight for k in self.terms), default=0)

    def h_pullback(self, t: Scalar) -> "Element":
        """Scale every term of h-weight w by t**w."""
        t = Fraction(t)
        terms = {}
        for k, c in self.terms.items():
            w = self.table.key_bi_weight(k).h_weight
            terms[k] = c * t ** w
        return Element(self.table, terms)

    def partial_derivative(self, g: Generator) -> "Element":
        """Graded left derivative with respect to a single generator."""
        terms: dict = {}
        pos = g.position
        for (even, odd), c in self.terms.items():
            if g.form_degree == 0:
                for n, (p, e) in enumerate(even):
                    if p == pos:
                        rest = even[:n] + (((p, e - 1),) if e > 1 else ()) + even[n + 1:]
                        key = (tuple(sorted(rest)), odd)
                        terms[key] = terms.get(key, Fraction(0)) + c * e
                        break
            else:
                if pos in odd:
                    k = odd.index(pos)
                    key = (even, odd[:k] + odd[k + 1:])
                    terms[key] = terms.get(key, Fraction(0)) + c * (-1) ** k
        return Element(self.table, terms)

    def substitute_zero(self, gens: Iterable[Generator]) -> "Element":
        """Set the given generators to zero (drop every term containing them)."""
        positions = {g.position for g in gens}
        return Element(self.table, {
            (even, odd): c for (even, odd), c in self.terms.items()
            if not (any(p in positions for p, _ in even)
                    or any(p in positions for p in odd))})

    def map_to(self, table: GeneratorTable) -> "Element":
        """Translate onto a sub-table by (name, index); missing generators become 0."""
        terms: dict = {}
        for (even, odd), c in self.terms.items():
            new_even = []
            new_odd = []
            ok = True
            for p, e in even:
                g = self.table.gens[p]
                try:
                    new_even.append((table.generator(g.name, g.index).position, e))
                except AlgebraError:
                    ok = False
                    break
            if ok:
                for p in odd:
                    g = self.table.gens[p]
                    try:
                        new_odd.append(table.generator(g.name, g.index).position)
                    except AlgebraError:
                        ok = False
                        break
            if not ok:
                continue
            # positions in a sub-table preserve relative order, so no sign
            key = (tuple(sorted(new_even)), tuple(sorted(new_odd)))
            terms[key] = terms.get(key, Fraction(0)) + c
        return Element(table, terms)

    # -- printing --------------------------------------------------------

    def sorted_keys(self) -> list:
        return sorted(self.terms, key=lambda k: (self.table.key_bi_weight(k), k))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for n, key in enumerate(self.sorted_keys()):
            c = self.terms[key]
            factors = monomial_str(self.table, key)
            mag = abs(c)
            if factors == "1":
                body = str(mag)
            elif mag == 1:
                body = factors
            else:
                body = f"{mag}*{factors}"
            if n == 0:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)

    __repr__ = __str__


def monomial_str(table: GeneratorTable, key: MonomialKey) -> str:
    even, odd = key
    factors = []
    for p, e in even:
        g = table.gens[p]
        factors.append(f"{g}^{e}" if e > 1 else str(g))
    for p in odd:
        factors.append(str(table.gens[p]))
    return "*".join(factors) if factors else "1"


def monomial(table: GeneratorTable, gens: Iterable[Generator],
             coefficient: Scalar = 1) -> Element:
    """Product of the given generators, in the given order, times a scalar."""
    out = table.scalar(coefficient)
    for g in gens:
        out = out * table.gen(g.name, g.index)
    return out


def multiply(a: Element, b: Element) -> Element:
    return a * b


def weight_component(e: Element, i: int) -> Element:
    return e.weight_component(i)


def h_pullback(e: Element, t: Scalar) -> Element:
    return e.h_pullback(t)


def partial_derivative(e: Element, g: Generator) -> Element:
    return e.partial_derivative(g)
