"""Derivations of the graded algebra: Leibniz extension, commutators, Q^2 = 0."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .algebra import AlgebraError, Element, Generator, GeneratorTable


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class Derivation:
    """A derivation given by its values on generators, extended by the graded
    Leibniz rule.  bi_degree = (shift in h-weight, shift in form degree)."""

    table: GeneratorTable
    bi_degree: Tuple[int, int]
    action: Mapping[int, Element] = field(compare=False)  # position -> value

    def value(self, g: Generator) -> Element:
        return self.action.get(g.position, self.table.zero())

    def __call__(self, e: Element) -> Element:
        return apply(self, e)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.action.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.table != other.table:
            return False
        positions = set(self.action) | set(other.action)
        return all(
            self.action.get(p, self.table.zero()) == other.action.get(p, other.table.zero())
            for p in positions)

    def __repr__(self) -> str:
        parts = "; ".join(
            f"D({self.table.gens[p]}) = {v}" for p, v in sorted(self.action.items())
            if not v.is_zero())
        return f"Derivation{self.bi_degree}[{parts or '0'}]"


def make_derivation(table: GeneratorTable, bi_degree: Tuple[int, int],
                    action: Mapping) -> Derivation:
    """Build a derivation from generator values.

    `action` maps Generator (or (name, index), or name for index 1) to Element.
    Unassigned generators default to zero.  Every value must be bi-homogeneous
    of the generator's bi-weight shifted by `bi_degree`.
    """
    a, b = bi_degree
    resolved: Dict[int, Element] = {}
    for key, val in action.items():
        if isinstance(key, Generator):
            g = key
        elif isinstance(key, str):
            g = table.generator(key)
        else:
            g = table.generator(*key)
        if val.table != table:
            raise DerivationError(f"value for {g} lives over a different table")
        resolved[g.position] = val
    for pos, val in resolved.items():
        g = table.gens[pos]
        want = (g.h_weight + a, g.form_degree + b)
        if not val.is_bihomogeneous(want):
            raise DerivationError(
                f"value for {g} must be bi-homogeneous of bi-weight {want}, "
                f"got weights {sorted(val.bi_weights())}")
    return Derivation(table, (a, b), resolved)


def apply(D: Derivation, e: Element) -> Element:
    """Leibniz extension: D(uv) = D(u)v + (-1)^(b_D * |u|) u D(v)."""
    if D.table != e.table:
        raise DerivationError("derivation and element over different tables")
    table = e.table
    b = D.bi_degree[1]
    out = table.zero()
    for (even, odd), c in e.terms.items():
        # factors in canonical order: evens first (no internal signs), then odds
        factors = list(even) + [(p, None) for p in odd]
        prefix_fd = 0
        for n, (p, exp) in enumerate(factors):
            g = table.gens[p]
            dv = D.action.get(p)
            if dv is not None and not dv.is_zero():
                sign = (-1) ** (b * prefix_fd)
                prefix = _partial_monomial(table, factors[:n])
                suffix = _partial_monomial(table, factors[n + 1:])
                if exp is None:          # odd factor
                    middle = dv
                else:                     # even factor g^exp
                    middle = dv * exp
                    if exp > 1:
                        middle = middle * _partial_monomial(table, [(p, exp - 1)])
                out = out + (prefix * middle * suffix) * (c * sign)
            prefix_fd += g.form_degree
    return out


def _partial_monomial(table: GeneratorTable, factors) -> Element:
    even = tuple(sorted((p, e) for p, e in factors if e is not None))
    odd = tuple(sorted(p for p, e in factors if e is None))
    return Element(table, {(even, odd): Fraction(1)})


def graded_commutator(D1: Derivation, D2: Derivation) -> Derivation:
    """[D1, D2] = D1 D2 - (-1)^(b1 b2) D2 D1, as a derivation."""
    if D1.table != D2.table:
        raise DerivationError("derivations over different tables")
    table = D1.table
    sign = (-1) ** (D1.bi_degree[1] * D2.bi_degree[1])
    action = {}
    for g in table.gens:
        v = apply(D1, D2.value(g)) - sign * apply(D2, D1.value(g))
        if not v.is_zero():
            action[g.position] = v
    bi_degree = (D1.bi_degree[0] + D2.bi_degree[0], D1.bi_degree[1] + D2.bi_degree[1])
    return Derivation(table, bi_degree, action)


@dataclass
class HomologicalReport:
    ok: bool
    residuals: Dict[str, Element]   # generator name -> D(D(g)) when nonzero

    def __bool__(self) -> bool:
        return self.ok


def is_homological(D: Derivation) -> HomologicalReport:
    """Check D^2 = 0 on generators (sufficient by Leibniz, as D^2 = [D,D]/2
    is itself a derivation for odd D)."""
    if D.bi_degree[1] % 2 == 0:
        raise DerivationError(
            "D^2 = 0 is the homological condition only for odd form-degree shift")
    residuals = {}
    for g in D.table.gens:
        r = apply(D, D.value(g))
        if not r.is_zero():
            residuals[str(g)] = r
    return HomologicalReport(not residuals, residuals)
