"""Representation-up-to-homotopy data of a weighted spec.

The induced differential on the weight-i module splits by the number of
weight-zero odd factors p: D = sum_p D_p, where D_0 is the fiberwise
boundary, D_1 the connection part and D_p (p >= 2) the higher homotopies.
Blocks are stored sparsely on the W-basis monomials; the extension to the
whole module follows the Leibniz rule
D_p(w . m) = [p = 1] d_A(w) . m + (-1)^|w| w . D_p(m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .algebra import Element, GeneratorTable, MonomialKey, monomial_str
from .algebroid import AlgebroidSpec
from .derivations import apply
from .weight_modules import w_basis


class GaugeError(ValueError):
    pass


def _y_count(table: GeneratorTable, key: MonomialKey) -> int:
    return sum(1 for p in key[1] if table.gens[p].h_weight == 0)


def _split_key(table: GeneratorTable, key: MonomialKey):
    """Split a monomial into its weight-zero part (base evens and y's) and
    its positive-weight part (the W-monomial)."""
    even, odd = key
    a_even = tuple((p, e) for p, e in even if table.gens[p].h_weight == 0)
    w_even = tuple((p, e) for p, e in even if table.gens[p].h_weight > 0)
    a_odd = tuple(p for p in odd if table.gens[p].h_weight == 0)
    w_odd = tuple(p for p in odd if table.gens[p].h_weight > 0)
    return (a_even, a_odd), (w_even, w_odd)


def split_by_y_count(table: GeneratorTable, e: Element) -> Dict[int, Element]:
    parts: Dict[int, Dict] = {}
    for key, c in e.terms.items():
        parts.setdefault(_y_count(table, key), {})[key] = c
    return {p: Element(table, terms) for p, terms in parts.items()}


@dataclass
class SuperconnectionComponents:
    spec: AlgebroidSpec
    i: int
    blocks: Dict[int, Dict[MonomialKey, Element]]
    basis_keys: List[MonomialKey] = field(default_factory=list)

    def component(self, p: int, key: MonomialKey) -> Element:
        return self.blocks.get(p, {}).get(key, self.spec.table.zero())

    def degrees(self) -> List[int]:
        return sorted(p for p, blk in self.blocks.items()
                      if any(not v.is_zero() for v in blk.values()))

    def total(self, e: Element) -> Element:
        """The reassembled operator sum_p D_p on a module element."""
        return _apply_blocks(self, None, e)

    def apply_component(self, p: int, e: Element) -> Element:
        return _apply_blocks(self, p, e)


def _module_basis_keys(spec: AlgebroidSpec, i: int) -> List[MonomialKey]:
    keys: List[MonomialKey] = []
    for j in range(i + 1):
        keys.extend(w_basis(spec, i, j).keys)
    return keys


def extract_components(spec: AlgebroidSpec, i: int) -> SuperconnectionComponents:
    """Read off the superconnection blocks: apply d_E to each W-basis monomial
    and sort the image terms by their number of weight-zero odd factors."""
    if not 1 <= i <= spec.degree:
        raise ValueError(f"module weight {i} out of range 1..{spec.degree}")
    table = spec.table
    keys = _module_basis_keys(spec, i)
    blocks: Dict[int, Dict[MonomialKey, Element]] = {}
    max_p = len([g for g in table.odd_generators() if g.h_weight == 0]) + 1
    for p in range(max_p + 1):
        blocks[p] = {}
    for key in keys:
        image = apply(spec.d, Element(table, {key: Fraction(1)}))
        for p, part in split_by_y_count(table, image).items():
            blocks.setdefault(p, {})[key] = part
    return SuperconnectionComponents(spec, i, blocks, keys)


def _apply_blocks(c: SuperconnectionComponents, p, e: Element) -> Element:
    """Extend block p (or the full operator when p is None) from the W-basis
    to the module by the Leibniz rule."""
    table = c.spec.table
    out = table.zero()
    for key, coeff in e.terms.items():
        a_key, w_key = _split_key(table, key)
        a_elem = Element(table, {a_key: Fraction(1)})
        w_elem = Element(table, {w_key: Fraction(1)})
        sign = (-1) ** len(a_key[1])
        if p is None or p == 1:
            out = out + (apply(c.spec.d, a_elem) * w_elem) * coeff
        if p is None:
            dw = table.zero()
            for blk in c.blocks.values():
                dw = dw + blk.get(w_key, table.zero())
        else:
            dw = c.blocks.get(p, {}).get(w_key, table.zero())
        out = out + (a_elem * dw) * (coeff * sign)
    return out


@dataclass
class CascadeReport:
    passed: bool
    residuals: Dict[int, Dict[str, Element]]   # level p -> basis label -> residual

    def __bool__(self) -> bool:
        return self.passed


def flatness_cascade(c: SuperconnectionComponents) -> CascadeReport:
    """Check sum_{a+b=p} D_a D_b = 0 on every W-basis monomial, per level p."""
    table = c.spec.table
    degrees = sorted(p for p, blk in c.blocks.items() if blk)
    max_p = (max(degrees) if degrees else 0) * 2
    residuals: Dict[int, Dict[str, Element]] = {}
    for key in c.basis_keys:
        for p in range(max_p + 1):
            r = table.zero()
            for a in range(p + 1):
                b = p - a
                db = c.blocks.get(b, {}).get(key)
                if db is not None and not db.is_zero():
                    r = r + c.apply_component(a, db)
            if not r.is_zero():
                residuals.setdefault(p, {})[monomial_str(table, key)] = r
    return CascadeReport(not residuals, residuals)


@dataclass
class GaugeTransformation:
    """Unipotent module automorphism: identity plus blocks phi_p (p >= 1)
    that raise the A-form degree by p and lower the module degree by p."""

    spec: AlgebroidSpec
    i: int
    blocks: Dict[int, Dict[MonomialKey, Element]]

    def __post_init__(self):
        table = self.spec.table
        for p, blk in self.blocks.items():
            if p < 1:
                raise GaugeError("gauge blocks must have p >= 1 (p = 0 is the identity)")
            for key, val in blk.items():
                bw = table.key_bi_weight(key)
                if not (val.is_zero() or val.is_bihomogeneous(bw)):
                    raise GaugeError(
                        f"gauge block p={p} on {monomial_str(table, key)} is not "
                        f"degree preserving")
                if any(_y_count(table, k) != p for k in val.terms):
                    raise GaugeError(
                        f"gauge block p={p} on {monomial_str(table, key)} has terms "
                        f"with a different A-form degree")

    def _raise_once(self, e: Element) -> Element:
        """The strictly raising part N = phi - id, extended module-linearly."""
        table = self.spec.table
        out = table.zero()
        for key, coeff in e.terms.items():
            a_key, w_key = _split_key(table, key)
            a_elem = Element(table, {a_key: Fraction(1)})
            for blk in self.blocks.values():
                v = blk.get(w_key)
                if v is not None and not v.is_zero():
                    out = out + (a_elem * v) * coeff
        return out

    def apply_to(self, e: Element) -> Element:
        return e + self._raise_once(e)

    def apply_inverse(self, e: Element) -> Element:
        """Finite Neumann series (1 + N)^-1 = sum (-N)^k."""
        out = e
        term = e
        while True:
            term = -self._raise_once(term)
            if term.is_zero():
                return out
            out = out + term


def identity_gauge(spec: AlgebroidSpec, i: int) -> GaugeTransformation:
    return GaugeTransformation(spec, i, {})


def apply_gauge(c: SuperconnectionComponents,
                phi: GaugeTransformation) -> SuperconnectionComponents:
    """Components of phi^-1 . D . phi, split by A-form degree."""
    if phi.spec.table != c.spec.table or phi.i != c.i:
        raise GaugeError("gauge transformation over a different sector family")
    table = c.spec.table
    blocks: Dict[int, Dict[MonomialKey, Element]] = {}
    for key in c.basis_keys:
        m = Element(table, {key: Fraction(1)})
        image = phi.apply_inverse(c.total(phi.apply_to(m)))
        for p, part in split_by_y_count(table, image).items():
            blocks.setdefault(p, {})[key] = part
    return SuperconnectionComponents(c.spec, c.i, blocks, list(c.basis_keys))


def compose_gauges(phi: GaugeTransformation,
                   psi: GaugeTransformation) -> GaugeTransformation:
    """The gauge transformation phi . psi."""
    if phi.spec.table != psi.spec.table or phi.i != psi.i:
        raise GaugeError("gauge transformations over different sector families")
    table = phi.spec.table
    keys = _module_basis_keys(phi.spec, phi.i)
    blocks: Dict[int, Dict[MonomialKey, Element]] = {}
    for key in keys:
        m = Element(table, {key: Fraction(1)})
        image = phi.apply_to(psi.apply_to(m)) - m
        for p, part in split_by_y_count(table, image).items():
            if p >= 1:
                blocks.setdefault(p, {})[key] = part
    return GaugeTransformation(phi.spec, phi.i, blocks)
