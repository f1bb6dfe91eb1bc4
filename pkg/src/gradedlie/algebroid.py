"""Weighted Lie algebroid data.

An AlgebroidSpec is a chart (GeneratorTable) together with the Chevalley-Eilenberg-de
Rham derivation d_E of bi-degree (0,1).  Structure-function tables are an
alternative presentation: the anchor-type coefficients Q_I^A (so that
d X^A = sum_I Y^I Q_I^A) and bracket constants Q_IJ^K with
[s_I, s_J] = sum_K Q_IJ^K s_K, entering the differential as
d Y^K = -sum_{I<J} Q_IJ^K Y^I Y^J.  Internally the derivation is canonical
and the tables are recovered by reading off coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .algebra import AlgebraError, Element, Generator, GeneratorTable
from .derivations import Derivation, apply, is_homological, make_derivation


class SpecError(ValueError):
    pass


GenRef = Union[Generator, str, Tuple[str, int]]


def _resolve(table: GeneratorTable, ref: GenRef) -> Generator:
    if isinstance(ref, Generator):
        return ref
    if isinstance(ref, str):
        return table.generator(ref)
    return table.generator(*ref)


class AlgebroidSpec:
    """A weighted Lie algebroid in a homogeneous chart."""

    def __init__(self, table: GeneratorTable, differential: Derivation,
                 dropped_terms: Optional[List[str]] = None):
        if differential.table != table:
            raise SpecError("differential over a different table")
        if differential.bi_degree != (0, 1):
            raise SpecError(f"d_E must have bi-degree (0, 1), got {differential.bi_degree}")
        self.table = table
        self.d = differential
        self.dropped_terms = dropped_terms or []

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_differential(cls, table: GeneratorTable,
                          action: Mapping) -> "AlgebroidSpec":
        """Spec from d_E assignments on generators (unassigned default to 0)."""
        return cls(table, make_derivation(table, (0, 1), action))

    @classmethod
    def from_tables(cls, table: GeneratorTable,
                    anchor: Mapping, bracket: Mapping,
                    lint: bool = False) -> "AlgebroidSpec":
        """Spec from structure-function tables.

        anchor: (even ref, odd ref) -> polynomial coefficient Q_I^A, so that
            d X^A = sum_I Y^I Q_I^A.  Coefficients must be bi-homogeneous of
            weight (w(A) - w(I), 0); entries whose slot weight is negative
            are dropped (reported when lint=True, collected either way).
        bracket: (odd I, odd J, odd K) -> Q_IJ^K, either triangle; the
            antisymmetric extension is normalised at ingestion and
            inconsistent double entries are an error.
        """
        dropped: List[str] = []
        anchor_norm: Dict[Tuple[int, int], Element] = {}
        for (a_ref, i_ref), val in anchor.items():
            A = _resolve(table, a_ref)
            I = _resolve(table, i_ref)
            if A.form_degree != 0 or I.form_degree != 1:
                raise SpecError(f"anchor entry ({A}, {I}) must pair an even with an odd generator")
            q = val if isinstance(val, Element) else table.scalar(val)
            if q.is_zero():
                continue
            slot = A.h_weight - I.h_weight
            if slot < 0:
                dropped.append(f"anchor ({A}, {I}): slot weight {slot} < 0")
                continue
            if not q.is_bihomogeneous((slot, 0)):
                raise SpecError(
                    f"anchor coefficient for ({A}, {I}) must be bi-homogeneous of "
                    f"bi-weight ({slot}, 0), got weights {sorted(q.bi_weights())}")
            key = (A.position, I.position)
            anchor_norm[key] = anchor_norm.get(key, table.zero()) + q

        bracket_norm: Dict[Tuple[int, int, int], Element] = {}
        for (i_ref, j_ref, k_ref), val in bracket.items():
            I = _resolve(table, i_ref)
            J = _resolve(table, j_ref)
            K = _resolve(table, k_ref)
            if not (I.form_degree == J.form_degree == K.form_degree == 1):
                raise SpecError(f"bracket entry ({I}, {J}, {K}) must involve odd generators only")
            if I.position == J.position:
                raise SpecError(f"bracket entry ({I}, {I}, {K}) violates antisymmetry")
            q = val if isinstance(val, Element) else table.scalar(val)
            if I.position > J.position:
                I, J = J, I
                q = -q
            if q.is_zero():
                continue
            slot = K.h_weight - I.h_weight - J.h_weight
            if slot < 0:
                dropped.append(f"bracket ({I}, {J}, {K}): slot weight {slot} < 0")
                continue
            if not q.is_bihomogeneous((slot, 0)):
                raise SpecError(
                    f"bracket coefficient for ({I}, {J}, {K}) must be bi-homogeneous of "
                    f"bi-weight ({slot}, 0), got weights {sorted(q.bi_weights())}")
            key = (I.position, J.position, K.position)
            if key in bracket_norm:
                if bracket_norm[key] != q:
                    raise SpecError(
                        f"inconsistent double entry for bracket ({I}, {J}, {K})")
            else:
                bracket_norm[key] = q
        if lint and dropped:
            import warnings
            for msg in dropped:
                warnings.warn(f"dropped out-of-range structure term: {msg}")

        action: Dict[Generator, Element] = {}
        for A in table.even_generators():
            v = table.zero()
            for I in table.odd_generators():
                q = anchor_norm.get((A.position, I.position))
                if q is not None:
                    v = v + table.gen(I.name, I.index) * q
            action[A] = v
        for K in table.odd_generators():
            v = table.zero()
            for (ip, jp, kp), q in bracket_norm.items():
                if kp != K.position:
                    continue
                gi = table.gens[ip]
                gj = table.gens[jp]
                v = v - table.gen(gi.name, gi.index) * table.gen(gj.name, gj.index) * q
            action[K] = v
        d = make_derivation(table, (0, 1), action)
        return cls(table, d, dropped)

    # -- structure-table read-off ---------------------------------------

    @property
    def degree(self) -> int:
        return self.table.degree

    def anchor_coeff(self, I: GenRef, A: GenRef) -> Element:
        """Q_I^A: the coefficient of Y^I in d X^A."""
        I = _resolve(self.table, I)
        A = _resolve(self.table, A)
        out: Dict = {}
        for (even, odd), c in self.d.value(A).terms.items():
            if odd == (I.position,):
                out[(even, ())] = c
        return Element(self.table, out)

    def bracket_coeff(self, I: GenRef, J: GenRef, K: GenRef) -> Element:
        """Q_IJ^K with [s_I, s_J] = sum Q_IJ^K s_K (antisymmetric in I, J)."""
        I = _resolve(self.table, I)
        J = _resolve(self.table, J)
        K = _resolve(self.table, K)
        if I.position == J.position:
            return self.table.zero()
        sign = 1
        if I.position > J.position:
            I, J = J, I
            sign = -1
        out: Dict = {}
        for (even, odd), c in self.d.value(K).terms.items():
            if odd == (I.position, J.position):
                # d Y^K = -sum_{I<J} Q_IJ^K Y^I Y^J
                out[(even, ())] = -c
        return Element(self.table, out) * sign

    # -- operations ------------------------------------------------------

    def restricted(self, max_weight: int) -> "AlgebroidSpec":
        keep = [b for b in self.table.blocks if b[2] <= max_weight]
        sub = GeneratorTable(keep)
        action = {}
        for g in sub.gens:
            orig = self.table.generator(g.name, g.index)
            action[g] = self.d.value(orig).map_to(sub)
        return AlgebroidSpec(sub, make_derivation(sub, (0, 1), action))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebroidSpec):
            return NotImplemented
        return self.table == other.table and self.d == other.d

    def __repr__(self) -> str:
        return f"AlgebroidSpec(degree {self.degree}, {self.table!r})"


def build_ce_differential(spec: AlgebroidSpec) -> Derivation:
    """The Chevalley-Eilenberg-de Rham derivation of an AlgebroidSpec."""
    return spec.d


def degree_zero_restriction(spec: AlgebroidSpec) -> AlgebroidSpec:
    """Restrict to the underlying degree-zero algebroid: keep weight-0
    generators, set all positive-weight generators to zero."""
    return spec.restricted(0)


def tower_truncation(spec: AlgebroidSpec, i: int) -> AlgebroidSpec:
    """Truncate along the tower: drop generators of h-weight > i."""
    if not 1 <= i <= spec.degree:
        raise SpecError(f"truncation level {i} out of range 1..{spec.degree}")
    return spec.restricted(i)


def is_regular_degree_one(spec: AlgebroidSpec) -> bool:
    """Degree 1 is exactly the regular (vector bundle) case in this chart model."""
    return spec.degree == 1


@dataclass
class StructureReport:
    passed: bool
    residuals: Dict[str, Dict[str, Element]]
    checked: Dict[str, int] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


def check_structure_equations(spec: AlgebroidSpec) -> StructureReport:
    """Evaluate the Lie algebroid structure equations symbolically.

    Three families: antisymmetry of the bracket table (zero by canonical
    read-off; nontrivial only at table ingestion), anchor-bracket
    compatibility, and the Jacobi identity.  Together they are equivalent
    to d_E^2 = 0.
    """
    table = spec.table
    odds = table.odd_generators()
    evens = table.even_generators()

    residuals: Dict[str, Dict[str, Element]] = {
        "antisymmetry": {}, "anchor": {}, "jacobi": {}}
    checked = {"antisymmetry": 0, "anchor": 0, "jacobi": 0}

    anchor = {(I.position, A.position): spec.anchor_coeff(I, A)
              for I in odds for A in evens}
    bracket = {(I.position, J.position, K.position): spec.bracket_coeff(I, J, K)
               for I in odds for J in odds for K in odds}

    for I in odds:
        for J in odds:
            if I.position >= J.position:
                continue
            for K in odds:
                checked["antisymmetry"] += 1
                r = (bracket[(I.position, J.position, K.position)]
                     + bracket[(J.position, I.position, K.position)])
                if not r.is_zero():
                    residuals["antisymmetry"][f"({I},{J})->{K}"] = r

    # rho([s_I, s_J]) = [rho(s_I), rho(s_J)] on each even coordinate
    for I in odds:
        for J in odds:
            if I.position >= J.position:
                continue
            for A in evens:
                checked["anchor"] += 1
                r = table.zero()
                for B in evens:
                    r = r + anchor[(I.position, B.position)] \
                        * anchor[(J.position, A.position)].partial_derivative(B)
                    r = r - anchor[(J.position, B.position)] \
                        * anchor[(I.position, A.position)].partial_derivative(B)
                for K in odds:
                    r = r - bracket[(I.position, J.position, K.position)] \
                        * anchor[(K.position, A.position)]
                if not r.is_zero():
                    residuals["anchor"][f"({I},{J})->{A}"] = r

    # cyclic sum of Q_I^B d_B Q_JL^K - Q_IM^K Q_JL^M over distinct triples
    for a in range(len(odds)):
        for b in range(a + 1, len(odds)):
            for c in range(b + 1, len(odds)):
                triple = (odds[a], odds[b], odds[c])
                for K in odds:
                    checked["jacobi"] += 1
                    r = table.zero()
                    for n in range(3):
                        P = triple[n]
                        Q = triple[(n + 1) % 3]
                        R = triple[(n + 2) % 3]
                        qr = bracket[(Q.position, R.position, K.position)]
                        for B in evens:
                            r = r + anchor[(P.position, B.position)] \
                                * qr.partial_derivative(B)
                        for M in odds:
                            r = r - bracket[(P.position, M.position, K.position)] \
                                * bracket[(Q.position, R.position, M.position)]
                    if not r.is_zero():
                        residuals["jacobi"][f"({triple[0]},{triple[1]},{triple[2]})->{K}"] = r

    passed = all(not fam for fam in residuals.values())
    return StructureReport(passed, residuals, checked)
