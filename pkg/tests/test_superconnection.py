import random
from fractions import Fraction

import pytest

from gradedlie.algebra import Element
from gradedlie.derivations import apply
from gradedlie.constructions import adjoint_instance, e7_instance
from gradedlie.superconnection import (GaugeError, GaugeTransformation,
                                       apply_gauge, compose_gauges,
                                       extract_components, flatness_cascade,
                                       identity_gauge, split_by_y_count)
from gradedlie.weight_modules import w_basis

from conftest import random_coeff


def random_gauge(rng, spec, i):
    """Random unipotent gauge on the weight-i module: phi_p lowers the
    A-form grading target by p, raising y-count by p."""
    table = spec.table
    blocks = {}
    keys = []
    for j in range(i + 1):
        keys.extend(w_basis(spec, i, j).keys)
    ys = [g for g in table.odd_generators() if g.h_weight == 0]
    for p in range(1, len(ys) + 1):
        blk = {}
        for key in keys:
            bw = table.key_bi_weight(key)
            target = table.zero()
            # candidate terms: p weight-0 odd factors times a W-monomial of
            # the same total bi-weight
            jw = bw.form_degree - p
            if jw < 0:
                continue
            from itertools import combinations
            for ysub in combinations(ys, p):
                for wk in w_basis(spec, i, jw).keys:
                    cand = tuple(sorted(g.position for g in ysub))
                    full = (wk[0], tuple(sorted(cand + wk[1])))
                    if len(full[1]) != len(cand) + len(wk[1]):
                        continue
                    if table.key_bi_weight(full) != bw:
                        continue
                    c = random_coeff(rng, zero_bias=0.6)
                    if c:
                        target = target + Element(table, {full: c})
            if not target.is_zero():
                blk[key] = target
        if blk:
            blocks[p] = blk
    return GaugeTransformation(spec, i, blocks)


def test_components_reassemble_to_differential():
    for spec in [e7_instance(), adjoint_instance()]:
        for i in range(1, spec.degree + 1):
            comp = extract_components(spec, i)
            for key in comp.basis_keys:
                m = Element(spec.table, {key: Fraction(1)})
                assert comp.total(m) == apply(spec.d, m)


def test_flatness_cascade_examples():
    for spec in [e7_instance(), adjoint_instance()]:
        for i in range(1, spec.degree + 1):
            comp = extract_components(spec, i)
            report = flatness_cascade(comp)
            assert report.passed, report.residuals


def test_component_degrees():
    comp = extract_components(adjoint_instance(), 1)
    assert comp.degrees() == [0, 1]


def test_split_by_y_count_partition():
    spec = e7_instance()
    table = spec.table
    e = (table.gen("z", 1) * table.gen("y", 1)
         + table.gen("z", 2) * table.gen("w", 1)
         + table.gen("u", 1) * table.gen("y", 1) * table.gen("y", 2))
    parts = split_by_y_count(table, e)
    assert set(parts) == {0, 1, 2}
    total = table.zero()
    for part in parts.values():
        total = total + part
    assert total == e


def test_identity_gauge_is_noop():
    spec = e7_instance()
    comp = extract_components(spec, 2)
    gauged = apply_gauge(comp, identity_gauge(spec, 2))
    for p, blk in comp.blocks.items():
        for key, val in blk.items():
            assert gauged.component(p, key) == val


def test_gauge_preserves_flatness_and_d0():
    rng = random.Random(51)
    spec = e7_instance()
    comp = extract_components(spec, 2)
    for _ in range(10):
        phi = random_gauge(rng, spec, 2)
        gauged = apply_gauge(comp, phi)
        assert flatness_cascade(gauged).passed
        for key in comp.basis_keys:
            assert gauged.component(0, key) == comp.component(0, key)


def test_gauge_composition_law():
    rng = random.Random(52)
    spec = e7_instance()
    comp = extract_components(spec, 2)
    for _ in range(5):
        phi = random_gauge(rng, spec, 2)
        psi = random_gauge(rng, spec, 2)
        lhs = apply_gauge(apply_gauge(comp, phi), psi)
        rhs = apply_gauge(comp, compose_gauges(phi, psi))
        for key in comp.basis_keys:
            for p in range(0, 5):
                assert lhs.component(p, key) == rhs.component(p, key)


def test_gauge_inverse_round_trip():
    rng = random.Random(53)
    spec = e7_instance()
    phi = random_gauge(rng, spec, 2)
    for key in extract_components(spec, 2).basis_keys:
        m = Element(spec.table, {key: Fraction(1)})
        assert phi.apply_inverse(phi.apply_to(m)) == m
        assert phi.apply_to(phi.apply_inverse(m)) == m


def test_gauge_validation():
    spec = e7_instance()
    table = spec.table
    key = w_basis(spec, 1, 0).keys[0]
    bad = {1: {key: table.gen("z", 1)}}   # y-count 0, not 1
    with pytest.raises(GaugeError):
        GaugeTransformation(spec, 1, bad)
    with pytest.raises(GaugeError):
        GaugeTransformation(spec, 1, {0: {}})
