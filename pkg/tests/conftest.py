import random
from fractions import Fraction

import pytest

from gradedlie.algebra import Element, GeneratorTable
from gradedlie.algebroid import AlgebroidSpec
from gradedlie.derivations import make_derivation


@pytest.fixture
def rng():
    return random.Random(20260823)


def random_coeff(rng, zero_bias=0.3):
    if rng.random() < zero_bias:
        return Fraction(0)
    return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))


def random_poly(rng, table, degree=2, zero_bias=0.5):
    """Random polynomial in the base generators, total degree <= degree."""
    base = table.base_generators()
    out = table.scalar(random_coeff(rng, zero_bias))
    for _ in range(degree):
        c = random_coeff(rng, zero_bias)
        if c and base:
            term = table.scalar(c)
            for _ in range(rng.randint(1, degree)):
                g = rng.choice(base)
                term = term * table.gen(g.name, g.index)
            out = out + term
    return out


def random_element(rng, table, terms=4, max_exp=2):
    """Random element: sum of random monomials in all generators."""
    evens = table.even_generators()
    odds = table.odd_generators()
    out = table.zero()
    for _ in range(terms):
        term = table.scalar(random_coeff(rng, zero_bias=0.0))
        for g in evens:
            e = rng.randint(0, max_exp) if rng.random() < 0.5 else 0
            for _ in range(e):
                term = term * table.gen(g.name, g.index)
        for g in odds:
            if rng.random() < 0.4:
                term = term * table.gen(g.name, g.index)
        out = out + term
    return out


def algebra_map(table, images):
    """Algebra endomorphism from generator images {position: Element}."""
    def apply(e):
        out = table.zero()
        for (even, odd), c in e.terms.items():
            term = table.scalar(c)
            for pos, exp in even:
                img = images.get(pos, Element(table, {(((pos, 1),), ()): Fraction(1)}))
                for _ in range(exp):
                    term = term * img
            for pos in odd:
                img = images.get(pos, Element(table, {((), (pos,)): Fraction(1)}))
                term = term * img
            out = out + term
        return out
    return apply


def unipotent_twist(rng, spec, poly_degree=1):
    """Conjugate the differential by a random unipotent change of odd basis
    with polynomial coefficients.  Preserves d^2 = 0, scrambles the tables."""
    table = spec.table
    odds = table.odd_generators()
    fwd = {}
    for n, g in enumerate(odds):
        img = table.gen(g.name, g.index)
        for h in odds[n + 1:]:
            c = random_poly(rng, table, degree=poly_degree, zero_bias=0.5)
            img = img + c * table.gen(h.name, h.index)
        fwd[g.position] = img
    inv = {}
    for g in reversed(odds):
        img = table.gen(g.name, g.index)
        extra = fwd[g.position] - img
        back = table.zero()
        for (even, odd), c in extra.terms.items():
            term = Element(table, {(even, ()): c})
            for pos in odd:
                term = term * inv.get(pos, Element(table, {((), (pos,)): Fraction(1)}))
            back = back + term
        inv[g.position] = img - back
    phi = algebra_map(table, fwd)
    phi_inv = algebra_map(table, inv)
    action = {g: phi_inv(spec.d(phi(table.gen(g.name, g.index)))) for g in table.gens}
    return AlgebroidSpec(table, make_derivation(table, (0, 1), action))


def random_degree0_tables(rng, max_base=2, max_rank=3):
    """Random anchor/bracket tables over a random degree-0 chart.  Usually
    fails the structure equations; used for agreement testing."""
    nb = rng.randint(0, max_base)
    r = rng.randint(1, max_rank)
    decls = []
    if nb:
        decls.append(("x", "base", 0, nb))
    decls.append(("y", "odd_fiber", 0, r))
    table = GeneratorTable(decls)
    anchor = {}
    for a in range(1, nb + 1):
        for i in range(1, r + 1):
            p = random_poly(rng, table, degree=2, zero_bias=0.6)
            if not p.is_zero():
                anchor[(("x", a), ("y", i))] = p
    bracket = {}
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            for k in range(1, r + 1):
                p = random_poly(rng, table, degree=2, zero_bias=0.7)
                if not p.is_zero():
                    bracket[(("y", i), ("y", j), ("y", k))] = p
    return table, anchor, bracket


def brute_force_w_dim(table, i, j):
    """Count bi-weight (i, j) monomials in positive-weight generators by
    direct enumeration (independent of w_basis)."""
    from itertools import combinations
    evens = [g for g in table.even_generators() if g.h_weight > 0]
    odds = [g for g in table.odd_generators() if g.h_weight > 0]
    count = 0
    for subset in combinations(range(len(odds)), j):
        odd_w = sum(odds[n].h_weight for n in subset)
        if odd_w > i:
            continue
        count += _count_even(evens, 0, i - odd_w)
    return count


def _count_even(evens, idx, weight):
    if weight == 0:
        return 1
    if idx == len(evens):
        return 0
    total = 0
    w = evens[idx].h_weight
    for e in range(weight // w + 1):
        total += _count_even(evens, idx + 1, weight - e * w)
    return total


def brute_force_rank(matrix):
    """Rank by enumerating square minors with permutation-expansion
    determinants.  Only for small matrices."""
    from itertools import combinations, permutations
    if not matrix or not matrix[0]:
        return 0
    rows, cols = len(matrix), len(matrix[0])
    for size in range(min(rows, cols), 0, -1):
        for rsel in combinations(range(rows), size):
            for csel in combinations(range(cols), size):
                det = Fraction(0)
                for perm in permutations(range(size)):
                    sign = 1
                    for a in range(size):
                        for b in range(a + 1, size):
                            if perm[a] > perm[b]:
                                sign = -sign
                    prod = Fraction(1)
                    for a in range(size):
                        prod *= matrix[rsel[a]][csel[perm[a]]]
                    det += sign * prod
                if det != 0:
                    return size
    return 0


def random_chart(rng, degree=None, max_dim=3):
    """Random generator table of degree 1..4 with random block dims."""
    k = degree if degree is not None else rng.randint(1, 4)
    decls = []
    if rng.random() < 0.5:
        decls.append(("x", "base", 0, rng.randint(1, 2)))
    if rng.random() < 0.5:
        decls.append(("y", "odd_fiber", 0, rng.randint(1, 2)))
    for w in range(1, k + 1):
        de = rng.randint(0, max_dim) if w < k else rng.randint(1, max_dim)
        do = rng.randint(0, max_dim)
        if de:
            decls.append((f"z{w}", "even_fiber", w, de))
        if do:
            decls.append((f"w{w}", "odd_fiber", w, do))
    if not any(kind == "even_fiber" and w == k for _n, kind, w, _d in decls):
        decls.append((f"z{k}", "even_fiber", k, 1))
    return GeneratorTable(decls)
