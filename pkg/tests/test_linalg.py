import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from binforms.forms import Form, apply_group_element
from binforms.grading import invariant_dimension, multidegrees_of_total, weight_count
from binforms.linalg import (BACKUP_PRIMES, DEFAULT_PRIMES, EchelonModP, SparseMatrix, certify_rank,
                             coordinates, dense_rank_mod_p, invariant_basis, kernel_exact,
                             monomial_basis, operator_matrix, rank_exact, rank_mod_p,
                             raising_matrix, span_rank)
from binforms.named import named_invariants
from binforms.polys import CoeffPoly

from oracles import SYM, poly_to_sympy, t, t_linear_term

P = DEFAULT_PRIMES[0]
T = CoeffPoly.var("t")


def test_quartic_quadratic_block():
    M = raising_matrix((0, 0, 2))
    assert (M.nrows, M.ncols) == (3, 2)
    assert len(kernel_exact(M)) == 1


def test_quadratic_block_against_substitution():
    # collect the t-linear term of each weight-0 monomial under y -> y + t x
    M = operator_matrix((0, 0, 2), 0, "lowering")
    src = monomial_basis((0, 0, 2), 0)
    tgt = monomial_basis((0, 0, 2), -2)
    for key, row in zip(src.keys, M.rows):
        mono = CoeffPoly._raw({key: Fraction(1)})
        want = t_linear_term(poly_to_sympy(mono), ((1, 0), (t, 1)))
        got = sum(v * poly_to_sympy(CoeffPoly._raw({tgt.keys[c]: Fraction(1)}))
                  for c, v in row.items())
        assert sympy.expand(got - want) == 0


def test_empty_blocks():
    M = raising_matrix((0, 0, 0))
    assert (M.nrows, M.ncols) == (1, 0)
    assert len(kernel_exact(M)) == 1
    M = raising_matrix((1, 0, 0))
    assert (M.nrows, M.ncols) == (0, 0)
    assert kernel_exact(M) == []


@st.composite
def random_monomial(draw, direction):
    total = draw(st.integers(1, 8))
    d_l = draw(st.integers(0, total))
    d_c = draw(st.integers(0, total - d_l))
    d = (d_l, d_c, total - d_l - d_c)
    weights = [w for w in range(-4 * total, 4 * total + 1) if weight_count(d, w)]
    w = draw(st.sampled_from(weights))
    shift = 2 if direction == "raising" else -2
    if not weight_count(d, w + shift):
        w = -w if weight_count(d, -w + shift) else w
    basis = monomial_basis(d, w)
    return d, w, draw(st.sampled_from(basis.keys))


def _check_consistency(d, w, key, direction, matrix):
    M = operator_matrix(d, w, direction)
    src = monomial_basis(d, w)
    shift = 2 if direction == "raising" else -2
    tgt = monomial_basis(d, w + shift)
    row = M.rows[src.index[key]]
    got = sum(v * poly_to_sympy(CoeffPoly._raw({tgt.keys[c]: Fraction(1)}))
              for c, v in row.items())
    want = t_linear_term(poly_to_sympy(CoeffPoly._raw({key: Fraction(1)})), matrix)
    assert sympy.expand(got - want) == 0


@settings(max_examples=25)
@given(random_monomial("raising"))
def test_raising_substitution_consistency(args):
    d, w, key = args
    if weight_count(d, w + 2):
        _check_consistency(d, w, key, "raising", ((1, t), (0, 1)))


@settings(max_examples=25)
@given(random_monomial("lowering"))
def test_lowering_substitution_consistency(args):
    d, w, key = args
    if weight_count(d, w - 2):
        _check_consistency(d, w, key, "lowering", ((1, 0), (t, 1)))


@pytest.mark.parametrize("total", range(0, 8))
def test_kernel_dimension_equals_count(total):
    for d in multidegrees_of_total(total, admissible_only=False):
        assert len(kernel_exact(raising_matrix(d))) == \
            weight_count(d, 0) - weight_count(d, 2)


def test_invariant_basis_sizes_through_total_10():
    for i in range(11):
        for d in multidegrees_of_total(i):
            assert len(invariant_basis(d)) == invariant_dimension(d), d


def test_quadratic_invariant_is_k2():
    (basis,) = invariant_basis((0, 0, 2))
    b = {n: CoeffPoly.var(n) for n in ("b0", "b1", "b2", "b3", "b4")}
    target = b["b0"] * b["b4"] - 4 * b["b1"] * b["b3"] + 3 * b["b2"] ** 2
    assert basis.proportionality(target)
    assert basis.proportionality(named_invariants().k["k2"])


def test_sylvester_dimensions():
    assert len(invariant_basis((2, 4, 3))) == 8
    assert len(invariant_basis((1, 5, 4))) == 12


@pytest.mark.parametrize("d", [(0, 0, 3), (2, 2, 0), (0, 4, 0), (1, 3, 1), (2, 1, 2)])
def test_basis_fixed_by_unipotents(d):
    for v in invariant_basis(d):
        for A in (((1, T), (0, 1)), ((1, 0), (T, 1))):
            assert apply_group_element(Form.constant(v), A).value == v


def test_basis_is_reduced_echelon():
    basis = monomial_basis((2, 2, 2), 0)
    vecs = [coordinates(v, basis) for v in invariant_basis((2, 2, 2))]
    assert len(vecs) == 4
    free = [max(v) for v in vecs]
    for v in vecs:
        assert sum(1 for f in free if f in v) == 1


def test_kernel_is_left_kernel():
    M = raising_matrix((1, 3, 2))
    for vec in kernel_exact(M):
        image = [sum(vec.get(i, 0) * M.rows[i].get(j, 0) for i in range(M.nrows))
                 for j in range(M.ncols)]
        assert not any(image)


def test_sparse_matrix_rejects_zeros():
    with pytest.raises(ValueError):
        SparseMatrix(1, 1, ({0: 0},))
    with pytest.raises(ValueError):
        SparseMatrix(1, 1, ({3: 1},))


small_rows = st.lists(st.dictionaries(st.integers(0, 5), st.integers(-3, 3).filter(bool),
                                      max_size=4), max_size=6)


@given(small_rows)
def test_ranks_match_sympy(rows):
    dense = [[r.get(c, 0) for c in range(6)] for r in rows]
    want = sympy.Matrix(dense).rank() if rows else 0
    assert rank_exact(rows) == want
    assert rank_mod_p(rows, P) == want
    if rows:
        import numpy as np
        assert dense_rank_mod_p(np.array(dense, dtype=object) % P, P) == want


def test_echelon_reports_dependence():
    ech = EchelonModP(P)
    assert ech.add({0: 1, 1: 2})
    assert ech.add({1: 1})
    assert not ech.add({0: 3, 1: 5})
    assert ech.rank == 2


def test_empty_span():
    cert = span_rank([], (0, 0, 2))
    assert cert.rank == 0


def _sample_vectors(seed):
    rng = random.Random(seed)
    d = (0, 4, 2)
    basis = invariant_basis(d)
    out = []
    for _ in range(rng.randint(1, len(basis) + 2)):
        v = CoeffPoly()
        for b in rng.sample(basis, rng.randint(1, len(basis))):
            v = v + b.scale(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        out.append(v)
    return d, out


@given(st.integers(0, 10 ** 6), st.lists(st.fractions(-9, 9, max_denominator=5).filter(bool), min_size=8,
                                           max_size=8), st.randoms())
def test_span_rank_scaling_and_permutation(seed, scales, rnd):
    d, vecs = _sample_vectors(seed)
    base = span_rank(vecs, d)
    scaled = [v.scale(s) for v, s in zip(vecs, scales * 2)]
    rnd.shuffle(scaled)
    assert span_rank(scaled, d).rank == base.rank


@pytest.mark.parametrize("d", [(0, 4, 2), (2, 4, 1), (1, 3, 3), (2, 2, 2)])
def test_modular_matches_exact(d):
    basis = invariant_basis(d)
    rng = random.Random(1)
    # a basis plus one dependent combination
    vecs = [b.scale(rng.randint(1, 5)) for b in basis]
    vecs.append(vecs[0] + vecs[-1].scale(Fraction(1, 3)))
    cert = span_rank(vecs, d, exact=True)
    assert cert.agreed
    assert cert.exact_rank == cert.rank == len(basis)


def test_certificate_flags_disagreement():
    ranks = {DEFAULT_PRIMES[0]: 5, DEFAULT_PRIMES[1]: 4, BACKUP_PRIMES[0]: 5}
    cert = certify_rank(lambda p: ranks[p])
    assert not cert.agreed
    assert cert.primes[-1] == BACKUP_PRIMES[0]
    assert cert.rank == 5 and "disagreed" in cert.note
