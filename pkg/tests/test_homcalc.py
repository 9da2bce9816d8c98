import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from forge.homcalc import (FPAbelianGroup, GroupPresentation, abelianization, charpoly, det, interpolate_int,
                           invariant_factors, mapping_torus_h1, matmul, quotient_presentation,
                           smith_normal_form, tietze_add_consequence, tietze_add_generator)
from forge.words import Word

from .oracles.snf import determinantal_invariants, elementary_invariants, leibniz_det


def random_matrix(rng, max_size=5, max_entry=5):
    m, n = rng.randint(1, max_size), rng.randint(1, max_size)
    return [[rng.randint(-max_entry, max_entry) for _ in range(n)] for _ in range(m)]


def diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0])))]


def test_snf_examples():
    assert diagonal(smith_normal_form([[2, 0], [0, 3]])[1]) == [1, 6]
    assert diagonal(smith_normal_form([[0, 0], [0, 0]])[1]) == [0, 0]
    assert diagonal(smith_normal_form([[5]])[1]) == [5]
    assert invariant_factors([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]


def _check_snf(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    d = diagonal(D)
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return nz


def test_snf_against_independent_oracles():
    rng = random.Random(20240611)
    mismatches = 0
    for _ in range(1000):
        M = random_matrix(rng)
        got = _check_snf(M)
        if not (got == elementary_invariants(M) == determinantal_invariants(M)):
            mismatches += 1
    assert mismatches == 0


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                                                       min_size=1, max_size=4)))
def test_snf_property(M):
    assert _check_snf(M) == determinantal_invariants(M)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                                                       min_size=n, max_size=n)))
def test_det_matches_leibniz(M):
    assert det(M) == leibniz_det(M)


def test_group_from_relations():
    assert FPAbelianGroup.from_relations(1, [[2]]) == FPAbelianGroup(0, (2,))
    assert FPAbelianGroup.from_relations(3, []) == FPAbelianGroup(3)
    assert FPAbelianGroup.from_relations(2, [[2, 0], [0, 3]]) == FPAbelianGroup(0, (6,))
    assert str(FPAbelianGroup(2, (2,))) == "Z^2 + Z/2"
    assert str(FPAbelianGroup(1)) == "Z" and str(FPAbelianGroup()) == "0"
    assert FPAbelianGroup(0, (2, 4)).order == 8 and FPAbelianGroup(1).order is None
    assert FPAbelianGroup(1, (2, 4, 3 * 4)).rank_mod(2) == 4
    with pytest.raises(ValueError):
        FPAbelianGroup(0, (2, 3))


def test_presentation_abelianization():
    assert str(abelianization(GroupPresentation.parse(["x"], ["x^2"]))) == "Z/2"
    assert str(abelianization(GroupPresentation.parse(["x", "y"], ["x y x^-1 y^-1"]))) == "Z^2"
    # trefoil group: abelianization Z
    assert str(abelianization(GroupPresentation.parse(["x", "y"], ["x y x y^-1 x^-1 y^-1"]))) == "Z"


def test_presentation_rejects_foreign_letters():
    P = GroupPresentation.parse(["x"], [])
    with pytest.raises(ValueError):
        GroupPresentation(P.generators, (Word((2,)),))


@given(st.lists(st.lists(st.integers(-2, 2).filter(bool), max_size=6), min_size=1, max_size=4),
       st.data())
def test_tietze_moves_preserve_abelianization(rels, data):
    P = GroupPresentation.parse(["x", "y"], [])
    P = GroupPresentation(P.generators, tuple(Word(tuple(r)) for r in rels))
    before = abelianization(P)
    i = data.draw(st.integers(0, len(rels) - 1))
    j = data.draw(st.integers(0, len(rels) - 1))
    c = Word(tuple(data.draw(st.lists(st.integers(-2, 2).filter(bool), max_size=3))))
    assert abelianization(tietze_add_consequence(P, i, j, c)) == before
    v = Word(tuple(data.draw(st.lists(st.integers(-2, 2).filter(bool), max_size=4))))
    assert abelianization(tietze_add_generator(P, "t", v)) == before


def test_mapping_torus_identity_and_swap():
    assert mapping_torus_h1(np.eye(2, dtype=int)) == FPAbelianGroup(3)
    assert mapping_torus_h1([[0, 1], [1, 0]]) == FPAbelianGroup(2)
    assert mapping_torus_h1([[-1, 0], [0, -1]]) == FPAbelianGroup(1, (2, 2))
    # Anosov [[2,1],[1,1]]: det(I - M) = -1
    assert mapping_torus_h1([[2, 1], [1, 1]]) == FPAbelianGroup(1)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_mapping_torus_rank(M):
    I_M = np.eye(3, dtype=int) - np.array(M)
    kernel_dim = 3 - np.linalg.matrix_rank(I_M)
    h = mapping_torus_h1(M)
    assert h.free_rank == 1 + kernel_dim
    d = det(I_M.tolist())
    if d:
        assert h.order is None and np.prod(h.torsion or (1,)) == abs(d)


def test_quotient_presentation_examples():
    P = GroupPresentation.parse(["x", "y", "z"], ["x y z", "z^3"])
    Q = quotient_presentation(P, ["z"])
    assert Q.generators.names == ("x", "y") and Q.relators == (Word((1, 2)),)
    # killing y leaves x alone as a relator, which then eliminates x as well
    assert quotient_presentation(GroupPresentation.parse(["x", "y"], ["x y"]), ["y"]).is_trivial_presentation
    with pytest.raises(KeyError):
        quotient_presentation(P, ["w"])


def test_interpolation_and_charpoly():
    assert interpolate_int([0, 1, 2], [1, 2, 5]) == [1, 0, 1]
    assert interpolate_int([0, 1, 2], [0, 1, 2]) == [0, 1, 0]
    with pytest.raises(ArithmeticError):
        interpolate_int([0, 2], [0, 1])
    assert charpoly([[2, 1], [1, 1]]) == [1, -3, 1]
    assert charpoly(np.eye(3, dtype=int)) == [1, -3, 3, -1]
    with pytest.raises(ValueError):
        interpolate_int([0, 1], [0, 1, 2])


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_charpoly_matches_numpy(M):
    cp = charpoly(M)
    assert np.allclose(cp, np.poly(np.array(M, dtype=float)), atol=1e-6)
