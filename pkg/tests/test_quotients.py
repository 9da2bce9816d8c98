from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forge import bundles
from forge.forms import BilinearForm
from forge.homcalc import FPAbelianGroup
from forge.quotients import (CycleLedger, DoubleSpec, HypothesisFailure, IncompatibleBoundary, MissingEntry,
                             PairEntry, QuotientSpec, UnprovenancedEntry, ball_report, default_w_ledger,
                             double_report, mod2_form_from_ledger, mod2_h2_rank, quotient_h1, quotient_report,
                             sphere_report, wu_spin_check, zero_trace_report)
from forge.reports import MAYER_VIETORIS, NOVIKOV, ManifoldReport

H = ((0, 1), (1, 0))


def gl2_congruent(F, G) -> bool:
    """Brute force over the six invertible 2x2 matrices mod 2."""
    for p in product((0, 1), repeat=4):
        P = ((p[0], p[1]), (p[2], p[3]))
        if (P[0][0] * P[1][1] - P[0][1] * P[1][0]) % 2 == 0:
            continue
        PtFP = tuple(tuple(sum(P[k][i] * F[k][l] * P[l][j] for k in range(2) for l in range(2)) % 2
                           for j in range(2)) for i in range(2))
        if PtFP == G:
            return True
    return False


def ledger_from(M, names=("u", "v")):
    entries = tuple(PairEntry(names[i], names[j], M[i][j], "test") for i in range(len(names))
                    for j in range(i, len(names)))
    return CycleLedger("L", names, entries)


def test_double_of_v():
    V = bundles.v_report(bundles.default_v())
    Z = double_report(DoubleSpec(V, name="Z"))
    assert Z.chi == 4 and Z.b2 == 2 and Z.h1.is_trivial and Z.betti == (1, 0, 2, 0, 1)
    assert Z.spin is True and Z.signature == 0
    for a in (MAYER_VIETORIS, NOVIKOV):
        assert a in Z.assumptions


def test_double_of_ball_and_zero_trace():
    S = double_report(DoubleSpec(ball_report()))
    assert S.chi == 2 and S.is_rational_homology_sphere
    D = double_report(DoubleSpec(zero_trace_report("4_1")))
    assert D.chi == 4 and D.b2 == 2 and D.h2 == FPAbelianGroup(2)


def test_double_needs_simply_connected_half():
    bad = ManifoldReport("X", 0, (1, 1, 1, 1, 0), FPAbelianGroup(1), boundary_h1=FPAbelianGroup())
    with pytest.raises(IncompatibleBoundary):
        double_report(DoubleSpec(bad))
    torsion_boundary = ManifoldReport("Y", 2, (1, 0, 1, 0, 0), FPAbelianGroup(), boundary_h1=FPAbelianGroup(0, (3,)))
    with pytest.raises(IncompatibleBoundary):
        double_report(DoubleSpec(torsion_boundary))


def test_quotient_w():
    V = bundles.v_report(bundles.default_v())
    W = quotient_report(QuotientSpec(DoubleSpec(V), ledger=default_w_ledger(), name="W"))
    assert str(W.h1) == "Z/2" and W.chi == 2 and W.b2 == 0 and W.is_rational_homology_sphere
    assert str(W.h2) == "Z/2" and mod2_h2_rank(W.h1, W.h2) == 2
    assert W.spin is True


def test_quotient_b():
    B = quotient_report(QuotientSpec(DoubleSpec(zero_trace_report("4_1")), name="B"))
    assert str(B.h1) == "Z/2" and B.chi == 2 and B.b2 == 0


def test_sphere_quotient_is_refused():
    # the antipodal quotient of S^4 has chi = 1, which no oriented rational homology sphere can have
    with pytest.raises(HypothesisFailure):
        quotient_report(QuotientSpec(sphere_report()))
    assert quotient_h1(QuotientSpec(sphere_report())) == FPAbelianGroup(0, (2,))


def test_quotient_hypotheses():
    S = sphere_report()
    for kw in ({"deck_order": 3}, {"free": False}, {"connected": False}):
        with pytest.raises(HypothesisFailure):
            quotient_h1(QuotientSpec(S, **kw))


groups = st.builds(FPAbelianGroup, st.integers(0, 3),
                   st.lists(st.sampled_from([2, 3, 4, 6]), max_size=2).map(
                       lambda t: tuple(sorted(t, key=lambda d: (d, 0)))).filter(
                       lambda t: all(b % a == 0 for a, b in zip(t, t[1:]))))


@given(groups.filter(lambda g: not g.is_trivial), st.integers(0, 6))
def test_quotient_refuses_cover_with_h1(h1, b2):
    b1 = h1.free_rank
    cover = ManifoldReport("C", 2 - 2 * b1 + b2, (1, b1, b2, b1, 1), h1)
    with pytest.raises(HypothesisFailure):
        quotient_h1(QuotientSpec(cover))
    with pytest.raises(HypothesisFailure):
        quotient_report(QuotientSpec(cover))


@given(st.integers(1, 8))
def test_quotient_halves_chi(k):
    cover = ManifoldReport("C", 2 * k + 2, (1, 0, 2 * k, 0, 1), FPAbelianGroup())
    Q = quotient_report(QuotientSpec(cover))
    assert Q.chi == k + 1 and Q.b2 == k - 1 and Q.h2 == FPAbelianGroup(k - 1, (2,))


def test_default_ledger_form():
    lf = mod2_form_from_ledger(default_w_ledger())
    assert lf.form.matrix == H and lf.even and lf.hyperbolic
    assert wu_spin_check(lf.form)


def test_ledger_forms_against_brute_force():
    for a, b, c in product((0, 1), repeat=3):
        M = ((a, b), (b, c))
        lf = mod2_form_from_ledger(ledger_from(M))
        assert lf.hyperbolic == gl2_congruent(M, H)
        assert lf.even == (a == 0 and c == 0)


def test_odd_ledger_is_not_spin():
    lf = mod2_form_from_ledger(ledger_from(((1, 1), (1, 0))))
    assert not lf.even and not lf.hyperbolic
    assert not wu_spin_check(lf.form)
    assert not mod2_form_from_ledger(ledger_from(((1,),), ("u",))).hyperbolic


def test_empty_ledger():
    lf = mod2_form_from_ledger(CycleLedger("E"))
    assert lf.form.rank == 0 and lf.even and lf.hyperbolic


def test_ledger_validation():
    with pytest.raises(UnprovenancedEntry):
        CycleLedger("L", ("u",), (PairEntry("u", "u", 0, ""),))
    with pytest.raises(KeyError):
        CycleLedger("L", ("u",), (PairEntry("u", "w", 0, "x"),))
    with pytest.raises(ValueError):
        CycleLedger("L", ("u", "u"))
    partial = CycleLedger("L", ("u", "v"), (PairEntry("u", "v", 1, "x"),))
    with pytest.raises(MissingEntry):
        mod2_form_from_ledger(partial)
    clash = CycleLedger("L", ("u",), (PairEntry("u", "u", 0, "x"), PairEntry("u", "u", 1, "y")))
    with pytest.raises(ValueError):
        clash.lookup("u", "u")


def test_ledger_that_does_not_span_leaves_spin_open():
    V = bundles.v_report(bundles.default_v())
    one = CycleLedger("L", ("F",), (PairEntry("F", "F", 0, "x"),))
    W = quotient_report(QuotientSpec(DoubleSpec(V), ledger=one))
    assert W.spin is None


def test_ledger_dsl_round_trip():
    from forge.dsl import parse
    L = default_w_ledger()
    assert parse(L.to_dsl()) == [L]


def test_wu_check_uses_mod2_reduction():
    assert wu_spin_check(BilinearForm(((2, 1), (1, 2))))
    assert not wu_spin_check(BilinearForm(((1, 0), (0, -1))))


def test_report_validation():
    with pytest.raises(ValueError):
        ManifoldReport("X", 3, (1, 0, 0, 0, 1), FPAbelianGroup())
    with pytest.raises(ValueError):
        ManifoldReport("X", 2, (1, 1, 2, 1, 1), FPAbelianGroup())
    with pytest.raises(ValueError):
        ManifoldReport("X", 2, (1, 0, 0), FPAbelianGroup())
    partial = ManifoldReport("X", 7, (1, 0, None, None, 1), FPAbelianGroup())
    assert partial.as_dict()["betti"] == [1, 0, None, None, 1]
    assert str(MAYER_VIETORIS).startswith("mayer-vietoris: ")
