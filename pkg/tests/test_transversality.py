"""Tangency detection and the transversality falsifier/supporter."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from milnorscope import (
    TransversalityVerdict,
    dependence_measure,
    falsify_transversality,
    parse_mixed,
    parse_real_map,
    search_tangency_locus,
    special_family_claim_check,
    special_family_minor,
    tangency_matrix,
    tangency_minors_exact,
)
from milnorscope.realpoly import minors_exact

FAILING_MAP = parse_real_map("(x*y + z^2, x) vars x,y,z")
G_MIXED = parse_mixed("z1 z1~ + z2^2 z2~")
H_MIXED = parse_mixed("z1 z1~ - z2 z2~ + z3^2 z3~")


# ----------------------------------------------------------------------
# tangency matrix and dependence measure


def test_tangency_matrix_shape():
    M = tangency_matrix(FAILING_MAP, [0.6, 0.8, 0.0])
    assert M.matrix.shape == (3, 3)
    assert np.array_equal(M.matrix[-1], [0.6, 0.8, 0.0])
    assert np.array_equal(M.matrix[0], [0.8, 0.6, 0.0])
    assert np.array_equal(M.matrix[1], [1.0, 0.0, 0.0])


def test_tangency_matrix_rejects_bad_points():
    with pytest.raises(ValueError, match="wrong dimension"):
        tangency_matrix(FAILING_MAP, [1.0, 2.0])
    with pytest.raises(ValueError, match="nonzero"):
        tangency_matrix(FAILING_MAP, [0.0, 0.0, 0.0])


def test_dependence_zero_on_tangency_plane():
    # fibers of (xy + z^2, x) touch every sphere along z = 0
    assert dependence_measure(tangency_matrix(FAILING_MAP, [0.6, 0.8, 0.0])) < 1e-12
    # and along x = 2y
    sigma = dependence_measure(tangency_matrix(FAILING_MAP, [0.8, 0.4, math.sqrt(0.2)]))
    assert sigma < 1e-12


def test_dependence_positive_off_the_tangency_set():
    x = np.array([0.3, 0.5, math.sqrt(1 - 0.34)])
    assert dependence_measure(tangency_matrix(FAILING_MAP, x)) > 1e-3


def test_dependence_measure_conventions():
    assert dependence_measure(np.eye(3)) == pytest.approx(1.0)
    assert dependence_measure(np.array([[0.0, 0.0], [1.0, 0.0]])) == 0.0
    assert dependence_measure(np.array([[1.0, 0], [0, 1], [1, 1]])) == 0.0
    M = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0], [3.0, 0.0, 1.0]])
    scaled = np.diag([10.0, 0.01, 7.0]) @ M
    assert dependence_measure(scaled) == pytest.approx(dependence_measure(M))


def test_dependence_agrees_with_exact_minors():
    rng = np.random.default_rng(17)

    def rand_row():
        return [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
                for _ in range(5)]

    for k in range(60):
        r1, r2 = rand_row(), rand_row()
        if k % 2 == 0:
            alpha = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 7)))
            beta = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 7)))
            r3 = [alpha * a + beta * b for a, b in zip(r1, r2)]
        else:
            r3 = rand_row()
        rows = [r1, r2, r3]
        dependent = all(m == 0 for m in minors_exact(rows, 3))
        sigma = dependence_measure(np.array(rows, dtype=float))
        if dependent:
            assert sigma < 1e-10
        else:
            assert sigma > 1e-10


def test_tangency_minors_exact_ex12():
    on_plane = tangency_minors_exact(FAILING_MAP, [Fraction(1, 2), Fraction(1, 3), 0])
    assert on_plane == [Fraction(0)]
    other_branch = tangency_minors_exact(
        FAILING_MAP, [Fraction(2, 3), Fraction(1, 3), Fraction(1, 5)])
    assert other_branch == [Fraction(0)]
    generic = tangency_minors_exact(
        FAILING_MAP, [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)])
    assert generic == [Fraction(1, 24)]


def test_tangency_minors_exact_g():
    g = G_MIXED.to_real_map()
    ms = tangency_minors_exact(g, [0, 0, Fraction(2, 3), 0])
    assert len(ms) == 4
    assert all(m == 0 for m in ms)


# ----------------------------------------------------------------------
# locus search


def test_search_rejects_bad_inputs():
    with pytest.raises(ValueError, match="positive"):
        search_tangency_locus(FAILING_MAP, 0.0)
    square = parse_real_map("(x1) vars x1")
    with pytest.raises(ValueError, match="more variables"):
        search_tangency_locus(square, 1.0)


def test_search_lands_on_known_planes():
    res = search_tangency_locus(FAILING_MAP, 1.0, seeds=64, iters=200, rng_seed=0)
    assert res.witnesses
    assert res.converged > 0
    fn = [w.f_norm for w in res.witnesses]
    assert fn == sorted(fn)
    for w in res.witnesses:
        assert abs(np.linalg.norm(w.point) - 1.0) < 1e-9
        assert w.sigma < 1e-8
        x, y, z = w.point
        assert min(abs(z), abs(x - 2 * y)) < 1e-6
        assert not w.near_critical
        assert w.f_norm == pytest.approx(
            float(np.linalg.norm(FAILING_MAP.eval_many(w.point))), abs=1e-12)


def test_search_extra_seeds_are_kept():
    seed = np.array([0.6, 0.8, 0.0])
    res = search_tangency_locus(FAILING_MAP, 1.0, seeds=8, iters=120, rng_seed=1,
                                extra_seeds=[seed])
    dists = [np.linalg.norm(w.point - seed) for w in res.witnesses]
    assert min(dists) < 1e-3


def test_search_deduplicates():
    res = search_tangency_locus(FAILING_MAP, 1.0, seeds=64, iters=200, rng_seed=0)
    pts = [w.point for w in res.witnesses]
    for a, b in itertools.combinations(pts, 2):
        assert np.linalg.norm(a - b) > 1e-4


# ----------------------------------------------------------------------
# falsifier


def test_falsifier_ex12_fails_with_certified_sequence():
    rep = falsify_transversality(FAILING_MAP, 1.0, seeds=96, iters=300, rng_seed=0)
    assert rep.verdict is TransversalityVerdict.FAILS
    assert len(rep.witnesses) >= 3
    for w in rep.witnesses:
        assert w.sigma < rep.tolerances["tol_tangency"]
        assert abs(np.linalg.norm(w.point) - 1.0) < 1e-9
        assert not w.near_critical
    for prev, nxt in zip(rep.witnesses, rep.witnesses[1:]):
        assert nxt.f_norm <= prev.f_norm / 10.0
    assert rep.witnesses[-1].f_norm < rep.tolerances["tol_v"]
    assert any("certified" in r for r in rep.reasons)
    assert rep.scale > 0 and rep.margin > 0


def test_falsifier_is_deterministic():
    a = falsify_transversality(FAILING_MAP, 1.0, seeds=48, iters=150, rng_seed=5)
    b = falsify_transversality(FAILING_MAP, 1.0, seeds=48, iters=150, rng_seed=5)
    assert a.verdict is b.verdict
    assert len(a.witnesses) == len(b.witnesses)
    for wa, wb in zip(a.witnesses, b.witnesses):
        assert np.array_equal(wa.point, wb.point)
        assert wa.f_norm == wb.f_norm


def test_supporter_g_holds():
    rep = falsify_transversality(G_MIXED.to_real_map(), 1.0,
                                 seeds=96, iters=250, rng_seed=0)
    assert rep.verdict is TransversalityVerdict.HOLDS
    assert rep.min_locus_f_norm > rep.margin
    for w in rep.witnesses:
        assert not w.near_critical
        assert w.f_norm > rep.margin


def test_supporter_h_holds():
    rep = falsify_transversality(H_MIXED.to_real_map(), 1.0,
                                 seeds=96, iters=250, rng_seed=0)
    assert rep.verdict is TransversalityVerdict.HOLDS
    assert rep.min_locus_f_norm > rep.margin


def test_report_carries_budget_and_tolerances():
    rep = falsify_transversality(FAILING_MAP, 0.5, seeds=32, iters=100, rng_seed=3,
                                 tol_tangency=1e-7, tol_v=1e-5)
    assert (rep.seeds, rep.iters, rep.rng_seed) == (32, 100, 3)
    assert rep.eps == 0.5
    assert rep.tolerances["tol_tangency"] == 1e-7
    assert rep.tolerances["tol_v"] == 1e-5
    assert rep.caveats


# ----------------------------------------------------------------------
# special family closed-form minor


def brute_minor(psi, j, x, component):
    f = psi.to_real_map()
    form_o = [t.j for t in psi.terms if t.a != t.b][0]
    M = np.vstack([f.grad_many(np.asarray(x, dtype=float)),
                   np.asarray(x, dtype=float)[None, :]])
    cj = 2 * (j - 1) + (0 if component == "x" else 1)
    cols = [cj, 2 * (form_o - 1), 2 * (form_o - 1) + 1]
    return float(np.linalg.det(M[:, cols]))


@pytest.mark.parametrize("text", [
    "z1 z1~ - z2 z2~ + z3^2 z3~",
    "z1^2 z1~ + z2 z2~",
    "z1 z1~ + 2 z2^2 z2~^2 + z3 z3~^2",
    "-3 z1^3 z1~^3 + z2 z2~ + (1/2) z3^2 z3~",
])
def test_special_family_minor_matches_bruteforce(text):
    psi = parse_mixed(text)
    crit = [t.j for t in psi.terms if t.a == t.b]
    rng = np.random.default_rng(29)
    for _ in range(30):
        x = rng.uniform(-1.5, 1.5, size=2 * psi.n)
        for j in crit:
            for comp in ("x", "y"):
                closed = special_family_minor(psi, j, x, comp)
                brute = brute_minor(psi, j, x, comp)
                assert abs(closed - brute) <= 1e-10 * (1.0 + abs(brute))


def test_special_family_minor_vanishing_slices():
    psi = H_MIXED
    x = np.array([0.0, 0.0, 0.7, -0.2, 0.5, 0.1])
    assert special_family_minor(psi, 1, x, "x") == pytest.approx(0.0, abs=1e-15)
    x2 = np.array([0.4, 0.3, 0.7, -0.2, 0.0, 0.0])
    for j in (1, 2):
        assert special_family_minor(psi, j, x2, "y") == pytest.approx(0.0, abs=1e-15)


def test_special_family_minor_errors():
    worked = parse_mixed("(1+i) z1 z1~ + (-2-i) z2^2 z2~^2 + i z3^2 z3~")
    x6 = np.zeros(6) + 0.5
    with pytest.raises(ValueError, match="not in the special family"):
        special_family_minor(worked, 1, x6)
    with pytest.raises(ValueError, match="not a critical index"):
        special_family_minor(H_MIXED, 3, x6)
    with pytest.raises(ValueError, match="component"):
        special_family_minor(H_MIXED, 1, x6, component="z")
    with pytest.raises(ValueError):
        special_family_minor(H_MIXED, 1, np.zeros(4) + 0.5)


def test_claim_check_h():
    res = special_family_claim_check(H_MIXED, samples=200, rng_seed=0)
    assert res.holds
    assert not res.vacuous
    assert res.samples > 0
    assert res.min_cross_ratio > 1.0


def test_claim_check_single_block_is_vacuous():
    res = special_family_claim_check(G_MIXED)
    assert res.holds
    assert res.vacuous
    assert "single sign block" in res.note
