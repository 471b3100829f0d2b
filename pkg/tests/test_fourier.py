"""Fourier transform of self-similar measures: word tree, MC, decay, energy."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from fractalab.fourier import (
    BudgetError,
    decay_profile,
    del_criterion_diagnostic,
    fourier_mc,
    fourier_word_tree,
    sample_points,
    scaled_energy_check,
)
from fractalab.cocycle_walk import lyapunov
from fractalab.ifs_core import (
    PreconditionError,
    aperiodic_125,
    bernoulli_convolution,
    cantor,
    dyadic_pair,
    golden_bernoulli,
    smooth_example,
)
from fractalab.quadfield import golden_ratio_conjugate

F = Fraction
HALF = (F(1, 2), F(1, 2))
W125 = (F(1, 2), F(1, 4), F(1, 4))
TOL = 1e-10


def bernoulli_cos_product(r, q, terms=200):
    # attractor points are sum_{n>=0} ±r^n (translations ±1), so
    # F_q = prod_{n>=0} cos(2 pi q r^n)
    out = 1.0
    for n in range(terms):
        out *= math.cos(2 * math.pi * q * r**n)
    return out


def test_q_zero_is_total_mass():
    s = fourier_word_tree(cantor(), HALF, 0, TOL)
    assert s.value == 1.0
    assert s.error_bound <= TOL


def test_conjugate_symmetry():
    for q in (1, 3.7, 50):
        a = fourier_word_tree(cantor(), HALF, q, TOL)
        b = fourier_word_tree(cantor(), HALF, -q, TOL)
        assert abs(a.value - b.value.conjugate()) <= 2 * TOL


def test_modulus_bounded_by_one():
    for q in (0.5, 2, 17, 333.3, 9999):
        s = fourier_word_tree(aperiodic_125(), W125, q, 1e-8)
        assert abs(s.value) <= 1 + 1e-8


def test_bernoulli_convolution_cosine_product():
    # symmetric Bernoulli convolution: F_q = prod cos(2 pi q r^n) exactly
    ifs = bernoulli_convolution(F(1, 3))
    for q in (1, 2, 5.5):
        s = fourier_word_tree(ifs, HALF, q, TOL)
        assert s.value.real == pytest.approx(bernoulli_cos_product(1 / 3, q), abs=1e-8)
        assert s.value.imag == pytest.approx(0.0, abs=1e-8)


def test_cantor_self_similarity_under_base_scaling():
    # F(3q) = cos-factor recursion: |F_{3^n}| equals |F_1| for the Cantor measure
    base = abs(fourier_word_tree(cantor(), HALF, 1, TOL).value)
    for n in (1, 2, 3, 4):
        s = fourier_word_tree(cantor(), HALF, 3**n, TOL)
        assert abs(s.value) == pytest.approx(base, abs=1e-7)


def test_recursion_identity():
    # F_u = sum p_i e^{2 pi i u t_i} F_{r_i u}
    ifs, p = aperiodic_125(), W125
    for q in (1.0, 7.0, 41.5):
        lhs = fourier_word_tree(ifs, p, q, TOL).value
        rhs = 0j
        for w, g in zip(p, ifs.maps):
            sub = fourier_word_tree(ifs, p, float(g.ratio) * q, TOL).value
            rhs += float(w) * cmath.exp(2j * math.pi * q * float(g.translation)) * sub
        assert abs(lhs - rhs) <= 5 * TOL


def test_word_tree_agrees_with_monte_carlo():
    ifs, p = cantor(), HALF
    for q in (2, 11, 101):
        wt = fourier_word_tree(ifs, p, q, 1e-9)
        mc = fourier_mc(ifs, p, q, samples=200_000, rng_seed=0)
        assert abs(wt.value - mc.value) <= 4 * mc.mc_stderr + 1e-6


def test_smooth_system_monte_carlo_recursion():
    # for smooth maps the word tree is unavailable; MC still satisfies the
    # self-similarity recursion within sampling error
    ifs = smooth_example()
    q = 3.0
    lhs = fourier_mc(ifs, HALF, q, samples=200_000, rng_seed=1)
    rhs = 0j
    rng_seed = 2
    for w, g in zip(HALF, ifs.maps):
        pts = sample_points(ifs, HALF, 200_000, np.random.default_rng(rng_seed), 1e-12)
        rhs += float(w) * np.mean(np.exp(2j * math.pi * q * g(pts)))
        rng_seed += 1
    assert abs(lhs.value - rhs) <= 5 * lhs.mc_stderr + 5e-3


def test_exact_pisot_frequencies():
    # golden Bernoulli convolution at q = r^{-n}: handled in exact arithmetic,
    # and |F_q| does not tend to zero
    ifs, p = golden_bernoulli(), HALF
    r = golden_ratio_conjugate()
    vals = [abs(fourier_word_tree(ifs, p, r ** -n, 1e-6).value) for n in range(1, 16)]
    assert min(vals) > 1e-4
    # oracle: the n=1 value (frozen from the exact evaluator at tol 1e-10)
    v1 = abs(fourier_word_tree(ifs, p, r**-1, 1e-10).value)
    assert v1 == pytest.approx(vals[0], abs=1e-5)


def test_budget_error_reports_achievable_tol():
    # distinct contraction ratios stop the scale memo from collapsing the
    # tree, so a small node budget is exhausted at high frequency
    with pytest.raises(BudgetError) as exc:
        fourier_word_tree(aperiodic_125(), W125, 1e7, 1e-12, max_nodes=200)
    assert exc.value.achievable_tol > 1e-12


def test_decay_profile_aperiodic_vs_periodic():
    q_grid = np.logspace(0, 4, 60)
    ap = decay_profile(aperiodic_125(), W125, q_grid, 1e-6)
    assert not ap.degenerate
    maxima = [ap.per_decade_max()[j] for j in sorted(ap.per_decade_max())]
    assert all(b < a for a, b in zip(maxima, maxima[1:]))
    # Cantor: |F| along powers of 3 never decays, so no strong decade decay
    ca = decay_profile(cantor(), HALF, q_grid, 1e-6)
    ca_maxima = [ca.per_decade_max()[j] for j in sorted(ca.per_decade_max())]
    assert not all(b < 0.5 * a for a, b in zip(ca_maxima, ca_maxima[1:]))


def test_sample_points_land_in_attractor_hull():
    ifs, p = cantor(), HALF
    pts = sample_points(ifs, p, 10_000, np.random.default_rng(0), 1e-10)
    assert pts.min() >= -1e-9 and pts.max() <= 1 + 1e-9
    # Cantor's middle third has measure zero
    inside_gap = np.mean((pts > 1 / 3 + 1e-6) & (pts < 2 / 3 - 1e-6))
    assert inside_gap == 0


def test_scaled_energy_inequality_holds():
    ifs, p = cantor(), HALF
    chi = lyapunov(ifs, p).value
    res = scaled_energy_check(ifs, p, q=1000.0, k=3, r=1e-2, chi=chi, samples=5_000, rng_seed=0)
    assert res.lhs <= res.rhs + res.lhs_err + 3 * res.rhs_stderr
    assert res.lhs >= 0 and res.rhs >= 0


def test_del_criterion_dyadic_bounded():
    # {x/2, (x+1)/2} is Lebesgue on [0,1]: base-2 averages stay bounded
    rep = del_criterion_diagnostic(dyadic_pair(), HALF, base=2, q=1.0, n_max=2000, samples=100, rng_seed=0)
    assert rep.base == 2
    assert len(rep.e_n) == len(rep.n_values)
    assert rep.tail_slope < 0.05
    assert all(e >= 0 for e in rep.e_n)


def test_del_criterion_requires_rational_affine():
    with pytest.raises(PreconditionError):
        del_criterion_diagnostic(smooth_example(), HALF, base=2, q=1.0, n_max=100)
