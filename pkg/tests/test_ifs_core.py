"""Maps, word composition, coding enclosures, distortion and linearization."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractalab.ifs_core import (
    AffineMap,
    Ifs,
    PreconditionError,
    WeightVector,
    aperiodic_125,
    attractor_interval,
    bernoulli_convolution,
    bounded_distortion_constant,
    cantor,
    coding_point,
    compose_word,
    dyadic_pair,
    golden_bernoulli,
    linearization_error,
    linearization_threshold,
    log_derivative_holder_check,
    moebius_example,
    pow2_pair,
    registered_affine,
    registered_smooth,
    smooth_example,
)

F = Fraction


def test_affine_map_call_and_fixed_point():
    f = AffineMap(F(1, 3), F(2, 3))
    assert f(F(0)) == F(2, 3)
    assert f(F(1)) == F(1)
    assert f.fixed_point() == F(1)
    g = AffineMap(F(1, 2), 0)
    assert g.fixed_point() == 0


def test_compose_word_is_left_to_right():
    ifs = cantor()  # f1 = x/3, f2 = (x+2)/3
    g12 = compose_word(ifs, [1, 2])  # f1 o f2
    assert g12(F(0)) == F(2, 9)
    assert g12.ratio == F(1, 9)
    g21 = compose_word(ifs, [2, 1])  # f2 o f1
    assert g21(F(0)) == F(2, 3)
    # composition is not commutative here
    assert g12(F(0)) != g21(F(0))


def test_compose_word_ratio_is_product():
    ifs = aperiodic_125()
    g = compose_word(ifs, [1, 2, 3, 1])
    assert g.ratio == F(1, 2) * F(1, 3) * F(1, 5) * F(1, 2)


def test_weight_vector_must_sum_to_one():
    WeightVector([F(1, 2), F(1, 2)])
    with pytest.raises(ValueError):
        WeightVector([F(1, 2), F(1, 3)])


def test_ifs_requires_contraction_and_invariance():
    with pytest.raises(ValueError):
        Ifs([AffineMap(F(3, 2), 0), AffineMap(F(1, 3), F(2, 3))], (F(0), F(1)))
    with pytest.raises(ValueError):
        # translate out of the interval
        Ifs([AffineMap(F(1, 3), F(5)), AffineMap(F(1, 3), 0)], (F(0), F(1)))


def test_coding_point_periodic_word_hits_exact_limit():
    # omega = (1,2,1,2,...) under {x/2, x/2+1/2}: limit solves x = (x/2+1/2)/2
    ifs = dyadic_pair()
    enc = coding_point(ifs, [1, 2] * 40, F(1, 2**60))
    assert enc.lo <= F(1, 3) <= enc.hi
    assert enc.width <= F(1, 2**60)


def test_coding_point_auto_extends_short_prefix():
    ifs = cantor()
    enc = coding_point(ifs, [1], F(1, 3**30))
    assert enc.prefix_extended >= 29
    assert enc.width <= F(1, 3**30)
    # repeating symbol 1 converges to the fixed point 0
    assert enc.lo == 0


def test_coding_point_smooth_reaches_tiny_widths():
    enc = coding_point(smooth_example(), [1, 2, 1, 2], F(1, 10**80))
    assert enc.width <= F(1, 10**80)
    assert enc.lo <= enc.hi


def test_coding_point_exact_quadratic_ratios():
    ifs = golden_bernoulli()
    enc = coding_point(ifs, [1, 2, 2, 1], F(1, 10**12))
    assert enc.width <= F(1, 10**12)
    lo, hi = ifs.interval
    lo_f, hi_f = lo.rational_bounds()[0], hi.rational_bounds()[1]
    assert lo_f <= enc.lo and enc.hi <= hi_f


def test_attractor_interval_examples():
    # {x/2, (x+1)/3, (x+1)/5}: attractor hull [0, 1/2] inside [0,1]
    maps = [AffineMap(F(1, 2), 0), AffineMap(F(1, 3), F(1, 3)), AffineMap(F(1, 5), F(1, 5))]
    ifs = Ifs(maps, (F(0), F(1)), name="hull-test")
    enc = attractor_interval(ifs)
    assert enc.lo == 0
    # certified over-approximation of sup K = 1/2, tight to the hull depth
    assert F(1, 2) <= enc.hi <= F(1, 2) + F(1, 3**60)
    enc = attractor_interval(dyadic_pair())
    assert (enc.lo, enc.hi) == (0, 1)
    enc = attractor_interval(cantor())
    assert (enc.lo, enc.hi) == (0, 1)


def test_attractor_interval_contains_coded_points():
    ifs = pow2_pair()
    hull = attractor_interval(ifs)
    for word in ([1, 1, 2], [2, 2, 2], [2, 1, 1, 1]):
        enc = coding_point(ifs, word, F(1, 10**9))
        assert hull.lo <= enc.lo and enc.hi <= hull.hi


def test_bounded_distortion_affine_is_one():
    for ifs, _w in registered_affine().values():
        est = bounded_distortion_constant(ifs, depth=6, samples=50)
        assert est.value == 1.0


def test_bounded_distortion_smooth_monotone_in_depth():
    ifs = smooth_example()
    prev = 1.0
    values = []
    for depth in (1, 2, 4):
        est = bounded_distortion_constant(ifs, depth=depth, samples=200, rng_seed=1)
        values.append(est.value)
        assert est.value >= prev - 1e-12
        prev = est.value
    assert values[-1] < 8.0  # distortion stays uniformly bounded


def test_linearization_affine_is_exact():
    ifs = cantor()
    eps = linearization_threshold(ifs, beta=0.5)
    assert eps > 0
    x, y = F(1, 10), F(1, 10) + eps / 2
    lhs, rhs = linearization_error(ifs, [1, 2, 1], x, y, beta=0.5)
    assert lhs == 0
    assert rhs > 0


def test_linearization_requires_close_points():
    ifs = cantor()
    eps = linearization_threshold(ifs, beta=0.5)
    with pytest.raises(PreconditionError):
        linearization_error(ifs, [1, 2], F(0), F(0) + 2 * eps, beta=0.5)


def test_linearization_smooth_below_bound():
    ifs = smooth_example()
    beta = 0.5
    eps = linearization_threshold(ifs, beta)
    assert 0 < eps < float(ifs.interval_width())
    x = 0.3
    y = x + eps / 4
    lhs, rhs = linearization_error(ifs, [1, 2, 1, 1], x, y, beta)
    assert lhs <= rhs


def test_log_derivative_holder_check_smooth():
    ifs = smooth_example()
    rep = log_derivative_holder_check(ifs, [2, 1, 2], 0.2, 0.21)
    assert rep


def test_moebius_maps_contract():
    ifs = moebius_example()
    dmin, dmax = ifs.deriv_bounds()
    assert 0 < dmin <= dmax < 1


def test_registered_catalogs():
    aff = registered_affine()
    assert len(aff) >= 5
    for ifs, w in aff.values():
        assert ifs.is_affine
        assert sum(w) == 1
    for ifs, _w in registered_smooth().values():
        assert not ifs.is_affine


def test_bernoulli_convolution_interval():
    ifs = bernoulli_convolution(F(1, 3))
    lo, hi = ifs.interval
    assert lo == -F(3, 2) and hi == F(3, 2)
    enc = attractor_interval(ifs)
    assert (enc.lo, enc.hi) == (lo, hi)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=1, max_size=20))
def test_cantor_enclosure_contains_word_image(word):
    ifs = cantor()
    g = compose_word(ifs, word)
    enc = coding_point(ifs, word, F(1, 3 ** (len(word) + 5)))
    # the enclosure sits inside the word cylinder f_eta([0,1])
    a, b = g(F(0)), g(F(1))
    assert min(a, b) <= enc.lo and enc.hi <= max(a, b)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(1, 3), min_size=1, max_size=14),
    st.lists(st.integers(1, 3), min_size=1, max_size=14),
)
def test_word_composition_is_associative(w1, w2):
    ifs = aperiodic_125()
    g = compose_word(ifs, w1 + w2)
    h = compose_word(ifs, w1).compose(compose_word(ifs, w2))
    assert g.ratio == h.ratio
    assert g.translation == h.translation
