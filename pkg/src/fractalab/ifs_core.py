"""Iterated function systems on a compact interval.

Maps are either exact affine contractions (rational or quadratic-field
ratio/translation) or smooth maps drawn from a small parametric catalog
(quadratic perturbations of affine maps, Moebius maps) that carries
hand-declared derivative and Hoelder constants.  Affine arithmetic is exact;
smooth evaluation at certified precision goes through mpmath.

Conventions: a word eta = (eta_1, ..., eta_m) over the alphabet {1..n}
composes left-to-right as f_eta = f_{eta_1} o ... o f_{eta_m}.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from .quadfield import QuadExact, is_exact

_SMOOTH_DPS = 30  # working precision for certified smooth-map enclosures


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold for these inputs."""


def _to_fraction_bounds(x, outward):
    """Rational lo <= x <= hi; pads QuadExact values outward."""
    if isinstance(x, QuadExact):
        lo, hi = x.rational_bounds()
        return lo, hi
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(x)
    # mpmath float from a smooth evaluation: the mpf itself is an exact
    # dyadic rational; only the evaluation error needs the outward pad
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    v = Fraction((-1) ** sign * man) * Fraction(2) ** exp
    return v - outward, v + outward


class Enclosure:
    """Certified interval [lo, hi] (exact rationals) containing a real."""

    def __init__(self, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("enclosure with lo > hi")
        self.lo = lo
        self.hi = hi
        self.prefix_extended = 0  # set by coding_point when it lengthens ω

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def contains_enclosure(self, other):
        return self.lo <= other.lo and other.hi <= self.hi

    def serialize(self):
        w = self.width
        digits = 3 if w == 0 else max(3, 2 - math.floor(math.log10(float(w) or 1e-300)))
        mid = mpmath.mpf(self.mid.numerator) / self.mid.denominator
        return f"{mpmath.nstr(mid, digits)} width={mpmath.nstr(mpmath.mpf(float(w)), 3)}"

    def __repr__(self):
        return f"Enclosure({self.serialize()})"


class AffineMap:
    """x -> r*x + t with exact ratio and translation."""

    kind = "affine"

    def __init__(self, ratio, translation):
        if not is_exact(ratio) or not is_exact(translation):
            raise TypeError("affine maps take exact rational/quadratic data")
        self.ratio = ratio if isinstance(ratio, QuadExact) else Fraction(ratio)
        self.translation = (
            translation if isinstance(translation, QuadExact) else Fraction(translation)
        )

    def __call__(self, x):
        if isinstance(x, (np.ndarray, float, np.floating)):
            return float(self.ratio) * x + float(self.translation)
        return self.ratio * x + self.translation

    def deriv(self, x=None):
        return self.ratio

    @property
    def abs_ratio(self):
        return abs(self.ratio)

    def deriv_range(self):
        r = float(abs(self.ratio))
        return r, r

    def compose(self, other):
        """self o other, exact."""
        return AffineMap(
            self.ratio * other.ratio, self.ratio * other.translation + self.translation
        )

    def fixed_point(self):
        return self.translation / (1 - self.ratio)

    def __eq__(self, other):
        return (
            isinstance(other, AffineMap)
            and self.ratio == other.ratio
            and self.translation == other.translation
        )

    def __repr__(self):
        return f"AffineMap(r={self.ratio}, t={self.translation})"


IDENTITY = AffineMap(1, 0)  # only legal as an empty composition, never inside an Ifs


class SmoothMap:
    """Catalog smooth contraction with declared derivative/Hoelder data.

    f, df, mp_f, mp_df are float and mpmath evaluators; (dmin, dmax) bound
    |f'| over the ambient interval, gamma and holder_c bound
    |f'(x)-f'(y)| <= holder_c*|x-y|^gamma.
    """

    kind = "smooth"

    def __init__(self, name, f, df, mp_f, mp_df, dmin, dmax, gamma, holder_c):
        self.name = name
        self._f = f
        self._df = df
        self.mp_f = mp_f
        self.mp_df = mp_df
        self.dmin = float(dmin)
        self.dmax = float(dmax)
        self.gamma = float(gamma)
        self.holder_c = float(holder_c)
        if not 0 < self.dmin <= self.dmax < 1:
            raise ValueError("smooth map must satisfy 0 < inf|f'| <= sup|f'| < 1")

    def __call__(self, x):
        return self._f(x)

    def deriv(self, x):
        return self._df(x)

    def deriv_range(self):
        return self.dmin, self.dmax

    def __repr__(self):
        return f"SmoothMap({self.name})"


def quadratic_map(r, t, a, interval):
    """f(x) = r*x + t + a*x^2 on the given interval; f' monotone."""
    rf, tf, af = float(r), float(t), float(a)
    lo, hi = float(interval[0]), float(interval[1])
    d_ends = [rf + 2 * af * lo, rf + 2 * af * hi]
    dmin, dmax = min(map(abs, d_ends)), max(map(abs, d_ends))
    if min(d_ends) <= 0:
        raise ValueError("catalog quadratic maps must keep f' positive")
    return SmoothMap(
        name=f"quadratic(r={r}, t={t}, a={a})",
        f=lambda x: rf * x + tf + af * x * x,
        df=lambda x: rf + 2 * af * x,
        mp_f=lambda x: mpmath.mpf(rf) * x + tf + mpmath.mpf(af) * x * x,
        mp_df=lambda x: mpmath.mpf(rf) + 2 * mpmath.mpf(af) * x,
        dmin=dmin,
        dmax=dmax,
        gamma=1.0,
        holder_c=abs(2 * af),
    )


def moebius_map(a, b, c, d, interval):
    """f(x) = (a*x + b)/(c*x + d); the denominator must avoid 0 on I."""
    a, b, c, d = map(float, (a, b, c, d))
    lo, hi = float(interval[0]), float(interval[1])
    dens = [c * lo + d, c * hi + d]
    if min(dens) * max(dens) <= 0:
        raise ValueError("Moebius pole inside the interval")
    det = a * d - b * c

    def f(x):
        return (a * x + b) / (c * x + d)

    def df(x):
        return det / (c * x + d) ** 2

    den_min = min(map(abs, dens))
    den_max = max(map(abs, dens))
    dmin = abs(det) / den_max**2
    dmax = abs(det) / den_min**2
    holder_c = 2 * abs(c * det) / den_min**3  # sup |f''|
    return SmoothMap(
        name=f"moebius({a},{b},{c},{d})",
        f=f,
        df=df,
        mp_f=lambda x: (mpmath.mpf(a) * x + b) / (mpmath.mpf(c) * x + d),
        mp_df=lambda x: mpmath.mpf(det) / (mpmath.mpf(c) * x + d) ** 2,
        dmin=dmin,
        dmax=dmax,
        gamma=1.0,
        holder_c=holder_c,
    )


class ComposedMap:
    """f_{eta_1} o ... o f_{eta_m} over mixed affine/smooth factors."""

    kind = "composed"

    def __init__(self, factors):
        self.factors = list(factors)

    def __call__(self, x):
        for m in reversed(self.factors):
            x = m(x)
        return x

    def mp_call(self, x):
        for m in reversed(self.factors):
            x = m.mp_f(x) if isinstance(m, SmoothMap) else (
                mpmath.mpf(float(m.ratio)) * x + float(m.translation)
            )
        return x

    def deriv(self, x):
        # chain rule: evaluate inner-to-outer, tracking the argument
        vals = [x]
        for m in reversed(self.factors):
            vals.append(m(vals[-1]))
        d = 1.0
        for m, v in zip(reversed(self.factors), vals[:-1]):
            d *= float(m.deriv(v))
        return d

    def deriv_range(self):
        lo = hi = 1.0
        for m in self.factors:
            a, b = m.deriv_range()
            lo *= a
            hi *= b
        return lo, hi


class WeightVector(tuple):
    """Strictly positive exact probability vector over the maps."""

    def __new__(cls, entries):
        vals = tuple(Fraction(e) for e in entries)
        if any(v <= 0 for v in vals):
            raise ValueError("weights must be strictly positive")
        if sum(vals) != 1:
            raise ValueError("weights must sum to exactly 1")
        return super().__new__(cls, vals)

    @classmethod
    def uniform(cls, n):
        return cls([Fraction(1, n)] * n)


class Ifs:
    """Ordered contractions of a compact ambient interval I = [a, b]."""

    def __init__(self, maps, interval, x0=None, name=None):
        if len(maps) < 2:
            raise ValueError("an IFS needs at least two maps")
        self.maps = list(maps)
        lo, hi = interval
        self.interval = (
            lo if isinstance(lo, QuadExact) else Fraction(lo),
            hi if isinstance(hi, QuadExact) else Fraction(hi),
        )
        if not self.interval[0] < self.interval[1]:
            raise ValueError("degenerate ambient interval")
        self.x0 = self.interval_mid() if x0 is None else x0
        self.name = name or "ifs"
        self._validate()

    # -- basic structure --------------------------------------------------

    @property
    def n(self):
        return len(self.maps)

    @property
    def is_affine(self):
        return all(m.kind == "affine" for m in self.maps)

    @property
    def ratios(self):
        return [m.ratio for m in self.maps]

    @property
    def translations(self):
        return [m.translation for m in self.maps]

    def interval_width(self):
        return self.interval[1] - self.interval[0]

    def interval_mid(self):
        lo, hi = self.interval
        return (lo + hi) / 2

    def deriv_bounds(self):
        """(e^{-D'}, e^{-D}) = (inf, sup) of |f'| over all maps and x in I."""
        lo = min(m.deriv_range()[0] for m in self.maps)
        hi = max(m.deriv_range()[1] for m in self.maps)
        return lo, hi

    @property
    def big_d(self):
        """D with sup|f'| = e^{-D}."""
        return -math.log(self.deriv_bounds()[1])

    @property
    def big_d_prime(self):
        """D' with inf|f'| = e^{-D'}."""
        return -math.log(self.deriv_bounds()[0])

    def holder_data(self):
        """(gamma, C) covering every smooth map; affine-only gives C = 0."""
        smooth = [m for m in self.maps if m.kind == "smooth"]
        if not smooth:
            return 1.0, 0.0
        return min(m.gamma for m in smooth), max(m.holder_c for m in smooth)

    def _validate(self):
        lo, hi = self.interval
        fixed = set()
        for i, m in enumerate(self.maps, start=1):
            dmin, dmax = m.deriv_range()
            if not 0 < dmin <= dmax < 1:
                raise ValueError(f"map {i} is not a contraction with f' bounded away from 0")
            if m.kind == "affine":
                img = sorted([m(lo), m(hi)])
                if img[0] < lo or img[1] > hi:
                    raise ValueError(f"map {i} does not map I into I")
                fixed.add(m.fixed_point())
            else:
                with mpmath.workdps(_SMOOTH_DPS):
                    pad = mpmath.mpf(10) ** (-_SMOOTH_DPS + 8)
                    img = sorted([m.mp_f(mpmath.mpf(float(lo))), m.mp_f(mpmath.mpf(float(hi)))])
                    if img[0] < float(lo) - pad or img[1] > float(hi) + pad:
                        raise ValueError(f"map {i} does not map I into I")
                fixed.add(round(_smooth_fixed_point(m, self), 12))
        if len(fixed) < 2:
            raise ValueError("all maps share one fixed point; the attractor is a single point")

    def __repr__(self):
        return f"Ifs({self.name}, n={self.n})"


def _smooth_fixed_point(m, ifs):
    x = float(ifs.interval_mid())
    for _ in range(200):  # Banach iteration converges at rate sup|f'|
        x = m(x)
    return x


def validate_word(ifs, eta):
    for s in eta:
        if not (isinstance(s, int) and 1 <= s <= ifs.n):
            raise ValueError(f"symbol {s!r} out of range 1..{ifs.n}")
    return tuple(eta)


# -- operations ------------------------------------------------------------


def compose_word(ifs, eta):
    """f_eta = f_{eta_1} o ... o f_{eta_m}; exact affine when possible."""
    eta = validate_word(ifs, eta)
    if not eta:
        return IDENTITY
    factors = [ifs.maps[s - 1] for s in eta]
    if all(f.kind == "affine" for f in factors):
        g = factors[0]
        for f in factors[1:]:
            g = g.compose(f)
        return g
    return ComposedMap(factors)


def coding_point(ifs, omega_prefix, target_width):
    """Enclosure of x_omega = lim f_{omega|m}(x0) from a finite prefix.

    If the prefix is too short for the requested width the last symbol is
    cycled until the contraction product suffices; the number of appended
    symbols is reported on the result as .prefix_extended.
    """
    omega_prefix = validate_word(ifs, omega_prefix)
    target_width = Fraction(target_width)
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    if not omega_prefix:
        raise PreconditionError("empty prefix cannot certify a width below width(I)")

    prefix = list(omega_prefix)
    if ifs.is_affine:
        width_i = ifs.interval_width()
        shrink = Fraction(1) if isinstance(width_i, Fraction) else QuadExact(1, 0, width_i.d)
        for s in prefix:
            shrink = shrink * abs(ifs.maps[s - 1].ratio)
        last = abs(ifs.maps[prefix[-1] - 1].ratio)
        extended = 0
        while not shrink * width_i <= target_width:
            prefix.append(prefix[-1])
            shrink = shrink * last
            extended += 1
    else:
        # log-space so that very small targets never underflow a float
        log_shrink = sum(math.log(ifs.maps[s - 1].deriv_range()[1]) for s in prefix)
        log_width = math.log(float(ifs.interval_width()))
        log_target = math.log(target_width.numerator) - math.log(target_width.denominator)
        extended = 0
        log_last = math.log(ifs.maps[prefix[-1] - 1].deriv_range()[1])
        while log_shrink + log_width > log_target - 1e-9:
            prefix.append(prefix[-1])
            log_shrink += log_last
            extended += 1

    lo, hi = ifs.interval
    if all(ifs.maps[s - 1].kind == "affine" for s in prefix):
        g = compose_word(ifs, prefix)
        a, b = g(lo), g(hi)
        if b < a:
            a, b = b, a
        alo, _ = _to_fraction_bounds(a, 0)
        _, bhi = _to_fraction_bounds(b, 0)
        enc = Enclosure(alo, bhi)
    else:
        # working precision follows the target so the rounding pad stays
        # an order of magnitude below the requested width
        digits_needed = max(
            0, -(math.log(target_width.numerator) - math.log(target_width.denominator)) / math.log(10)
        )
        dps = max(_SMOOTH_DPS, int(math.ceil(digits_needed)) + 15)
        with mpmath.workdps(dps):
            g = ComposedMap([ifs.maps[s - 1] for s in prefix])
            a = g.mp_call(mpmath.mpf(float(lo)))
            b = g.mp_call(mpmath.mpf(float(hi)))
            if b < a:
                a, b = b, a
            pad = Fraction(10) ** (-dps + 10)
            alo, _ = _to_fraction_bounds(a, pad)
            _, bhi = _to_fraction_bounds(b, pad)
        enc = Enclosure(alo, bhi)
    enc.prefix_extended = extended
    return enc


def attractor_interval(ifs, depth=64):
    """Interval hull of the attractor via the depth-d cover hull.

    H_0 = I and H_d = hull(U_i f_i(H_{d-1})); the H_d are nested decreasing
    and every one contains K, so the result is a certified over-approximation.
    """
    lo, hi = ifs.interval
    exact = ifs.is_affine
    if not exact:
        lo, hi = mpmath.mpf(float(lo)), mpmath.mpf(float(hi))
    for _ in range(depth):
        pts = []
        for m in ifs.maps:
            if exact:
                pts.extend([m(lo), m(hi)])
            else:
                with mpmath.workdps(_SMOOTH_DPS):
                    if isinstance(m, SmoothMap):
                        pts.extend([m.mp_f(lo), m.mp_f(hi)])
                    else:
                        pts.extend([float(m.ratio) * x + float(m.translation) for x in (lo, hi)])
        nlo, nhi = min(pts), max(pts)
        if nlo == lo and nhi == hi:
            break
        lo, hi = nlo, nhi
    pad = 0 if exact else Fraction(10) ** (-_SMOOTH_DPS + 10)
    alo, _ = _to_fraction_bounds(lo, pad)
    _, bhi = _to_fraction_bounds(hi, pad)
    return Enclosure(alo, bhi)


class DistortionEstimate:
    def __init__(self, value, word, x, y):
        self.value = value
        self.word = word
        self.x = x
        self.y = y

    def __repr__(self):
        return f"DistortionEstimate({self.value:.6g} at {self.word}, x={self.x}, y={self.y})"


def bounded_distortion_constant(ifs, depth, samples, rng_seed=0):
    """max |f_eta'(x)| / |f_eta'(y)| over sampled words and point pairs.

    The word list is the breadth-first enumeration of words of length <=
    depth truncated to `samples` entries, and each word gets a fixed point
    grid plus word-seeded random pairs, so enlarging depth or samples only
    enlarges the sampled set (the estimate is monotone nondecreasing).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if ifs.is_affine:
        lo, hi = ifs.interval
        return DistortionEstimate(1.0, (1,), lo, hi)

    lo, hi = float(ifs.interval[0]), float(ifs.interval[1])
    grid = [lo, hi, 0.5 * (lo + hi), 0.75 * lo + 0.25 * hi, 0.25 * lo + 0.75 * hi]
    best = DistortionEstimate(1.0, (), lo, lo)

    words = []
    frontier = [()]
    while frontier and len(words) < samples:
        nxt = []
        for w in frontier:
            for s in range(1, ifs.n + 1):
                word = w + (s,)
                words.append(word)
                if len(word) < depth:
                    nxt.append(word)
                if len(words) >= samples:
                    break
            if len(words) >= samples:
                break
        frontier = nxt

    for word in words:
        g = ComposedMap([ifs.maps[s - 1] for s in word])
        rng = np.random.default_rng([rng_seed, len(word), hash(word) & 0x7FFFFFFF])
        pts = grid + list(rng.uniform(lo, hi, size=6))
        derivs = [(abs(g.deriv(x)), x) for x in pts]
        dmax, xargs = max(derivs)
        dmin, yargs = min(derivs)
        ratio = dmax / dmin
        if ratio > best.value:
            best = DistortionEstimate(ratio, word, xargs, yargs)
    return best


def linearization_threshold(ifs, beta):
    """Conservative |x-y| threshold eps under which the linearization bound
    |g(x)-g(y)-g'(y)(x-y)| <= |g'(y)| |x-y|^{1+beta} is asserted.

    Solves 4C/kappa' * eps^{gamma-beta1} < min(1-1/e, beta/2) with
    beta1 = gamma - (1-e^{-D gamma})(gamma-beta), with a 10% safety margin.
    """
    gamma, c = ifs.holder_data()
    beta = float(beta)
    if not 0 < beta < gamma:
        raise PreconditionError(f"beta must lie in (0, gamma={gamma})")
    if c == 0:
        return float(ifs.interval_width())
    kappa = math.exp(-ifs.big_d_prime)
    beta1 = gamma - (1 - math.exp(-ifs.big_d * gamma)) * (gamma - beta)
    target = min(1 - 1 / math.e, beta / 2)
    eps = (target * kappa / (4 * c)) ** (1 / (gamma - beta1))
    return 0.9 * min(eps, float(ifs.interval_width()))


def linearization_error(ifs, eta, x, y, beta):
    """Both sides of the linearization inequality at g = f_eta.

    Returns (lhs, rhs); callers assert lhs <= rhs.  Pairs farther apart than
    the computed threshold are rejected as a precondition violation.
    """
    eta = validate_word(ifs, eta)
    eps = linearization_threshold(ifs, beta)
    xf, yf = float(x), float(y)
    if abs(xf - yf) >= eps:
        raise PreconditionError(f"|x-y|={abs(xf - yf):.3g} >= eps={eps:.3g}")
    g = compose_word(ifs, eta)
    if isinstance(g, AffineMap):
        gx, gy, dy = g(Fraction(x)), g(Fraction(y)), g.deriv()
        lhs = abs(gx - gy - dy * (Fraction(x) - Fraction(y)))
        rhs = abs(dy) * Fraction(abs(xf - yf) ** (1 + float(beta)))
        return float(lhs), float(rhs)
    lhs = abs(g(xf) - g(yf) - g.deriv(yf) * (xf - yf))
    rhs = abs(g.deriv(yf)) * abs(xf - yf) ** (1 + float(beta))
    return lhs, rhs


def log_derivative_holder_check(ifs, eta, x, y):
    """(lhs, bound) for |log|f_eta'(x)| - log|f_eta'(y)|| <= bound.

    bound = C * e^{D'} * (1 - e^{-D gamma})^{-1} * |x-y|^gamma, which sums
    the per-factor Hoelder increments along geometrically closer point pairs.
    """
    eta = validate_word(ifs, eta)
    gamma, c = ifs.holder_data()
    xf, yf = float(x), float(y)
    if not eta or xf == yf or c == 0:
        bound = 0.0 if (not eta or xf == yf) else None
        g = compose_word(ifs, eta) if eta else IDENTITY
        if isinstance(g, AffineMap):
            lhs = 0.0
        else:
            lhs = abs(math.log(abs(g.deriv(xf))) - math.log(abs(g.deriv(yf))))
        if bound is None:
            bound = c * math.exp(ifs.big_d_prime) / (1 - math.exp(-ifs.big_d * gamma)) * abs(
                xf - yf
            ) ** gamma
        return lhs, bound
    g = compose_word(ifs, eta)
    if isinstance(g, AffineMap):
        lhs = 0.0
    else:
        lhs = abs(math.log(abs(g.deriv(xf))) - math.log(abs(g.deriv(yf))))
    bound = (
        c
        * math.exp(ifs.big_d_prime)
        / (1 - math.exp(-ifs.big_d * gamma))
        * abs(xf - yf) ** gamma
    )
    return lhs, bound


# -- catalog ----------------------------------------------------------------


def cantor():
    """Middle-thirds Cantor IFS {x/3, (x+2)/3} on [0, 1]."""
    return Ifs(
        [AffineMap(Fraction(1, 3), 0), AffineMap(Fraction(1, 3), Fraction(2, 3))],
        (0, 1),
        name="cantor",
    )


def aperiodic_125():
    """{x/2, (x+1)/3, (x+1)/5} on [0, 1]; log-ratios pairwise irrational."""
    return Ifs(
        [
            AffineMap(Fraction(1, 2), 0),
            AffineMap(Fraction(1, 3), Fraction(1, 3)),
            AffineMap(Fraction(1, 5), Fraction(1, 5)),
        ],
        (0, 1),
        name="aperiodic-125",
    )


def dyadic_pair():
    """{x/2, (x+1)/2} on [0, 1]; the attractor is the full interval."""
    return Ifs(
        [AffineMap(Fraction(1, 2), 0), AffineMap(Fraction(1, 2), Fraction(1, 2))],
        (0, 1),
        name="dyadic-pair",
    )


def pow2_pair():
    """{x/4, (x+7)/8} on [0, 1]; periodic with generator log 2."""
    return Ifs(
        [AffineMap(Fraction(1, 4), 0), AffineMap(Fraction(1, 8), Fraction(7, 8))],
        (0, 1),
        name="pow2-pair",
    )


def bernoulli_convolution(r):
    """{r x - 1, r x + 1} on [-1/(1-r), 1/(1-r)]."""
    one = Fraction(1)
    if isinstance(r, QuadExact):
        m = (one - r).inverse()
        lo, hi = -m, m
    else:
        r = Fraction(r)
        m = one / (one - r)
        lo, hi = -m, m
    return Ifs(
        [AffineMap(r, -1), AffineMap(r, 1)],
        (lo, hi),
        name=f"bernoulli-{r}",
    )


def golden_bernoulli():
    """Bernoulli convolution at r = (sqrt(5)-1)/2; 1/r is Pisot."""
    from .quadfield import golden_ratio_conjugate

    ifs = bernoulli_convolution(golden_ratio_conjugate())
    ifs.name = "bernoulli-golden"
    return ifs


def smooth_example():
    """{x/3 + x^2/20, (x+2)/3} on [0, 1]: one quadratic, one affine map."""
    return Ifs(
        [
            quadratic_map(Fraction(1, 3), 0, Fraction(1, 20), (0, 1)),
            AffineMap(Fraction(1, 3), Fraction(2, 3)),
        ],
        (0, 1),
        name="smooth-example",
    )


def moebius_example():
    """{1/(x+2), x/3 + 2/3} on [0, 1]."""
    return Ifs(
        [moebius_map(0, 1, 1, 2, (0, 1)), AffineMap(Fraction(1, 3), Fraction(2, 3))],
        (0, 1),
        name="moebius-example",
    )


def registered_affine():
    """Named affine IFSs with default weights, used by the packaged suites."""
    return {
        "cantor": (cantor(), WeightVector.uniform(2)),
        "aperiodic-125": (aperiodic_125(), WeightVector([Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])),
        "dyadic-pair": (dyadic_pair(), WeightVector.uniform(2)),
        "pow2-pair": (pow2_pair(), WeightVector([Fraction(1, 3), Fraction(2, 3)])),
        "bernoulli-1/3": (bernoulli_convolution(Fraction(1, 3)), WeightVector.uniform(2)),
    }


def registered_smooth():
    return {
        "smooth-example": (smooth_example(), WeightVector.uniform(2)),
        "moebius-example": (moebius_example(), WeightVector.uniform(2)),
    }
