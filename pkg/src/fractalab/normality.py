"""Digit statistics of sampled points: certified digit extraction, base-p
orbit Weyl sums, star discrepancy and the stopped-word piece decomposition
used to transfer Fourier decay to orbit equidistribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cocycle_walk import lyapunov
from .ifs_core import PreconditionError, compose_word
from .quadfield import QuadExact

GUARD_DIGITS = 8


class DigitExtractionError(RuntimeError):
    """Boundary-straddle retry budget exhausted."""


def _digits_of_fraction(x, base, count):
    """First `count` digits of frac(x) in the given base (exact)."""
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    num -= (num // den) * den  # frac(x), exact even for huge denominators
    digits = []
    for _ in range(count):
        num *= base
        d, num = divmod(num, den)
        digits.append(int(d))
    return digits


@dataclass
class DigitStream:
    base: int
    digits: list
    certified_upto: int
    source: str
    prefix_len: int = 0

    def head(self, n):
        if n > self.certified_upto:
            raise PreconditionError(f"only {self.certified_upto} digits are certified")
        return self.digits[:n]


def digit_stream_of_rational(x, base, n_digits):
    """Exact digit stream of a rational number (digits of frac(x))."""
    digits = _digits_of_fraction(x, base, n_digits)
    return DigitStream(base=base, digits=digits, certified_upto=n_digits, source=f"rational {x}")


def _common_digits(lo, hi, base, count):
    """Digits shared by every point of [lo, hi], up to count."""
    dlo = _digits_of_fraction(lo, base, count)
    if math.floor(lo) != math.floor(hi):
        return []
    dhi = _digits_of_fraction(hi, base, count)
    out = []
    for a, b in zip(dlo, dhi):
        if a != b:
            break
        out.append(a)
    return out


def digits_of_sample(ifs, p_weights, base, n_digits, rng_seed=0, max_extensions=64):
    """Certified base-`base` digits of a nu-sampled point.

    Draws the symbol sequence from the seed and keeps lengthening the
    drawn prefix (the same stream, so certified digits never change) until
    the enclosure f_eta(I) lies inside a single digit cell at depth
    n_digits; GUARD_DIGITS extra digits are resolved before certifying.
    """
    from .ifs_core import coding_point

    if base < 2:
        raise ValueError("base must be >= 2")
    rng = np.random.default_rng(rng_seed)
    cumw = np.cumsum([float(w) for w in p_weights])
    dmax = ifs.deriv_bounds()[1]
    width = float(ifs.interval_width())
    need = Fraction(base) ** -(n_digits + GUARD_DIGITS)
    log_need = -(n_digits + GUARD_DIGITS) * math.log(base)
    base_len = max(1, int(math.ceil((math.log(width) - log_need) / -math.log(dmax))))

    prefix = [int(s) + 1 for s in np.searchsorted(cumw, rng.random(base_len), side="right")]
    for attempt in range(max_extensions + 1):
        enc = coding_point(ifs, prefix, need)
        digits = _common_digits(enc.lo, enc.hi, base, n_digits + GUARD_DIGITS)
        if len(digits) >= n_digits:
            return DigitStream(
                base=base,
                digits=digits[:n_digits],
                certified_upto=n_digits,
                source=f"{ifs.name} seed={rng_seed}",
                prefix_len=len(prefix),
            )
        # straddling a digit boundary: extend the sequence and shrink
        extra = max(4, base_len // 8)
        prefix.extend(
            int(s) + 1 for s in np.searchsorted(cumw, rng.random(extra), side="right")
        )
        need /= Fraction(base) ** 2
    raise DigitExtractionError(
        f"point still straddles a base-{base} cell boundary after "
        f"{max_extensions} prefix extensions (seed {rng_seed})"
    )


@dataclass
class BlockChi2:
    block_len: int
    statistic: float
    dof: int
    p_value: float
    counts: dict


@dataclass
class DigitFrequencyReport:
    base: int
    n: int
    blocks: list  # BlockChi2 per block length
    min_p_value: float


def digit_frequency_test(stream, n, block_len):
    """Chi-square uniformity test over digit blocks of length 1..block_len."""
    from scipy import stats as sps

    if n > stream.certified_upto:
        raise PreconditionError("N exceeds the certified digit count")
    digits = stream.digits[:n]
    base = stream.base
    reports = []
    for ell in range(1, block_len + 1):
        m = n // ell
        counts = {}
        for i in range(m):
            block = tuple(digits[i * ell : (i + 1) * ell])
            counts[block] = counts.get(block, 0) + 1
        cells = base**ell
        expected = m / cells
        stat = sum((counts.get(b, 0) - expected) ** 2 for b in counts) / expected
        stat += (cells - len(counts)) * expected  # empty cells
        dof = cells - 1
        pval = float(sps.chi2.sf(stat, dof))
        reports.append(
            BlockChi2(block_len=ell, statistic=stat, dof=dof, p_value=pval, counts=counts)
        )
    return DigitFrequencyReport(
        base=base, n=n, blocks=reports, min_p_value=min(r.p_value for r in reports)
    )


@dataclass
class OrbitStats:
    base: int
    n: int
    digit_counts: dict
    block_counts: dict  # {block length: {block: count}}
    weyl: dict  # {q: complex W_{q,N}}
    orbit_period: int = 0  # exact-rational orbits only; 0 when not computed


def weyl_sums(source, base, q_set, n, block_len=3):
    """Weyl sums W_{q,N} = (1/N) sum_{m<=N} e(q * base^m * x) plus digit and
    block counts of the orbit.

    `source` is an exact rational x (big-integer modular orbit, any N) or a
    DigitStream (orbit read off certified digits; N is capped so that every
    orbit value is accurate to base^-(certified - n - 12))."""
    if isinstance(source, DigitStream):
        if source.base != base:
            raise ValueError("digit stream base mismatch")
        slack = 12
        if n + slack > source.certified_upto:
            raise PreconditionError(
                f"N={n} needs {n + slack} certified digits, have {source.certified_upto}"
            )
        digits = source.digits
        # orbit value T^m x ~ 0.d_{m+1} d_{m+2} ... up to `slack` digits
        angles = np.empty(n)
        for m in range(1, n + 1):
            v = 0.0
            scale = 1.0
            for j in range(m, min(m + 40, len(digits))):
                scale /= base
                v += digits[j] * scale
            angles[m - 1] = v
        period = 0
        digit_counts = {}
        for m in range(1, n + 1):
            digit_counts[digits[m]] = digit_counts.get(digits[m], 0) + 1
        block_counts = _orbit_blocks(digits[1 : n + 1], base, block_len)
    else:
        x = Fraction(source)
        frac = x - math.floor(x)
        num0, den = frac.numerator, frac.denominator
        angles = np.empty(n)
        num = num0
        seen = {num: 0}
        period = 0
        for m in range(n):
            num = (num * base) % den
            angles[m] = num / den
            if num in seen and period == 0:
                period = m + 1 - seen[num]
            elif period == 0:
                seen[num] = m + 1
        dig = [int(v) for v in np.floor(angles * base)]
        digit_counts = {}
        for d in dig:
            digit_counts[d] = digit_counts.get(d, 0) + 1
        block_counts = _orbit_blocks(dig, base, block_len)

    weyl = {}
    phases = np.exp(2j * np.pi * angles)
    for q in q_set:
        qf = float(q)
        if qf == 0:
            weyl[q] = 1 + 0j
        else:
            weyl[q] = complex(np.mean(phases**int(q))) if float(q).is_integer() else complex(
                np.mean(np.exp(2j * np.pi * qf * angles))
            )
    return OrbitStats(
        base=base,
        n=n,
        digit_counts=digit_counts,
        block_counts=block_counts,
        weyl=weyl,
        orbit_period=period,
    )


def _orbit_blocks(digits, base, block_len):
    out = {}
    for ell in range(1, block_len + 1):
        counts = {}
        for i in range(len(digits) - ell + 1):
            b = tuple(digits[i : i + ell])
            counts[b] = counts.get(b, 0) + 1
        out[ell] = counts
    return out


def star_discrepancy(points):
    """Exact star discrepancy D*_N of points in [0, 1) (sorted-points formula)."""
    pts = sorted(float(x) for x in points)
    n = len(pts)
    if n == 0:
        raise ValueError("empty point set")
    if any(not 0 <= x < 1 for x in pts):
        raise ValueError("points must lie in [0, 1)")
    best = 0.0
    for i, x in enumerate(pts, start=1):
        best = max(best, i / n - x, x - (i - 1) / n)
    return best


@dataclass
class PieceDescriptor:
    n: int
    word: tuple
    ratio: Fraction  # p^n * r_eta, exact
    offset: Fraction  # frac of p^n * t_eta, exact
    beta: int


def martingale_pieces(ifs, p_weights, omega_prefix, base, n_count, h=0.0, chi=None):
    """Stopped-word pieces T_{base}^n o f_{omega|beta_{n,h}} for n < n_count.

    beta_{n,h} = tau~_{n log(base)/chi} + tau~_h applied to the shifted tail;
    each piece is affine x -> (base^n r_eta) x + base^n t_eta with the exact
    contracted ratio base^n * r_eta in [C0, 1], C0 = r_min^2 e^{-h chi}.
    The convention tau~_0 = 0 makes the h = 0 pieces the plain stopping
    moment where the word's derivative first drops to base^{-n}.
    """
    if not ifs.is_affine or any(isinstance(m.ratio, QuadExact) for m in ifs.maps):
        raise PreconditionError("martingale pieces require rational affine maps")
    if chi is None:
        chi = lyapunov(ifs, p_weights, "exact").value
    word = list(omega_prefix)
    absr = [abs(m.ratio) for m in ifs.maps]
    # exact running products |r_{eta|m}|; prods[m] is the product over eta|m
    prods = [Fraction(1)]
    for s in word:
        prods.append(prods[-1] * absr[s - 1])
    pieces = []
    for n in range(n_count):
        thr1 = Fraction(base) ** -n
        b1 = 0
        while prods[b1] > thr1:  # first m with |r_{eta|m}| <= base^{-n}
            b1 += 1
            if b1 >= len(prods):
                raise PreconditionError("omega prefix exhausted before beta_{n,h}")
        if h > 0:
            # extend by the first m with the extra contraction <= e^{-h chi}
            extra = math.exp(-h * chi)
            b2 = b1 + 1
            while b2 < len(prods) and float(prods[b2] / prods[b1]) > extra:
                b2 += 1
            if b2 >= len(prods) and float(prods[-1] / prods[b1]) > extra:
                raise PreconditionError("omega prefix exhausted before beta_{n,h}")
            beta = b2
        else:
            beta = b1
        eta = tuple(word[:beta])
        g = compose_word(ifs, eta)
        ratio = Fraction(base) ** n * g.ratio
        shifted = Fraction(base) ** n * g.translation
        offset = shifted - math.floor(shifted)
        pieces.append(PieceDescriptor(n=n, word=eta, ratio=ratio, offset=offset, beta=beta))
    return pieces


def piece_c0(ifs, base, h=0.0, chi=None):
    """Lower bracket C0 for the piece ratios |base^n r_eta|."""
    if chi is None:
        chi = lyapunov(ifs, [Fraction(1, ifs.n)] * ifs.n, "exact").value
    rmin = min(float(abs(m.ratio)) for m in ifs.maps)
    return rmin * rmin * math.exp(-h * chi)
