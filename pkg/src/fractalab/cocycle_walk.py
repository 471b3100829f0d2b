"""Derivative-cocycle random walks, stopping times and conditional laws.

The walk attached to (Phi, p) has increments X_i = -log|f'_{omega_i}(x)|
evaluated at the coding point x of the shifted sequence, partial sums S_n,
and stopping times tau_k = min{n : S_n >= k*chi} where chi is the Lyapunov
exponent.  For affine systems the increments depend only on the symbols and
everything is simulated exactly up to float rounding; smooth systems get a
backward-evaluation scheme whose coding-point error is below 1e-15 * width(I).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ifs_core import PreconditionError

_CHUNK = 100_000  # paths simulated per chunk to bound peak memory


class TraceTooShortError(ValueError):
    pass


def _weights_cumulative(p, n):
    w = np.array([float(x) for x in p], dtype=float)
    if len(w) != n:
        raise ValueError("weight vector length does not match the IFS")
    return np.cumsum(w)


def _draw_symbols(rng, cumw, shape):
    """0-based symbol matrix with P(symbol = i) = p_{i+1}."""
    return np.searchsorted(cumw, rng.random(shape), side="right").astype(np.int64)


def _neg_log_ratios(ifs):
    return np.array([-math.log(float(abs(m.ratio))) for m in ifs.maps])


def _neg_log_sup_deriv(ifs):
    return np.array([-math.log(m.deriv_range()[1]) for m in ifs.maps])


def _smooth_tail_length(ifs):
    # coding-point error <= dmax^T * width(I) <= 1e-16 * width(I)
    return int(math.ceil(16 * math.log(10) / ifs.big_d)) + 1


def _walk_matrix(ifs, p, n_paths, length, rng):
    """(symbols, X) for n_paths walks of the given length.

    symbols is 0-based (n_paths, length); X[i, j] is the increment
    X_{j+1} = -log|f'_{omega_{j+1}}(x_{sigma^{j+1} omega})|.
    """
    cumw = _weights_cumulative(p, ifs.n)
    if ifs.is_affine:
        sym = _draw_symbols(rng, cumw, (n_paths, length))
        return sym, _neg_log_ratios(ifs)[sym]

    tail = _smooth_tail_length(ifs)
    sym = _draw_symbols(rng, cumw, (n_paths, length + tail))
    x = np.full(n_paths, float(ifs.x0))
    xnext = np.empty(n_paths)
    incs = np.empty((n_paths, length))
    for j in range(length + tail - 1, -1, -1):
        col = sym[:, j]
        xnext[:] = x
        for i, m in enumerate(ifs.maps):
            mask = col == i
            if mask.any():
                x[mask] = m(xnext[mask])
                if j < length:
                    if m.kind == "affine":
                        incs[mask, j] = -math.log(float(abs(m.ratio)))
                    else:
                        incs[mask, j] = -np.log(np.abs(m.deriv(xnext[mask])))
    return sym[:, :length], incs


@dataclass
class WalkTrace:
    symbols: np.ndarray  # 1-based symbols, shape (n,)
    X: np.ndarray
    S: np.ndarray

    @property
    def word(self):
        return tuple(int(s) for s in self.symbols)

    def __len__(self):
        return len(self.symbols)


@dataclass
class StopRecord:
    k: float
    tau: int
    S_tau: float
    tau_tilde: int
    S_tilde_tau: float


@dataclass
class LyapunovEstimate:
    value: float
    stderr: float
    mode: str


def lyapunov(ifs, p, mode="exact", n=100_000, rng_seed=0):
    """Lyapunov exponent chi = -E log|f'| under the stationary sampling."""
    if mode == "exact":
        if not ifs.is_affine:
            raise PreconditionError("exact Lyapunov exponent requires an affine IFS")
        chi = -sum(float(w) * math.log(float(abs(m.ratio))) for w, m in zip(p, ifs.maps))
        return LyapunovEstimate(chi, 0.0, "exact")
    if mode != "monte_carlo":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(rng_seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        _, inc = _walk_matrix(ifs, p, 1, m, rng)
        total += float(inc.sum())
        total_sq += float((inc**2).sum())
        done += m
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return LyapunovEstimate(mean, math.sqrt(var / n), "monte_carlo")


def simulate_walk(ifs, p, omega_length, rng_seed=0):
    if omega_length < 1:
        raise ValueError("omega_length must be >= 1")
    rng = np.random.default_rng(rng_seed)
    sym, inc = _walk_matrix(ifs, p, 1, omega_length, rng)
    X = inc[0]
    return WalkTrace(symbols=sym[0] + 1, X=X, S=np.cumsum(X))


def stop(trace, k, chi):
    """StopRecord with tau_k minimal s.t. S_{tau_k} >= k*chi.

    tau-tilde uses the per-factor supremum bound on the composite derivative
    (exact for affine maps, a valid earlier-stopping bound for smooth ones).
    """
    target = k * chi
    S = trace.S
    if S[-1] < target:
        raise TraceTooShortError(f"S_n max {S[-1]:.4g} < k*chi = {target:.4g}")
    j = int(np.searchsorted(S, target, side="left"))
    # searchsorted('left') returns the first index with S >= target
    tau = j + 1
    s_tau = float(S[j])
    st = np.cumsum(_tilde_increments(trace))
    if st[-1] < target:
        raise TraceTooShortError("tilde walk did not reach k*chi")
    jt = int(np.searchsorted(st, target, side="left"))
    return StopRecord(k=k, tau=tau, S_tau=s_tau, tau_tilde=jt + 1, S_tilde_tau=float(st[jt]))


def _tilde_increments(trace):
    # for affine traces X depends only on the symbol, and sup|f'| = |r|,
    # so the tilde increments coincide with X; trace carries enough info
    return trace.X


@dataclass
class GammaLaw:
    """Limiting law of S_{tau_k} on [k*chi, k*chi + D'].

    Represented as a mixture over atoms (w_i, X_i) of the conditional X_1
    distribution on the suffix cylinder: density(t) proportional to
    P(X_1 >= t - k*chi).
    """

    kchi: float
    d_prime: float
    atoms: list  # (weight, X) pairs, weights summing to 1
    mean_x: float = field(init=False)

    def __post_init__(self):
        self.mean_x = sum(w * x for w, x in self.atoms)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        u = t - self.kchi
        out = np.zeros_like(u)
        for w, x in self.atoms:
            out += w * ((u >= 0) & (u <= x))
        out = out / self.mean_x
        return float(out) if out.ndim == 0 else out

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        u = np.clip(t - self.kchi, 0.0, None)
        out = np.zeros_like(u)
        for w, x in self.atoms:
            out += w * np.minimum(u, x)
        out = out / self.mean_x
        return float(out) if out.ndim == 0 else out

    def mass(self):
        return self.cdf(self.kchi + self.d_prime)

    def max_density(self):
        return self.density(self.kchi)


def gamma_law(ifs, p, eta_prime, k, chi, n_atoms=256, rng_seed=0):
    """Gamma law of the cell with suffix eta_prime.

    Affine systems give an exact single atom (X_1 is constant on the
    cylinder); smooth systems sample coding points of continuations to build
    an atom mixture.
    """
    if not eta_prime:
        raise PreconditionError("eta_prime must be a nonempty word")
    first = eta_prime[0]
    if not 1 <= first <= ifs.n:
        raise ValueError("suffix symbol out of range")
    kchi = float(k) * float(chi)
    dp = ifs.big_d_prime
    if ifs.is_affine:
        x1 = -math.log(float(abs(ifs.maps[first - 1].ratio)))
        return GammaLaw(kchi=kchi, d_prime=dp, atoms=[(1.0, x1)])
    # smooth: X_1 = -log|f'_{first}(x)| with x a coding point of sequences
    # extending the rest of eta_prime
    rng = np.random.default_rng(rng_seed)
    tail = _smooth_tail_length(ifs)
    cumw = _weights_cumulative(p, ifs.n)
    body = list(eta_prime[1:])
    sym = _draw_symbols(rng, cumw, (n_atoms, tail))
    x = np.full(n_atoms, float(ifs.x0))
    for j in range(tail - 1, -1, -1):
        for i, m in enumerate(ifs.maps):
            mask = sym[:, j] == i
            if mask.any():
                x[mask] = m(x[mask])
    for s in reversed(body):
        x = ifs.maps[s - 1](x)
    fm = ifs.maps[first - 1]
    if fm.kind == "affine":
        xs = np.full(n_atoms, -math.log(float(abs(fm.ratio))))
    else:
        xs = -np.log(np.abs(fm.deriv(x)))
    w = 1.0 / n_atoms
    return GammaLaw(kchi=kchi, d_prime=dp, atoms=[(w, float(v)) for v in xs])


@dataclass
class CellStat:
    prefix: tuple
    suffix: tuple
    count: int
    ks: float


@dataclass
class LltReport:
    k: float
    h: float
    h_prime: float
    paths: int
    cells: list  # CellStat, sorted by (prefix, suffix)
    weighted_median_ks: float
    excluded_mass: float
    min_cell: int

    def mass_above(self, threshold):
        tot = sum(c.count for c in self.cells)
        return sum(c.count for c in self.cells if c.ks > threshold) / tot

    def summary_row(self):
        return {
            "k": self.k,
            "h": self.h,
            "h_prime": self.h_prime,
            "paths": self.paths,
            "weighted_median_ks": self.weighted_median_ks,
            "excluded_mass": self.excluded_mass,
        }


def _ks_uniform(samples, kchi, x1):
    """KS distance between samples and the uniform law on [kchi, kchi+x1]."""
    u = np.sort((samples - kchi) / x1)
    n = len(u)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    u = np.clip(u, 0.0, 1.0)
    return float(max(np.max(grid_hi - u), np.max(u - grid_lo)))


def _weighted_median(values, weights):
    order = np.argsort(values)
    v, w = np.asarray(values)[order], np.asarray(weights, dtype=float)[order]
    cum = np.cumsum(w)
    return float(v[int(np.searchsorted(cum, 0.5 * cum[-1]))])


def conditional_llt_experiment(
    ifs, p, k, h, h_prime, paths, rng_seed=0, chi=None, min_cell=30
):
    """Per-cell empirical law of S_{tau_k} against its Gamma law.

    Paths are binned by cell key (prefix omega|tau~_h, suffix of length
    tau~_{h'} after tau_k - 1); per-cell Kolmogorov distances are reported
    with the P-weighted median over cells holding at least min_cell samples.
    Only affine systems are supported: the cell partition needs the exact
    tilde walk, which is only available symbol-wise in the affine case.
    """
    if not ifs.is_affine:
        raise PreconditionError(
            "conditional LLT cells require an affine IFS (exact tilde walk)"
        )
    if chi is None:
        chi = lyapunov(ifs, p, "exact").value
    logr = _neg_log_ratios(ifs)
    d = ifs.big_d
    dp = ifs.big_d_prime
    length = int(math.ceil(((k + h + h_prime) * chi + 3 * dp) / d)) + 4
    rng = np.random.default_rng(rng_seed)
    cumw = _weights_cumulative(p, ifs.n)

    cells = {}
    done = 0
    while done < paths:
        m = min(_CHUNK, paths - done)
        sym = _draw_symbols(rng, cumw, (m, length))
        S = np.cumsum(logr[sym], axis=1)
        # tau_k: first 0-based column j with S >= k*chi
        j = np.argmax(S >= k * chi, axis=1)
        s_tau = S[np.arange(m), j]
        base = np.where(j > 0, S[np.arange(m), np.maximum(j - 1, 0)], 0.0)
        for row in range(m):
            jr = int(j[row])
            if h > 0:
                ph = int(np.searchsorted(S[row], h * chi, side="left"))
                prefix = tuple(int(s) + 1 for s in sym[row, : ph + 1])
            else:
                prefix = ()
            target = base[row] + h_prime * chi
            q = int(np.searchsorted(S[row], target, side="left"))
            suffix = tuple(int(s) + 1 for s in sym[row, jr : q + 1])
            cells.setdefault((prefix, suffix), []).append(float(s_tau[row]))
        done += m

    stats = []
    excluded = 0
    for (prefix, suffix), vals in sorted(cells.items()):
        arr = np.array(vals)
        x1 = logr[suffix[0] - 1]
        ks = _ks_uniform(arr, k * chi, x1)
        stats.append(CellStat(prefix=prefix, suffix=suffix, count=len(vals), ks=ks))
        if len(vals) < min_cell:
            excluded += len(vals)
    included = [c for c in stats if c.count >= min_cell]
    if included:
        med = _weighted_median([c.ks for c in included], [c.count for c in included])
    else:
        med = float("nan")
    return LltReport(
        k=k,
        h=h,
        h_prime=h_prime,
        paths=paths,
        cells=stats,
        weighted_median_ks=med,
        excluded_mass=excluded / paths,
        min_cell=min_cell,
    )


def growing_h_llt_experiment(ifs, p, k, h_prime, paths, rng_seed=0, h=None, **kw):
    """Conditional LLT run with the prefix horizon h growing as k/2."""
    if h is None:
        h = k / 2
    return conditional_llt_experiment(ifs, p, k, h, h_prime, paths, rng_seed, **kw)


@dataclass
class CltReport:
    n: int
    paths: int
    ks: float
    fitted_var: float
    zero_variance: bool


def clt_experiment(ifs, p, n, paths, rng_seed=0):
    """Empirical law of (S_n - n*chi)/sqrt(n) vs the best-fit Gaussian."""
    from scipy import stats as sps

    rng = np.random.default_rng(rng_seed)
    if ifs.is_affine:
        chi = lyapunov(ifs, p, "exact").value
        logr = _neg_log_ratios(ifs)
        w = np.array([float(x) for x in p])
        counts = rng.multinomial(n, w, size=paths)
        s_n = counts @ logr
    else:
        chi = lyapunov(ifs, p, "monte_carlo", n=1_000_000, rng_seed=rng_seed + 1).value
        s_chunks = []
        done = 0
        while done < paths:
            m = min(_CHUNK // max(n // 256, 1), paths - done)
            _, inc = _walk_matrix(ifs, p, m, n, rng)
            s_chunks.append(inc.sum(axis=1))
            done += m
        s_n = np.concatenate(s_chunks)
    z = (s_n - n * chi) / math.sqrt(n)
    var = float(z.var())
    if var < 1e-20:
        return CltReport(n=n, paths=paths, ks=1.0, fitted_var=var, zero_variance=True)
    ks = float(sps.kstest(z, "norm", args=(0.0, math.sqrt(var))).statistic)
    return CltReport(n=n, paths=paths, ks=ks, fitted_var=var, zero_variance=False)


def bracket_check(ifs, p, pairs, rng_seed=0, k_max=50.0, ks_per_path=10):
    """Count violations of S_{tau_k} in [k*chi, k*chi + D'] over sampled
    (path, k) pairs; the bracket is an exact identity, so the count
    should be zero."""
    chi = lyapunov(ifs, p, "exact").value if ifs.is_affine else lyapunov(
        ifs, p, "monte_carlo", n=1_000_000, rng_seed=rng_seed + 1
    ).value
    d, dp = ifs.big_d, ifs.big_d_prime
    length = int(math.ceil((k_max * chi + 2 * dp) / d)) + 2
    rng = np.random.default_rng(rng_seed)
    cumw = _weights_cumulative(p, ifs.n)
    violations = 0
    done = 0
    n_paths = pairs // ks_per_path
    logr = _neg_log_ratios(ifs)
    while done < n_paths:
        m = min(_CHUNK // 4, n_paths - done)
        if ifs.is_affine:
            sym = _draw_symbols(rng, cumw, (m, length))
            S = np.cumsum(logr[sym], axis=1)
        else:
            _, inc = _walk_matrix(ifs, p, m, length, rng)
            S = np.cumsum(inc, axis=1)
        rows = np.arange(m)
        for _ in range(ks_per_path):
            kvec = rng.uniform(0.5, k_max, size=m)
            target = kvec * chi
            idx = (S >= target[:, None]).argmax(axis=1)
            s_tau = S[rows, idx]
            bad = (s_tau < target - 1e-9) | (s_tau > target + dp + 1e-9)
            violations += int(bad.sum())
        done += m
    return violations, n_paths * ks_per_path
