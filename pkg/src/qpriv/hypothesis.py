"""Helstrom error, exact sample complexity, and sample-complexity bounds.

Binary discrimination of two states with priors (p, q = 1 - p): the optimal
n-copy Bayesian error is evaluated exactly, either densely on tensor powers
or through a classical fast path when the states commute, and the sample
complexity is the smallest n driving that error below a target alpha.
Alongside the exact scans, this module evaluates every closed-form bound
family for the private and non-private settings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from scipy.special import gammaln

from .divergences import bures_squared, fidelity, trace_distance
from .errors import (
    AlphaTooLarge,
    DegeneratePair,
    DegenerateStates,
    DimensionBudgetExceeded,
    DimensionMismatch,
    InvalidAlpha,
    InvalidParams,
    SingularSigma,
    Unbounded,
)
from .privacy import PrivacyParams, SearchBudget, certify
from .quantum_core import (
    EPS_REG,
    DensityMatrix,
    KrausChannel,
    Povm,
    hermitian_part,
    matrix_geometric_mean,
)

TOL_DENOM = 1e-8

# Commutator max-norm below which the classical fast path engages.
COMMUTE_TOL = 1e-10

# Eigenvalues of the geometric-mean operator closer than this collapse into
# one measurement outcome.
TOL_EIG = 1e-8

N_MAX_FAST = 100_000
MAX_DENSE_DIM = 4096
_COMBO_BUDGET = 2_000_000

METHOD_DENSE = "dense"
METHOD_CLASSICAL = "classical_fastpath"
METHOD_BOUNDS = "bounds_only"


@dataclass(frozen=True)
class HypothesisInstance:
    """Two candidate states with a prior and a target error probability."""

    rho: DensityMatrix
    sigma: DensityMatrix
    prior_p: float
    alpha: float

    def __post_init__(self) -> None:
        if self.rho.dim != self.sigma.dim:
            raise DimensionMismatch("hypothesis states must share one dimension")
        if not 0.0 < self.prior_p < 1.0:
            raise InvalidParams(f"prior must be in (0, 1), got {self.prior_p}")
        pq = self.prior_p * (1.0 - self.prior_p)
        if not 0.0 < self.alpha < pq:
            raise InvalidAlpha(f"alpha must be in (0, pq) = (0, {pq}), got {self.alpha}")

    @property
    def prior_q(self) -> float:
        return 1.0 - self.prior_p


@dataclass(frozen=True)
class SampleComplexityResult:
    """Exact value (when computed) and lower/upper bounds for one instance."""

    lower: float
    upper: float
    method: str
    exact: int | None = None

    def __post_init__(self) -> None:
        if self.lower > self.upper + 1e-12:
            raise InvalidParams(f"lower {self.lower} exceeds upper {self.upper}")


def helstrom_error(inst: HypothesisInstance) -> float:
    """Optimal single-copy error (1/2) (1 - || p rho - q sigma ||_1)."""
    m = inst.prior_p * inst.rho.entries - inst.prior_q * inst.sigma.entries
    nuc = float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(m)))))
    return 0.5 * (1.0 - nuc)


def _simultaneous_diagonalization(rho_m: np.ndarray, sigma_m: np.ndarray):
    """Shared eigenbasis probabilities (P, Q), or None when not commuting."""
    comm = rho_m @ sigma_m - sigma_m @ rho_m
    if float(np.max(np.abs(comm))) > COMMUTE_TOL:
        return None
    # A generic combination separates joint eigenspaces; verify afterwards
    # and fall back to the dense path on the (measure-zero) failure cases.
    _, v = np.linalg.eigh(hermitian_part(rho_m + math.sqrt(2.0) * sigma_m))
    r = v.conj().T @ rho_m @ v
    s = v.conj().T @ sigma_m @ v
    off = max(
        float(np.max(np.abs(r - np.diag(np.diag(r))))),
        float(np.max(np.abs(s - np.diag(np.diag(s))))),
    )
    if off > 1e-8:
        return None
    p = np.clip(np.real(np.diag(r)), 0.0, None)
    q = np.clip(np.real(np.diag(s)), 0.0, None)
    return p / p.sum(), q / q.sum()


def _pe_classical(p_out: np.ndarray, q_out: np.ndarray, p: float, q: float, n: int) -> float:
    """n-copy Helstrom error for commuting states via outcome-count enumeration."""
    d = p_out.shape[0]
    with np.errstate(divide="ignore"):
        lp = np.log(p_out)
        lq = np.log(q_out)
    if d == 2:
        k = np.arange(n + 1, dtype=float)
        log_binom = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
        counts = np.stack([n - k, k], axis=1)
    else:
        n_combos = math.comb(n + d - 1, d - 1)
        if n_combos > _COMBO_BUDGET:
            raise DimensionBudgetExceeded(
                f"{n_combos} outcome-count vectors exceed the enumeration budget"
            )
        combos = combinations_with_replacement(range(d), n)
        counts = np.zeros((n_combos, d), dtype=float)
        for row, combo in enumerate(combos):
            for outcome in combo:
                counts[row, outcome] += 1.0
        log_binom = gammaln(n + 1.0) - gammaln(counts + 1.0).sum(axis=1)
    with np.errstate(invalid="ignore"):
        log_p_mass = np.where(counts > 0, counts * lp[None, :], 0.0).sum(axis=1)
        log_q_mass = np.where(counts > 0, counts * lq[None, :], 0.0).sum(axis=1)
    a = p * np.exp(log_binom + log_p_mass)
    b = q * np.exp(log_binom + log_q_mass)
    tv = float(np.sum(np.abs(a - b)))
    return max(0.5 * (1.0 - tv), 0.0)


def _pe_dense(rho_m: np.ndarray, sigma_m: np.ndarray, p: float, q: float, n: int) -> float:
    dim = rho_m.shape[0]
    if dim**n > MAX_DENSE_DIM:
        raise DimensionBudgetExceeded(
            f"dim {dim}^{n} exceeds the dense budget {MAX_DENSE_DIM}"
        )
    rp, sp = rho_m, sigma_m
    for _ in range(n - 1):
        rp = np.kron(rp, rho_m)
        sp = np.kron(sp, sigma_m)
    nuc = float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(p * rp - q * sp)))))
    return max(0.5 * (1.0 - nuc), 0.0)


def helstrom_error_n(inst: HypothesisInstance, n: int, method: str = "auto") -> float:
    """Optimal n-copy error for the instance.

    ``method="auto"`` takes the classical fast path (log-domain outcome-count
    sums, n up to 1e5 for commuting qubit pairs) when the states commute
    within ``COMMUTE_TOL``, and the dense tensor-power path otherwise.
    """
    if n < 1:
        raise InvalidParams(f"copy count must be >= 1, got {n}")
    rho_m, sigma_m = inst.rho.entries, inst.sigma.entries
    if method not in ("auto", METHOD_DENSE, METHOD_CLASSICAL):
        raise InvalidParams(f"unknown method {method!r}")
    if method in ("auto", METHOD_CLASSICAL):
        decomp = _simultaneous_diagonalization(rho_m, sigma_m)
        if decomp is not None:
            return _pe_classical(*decomp, inst.prior_p, inst.prior_q, n)
        if method == METHOD_CLASSICAL:
            raise DimensionBudgetExceeded("states do not commute; no classical path")
    return _pe_dense(rho_m, sigma_m, inst.prior_p, inst.prior_q, n)


def exact_sample_complexity(
    inst: HypothesisInstance, n_max: int | None = None
) -> SampleComplexityResult:
    """Smallest n with n-copy error at most alpha, by scan with early exit.

    Returns a bounds-only result (lower = n_max + 1) when the target is not
    reached within the scan budget.
    """
    if trace_distance(inst.rho, inst.sigma) <= TOL_DENOM:
        raise Unbounded("identical hypotheses can never be distinguished")
    rho_m, sigma_m = inst.rho.entries, inst.sigma.entries
    decomp = _simultaneous_diagonalization(rho_m, sigma_m)
    if decomp is not None:
        method = METHOD_CLASSICAL
        cap = N_MAX_FAST if n_max is None else int(n_max)
        pe = lambda n: _pe_classical(*decomp, inst.prior_p, inst.prior_q, n)
    else:
        method = METHOD_DENSE
        dense_cap = 1
        while inst.rho.dim ** (dense_cap + 1) <= MAX_DENSE_DIM:
            dense_cap += 1
        cap = dense_cap if n_max is None else min(int(n_max), dense_cap)
        pe = lambda n: _pe_dense(rho_m, sigma_m, inst.prior_p, inst.prior_q, n)
    for n in range(1, cap + 1):
        if pe(n) <= inst.alpha:
            return SampleComplexityResult(
                lower=float(n), upper=float(n), method=method, exact=n
            )
    return SampleComplexityResult(
        lower=float(cap + 1), upper=math.inf, method=METHOD_BOUNDS, exact=None
    )


# ---------------------------------------------------------------------------
# Closed-form bound families
# ---------------------------------------------------------------------------


def nonprivate_sc_bounds(inst: HypothesisInstance) -> SampleComplexityResult:
    """Fidelity/Bures bounds on the non-private sample complexity.

    For orthogonal states the upper bound is undefined and one copy always
    suffices, so the result carries exact = 1 instead.
    """
    p, q, alpha = inst.prior_p, inst.prior_q, inst.alpha
    pq = p * q
    f = fidelity(inst.rho, inst.sigma)
    if f <= 1e-12:
        return SampleComplexityResult(lower=1.0, upper=1.0, method=METHOD_BOUNDS, exact=1)
    db2 = 2.0 * (1.0 - math.sqrt(f))
    neg_log_f = -math.log(f)
    lower = max(
        math.log(pq / alpha) / neg_log_f,
        (pq - alpha * (1.0 - alpha)) / (pq * db2),
    )
    upper = float(math.ceil(2.0 * math.log(math.sqrt(pq) / alpha) / neg_log_f))
    return SampleComplexityResult(lower=lower, upper=upper, method=METHOD_BOUNDS)


def _private_c_term(epsilon: float, p: float, q: float, alpha: float) -> float:
    e = math.exp(epsilon)
    pq = p * q
    first = math.log(pq / alpha) * (e + 1.0) / (epsilon * (e - 1.0))
    second = (pq - alpha * (1.0 - alpha)) * (e + 1.0) / (
        2.0 * pq * (math.exp(epsilon / 2.0) - 1.0) ** 2
    )
    return max(first, second)


def private_sc_bounds(inst: HypothesisInstance, epsilon: float) -> SampleComplexityResult:
    """Two-sided bounds on the best-case private sample complexity.

    The lower bound is the larger of the computable non-private lower bound
    and C_{eps,p,q,alpha} / T; the upper bound is attained by the built
    mechanism reading out the optimal projector.
    """
    if epsilon <= 0.0:
        raise InvalidParams(f"epsilon must be > 0, got {epsilon}")
    t = trace_distance(inst.rho, inst.sigma)
    if t <= TOL_DENOM:
        raise DegenerateStates("states are indistinguishable")
    p, q, alpha = inst.prior_p, inst.prior_q, inst.alpha
    pq = p * q
    base = nonprivate_sc_bounds(inst)
    sc_floor = float(base.exact) if base.exact is not None else base.lower
    lower = max(sc_floor, _private_c_term(epsilon, p, q, alpha) / t)
    e = math.exp(epsilon)
    upper = float(
        math.ceil(2.0 * math.log(math.sqrt(pq) / alpha) * ((e + 1.0) / ((e - 1.0) * t)) ** 2)
    )
    return SampleComplexityResult(lower=lower, upper=upper, method=METHOD_BOUNDS)


def orthogonal_sc_bounds(epsilon: float, p: float, alpha: float) -> SampleComplexityResult:
    """Private sample-complexity bounds for perfectly distinguishable states.

    Lower bound (pq - alpha(1-alpha)) (e^eps + 1)^2 / (2 pq (e^eps - 1)^2),
    upper bound the general private bound at trace distance one. For eps < 1
    both scale as 1 / eps^2.
    """
    if epsilon <= 0.0:
        raise InvalidParams(f"epsilon must be > 0, got {epsilon}")
    q = 1.0 - p
    pq = p * q
    if not 0.0 < alpha < pq:
        raise InvalidAlpha(f"alpha must be in (0, pq) = (0, {pq}), got {alpha}")
    e = math.exp(epsilon)
    lower = (pq - alpha * (1.0 - alpha)) * (e + 1.0) ** 2 / (2.0 * pq * (e - 1.0) ** 2)
    upper = float(
        math.ceil(2.0 * math.log(math.sqrt(pq) / alpha) * ((e + 1.0) / (e - 1.0)) ** 2)
    )
    return SampleComplexityResult(lower=lower, upper=upper, method=METHOD_BOUNDS)


def instance_specific_bounds(
    inst: HypothesisInstance, epsilon: float
) -> SampleComplexityResult:
    """Bounds over the minimum-eigenvalue-constrained channel class.

    Channels whose better output keeps minimum eigenvalue at least
    1 / (e^eps + 1) admit matching-order bounds in 1 / (eps T)^2.
    """
    if epsilon <= 0.0:
        raise InvalidParams(f"epsilon must be > 0, got {epsilon}")
    t = trace_distance(inst.rho, inst.sigma)
    if t <= TOL_DENOM:
        raise DegenerateStates("states are indistinguishable")
    p, q, alpha = inst.prior_p, inst.prior_q, inst.alpha
    pq = p * q
    e = math.exp(epsilon)
    ratio = ((e + 1.0) / ((e - 1.0) * t)) ** 2
    lower = math.log(pq / alpha) * ratio / (e + 1.0)
    upper = math.log(math.sqrt(pq) / alpha) * ratio
    return SampleComplexityResult(lower=lower, upper=upper, method=METHOD_BOUNDS)


def w_eps_member(
    channel: KrausChannel,
    inst: HypothesisInstance,
    epsilon: float,
    search_budget: SearchBudget | None = None,
    seed=0,
) -> bool:
    """Membership in the minimum-eigenvalue-constrained private class.

    Requires max of the two output minimum eigenvalues to reach
    1 / (e^eps + 1) and the channel to certify at (epsilon, 0).
    """
    lam1 = float(np.linalg.eigvalsh(channel.apply_matrix(inst.rho.entries))[0])
    lam2 = float(np.linalg.eigvalsh(channel.apply_matrix(inst.sigma.entries))[0])
    if max(lam1, lam2) < 1.0 / (math.exp(epsilon) + 1.0) - 1e-9:
        return False
    return certify(channel, PrivacyParams(epsilon, 0.0), search_budget, seed=seed).certified


@dataclass(frozen=True)
class LowPrivacyReport:
    """Geometric-mean measurement data for the low-privacy regime.

    ``k`` counts the distinct eigenvalues of rho # sigma^{-1} (the number of
    measurement outcomes), ``k_prime`` is ln(4 / Bures^2), and ``L`` the
    squared outcome-count factor entering the regime's upper bound. The
    measurement is fidelity-achieving: it preserves the squared Bures
    distance, which is re-verified at construction.
    """

    k: int
    k_prime: float
    L: float
    measurement: Povm
    condition_holds: bool
    bures_squared_input: float
    bures_squared_measured: float

    def __post_init__(self) -> None:
        if self.L < 1.0 - 1e-12:
            raise InvalidParams(f"L must be >= 1, got {self.L}")


def low_privacy_analysis(inst: HypothesisInstance, epsilon: float) -> LowPrivacyReport:
    """Build the geometric-mean measurement and check the low-privacy regime.

    The POVM projects onto the eigenspaces of rho # sigma^{-1} (eigenvalues
    collapsed within ``TOL_EIG``); the regime condition compares
    ((e^eps - 1) / (e^eps + 1))^2 against 1 / Bures^2.
    """
    rho_m, sigma_m = inst.rho.entries, inst.sigma.entries
    w_sigma = np.linalg.eigvalsh(sigma_m)
    if float(w_sigma[0]) <= EPS_REG * max(float(w_sigma[-1]), 1e-300):
        raise SingularSigma("sigma is singular beyond the regularized inverse")
    w, v = np.linalg.eigh(sigma_m)
    inv_sigma = (v * (1.0 / np.clip(w, EPS_REG, None))) @ v.conj().T
    mean_op = matrix_geometric_mean(rho_m, inv_sigma)
    w_g, v_g = np.linalg.eigh(mean_op)

    scale = max(1.0, float(np.max(np.abs(w_g))))
    groups: list[list[int]] = [[0]]
    for i in range(1, w_g.shape[0]):
        if w_g[i] - w_g[groups[-1][-1]] <= TOL_EIG * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    effects = []
    for group in groups:
        block = v_g[:, group]
        effects.append(block @ block.conj().T)
    povm = Povm(tuple(effects))

    p_out = povm.outcome_probabilities(rho_m)
    q_out = povm.outcome_probabilities(sigma_m)
    fid_classical = float(np.sum(np.sqrt(p_out * q_out))) ** 2
    db2_measured = 2.0 * (1.0 - math.sqrt(min(fid_classical, 1.0)))
    db2_input = bures_squared(inst.rho, inst.sigma)

    k = len(groups)
    k_prime = math.log(4.0 / db2_input) if db2_input > 0.0 else math.inf
    ell = max(1.0, min(float(k), k_prime) / 2.0) ** 2
    e = math.exp(epsilon)
    condition = db2_input > 0.0 and ((e - 1.0) / (e + 1.0)) ** 2 >= 1.0 / db2_input
    return LowPrivacyReport(
        k=k,
        k_prime=k_prime,
        L=ell,
        measurement=povm,
        condition_holds=bool(condition),
        bures_squared_input=db2_input,
        bures_squared_measured=db2_measured,
    )


def multiple_hypothesis_bounds(
    states, priors, epsilon: float, alpha: float
) -> SampleComplexityResult:
    """Pairwise bounds on private discrimination of M >= 2 hypotheses."""
    if epsilon <= 0.0:
        raise InvalidParams(f"epsilon must be > 0, got {epsilon}")
    states = list(states)
    priors = np.asarray(priors, dtype=float)
    m_count = len(states)
    if m_count < 2:
        raise InvalidParams("need at least two hypotheses")
    if priors.shape != (m_count,) or np.any(priors < 0) or abs(priors.sum() - 1.0) > 1e-12:
        raise InvalidParams("priors must be a probability vector over the states")
    if alpha <= 0.0:
        raise InvalidAlpha(f"alpha must be positive, got {alpha}")
    e = math.exp(epsilon)
    lower = -math.inf
    upper = -math.inf
    for i in range(m_count):
        for j in range(i + 1, m_count):
            t = trace_distance(states[i], states[j])
            if t <= TOL_DENOM:
                raise DegeneratePair(f"states {i} and {j} are indistinguishable")
            pi, pj = priors[i], priors[j]
            lower = max(
                lower,
                math.log(pi * pj / ((pi + pj) * alpha)) * (e + 1.0) / (epsilon * (e - 1.0) * t),
            )
            upper = max(
                upper,
                2.0
                * math.log(m_count * (m_count - 1) * math.sqrt(pi * pj) / (2.0 * alpha))
                * ((e + 1.0) / ((e - 1.0) * t)) ** 2,
            )
    return SampleComplexityResult(
        lower=lower, upper=float(math.ceil(upper)), method=METHOD_BOUNDS
    )


def _asymmetric_branch(numer_alpha: float, denom_alpha: float, epsilon: float, beta: float) -> float:
    beta_prime = beta / (beta - 1.0)
    numer = beta_prime * math.log(1.0 - numer_alpha) - math.log(denom_alpha)
    return numer / min(epsilon, epsilon * epsilon * beta / 2.0)


def _golden_max(fn, lo: float, hi: float, iters: int = 80) -> float:
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fn(d)
    return max(fc, fd)


def asymmetric_lower_bound(
    epsilon: float, alpha1: float, alpha2: float, beta_grid=None
) -> float:
    """Copies needed for private asymmetric testing, maximized over beta > 1.

    Evaluates both error-order branches on a log grid and polishes the best
    grid point by golden-section search.
    """
    if epsilon <= 0.0:
        raise InvalidParams(f"epsilon must be > 0, got {epsilon}")
    if not (0.0 < alpha1 < 1.0 and 0.0 < alpha2 < 1.0):
        raise InvalidAlpha("alpha1 and alpha2 must lie in (0, 1)")
    grid = (
        np.asarray(beta_grid, dtype=float)
        if beta_grid is not None
        else np.geomspace(1.0 + 1e-6, 1e9, 400)
    )
    best = -math.inf
    for first, second in ((alpha1, alpha2), (alpha2, alpha1)):
        values = np.array([_asymmetric_branch(first, second, epsilon, b) for b in grid])
        idx = int(np.argmax(values))
        lo = grid[max(idx - 1, 0)]
        hi = grid[min(idx + 1, grid.shape[0] - 1)]
        refined = _golden_max(
            lambda u: _asymmetric_branch(first, second, epsilon, math.exp(u)),
            math.log(lo),
            math.log(hi),
        )
        best = max(best, float(values[idx]), refined)
    return best


def heterogeneous_mechanism_lower_bound(inst: HypothesisInstance, epsilon: float) -> float:
    """Lower bound when each copy may pass through a different mechanism.

    2 (1 - alpha / min(p, q))^2 (e^eps + 1) / (eps (e^eps - 1) T); it also
    applies to the homogeneous setting.
    """
    if epsilon <= 0.0:
        raise InvalidParams(f"epsilon must be > 0, got {epsilon}")
    min_prior = min(inst.prior_p, inst.prior_q)
    if inst.alpha > min_prior:
        raise AlphaTooLarge(f"alpha must be <= min(p, q) = {min_prior}")
    t = trace_distance(inst.rho, inst.sigma)
    if t <= TOL_DENOM:
        raise DegenerateStates("states are indistinguishable")
    e = math.exp(epsilon)
    return (
        2.0
        * (1.0 - inst.alpha / min_prior) ** 2
        * (e + 1.0)
        / (epsilon * (e - 1.0) * t)
    )
