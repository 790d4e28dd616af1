"""Ergodic finite-state Markov chains for price-jump sizes.

Provides the stationary distribution, the stationary mean a*, and the long-run
variance sigma*^2 obtained from the fundamental matrix (P + Pi* - I)^-1, plus
the two-state closed form used for tick-by-tick mid-price moves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import chain_states
from .errors import DegenerateChainError, ErgodicityError, NumericalError

_ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class MarkovChainSpec:
    """Row-stochastic transition matrix P plus a value a(x) for each state."""

    transition: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        p = np.atleast_2d(np.asarray(self.transition, dtype=float))
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if p.shape[0] != p.shape[1]:
            raise ValueError("transition matrix must be square")
        if vals.shape[0] != p.shape[0]:
            raise ValueError("values length must equal the number of states")
        if np.any(p < -_ROW_SUM_TOL):
            raise ValueError("transition probabilities must be >= 0")
        if np.any(np.abs(p.sum(axis=1) - 1.0) > _ROW_SUM_TOL):
            raise ValueError("every transition row must sum to 1 within 1e-12")
        object.__setattr__(self, "transition", np.clip(p, 0.0, None))
        object.__setattr__(self, "values", vals)

    @property
    def n_states(self) -> int:
        return self.values.shape[0]

    def is_ergodic(self, tol: float = 1e-14) -> bool:
        """Positivity of P^(n^2): sufficient for a unique, aperiodic stationary regime."""
        power = np.linalg.matrix_power(self.transition, self.n_states**2)
        return bool(power.min() > tol)

    def to_json_dict(self) -> dict:
        return {"P": self.transition.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "MarkovChainSpec":
        return cls(np.asarray(doc["P"], dtype=float), np.asarray(doc["values"], dtype=float))


@dataclass(frozen=True)
class ChainSummary:
    """Limit-theorem constants of a jump-size chain."""

    pi_star: np.ndarray
    a_star: float
    sigma_star_sq: float

    @property
    def sigma_star(self) -> float:
        return float(np.sqrt(self.sigma_star_sq))


@dataclass(frozen=True)
class TwoStateSpec:
    """Two-state (+delta, -delta) chain with stay probabilities p (up) and p' (down)."""

    p: float
    p_prime: float
    delta: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.p_prime <= 1.0):
            raise ValueError("p and p_prime must lie in [0, 1]")
        if self.delta < 0:
            raise ValueError("tick size delta must be >= 0")


def stationary_distribution(transition: np.ndarray) -> np.ndarray:
    """Left fixed probability vector of P, residual ||pi P - pi||_inf < 1e-12.

    Raises ErgodicityError when the fixed vector is not unique and positive
    (reducible chains); periodic but irreducible chains are accepted.
    """
    p = np.atleast_2d(np.asarray(transition, dtype=float))
    n = p.shape[0]
    a = p.T - np.eye(n)
    a[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0

    def _ok(vec):
        if vec is None or not np.all(np.isfinite(vec)) or np.any(vec < -1e-12):
            return False
        return float(np.max(np.abs(vec @ p - vec))) < 1e-12

    try:
        pi = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError:
        pi = None
    if not _ok(pi):
        # fall back on the eigenvector at eigenvalue 1 before giving up
        eigvals, eigvecs = np.linalg.eig(p.T)
        close = np.where(np.abs(eigvals - 1.0) < 1e-8)[0]
        if close.size != 1:
            raise ErgodicityError(
                f"{close.size} unit eigenvalues found; stationary distribution not unique"
            )
        pi = np.real(eigvecs[:, close[0]])
        pi = pi / pi.sum()
        if not _ok(pi):
            raise ErgodicityError("no unique positive stationary vector")
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def a_star(chain: MarkovChainSpec) -> float:
    """Stationary mean of the jump values: pi* . a."""
    return float(stationary_distribution(chain.transition) @ chain.values)


def sigma_star_sq(chain: MarkovChainSpec) -> float:
    """Long-run variance of the jump values via the fundamental matrix.

    With b(k) = a(k) - a* and g = (P + Pi* - I)^-1 b,
    v(k) = b(k)^2 + sum_j (g(j)-g(k))^2 P(k,j) - 2 b(k) sum_j (g(j)-g(k)) P(k,j),
    the result is sum_k pi*(k) v(k) >= 0.
    """
    p = chain.transition
    pi = stationary_distribution(p)
    mean = float(pi @ chain.values)
    b = chain.values - mean
    fundamental = p + np.outer(np.ones(chain.n_states), pi) - np.eye(chain.n_states)
    try:
        g = np.linalg.solve(fundamental, b)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"fundamental matrix P + Pi* - I is singular for n={chain.n_states}: {exc}"
        ) from exc
    diffs = g[None, :] - g[:, None]  # diffs[k, j] = g(j) - g(k)
    quad = np.einsum("kj,kj->k", diffs**2, p)
    cross = np.einsum("kj,kj->k", diffs, p)
    v = b**2 + quad - 2.0 * b * cross
    return max(float(pi @ v), 0.0)


def summarize(chain: MarkovChainSpec) -> ChainSummary:
    pi = stationary_distribution(chain.transition)
    return ChainSummary(pi, float(pi @ chain.values), sigma_star_sq(chain))


def two_state_chain(spec: TwoStateSpec) -> MarkovChainSpec:
    """The explicit chain behind TwoStateSpec: states (+delta, -delta)."""
    p, q = spec.p, spec.p_prime
    transition = np.array([[p, 1.0 - p], [1.0 - q, q]])
    return MarkovChainSpec(transition, np.array([spec.delta, -spec.delta]))


def two_state_summary(spec: TwoStateSpec) -> ChainSummary:
    """Closed-form constants: a* = delta(2 pi* - 1) and the printed sigma*^2 form."""
    p, q, delta = spec.p, spec.p_prime, spec.delta
    if p + q >= 2.0:
        raise DegenerateChainError("p + p' = 2 leaves two absorbing states; chain is degenerate")
    pi1 = (1.0 - q) / (2.0 - p - q)
    mean = delta * (2.0 * pi1 - 1.0)
    var = 4.0 * delta**2 * (
        (1.0 - q + pi1 * (q - p)) / (p + q - 2.0) ** 2 - pi1 * (1.0 - pi1)
    )
    return ChainSummary(np.array([pi1, 1.0 - pi1]), mean, max(var, 0.0))


def chain_from_json_dict(doc: dict) -> MarkovChainSpec:
    """Accept a full chain {P, values}, a two-state {p, p_prime, delta}, or an
    {a_star, sigma_star} summary shorthand (an exact two-point i.i.d. chain)."""
    if "P" in doc:
        return MarkovChainSpec.from_json_dict(doc)
    if "p" in doc:
        return two_state_chain(
            TwoStateSpec(float(doc["p"]), float(doc["p_prime"]), float(doc["delta"]))
        )
    if "a_star" in doc:
        return chain_from_summary(float(doc["a_star"]), float(doc["sigma_star"]))
    raise ValueError(
        "chain document needs keys P/values, p/p_prime/delta, or a_star/sigma_star"
    )


def chain_from_summary(a_star_value: float, sigma_star: float) -> MarkovChainSpec:
    """Two-point i.i.d. chain with exactly the given stationary mean and sigma*.

    Values a* +/- sigma* visited with probability 1/2 independently reproduce
    a_star and sigma_star_sq exactly, so calibrated constants can be plugged
    straight into the simulator.
    """
    if sigma_star < 0:
        raise ValueError("sigma_star must be >= 0")
    transition = np.full((2, 2), 0.5)
    values = np.array([a_star_value + sigma_star, a_star_value - sigma_star])
    return MarkovChainSpec(transition, values)


def simulate_chain(chain: MarkovChainSpec, steps: int, seed: int) -> np.ndarray:
    """Stationary-start trajectory of jump values; deterministic given seed."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if steps == 0:
        return np.empty(0)
    pi = stationary_distribution(chain.transition)
    cum_rows = np.cumsum(chain.transition, axis=1)
    cum_rows[:, -1] = 1.0
    cum_init = np.cumsum(pi)
    cum_init[-1] = 1.0
    states = chain_states(cum_rows, cum_init, int(steps), int(seed) % 2**32)
    return chain.values[states]
