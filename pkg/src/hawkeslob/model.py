"""Compound-Hawkes mid-price model and its diffusion-limit constants.

The log price of asset i jumps by a chain-drawn amount at every Hawkes event
of dimension i; the exponential of that process is the traded price. For
large time scalings the price converges to a geometric Brownian motion whose
coefficients are assembled here: the diagonal rate matrix Sigma, the d x 2d
diffusion matrix C, per-asset volatilities (row norms of C), the implied
correlation matrix, and the drift.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import chains as _chains
from . import hawkes as _hawkes
from .chains import ChainSummary, MarkovChainSpec
from .errors import DegenerateModelError
from .hawkes import EventStream, HawkesParams


@dataclass(frozen=True)
class EmgchpParams:
    """Hawkes order flow plus one jump-size chain per asset.

    s0 holds initial log prices; n_scale is the time-scaling parameter of the
    limit theorems, folded into the diffusion constants as sqrt(n).
    """

    hawkes: HawkesParams
    chains: tuple[MarkovChainSpec, ...]
    s0: np.ndarray | None = None
    n_scale: float = 1.0

    def __post_init__(self):
        chain_tuple = tuple(self.chains)
        if len(chain_tuple) != self.hawkes.dim:
            raise ValueError("need exactly one jump chain per Hawkes dimension")
        s0 = self.s0
        if s0 is None:
            s0 = np.zeros(self.hawkes.dim)
        s0 = np.atleast_1d(np.asarray(s0, dtype=float))
        if s0.shape[0] != self.hawkes.dim:
            raise ValueError("s0 length must equal the Hawkes dimension")
        if self.n_scale <= 0:
            raise ValueError("n_scale must be > 0")
        object.__setattr__(self, "chains", chain_tuple)
        object.__setattr__(self, "s0", s0)

    @property
    def dim(self) -> int:
        return self.hawkes.dim

    def summaries(self) -> list[ChainSummary]:
        return [_chains.summarize(c) for c in self.chains]

    def spot_prices(self) -> np.ndarray:
        return np.exp(self.s0)

    def to_json_dict(self) -> dict:
        doc = self.hawkes.to_json_dict()
        doc["chains"] = [c.to_json_dict() for c in self.chains]
        doc["s0"] = self.s0.tolist()
        doc["n_scale"] = self.n_scale
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "EmgchpParams":
        hp = HawkesParams.from_json_dict(doc)
        chain_list = [_chains.chain_from_json_dict(c) for c in doc["chains"]]
        return cls(hp, tuple(chain_list), doc.get("s0"), float(doc.get("n_scale", 1.0)))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)

    @classmethod
    def load(cls, path) -> "EmgchpParams":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class DiffusionApprox:
    """Geometric-Brownian-motion limit constants of the compound price model."""

    sigma_mat: np.ndarray  # d x d diagonal rate matrix
    c_mat: np.ndarray      # d x 2d diffusion coefficients
    drift: np.ndarray      # per-asset drift D_i
    asset_vol: np.ndarray  # row norms of c_mat
    corr: np.ndarray       # asset correlation matrix

    @property
    def dim(self) -> int:
        return self.drift.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "sigma_mat": self.sigma_mat.tolist(),
            "c_mat": self.c_mat.tolist(),
            "drift": self.drift.tolist(),
            "asset_vol": self.asset_vol.tolist(),
            "corr": self.corr.tolist(),
        }


def sigma_matrix(params: EmgchpParams) -> np.ndarray:
    """Diagonal matrix of stationary event rates (I - K)^-1 lambda_inf."""
    return np.diag(_hawkes.expected_rate(params.hawkes))


def c_matrix(params: EmgchpParams) -> np.ndarray:
    """d x 2d concatenation [sqrt(n) s* Sigma^(1/2), sqrt(n) a* (I-K)^-1 Sigma^(1/2)]."""
    d = params.dim
    summaries = params.summaries()
    a_diag = np.diag([s.a_star for s in summaries])
    s_diag = np.diag([s.sigma_star for s in summaries])
    sqrt_sigma = np.diag(np.sqrt(_hawkes.expected_rate(params.hawkes)))
    inv_ik = np.linalg.solve(np.eye(d) - _hawkes.branching_matrix(params.hawkes), sqrt_sigma)
    root_n = np.sqrt(params.n_scale)
    return np.hstack([root_n * s_diag @ sqrt_sigma, root_n * a_diag @ inv_ik])


def diffusion_approx(params: EmgchpParams) -> DiffusionApprox:
    """Assemble all limit constants; raises when an asset has zero volatility."""
    rates = _hawkes.expected_rate(params.hawkes)
    cmat = c_matrix(params)
    gram = cmat @ cmat.T
    asset_vol = np.sqrt(np.diag(gram))
    if np.any(asset_vol == 0):
        dead = int(np.argmin(asset_vol))
        raise DegenerateModelError(
            f"asset {dead} has zero diffusion volatility; correlation is undefined"
        )
    corr = gram / np.outer(asset_vol, asset_vol)
    np.fill_diagonal(corr, 1.0)
    a_stars = np.array([s.a_star for s in params.summaries()])
    drift = a_stars * params.n_scale * rates + 0.5 * np.diag(gram)
    return DiffusionApprox(np.diag(rates), cmat, drift, asset_vol, corr)


def hawkes_bs_vol(params: EmgchpParams, asset: int = 0) -> float:
    """Volatility of the one-dimensional diffusion limit for the given asset.

    sqrt(n) * sqrt(s*^2 lam/(1-mu) + a*^2 lam/(1-mu)^3) with mu the asset's
    self-branching ratio; equals the c_matrix row norm when d = 1.
    """
    if not 0 <= asset < params.dim:
        raise ValueError(f"asset index {asset} out of range")
    summary = _chains.summarize(params.chains[asset])
    lam = float(params.hawkes.lambda_inf[asset])
    mu_hat = float(_hawkes.branching_matrix(params.hawkes)[asset, asset])
    omm = 1.0 - mu_hat
    var = summary.sigma_star_sq * lam / omm + summary.a_star**2 * lam / omm**3
    return float(np.sqrt(params.n_scale * var))


# ---------------------------------------------------------------------------
# simulation


def _spawn_seeds(seed: int, count: int) -> np.ndarray:
    return np.random.SeedSequence(int(seed)).generate_state(count).astype(np.int64)


def simulate_marked_stream(
    params: EmgchpParams, horizon: float, seed: int
) -> tuple[EventStream, np.ndarray]:
    """Event stream plus the chain-drawn log-price jump of every event.

    The Hawkes clock and each asset's chain consume independent RNG streams
    derived from the single seed, so the chains stay independent of the order
    flow as the model requires.
    """
    seeds = _spawn_seeds(seed, 1 + params.dim)
    stream = _hawkes.simulate(params.hawkes, horizon, int(seeds[0]))
    marks = np.empty(len(stream))
    for i, chain in enumerate(params.chains):
        mask = stream.dims == i
        marks[mask] = _chains.simulate_chain(chain, int(mask.sum()), int(seeds[1 + i]))
    return stream, marks


@dataclass(frozen=True)
class PricePaths:
    """Per-asset piecewise-constant log-price paths, event-indexed.

    times[i] holds the jump instants of asset i and log_prices[i] the value
    right after each jump; the path starts at s0[i] at time 0.
    """

    horizon: float
    s0: np.ndarray
    times: tuple[np.ndarray, ...]
    log_prices: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.s0.shape[0]

    def prices(self, asset: int) -> np.ndarray:
        return np.exp(self.log_prices[asset])

    def log_price_at(self, asset: int, t: float) -> float:
        idx = int(np.searchsorted(self.times[asset], t, side="right"))
        if idx == 0:
            return float(self.s0[asset])
        return float(self.log_prices[asset][idx - 1])

    def terminal(self, asset: int) -> float:
        return self.log_price_at(asset, self.horizon)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "asset", "log_price", "price"])
            for i in range(self.dim):
                writer.writerow([repr(0.0), i, repr(float(self.s0[i])), repr(float(np.exp(self.s0[i])))])
                for t, s in zip(self.times[i], self.log_prices[i]):
                    writer.writerow([repr(float(t)), i, repr(float(s)), repr(float(np.exp(s)))])


def mgchp_path(params: EmgchpParams, horizon: float, seed: int) -> PricePaths:
    """Log-price paths: s0 plus the running sum of chain jumps at Hawkes events."""
    stream, marks = simulate_marked_stream(params, horizon, seed)
    times, logs = [], []
    for i in range(params.dim):
        mask = stream.dims == i
        times.append(stream.times[mask])
        logs.append(params.s0[i] + np.cumsum(marks[mask]))
    return PricePaths(float(horizon), params.s0, tuple(times), tuple(logs))


def emgchp_path(params: EmgchpParams, horizon: float, seed: int) -> PricePaths:
    """Price paths; identical to mgchp_path in log space (prices are exp of it)."""
    return mgchp_path(params, horizon, seed)


# ---------------------------------------------------------------------------
# limit-theorem statistics


def _terminal_samples(
    params: EmgchpParams, horizon: float, replications: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Terminal (jump-sum, event-count) pairs per replication and asset."""
    d = params.dim
    sums = np.empty((replications, d))
    counts = np.empty((replications, d))
    for r, child in enumerate(np.random.SeedSequence(int(seed)).spawn(replications)):
        seeds = child.generate_state(1 + d).astype(np.int64)
        stream = _hawkes.simulate(params.hawkes, horizon, int(seeds[0]))
        for i in range(d):
            n_i = int((stream.dims == i).sum())
            counts[r, i] = n_i
            vals = _chains.simulate_chain(params.chains[i], n_i, int(seeds[1 + i]))
            sums[r, i] = vals.sum()
    return sums, counts


def lln_statistic(
    params: EmgchpParams, n: float, t: float, replications: int, seed: int
) -> np.ndarray:
    """Empirical mean of the n-th root of the terminal price, per asset.

    Converges to exp(a* Sigma_ii t) as n grows.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    sums, _ = _terminal_samples(params, n * t, replications, seed)
    return np.exp((params.s0[None, :] + sums) / n).mean(axis=0)


def fclt_residual_sample(
    params: EmgchpParams,
    n: float,
    t: float,
    replications: int,
    seed: int,
    mode: str = "stochastic",
) -> np.ndarray:
    """Scaled terminal residuals of the functional CLT, shape (replications, d).

    mode 'stochastic' centers by a* N_{nt} (random count); 'deterministic'
    centers by a* n t (I-K)^-1 lambda_inf.
    """
    if mode not in ("stochastic", "deterministic"):
        raise ValueError("mode must be 'stochastic' or 'deterministic'")
    if replications < 1:
        raise ValueError("replications must be >= 1")
    sums, counts = _terminal_samples(params, n * t, replications, seed)
    s_nt = params.s0[None, :] + sums
    a_stars = np.array([s.a_star for s in params.summaries()])
    if mode == "stochastic":
        centers = a_stars[None, :] * counts
    else:
        rates = _hawkes.expected_rate(params.hawkes)
        centers = np.broadcast_to(a_stars * n * t * rates, s_nt.shape)
    return (s_nt - centers) / np.sqrt(n)
