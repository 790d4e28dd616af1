"""Independent Monte Carlo pricers used as oracles for the closed forms.

All dynamics are geometric Brownian motions, so terminal draws are exact and
'within 3 standard errors' is a clean agreement criterion. Antithetic pairing
is on by default; the reported standard error treats pair averages as the
i.i.d. samples.
"""

from __future__ import annotations

import math

import numpy as np

from .european import EuroContract
from .model import DiffusionApprox
from .spread_basket import BasketContract, basket_moments


def _estimate(samples: np.ndarray) -> tuple[float, float]:
    n = samples.size
    se = float(samples.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return float(samples.mean()), se


def _normals(rng: np.random.Generator, paths: int, width: int, antithetic: bool) -> np.ndarray:
    if antithetic:
        half = (paths + 1) // 2
        z = rng.standard_normal((half, width))
        return np.vstack([z, -z])
    return rng.standard_normal((paths, width))


def _pair_average(payoffs: np.ndarray, antithetic: bool) -> np.ndarray:
    if not antithetic:
        return payoffs
    half = payoffs.shape[0] // 2
    return 0.5 * (payoffs[:half] + payoffs[half:])


def mc_euro(
    sigma_hat: float,
    contract: EuroContract,
    spot: float,
    paths: int,
    seed: int,
    antithetic: bool = True,
) -> tuple[float, float]:
    """Discounted mean payoff of terminal risk-neutral GBM draws -> (price, se)."""
    if paths < 2:
        raise ValueError("paths must be >= 2")
    if spot <= 0:
        raise ValueError("spot must be > 0")
    rng = np.random.default_rng(seed)
    t, r = contract.maturity, contract.rate
    z = _normals(rng, paths, 1, antithetic)[:, 0]
    terminal = spot * np.exp((r - 0.5 * sigma_hat**2) * t + sigma_hat * math.sqrt(t) * z)
    if contract.kind == "put":
        payoff = np.maximum(contract.strike - terminal, 0.0)
    else:
        payoff = np.maximum(terminal - contract.strike, 0.0)
    samples = math.exp(-r * t) * _pair_average(payoff, antithetic)
    return _estimate(samples)


def mc_exchange(
    s1: float,
    s2: float,
    vol1: float,
    vol2: float,
    rho: float,
    maturity: float,
    paths: int,
    seed: int,
    antithetic: bool = True,
) -> tuple[float, float]:
    """Exchange-option oracle: correlated bivariate GBM terminal draws.

    Prices in the second-asset numeraire (no discounting), so only the
    log-ratio matters; the rho = 1 equal-vol case is exactly deterministic.
    """
    if paths < 2:
        raise ValueError("paths must be >= 2")
    if s1 <= 0 or s2 <= 0:
        raise ValueError("spots must be > 0")
    if abs(rho) > 1:
        raise ValueError("|rho| must be <= 1")
    rng = np.random.default_rng(seed)
    z = _normals(rng, paths, 2, antithetic)
    z2 = rho * z[:, 0] + math.sqrt(max(1.0 - rho * rho, 0.0)) * z[:, 1]
    root_t = math.sqrt(maturity)
    gauss = vol1 * root_t * z[:, 0] - vol2 * root_t * z2
    total_var = maturity * (vol1**2 + vol2**2 - 2.0 * rho * vol1 * vol2)
    ratio_terminal = s1 * np.exp(gauss - 0.5 * total_var)
    payoff = np.maximum(ratio_terminal - s2, 0.0)
    return _estimate(_pair_average(payoff, antithetic))


def mc_basket(
    diffusion: DiffusionApprox,
    contract: BasketContract,
    spots: np.ndarray,
    mode: str,
    paths: int,
    seed: int,
    antithetic: bool = True,
    adjust_strike: bool = True,
) -> tuple[float, float]:
    """Basket oracle on correlated GBM terminal draws.

    mode 'arithmetic' prices the true weighted-sum payoff at the contract
    strike; mode 'geometric' prices the geometric-average proxy at the
    moment-matched strike K* (pass adjust_strike=False to keep the raw
    strike), which checks the closed form's lognormal block exactly (up to
    Monte Carlo noise).
    """
    if mode not in ("arithmetic", "geometric"):
        raise ValueError("mode must be 'arithmetic' or 'geometric'")
    if paths < 2:
        raise ValueError("paths must be >= 2")
    spots = np.atleast_1d(np.asarray(spots, dtype=float))
    d = diffusion.dim
    rng = np.random.default_rng(seed)
    try:
        chol = np.linalg.cholesky(diffusion.corr)
    except np.linalg.LinAlgError:
        chol = np.linalg.cholesky(diffusion.corr + 1e-12 * np.eye(d))
    z = _normals(rng, paths, d, antithetic) @ chol.T
    t, r, theta = contract.maturity, contract.rate, contract.theta
    vols = diffusion.asset_vol
    growth = (r - 0.5 * vols**2) * t
    terminal = spots[None, :] * np.exp(growth[None, :] + vols[None, :] * math.sqrt(t) * z)
    omega_tilde, forward, _, _, k_star = basket_moments(diffusion, spots, contract)
    if mode == "arithmetic":
        basket = terminal @ contract.weights
        payoff = np.maximum(theta * (basket - contract.strike), 0.0)
    else:
        strike = k_star if adjust_strike else contract.strike
        normalized = terminal / (spots[None, :] * math.exp(r * t))
        geometric = forward * np.exp(np.log(normalized) @ omega_tilde)
        payoff = np.maximum(theta * (geometric - strike), 0.0)
    samples = math.exp(-r * t) * _pair_average(payoff, antithetic)
    return _estimate(samples)


def gbm_paths(
    spot: float,
    rate: float,
    sigma: float,
    maturity: float,
    steps: int,
    n_paths: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Risk-neutral GBM paths on a uniform grid -> (times, paths (n_paths, steps+1))."""
    if steps < 1 or n_paths < 1:
        raise ValueError("steps and n_paths must be >= 1")
    rng = np.random.default_rng(seed)
    dt = maturity / steps
    z = rng.standard_normal((n_paths, steps))
    increments = (rate - 0.5 * sigma**2) * dt + sigma * math.sqrt(dt) * z
    log_paths = np.concatenate(
        [np.zeros((n_paths, 1)), np.cumsum(increments, axis=1)], axis=1
    )
    times = np.linspace(0.0, maturity, steps + 1)
    return times, spot * np.exp(log_paths)
