"""Exchange (spread) options and geometric-average basket options.

Two spread modes are supported: two independent one-dimensional models with
an exogenous correlation, and a genuine two-dimensional compound Hawkes model
whose correlation comes out of the diffusion-limit C matrix. Baskets use the
moment-matched lognormal proxy with the strike shift K*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model as _model
from .errors import StrikeAdjustmentError
from .european import norm_cdf
from .model import DiffusionApprox, EmgchpParams


@dataclass(frozen=True)
class AssetDiffusion:
    """One asset in its diffusion limit: spot price and lognormal volatility."""

    s0: float
    sigma_bar: float

    def __post_init__(self):
        if self.s0 <= 0:
            raise ValueError("spot must be > 0")
        if self.sigma_bar < 0:
            raise ValueError("sigma_bar must be >= 0")


@dataclass(frozen=True)
class SpreadContract:
    """Exchange-option terms; rho only applies to the two-1D mode."""

    maturity: float
    rho: float = 0.0

    def __post_init__(self):
        if self.maturity <= 0:
            raise ValueError("maturity must be > 0")
        if abs(self.rho) > 1.0:
            raise ValueError("|rho| must be <= 1")


@dataclass(frozen=True)
class BasketContract:
    """Weighted basket option; theta = +1 for a call, -1 for a put."""

    weights: np.ndarray
    strike: float
    maturity: float
    rate: float
    theta: int = 1

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if np.any(w < 0):
            raise ValueError("weights must be >= 0")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        if self.strike <= 0:
            raise ValueError("strike must be > 0")
        if self.maturity <= 0:
            raise ValueError("maturity must be > 0")
        if self.theta not in (1, -1):
            raise ValueError("theta must be +1 (call) or -1 (put)")
        object.__setattr__(self, "weights", w)


def sigma_bar(
    lambda_inf: float, mu_hat: float, sigma_star: float, a_star: float, n_scale: float = 1.0
) -> float:
    """Diffusion volatility of one asset:
    sqrt(n (s*^2 lam/(1-mu) + a*^2 lam/(1-mu)^3))."""
    if not 0.0 <= mu_hat < 1.0:
        raise ValueError(f"mu_hat={mu_hat} must lie in [0, 1)")
    omm = 1.0 - mu_hat
    var = n_scale * lambda_inf * (sigma_star**2 / omm + a_star**2 / omm**3)
    return math.sqrt(var)


def _exchange_value(s1: float, s2: float, total_var: float) -> float:
    """Exchange-option value for log-ratio variance total_var (no discounting)."""
    if total_var < 0:
        raise ValueError("total variance must be >= 0")
    if total_var == 0.0:
        return max(s1 - s2, 0.0)
    sd = math.sqrt(total_var)
    d1 = (math.log(s1 / s2) + 0.5 * total_var) / sd
    d2 = d1 - sd
    return float(s1 * norm_cdf(d1) - s2 * norm_cdf(d2))


def margrabe_price(
    asset1: AssetDiffusion,
    asset2: AssetDiffusion,
    maturity: float,
    rho: float,
    strike_ratio: float = 1.0,
) -> float:
    """Option to exchange strike_ratio units of asset2 for one unit of asset1.

    Funding is embedded in the second asset, so no explicit discounting
    appears; the perfectly hedged case (equal vols, rho = 1) degenerates to
    the intrinsic exchange value.
    """
    if maturity <= 0:
        raise ValueError("maturity must be > 0")
    if abs(rho) > 1:
        raise ValueError("|rho| must be <= 1")
    if strike_ratio <= 0:
        raise ValueError("strike_ratio must be > 0")
    v1, v2 = asset1.sigma_bar, asset2.sigma_bar
    total_var = maturity * (v1 * v1 + v2 * v2 - 2.0 * rho * v1 * v2)
    if total_var < 0:  # |rho| <= 1 keeps this nonnegative up to rounding
        total_var = 0.0
    return _exchange_value(asset1.s0, strike_ratio * asset2.s0, total_var)


def price_spread(asset1: AssetDiffusion, asset2: AssetDiffusion, contract: SpreadContract) -> float:
    return margrabe_price(asset1, asset2, contract.maturity, contract.rho)


def spread_exp_vol(diffusion: DiffusionApprox) -> float:
    """Per-unit-time exchange volatility of a 2-asset diffusion:
    sqrt(C1~^2 + C2~^2 - 2 rho C1~ C2~)."""
    if diffusion.dim != 2:
        raise ValueError("spread_exp_vol needs exactly 2 assets")
    c1, c2 = diffusion.asset_vol
    rho = float(diffusion.corr[0, 1])
    return math.sqrt(max(c1 * c1 + c2 * c2 - 2.0 * rho * c1 * c2, 0.0))


def spread_2d_emgchp(params: EmgchpParams, maturity: float) -> float:
    """Spread option on one two-dimensional compound Hawkes model.

    The correlation between the assets is endogenous: it comes from the Gram
    matrix of the diffusion C matrix rather than an exogenous rho.
    """
    if params.dim != 2:
        raise ValueError(f"need a 2-dimensional model, got d={params.dim}")
    if maturity <= 0:
        raise ValueError("maturity must be > 0")
    diffusion = _model.diffusion_approx(params)
    spots = params.spot_prices()
    total_var = maturity * spread_exp_vol(diffusion) ** 2
    return _exchange_value(float(spots[0]), float(spots[1]), total_var)


def basket_moments(
    diffusion: DiffusionApprox, spots: np.ndarray, contract: BasketContract
) -> tuple[np.ndarray, float, float, float, float]:
    """Forward weights, basket forward, lognormal proxy moments and K*.

    Returns (omega_tilde, forward, m_tilde, v_tilde_sq, k_star) where the
    geometric proxy is lognormal(m_tilde, v_tilde_sq) and k_star shifts the
    strike by the gap between the arithmetic and geometric means.
    """
    spots = np.atleast_1d(np.asarray(spots, dtype=float))
    if spots.shape[0] != diffusion.dim or contract.weights.shape[0] != diffusion.dim:
        raise ValueError("spots, weights and diffusion dimension must agree")
    grow = math.exp(contract.rate * contract.maturity)
    fwd_terms = contract.weights * spots * grow
    forward = float(fwd_terms.sum())
    omega_tilde = fwd_terms / forward
    vols = diffusion.asset_vol
    tmat = contract.maturity
    m_tilde = math.log(forward) - 0.5 * float(omega_tilde @ (vols**2)) * tmat
    v_tilde_sq = float(
        (omega_tilde * vols) @ diffusion.corr @ (omega_tilde * vols)
    ) * tmat
    geo_mean = math.exp(m_tilde + 0.5 * v_tilde_sq)
    k_star = contract.strike - (forward - geo_mean)
    return omega_tilde, forward, m_tilde, v_tilde_sq, k_star


def basket_price_diffusion(
    diffusion: DiffusionApprox, spots: np.ndarray, contract: BasketContract
) -> float:
    """Geometric-average approximation of the basket option value."""
    _, forward, m_tilde, v_tilde_sq, k_star = basket_moments(diffusion, spots, contract)
    geo_mean = math.exp(m_tilde + 0.5 * v_tilde_sq)
    if k_star <= 0:
        raise StrikeAdjustmentError(
            f"adjusted strike K*={k_star:.6g} <= 0 "
            f"(arithmetic mean {forward:.6g}, geometric mean {geo_mean:.6g})"
        )
    theta = contract.theta
    disc = math.exp(-contract.rate * contract.maturity)
    if v_tilde_sq == 0.0:
        return disc * max(theta * (geo_mean - k_star), 0.0)
    v_tilde = math.sqrt(v_tilde_sq)
    d1 = (m_tilde - math.log(k_star) + v_tilde_sq) / v_tilde
    d2 = d1 - v_tilde
    return float(disc * theta * (geo_mean * norm_cdf(theta * d1) - k_star * norm_cdf(theta * d2)))


def basket_price(params: EmgchpParams, contract: BasketContract) -> float:
    """Basket option on a d-dimensional compound Hawkes model (spots = exp(s0))."""
    diffusion = _model.diffusion_approx(params)
    return basket_price_diffusion(diffusion, params.spot_prices(), contract)
