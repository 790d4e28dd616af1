"""Closed-form European option pricing under the order-flow-driven volatility.

The diffusion limit of the compound Hawkes mid-price is a geometric Brownian
motion, so calls solve the Black-Scholes PDE with volatility

    vol^2 = n * (s*^2 lam/(1-mu) + a*^2 lam/(1-mu)^3),

and the extra Greeks differentiate the price through that decomposition with
respect to the chain constants s*, a* and the branching ratio mu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import StationarityError

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def norm_cdf(x):
    """Standard normal CDF via the complementary error function (ndtr)."""
    return ndtr(x)


def norm_pdf(x):
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(x))


@dataclass(frozen=True)
class EuroContract:
    """European option: strike, maturity in years, continuously compounded rate."""

    strike: float
    maturity: float
    rate: float
    kind: str = "call"

    def __post_init__(self):
        if self.strike <= 0:
            raise ValueError("strike must be > 0")
        if self.maturity <= 0:
            raise ValueError("maturity must be > 0")
        if self.kind not in ("call", "put"):
            raise ValueError("kind must be 'call' or 'put'")


@dataclass(frozen=True)
class GreeksReport:
    """Price sensitivities; the starred entries differentiate through the
    volatility decomposition rather than the quoted vol."""

    delta: float
    theta: float
    greek_sigma_star: float
    greek_a_star: float
    greek_mu_hat: float


@dataclass(frozen=True)
class HedgePortfolio:
    """Replicating (stock, bond) pair; capital equals the option value."""

    alpha_t: float
    beta_t: float
    capital: float


def d_plus_minus(tau: float, x: float, contract: EuroContract, sigma_hat: float):
    """d+/- = [ln(x/K) + (r +/- vol^2/2) tau] / (vol sqrt(tau)); needs tau > 0."""
    if tau <= 0:
        raise ValueError("tau must be > 0; expiry is handled by the payoff branch")
    if x <= 0:
        raise ValueError("spot must be > 0")
    if sigma_hat <= 0:
        raise ValueError("sigma_hat must be > 0")
    root = sigma_hat * math.sqrt(tau)
    base = (math.log(x / contract.strike) + contract.rate * tau) / root
    return base + 0.5 * root, base - 0.5 * root


def call_price(t: float, x: float, contract: EuroContract, sigma_hat: float) -> float:
    """Call value at time t and spot x; at t = T the terminal payoff."""
    if t > contract.maturity:
        raise ValueError("t must not exceed maturity")
    tau = contract.maturity - t
    if tau == 0.0:
        return max(x - contract.strike, 0.0)
    if x == 0.0:
        return 0.0
    if sigma_hat <= 0:
        raise ValueError("sigma_hat must be > 0")
    dp, dm = d_plus_minus(tau, x, contract, sigma_hat)
    return float(
        x * norm_cdf(dp)
        - contract.strike * math.exp(-contract.rate * tau) * norm_cdf(dm)
    )


def put_price(t: float, x: float, contract: EuroContract, sigma_hat: float) -> float:
    """Put value through put-call parity: put = call - x + K e^{-r tau}."""
    tau = contract.maturity - t
    return call_price(t, x, contract, sigma_hat) - x + contract.strike * math.exp(
        -contract.rate * tau
    )


def price(t: float, x: float, contract: EuroContract, sigma_hat: float) -> float:
    if contract.kind == "put":
        return put_price(t, x, contract, sigma_hat)
    return call_price(t, x, contract, sigma_hat)


def _vol_decomposition(sigma_star, a_star, mu_hat, lambda_inf, n_scale):
    """Total vol and its partial derivatives in (sigma_star, a_star, mu_hat)."""
    if not 0.0 <= mu_hat < 1.0:
        raise StationarityError(f"branching ratio mu_hat={mu_hat} must lie in [0, 1)")
    omm = 1.0 - mu_hat
    var = n_scale * lambda_inf * (sigma_star**2 / omm + a_star**2 / omm**3)
    vol = math.sqrt(var)
    dv_dsigma = n_scale * sigma_star * lambda_inf / omm / vol
    dv_da = n_scale * a_star * lambda_inf / omm**3 / vol
    dv_dmu = n_scale * lambda_inf * (sigma_star**2 / omm**2 + 3.0 * a_star**2 / omm**4) / (
        2.0 * vol
    )
    return vol, dv_dsigma, dv_da, dv_dmu


def greeks(
    t: float,
    x: float,
    contract: EuroContract,
    sigma_star: float,
    a_star: float,
    mu_hat: float,
    lambda_inf: float,
    n_scale: float = 1.0,
) -> GreeksReport:
    """Call sensitivities at (t, x) for the given model constants.

    delta = Phi(d+); theta is the t-derivative; the starred Greeks follow the
    two-term pattern x phi(d+) F+ - K e^{-r tau} phi(d-) F- with
    F+/- = (-d+/- / vol +/- sqrt(tau)) dvol/dparam, which makes each of them
    an exact partial derivative of the call price.
    """
    if not 0 <= t < contract.maturity:
        raise ValueError("need 0 <= t < maturity")
    if x <= 0:
        raise ValueError("spot must be > 0")
    tau = contract.maturity - t
    vol, dv_dsigma, dv_da, dv_dmu = _vol_decomposition(
        sigma_star, a_star, mu_hat, lambda_inf, n_scale
    )
    dp, dm = d_plus_minus(tau, x, contract, vol)
    disc_k = contract.strike * math.exp(-contract.rate * tau)
    root_tau = math.sqrt(tau)

    delta = float(norm_cdf(dp))
    theta = float(
        -contract.rate * disc_k * norm_cdf(dm)
        - x / (2.0 * root_tau) * norm_pdf(dp) * vol
    )

    def sensitivity(dvol):
        f_plus = (-dp / vol + root_tau) * dvol
        f_minus = (-dm / vol - root_tau) * dvol
        return float(x * norm_pdf(dp) * f_plus - disc_k * norm_pdf(dm) * f_minus)

    return GreeksReport(
        delta=delta,
        theta=theta,
        greek_sigma_star=sensitivity(dv_dsigma),
        greek_a_star=sensitivity(dv_da),
        greek_mu_hat=sensitivity(dv_dmu),
    )


def hedge_portfolio(
    t: float, spot: float, contract: EuroContract, sigma_hat: float
) -> HedgePortfolio:
    """Minimal replicating portfolio: alpha in stock, beta in the T-bond account.

    capital = alpha * spot + beta * e^{r t} = call price, exactly.
    """
    if not 0 <= t < contract.maturity:
        raise ValueError("need 0 <= t < maturity")
    if spot <= 0:
        raise ValueError("spot must be > 0")
    tau = contract.maturity - t
    dp, dm = d_plus_minus(tau, spot, contract, sigma_hat)
    alpha = float(norm_cdf(dp))
    beta = float(-contract.strike * math.exp(-contract.rate * contract.maturity) * norm_cdf(dm))
    capital = float(spot * alpha + beta * math.exp(contract.rate * t))
    return HedgePortfolio(alpha, beta, capital)


def price_surface(
    contract: EuroContract,
    sigma_hat: float,
    spot_grid: np.ndarray,
    time_grid: np.ndarray,
) -> np.ndarray:
    """Call prices on a (time, spot) grid, rows indexed by time."""
    spot_grid = np.asarray(spot_grid, dtype=float)
    time_grid = np.asarray(time_grid, dtype=float)
    out = np.empty((time_grid.size, spot_grid.size))
    for a, t in enumerate(time_grid):
        for b, x in enumerate(spot_grid):
            out[a, b] = call_price(float(t), float(x), contract, sigma_hat)
    return out


def delta_hedge_errors(
    contract: EuroContract,
    sigma_hat: float,
    spot_paths: np.ndarray,
    times: np.ndarray,
) -> np.ndarray:
    """Terminal replication errors of a discretely rebalanced delta hedge.

    spot_paths has shape (n_paths, len(times)) with times[0] = 0 and
    times[-1] = maturity. The portfolio starts at the call price, rebalances
    to delta at every grid point, and the return value is X_T - payoff.
    """
    times = np.asarray(times, dtype=float)
    spot_paths = np.atleast_2d(np.asarray(spot_paths, dtype=float))
    if times[0] != 0.0 or abs(times[-1] - contract.maturity) > 1e-12:
        raise ValueError("times must run from 0 to maturity")
    capital = np.array(
        [call_price(0.0, float(s), contract, sigma_hat) for s in spot_paths[:, 0]]
    )
    rate = contract.rate
    for k in range(times.size - 1):
        tau = contract.maturity - times[k]
        root = sigma_hat * math.sqrt(tau)
        dp = (np.log(spot_paths[:, k] / contract.strike) + rate * tau) / root + 0.5 * root
        deltas = norm_cdf(dp)
        growth = math.exp(rate * (times[k + 1] - times[k]))
        capital = deltas * spot_paths[:, k + 1] + (capital - deltas * spot_paths[:, k]) * growth
    payoff = np.maximum(spot_paths[:, -1] - contract.strike, 0.0)
    return capital - payoff
