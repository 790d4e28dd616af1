"""Implied volatility inversion and the implied order-flow quantities.

The volatility decomposition vol^2 = s*^2 E(N) + a*^2 Var(N) lets an implied
volatility be translated into an implied order-arrival expectation and
variance once the jump-chain constants and the branching ratio are known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateModelError, NoSolutionError, NumericalError
from .european import EuroContract, call_price, norm_pdf

_VOL_LO = 1e-8
_VOL_HI = 5.0


@dataclass(frozen=True)
class ImpliedVolQuery:
    """Observed call price plus the contract terms needed to invert it."""

    price: float
    spot: float
    strike: float
    rate: float
    tau: float

    def __post_init__(self):
        if self.spot <= 0 or self.strike <= 0:
            raise ValueError("spot and strike must be > 0")
        if self.tau <= 0:
            raise ValueError("time to expiry must be > 0")


@dataclass(frozen=True)
class ImpliedOrderFlow:
    """Implied order-arrival expectation and variance (per unit time)."""

    e_implied: float
    var_implied: float


def implied_vol(query: ImpliedVolQuery) -> float:
    """Volatility solving call(vol) = price, to 1e-10 * max(1, price) or better.

    Safeguarded Newton on the log price (bisection fallback on [1e-8, 5]),
    started from the sqrt(2 pi / tau) * price / spot flat-vol guess. The log
    formulation keeps relative accuracy for far out-of-the-money prices.
    """
    intrinsic = max(query.spot - query.strike * math.exp(-query.rate * query.tau), 0.0)
    if query.price <= intrinsic:
        raise NoSolutionError(
            f"price {query.price} <= intrinsic bound {intrinsic}; no volatility matches"
        )
    if query.price >= query.spot:
        raise NoSolutionError(
            f"price {query.price} >= spot bound {query.spot}; no volatility matches"
        )
    contract = EuroContract(query.strike, query.tau, query.rate)

    def value(vol):
        return call_price(0.0, query.spot, contract, vol)

    target = query.price
    lo, hi = _VOL_LO, _VOL_HI
    if value(lo) >= target:
        return lo
    if value(hi) <= target:
        raise NoSolutionError(f"price {target} above the value at vol={_VOL_HI}")
    vol = min(max(math.sqrt(2.0 * math.pi / query.tau) * target / query.spot, lo), hi)
    tol = 1e-13 * target
    for _ in range(200):
        c = value(vol)
        diff = c - target
        if abs(diff) <= tol:
            return float(vol)
        if diff > 0:
            hi = vol
        else:
            lo = vol
        root_tau = math.sqrt(query.tau)
        dplus = (
            math.log(query.spot / query.strike) + (query.rate + 0.5 * vol * vol) * query.tau
        ) / (vol * root_tau)
        vega = query.spot * norm_pdf(dplus) * root_tau
        nxt = math.nan
        if vega > 0 and c > 0:
            # Newton on log price: better conditioned for tiny time values
            nxt = vol - (math.log(c) - math.log(target)) * c / vega
        if not (math.isfinite(nxt) and lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        vol = nxt
        if hi - lo < 1e-16 * hi:
            break
    c = value(vol)
    if abs(c - target) <= 1e-10 * max(1.0, target):
        return float(vol)
    raise NumericalError(
        f"implied vol iteration stalled at vol={vol} (|price error|={abs(c - target):.3g})"
    )


def implied_order_flow(
    sigma_hat_implied: float, sigma_star: float, a_star: float, mu_hat: float
) -> ImpliedOrderFlow:
    """Back out E(N) and Var(N) from an implied volatility.

    Var = vol^2 / (s*^2 (1-mu)^2 + a*^2) and E = Var * (1-mu)^2, which equals
    vol^2 / (s*^2 + a*^2/(1-mu)^2) up to rounding order; deriving E from Var
    makes the identity Var * (1-mu)^2 = E hold bit-exactly.
    """
    if not 0.0 <= mu_hat < 1.0:
        raise ValueError(f"mu_hat={mu_hat} must lie in [0, 1)")
    if sigma_star == 0.0 and a_star == 0.0:
        raise DegenerateModelError("sigma_star and a_star cannot both be zero")
    omm = 1.0 - mu_hat
    var_implied = sigma_hat_implied**2 / (sigma_star**2 * omm**2 + a_star**2)
    return ImpliedOrderFlow(var_implied * omm**2, var_implied)
