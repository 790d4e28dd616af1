"""Pricing and simulation toolkit for Hawkes-based limit-order-book models.

Order flow is a multivariate Hawkes process, price jumps come from ergodic
Markov chains, and the diffusion limit of the resulting compound process is a
geometric Brownian motion whose constants feed closed-form European, spread,
and basket option valuation, Greeks, hedging, and implied order flow.
"""

from .calibration import (
    TickRecord,
    fit_chain,
    fit_hawkes_mle,
    hawkes_log_likelihood,
    load_events,
    write_ticks,
)
from .chains import (
    ChainSummary,
    MarkovChainSpec,
    TwoStateSpec,
    a_star,
    chain_from_json_dict,
    chain_from_summary,
    sigma_star_sq,
    simulate_chain,
    stationary_distribution,
    summarize,
    two_state_chain,
    two_state_summary,
)
from .errors import (
    CalibrationError,
    DataError,
    DegenerateChainError,
    DegenerateModelError,
    ErgodicityError,
    HawkesLobError,
    NoSolutionError,
    NumericalError,
    StationarityError,
    StrikeAdjustmentError,
)
from .european import (
    EuroContract,
    GreeksReport,
    HedgePortfolio,
    call_price,
    d_plus_minus,
    delta_hedge_errors,
    greeks,
    hedge_portfolio,
    price_surface,
    put_price,
)
from .hawkes import (
    EventStream,
    ExponentialKernel,
    HawkesParams,
    branching_matrix,
    expected_rate,
    intensity_at,
    simulate,
    stationarity_margin,
)
from .implied import ImpliedOrderFlow, ImpliedVolQuery, implied_order_flow, implied_vol
from .mc import gbm_paths, mc_basket, mc_euro, mc_exchange
from .model import (
    DiffusionApprox,
    EmgchpParams,
    PricePaths,
    c_matrix,
    diffusion_approx,
    emgchp_path,
    fclt_residual_sample,
    hawkes_bs_vol,
    lln_statistic,
    mgchp_path,
    sigma_matrix,
    simulate_marked_stream,
)
from .spread_basket import (
    AssetDiffusion,
    BasketContract,
    SpreadContract,
    basket_price,
    basket_price_diffusion,
    margrabe_price,
    sigma_bar,
    spread_2d_emgchp,
)

__version__ = "0.1.0"
