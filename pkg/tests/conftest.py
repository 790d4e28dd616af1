"""Shared fixtures: the benchmark parameter sets used across the suite."""

import numpy as np
import pytest

from hawkeslob import (
    EmgchpParams,
    EuroContract,
    HawkesParams,
    chain_from_summary,
)

# benchmark 1-d setup: K=50, r=0.06, alpha=0.7, beta=1, lambda=0.75,
# sigma*=0.05, a*=0.03, T=1; implied total vol sqrt(0.03125)
BENCH_1D = {
    "strike": 50.0,
    "rate": 0.06,
    "alpha": 0.7,
    "beta": 1.0,
    "lambda_inf": 0.75,
    "sigma_star": 0.05,
    "a_star": 0.03,
    "maturity": 1.0,
}
BENCH_1D_VOL = 0.17677669529663684


@pytest.fixture
def bench_1d_model() -> EmgchpParams:
    hawkes = HawkesParams.from_arrays(
        [BENCH_1D["lambda_inf"]], [[BENCH_1D["alpha"]]], [[BENCH_1D["beta"]]]
    )
    chain = chain_from_summary(BENCH_1D["a_star"], BENCH_1D["sigma_star"])
    return EmgchpParams(hawkes, (chain,))


@pytest.fixture
def bench_1d_contract() -> EuroContract:
    return EuroContract(BENCH_1D["strike"], BENCH_1D["maturity"], BENCH_1D["rate"])


# 2-d benchmark: fitted excitation matrices, per-asset chain constants,
# spots 30 and 20
ALPHA_2D = np.array([[115.7317, 0.4492], [0.0218, 123.2703]])
BETA_2D = np.array([[280.9249, 2.9611], [0.0669, 307.2993]])
LAMBDA_2D = np.array([0.0545, 0.0593])
A_STAR_2D = np.array([0.03, 0.04])
SIGMA_STAR_2D = np.array([0.05, 0.03])
SPOTS_2D = np.array([30.0, 20.0])


@pytest.fixture
def model_2d() -> EmgchpParams:
    hawkes = HawkesParams.from_arrays(LAMBDA_2D, ALPHA_2D, BETA_2D)
    chains = tuple(
        chain_from_summary(a, s) for a, s in zip(A_STAR_2D, SIGMA_STAR_2D)
    )
    return EmgchpParams(hawkes, chains, np.log(SPOTS_2D))


# 3-d basket benchmark: branching ratios given directly (alpha = K, beta = 1)
BRANCHING_3D = np.array(
    [
        [0.5933, 0.2068, 0.1743],
        [0.0845, 0.6746, 0.1222],
        [0.0312, 0.2033, 0.3820],
    ]
)
LAMBDA_3D = np.array([0.0545, 0.0593, 0.0623])
A_STAR_3D = np.array([0.03, 0.04, 0.02])
SIGMA_STAR_3D = np.array([0.05, 0.03, 0.06])
SPOTS_3D = np.array([30.0, 20.0, 25.0])
WEIGHTS_3D = np.array([0.3, 0.5, 0.2])
RATE_3D = 0.06


@pytest.fixture
def model_3d() -> EmgchpParams:
    hawkes = HawkesParams.from_arrays(LAMBDA_3D, BRANCHING_3D, np.ones((3, 3)))
    chains = tuple(
        chain_from_summary(a, s) for a, s in zip(A_STAR_3D, SIGMA_STAR_3D)
    )
    return EmgchpParams(hawkes, chains, np.log(SPOTS_3D))
