"""Monte Carlo oracles: agreement, determinism, variance-reduction behavior."""

import math

import numpy as np
import pytest

from hawkeslob import (
    BasketContract,
    EuroContract,
    call_price,
    diffusion_approx,
    margrabe_price,
    mc_basket,
    mc_euro,
    mc_exchange,
    sigma_bar,
)
from hawkeslob.spread_basket import AssetDiffusion
from conftest import BENCH_1D_VOL


class TestMcEuro:
    def test_zero_vol_is_deterministic(self, bench_1d_contract):
        price, se = mc_euro(0.0, bench_1d_contract, 50.0, 10**4, 1)
        expected = math.exp(-0.06) * max(50.0 * math.exp(0.06) - 50.0, 0.0)
        assert se < 1e-12
        assert price == pytest.approx(expected, rel=1e-14)

    def test_benchmark_three_se(self, bench_1d_contract):
        price, se = mc_euro(BENCH_1D_VOL, bench_1d_contract, 50.0, 2 * 10**5, 2)
        closed = call_price(0.0, 50.0, bench_1d_contract, BENCH_1D_VOL)
        assert abs(price - closed) < 3 * se

    def test_seed_determinism(self, bench_1d_contract):
        one = mc_euro(BENCH_1D_VOL, bench_1d_contract, 50.0, 10**4, 3)
        two = mc_euro(BENCH_1D_VOL, bench_1d_contract, 50.0, 10**4, 3)
        assert one == two

    def test_antithetic_reduces_se(self, bench_1d_contract):
        paths = 10**5
        _, se_anti = mc_euro(BENCH_1D_VOL, bench_1d_contract, 50.0, paths, 4, antithetic=True)
        _, se_plain = mc_euro(BENCH_1D_VOL, bench_1d_contract, 50.0, paths, 4, antithetic=False)
        assert se_anti <= 0.8 * se_plain

    def test_se_halves_with_4x_paths(self, bench_1d_contract):
        _, se_1 = mc_euro(BENCH_1D_VOL, bench_1d_contract, 50.0, 10**5, 5, antithetic=False)
        _, se_4 = mc_euro(BENCH_1D_VOL, bench_1d_contract, 50.0, 4 * 10**5, 5, antithetic=False)
        assert abs(se_1 / se_4 - 2.0) < 0.2

    def test_put_kind(self):
        contract = EuroContract(50.0, 1.0, 0.06, "put")
        price, se = mc_euro(BENCH_1D_VOL, contract, 50.0, 2 * 10**5, 6)
        from hawkeslob import put_price

        assert abs(price - put_price(0.0, 50.0, contract, BENCH_1D_VOL)) < 3 * se


class TestMcExchange:
    def test_perfect_correlation_equal_vols(self):
        price, se = mc_exchange(30.0, 20.0, 0.2, 0.2, 1.0, 1.0, 10**4, 7)
        assert se == 0.0
        assert price == 10.0

    def test_spread_benchmark_rho_zero(self):
        v1 = sigma_bar(0.75, 0.7, 0.05, 0.03)
        v2 = sigma_bar(1.5, 0.5, 0.05, 0.01)
        price, se = mc_exchange(30.0, 20.0, v1, v2, 0.0, 1.0, 4 * 10**5, 8)
        closed = margrabe_price(AssetDiffusion(30.0, v1), AssetDiffusion(20.0, v2), 1.0, 0.0)
        assert abs(price - closed) < 3 * se

    def test_seed_determinism(self):
        assert mc_exchange(30.0, 20.0, 0.3, 0.2, 0.4, 1.0, 10**4, 9) == mc_exchange(
            30.0, 20.0, 0.3, 0.2, 0.4, 1.0, 10**4, 9
        )


class TestMcBasket:
    def test_single_asset_modes_match_euro(self, bench_1d_model, bench_1d_contract):
        from hawkeslob import EmgchpParams

        params = EmgchpParams(bench_1d_model.hawkes, bench_1d_model.chains, np.log([50.0]))
        diffusion = diffusion_approx(params)
        contract = BasketContract([1.0], 50.0, 1.0, 0.06)
        euro, _ = mc_euro(BENCH_1D_VOL, bench_1d_contract, 50.0, 10**4, 10)
        for mode in ("arithmetic", "geometric"):
            price, _ = mc_basket(diffusion, contract, np.array([50.0]), mode, 10**4, 10)
            assert price == pytest.approx(euro, rel=1e-12)

    def test_arithmetic_dominates_geometric_at_equal_strike(self, model_3d):
        diffusion = diffusion_approx(model_3d)
        contract = BasketContract([0.3, 0.5, 0.2], 24.0, 1.0, 0.06)
        spots = model_3d.spot_prices()
        arith, _ = mc_basket(diffusion, contract, spots, "arithmetic", 10**5, 11)
        geo, _ = mc_basket(
            diffusion, contract, spots, "geometric", 10**5, 11, adjust_strike=False
        )
        assert arith >= geo

    def test_cholesky_always_factorizes(self, model_2d, model_3d):
        for model in (model_2d, model_3d):
            corr = diffusion_approx(model).corr
            chol = np.linalg.cholesky(corr)
            assert np.allclose(chol @ chol.T, corr, atol=1e-12)

    def test_seed_determinism(self, model_3d):
        diffusion = diffusion_approx(model_3d)
        contract = BasketContract([0.3, 0.5, 0.2], 24.0, 1.0, 0.06)
        spots = model_3d.spot_prices()
        assert mc_basket(diffusion, contract, spots, "arithmetic", 10**4, 12) == mc_basket(
            diffusion, contract, spots, "arithmetic", 10**4, 12
        )

    def test_bad_mode(self, model_2d):
        diffusion = diffusion_approx(model_2d)
        contract = BasketContract([0.5, 0.5], 20.0, 1.0, 0.06)
        with pytest.raises(ValueError):
            mc_basket(diffusion, contract, np.array([30.0, 20.0]), "harmonic", 100, 1)
