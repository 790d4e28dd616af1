"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here, nothing is deferred.
"""

import math
import time

import numpy as np
from scipy.stats import jarque_bera

import hawkeslob as hl
from conftest import SPOTS_3D, BENCH_1D_VOL, WEIGHTS_3D


def report(criterion, detail):
    print(f"PASS criterion {criterion}: {detail}")


def test_criterion_01_closed_form_vs_monte_carlo(bench_1d_model, bench_1d_contract):
    start = time.time()
    sigma_hat = hl.hawkes_bs_vol(bench_1d_model)
    closed = hl.call_price(0.0, 50.0, bench_1d_contract, sigma_hat)
    mc_price, se = hl.mc_euro(sigma_hat, bench_1d_contract, 50.0, 10**6, 2024)
    elapsed = time.time() - start
    assert abs(mc_price - closed) < 3 * se
    assert elapsed < 10.0
    report(1, f"call {closed:.4f} vs MC {mc_price:.4f} (se {se:.5f}), {elapsed:.1f}s")


def test_criterion_02_vol_decomposition_identity():
    rng = np.random.default_rng(31)
    worst = 0.0
    for _ in range(1000):
        lam = rng.uniform(0.05, 5.0)
        mu = rng.uniform(0.0, 0.95)
        s = rng.uniform(0.001, 0.5)
        a = rng.uniform(0.0, 0.2)
        hawkes = hl.HawkesParams.from_arrays([lam], [[mu]], [[1.0]])
        params = hl.EmgchpParams(hawkes, (hl.chain_from_summary(a, s),))
        vol_sq = hl.hawkes_bs_vol(params) ** 2
        direct = s**2 * lam / (1 - mu) + a**2 * lam / (1 - mu) ** 3
        worst = max(worst, abs(vol_sq - direct) / max(direct, 1e-300))
    assert worst < 1e-14

    hawkes = hl.HawkesParams.from_arrays([0.75], [[0.7]], [[1.0]])
    params = hl.EmgchpParams(hawkes, (hl.chain_from_summary(0.03, 0.05),))
    row_norm = hl.diffusion_approx(params).asset_vol[0]
    assert abs(hl.hawkes_bs_vol(params) - row_norm) < 1e-12
    report(2, f"decomposition worst rel err {worst:.2e}; row-norm match")


def test_criterion_03_greeks_vs_finite_differences(bench_1d_contract):
    start = time.time()
    lam, mu = 0.75, 0.7

    def price_call(t, x, s, a, m):
        vol = math.sqrt(lam * (s**2 / (1 - m) + a**2 / (1 - m) ** 3))
        return hl.call_price(t, x, bench_1d_contract, vol)

    # grid kept within a few standard deviations of the money so central
    # differences actually resolve the derivatives they oracle
    checked = 0
    for moneyness in (0.85, 0.95, 1.0, 1.05, 1.15):
        for tau in (0.25, 0.4, 0.55, 0.75, 0.95):
            for m in (0.5, 0.7, 0.85):
                t = 1.0 - tau
                x = 50.0 * moneyness
                g = hl.greeks(t, x, bench_1d_contract, 0.05, 0.03, m, lam)
                h = 1e-5
                fd = {
                    "delta": (price_call(t, x * (1 + h), 0.05, 0.03, m)
                              - price_call(t, x * (1 - h), 0.05, 0.03, m)) / (2 * h * x),
                    "theta": (price_call(t + h, x, 0.05, 0.03, m)
                              - price_call(t - h, x, 0.05, 0.03, m)) / (2 * h),
                    "greek_sigma_star": (price_call(t, x, 0.05 * (1 + h), 0.03, m)
                                         - price_call(t, x, 0.05 * (1 - h), 0.03, m))
                                        / (2 * h * 0.05),
                    "greek_a_star": (price_call(t, x, 0.05, 0.03 * (1 + h), m)
                                     - price_call(t, x, 0.05, 0.03 * (1 - h), m))
                                    / (2 * h * 0.03),
                    "greek_mu_hat": (price_call(t, x, 0.05, 0.03, m + h)
                                     - price_call(t, x, 0.05, 0.03, m - h)) / (2 * h),
                }
                for name, oracle in fd.items():
                    got = getattr(g, name)
                    scale = max(abs(oracle), 1e-9)
                    assert abs(got - oracle) / scale < 1e-4, (name, moneyness, tau, m)
                    checked += 1
    elapsed = time.time() - start
    assert elapsed < 5.0
    report(3, f"{checked} Greek/finite-difference matches at 1e-4, {elapsed:.1f}s")


def test_criterion_04_two_state_corollary():
    rng = np.random.default_rng(33)
    checked = 0
    while checked < 1000:
        p, q = rng.uniform(0.0, 1.0, 2)
        if p + q >= 1.99:
            continue
        delta = rng.uniform(0.001, 4.0)
        spec = hl.TwoStateSpec(p, q, delta)
        closed = hl.two_state_summary(spec).sigma_star_sq
        general = hl.sigma_star_sq(hl.two_state_chain(spec))
        assert abs(closed - general) < 1e-9 * max(1.0, general)
        checked += 1
    assert hl.two_state_summary(hl.TwoStateSpec(0.5, 0.5, 1.0)).sigma_star_sq == 1.0
    assert hl.two_state_summary(hl.TwoStateSpec(0.0, 0.0, 1.0)).sigma_star_sq == 0.0
    report(4, "closed form vs fundamental matrix on 1000 draws; spot checks exact")


def test_criterion_05_fclt_convergence(bench_1d_model):
    start = time.time()
    stoch = hl.fclt_residual_sample(bench_1d_model, 1000.0, 1.0, 1000, 7, "stochastic")[:, 0]
    det = hl.fclt_residual_sample(bench_1d_model, 1000.0, 1.0, 1000, 7, "deterministic")[:, 0]
    var_s, var_d = stoch.var(ddof=1), det.var(ddof=1)
    assert abs(var_s - 0.00625) / 0.00625 < 0.10
    assert abs(var_d - 0.03125) / 0.03125 < 0.10
    jb_s, jb_d = jarque_bera(stoch).pvalue, jarque_bera(det).pvalue
    assert jb_s > 0.01 and jb_d > 0.01
    elapsed = time.time() - start
    assert elapsed < 60.0
    report(5, f"vars {var_s:.5f}/{var_d:.5f}, JB p {jb_s:.2f}/{jb_d:.3f}, {elapsed:.1f}s")


def test_criterion_06_lln_convergence(bench_1d_model):
    start = time.time()
    stat = hl.lln_statistic(bench_1d_model, 1000.0, 1.0, 500, 11)[0]
    target = math.exp(0.075)
    assert abs(stat - target) / target < 0.05
    elapsed = time.time() - start
    assert elapsed < 60.0
    report(6, f"LLN statistic {stat:.5f} vs {target:.5f}, {elapsed:.1f}s")


def test_criterion_07_margrabe_vs_oracle():
    vol1 = hl.sigma_bar(0.75, 0.7, 0.05, 0.03)
    vol2 = hl.sigma_bar(1.5, 0.5, 0.05, 0.01)
    asset1 = hl.AssetDiffusion(30.0, vol1)
    asset2 = hl.AssetDiffusion(20.0, vol2)
    for rho in (0.0, 0.5, 0.9):
        closed = hl.margrabe_price(asset1, asset2, 1.0, rho)
        mc_price, se = hl.mc_exchange(30.0, 20.0, vol1, vol2, rho, 1.0, 10**6, 44)
        assert abs(mc_price - closed) < 3 * se, rho

    same_vol = hl.AssetDiffusion(20.0, vol1)
    assert hl.margrabe_price(asset1, same_vol, 1.0, 1.0) == 10.0

    rng = np.random.default_rng(45)
    for _ in range(200):
        scale = rng.uniform(0.2, 8.0)
        base = hl.margrabe_price(asset1, asset2, 1.0, 0.3)
        scaled = hl.margrabe_price(
            hl.AssetDiffusion(scale * 30.0, vol1), hl.AssetDiffusion(scale * 20.0, vol2),
            1.0, 0.3,
        )
        assert abs(scaled - scale * base) < 1e-12 * max(1.0, scale * base)
    report(7, "Margrabe vs MC at rho in {0, 0.5, 0.9}; degenerate and homogeneity exact")


def test_criterion_08_2d_spread(model_2d):
    diffusion = hl.diffusion_approx(model_2d)
    closed = hl.spread_2d_emgchp(model_2d, 1.0)
    mc_price, se = hl.mc_exchange(
        30.0, 20.0,
        float(diffusion.asset_vol[0]), float(diffusion.asset_vol[1]),
        float(diffusion.corr[0, 1]), 1.0, 10**6, 46,
    )
    assert abs(mc_price - closed) < 3 * max(se, 1e-12)

    hawkes = hl.HawkesParams.from_arrays(
        [0.75, 1.5], [[0.7, 0.0], [0.0, 0.5]], np.ones((2, 2))
    )
    chains = (hl.chain_from_summary(0.03, 0.05), hl.chain_from_summary(0.01, 0.05))
    block = hl.EmgchpParams(hawkes, chains, np.log([30.0, 20.0]))
    two_1d = hl.margrabe_price(
        hl.AssetDiffusion(30.0, hl.sigma_bar(0.75, 0.7, 0.05, 0.03)),
        hl.AssetDiffusion(20.0, hl.sigma_bar(1.5, 0.5, 0.05, 0.01)),
        1.0, 0.0,
    )
    assert abs(hl.spread_2d_emgchp(block, 1.0) - two_1d) < 1e-10
    report(8, f"2-d spread {closed:.4f} vs MC {mc_price:.4f} (se {se:.2e}); block-diagonal match")


def test_criterion_09_basket(bench_1d_model, model_3d):
    single = hl.EmgchpParams(bench_1d_model.hawkes, bench_1d_model.chains, np.log([50.0]))
    contract_1d = hl.BasketContract([1.0], 50.0, 1.0, 0.06)
    euro = hl.call_price(0.0, 50.0, hl.EuroContract(50.0, 1.0, 0.06), hl.hawkes_bs_vol(single))
    assert abs(hl.basket_price(single, contract_1d) - euro) < 1e-12

    contract = hl.BasketContract(WEIGHTS_3D, 24.0, 1.0, 0.06)
    closed = hl.basket_price(model_3d, contract)
    diffusion = hl.diffusion_approx(model_3d)
    geo, geo_se = hl.mc_basket(diffusion, contract, SPOTS_3D, "geometric", 10**6, 47)
    arith, _ = hl.mc_basket(diffusion, contract, SPOTS_3D, "arithmetic", 10**6, 48)
    assert abs(geo - closed) < 3 * geo_se
    gap = abs(arith - closed) / arith
    assert gap < 0.05
    report(9, f"basket {closed:.4f}: geometric MC {geo:.4f}, arithmetic gap {gap:.2%}")


def test_criterion_10_implied_round_trips():
    for moneyness in np.linspace(0.5, 2.0, 7):
        for tau in (0.01, 0.1, 0.5, 1.0, 2.5, 5.0):
            spot = 50.0 * moneyness
            contract = hl.EuroContract(50.0, tau, 0.06)
            for true_vol in (BENCH_1D_VOL, 0.4):
                target = hl.call_price(0.0, spot, contract, true_vol)
                intrinsic = max(spot - 50.0 * math.exp(-0.06 * tau), 0.0)
                if target <= intrinsic or target >= spot:
                    continue  # time value below double precision
                vol = hl.implied_vol(hl.ImpliedVolQuery(target, spot, 50.0, 0.06, tau))
                again = hl.call_price(0.0, spot, contract, vol)
                assert abs(again - target) <= 1e-10 * max(target, 1e-300)

    flow = hl.implied_order_flow(BENCH_1D_VOL, 0.05, 0.03, 0.7)
    assert abs(flow.e_implied - 2.5) < 1e-12
    assert flow.var_implied * (1.0 - 0.7) ** 2 == flow.e_implied
    report(10, "price-vol-price round trips at 1e-10; order flow recovers 2.5")


def test_criterion_11_calibration_round_trip(bench_1d_model):
    start = time.time()
    truth = bench_1d_model.hawkes
    stream, marks = hl.simulate_marked_stream(bench_1d_model, 1e5, 123)
    fitted = hl.fit_hawkes_mle(stream, 1)
    rel = lambda got, want: abs(got - want) / want
    err_lambda = rel(fitted.lambda_inf[0], truth.lambda_inf[0])
    err_alpha = rel(fitted.kernel.alpha[0, 0], truth.kernel.alpha[0, 0])
    err_beta = rel(fitted.kernel.beta[0, 0], truth.kernel.beta[0, 0])
    assert err_lambda < 0.10 and err_alpha < 0.10 and err_beta < 0.10

    chain = hl.fit_chain(stream, marks, 0)
    refit = hl.EmgchpParams(fitted, (chain,))
    err_vol = rel(hl.hawkes_bs_vol(refit), BENCH_1D_VOL)
    assert err_vol < 0.10
    elapsed = time.time() - start
    assert elapsed < 120.0
    report(
        11,
        f"rel errors lambda {err_lambda:.3f}, alpha {err_alpha:.3f}, "
        f"beta {err_beta:.3f}, vol {err_vol:.3f}, {elapsed:.1f}s",
    )


def test_criterion_12_hedging(bench_1d_contract):
    rng = np.random.default_rng(50)
    for _ in range(1000):
        t = rng.uniform(0.0, 0.99)
        spot = rng.uniform(10.0, 150.0)
        portfolio = hl.hedge_portfolio(t, spot, bench_1d_contract, BENCH_1D_VOL)
        assert abs(portfolio.capital - hl.call_price(t, spot, bench_1d_contract, BENCH_1D_VOL)) < 1e-12

    times, paths = hl.gbm_paths(50.0, 0.06, BENCH_1D_VOL, 1.0, 800, 200, 2718)
    rmse = {}
    for steps in (50, 200, 800):
        stride = 800 // steps
        errors = hl.delta_hedge_errors(
            bench_1d_contract, BENCH_1D_VOL, paths[:, ::stride], times[::stride]
        )
        rmse[steps] = float(np.sqrt(np.mean(errors**2)))
    ratio_1 = rmse[50] / rmse[200]
    ratio_2 = rmse[200] / rmse[800]
    assert 1.6 < ratio_1 < 2.4 and 1.6 < ratio_2 < 2.4
    report(12, f"capital identity at 1e-12; error ratios {ratio_1:.2f}, {ratio_2:.2f}")


def test_criterion_13_pde_residual(bench_1d_contract):
    vol = BENCH_1D_VOL
    worst = 0.0
    for x in np.linspace(35.0, 70.0, 11):
        ht, hx = 1e-4, 3e-4 * x
        for t in np.linspace(0.1, 0.9, 9):
            c0 = hl.call_price(t, x, bench_1d_contract, vol)
            ct = (hl.call_price(t + ht, x, bench_1d_contract, vol)
                  - hl.call_price(t - ht, x, bench_1d_contract, vol)) / (2 * ht)
            cx = (hl.call_price(t, x + hx, bench_1d_contract, vol)
                  - hl.call_price(t, x - hx, bench_1d_contract, vol)) / (2 * hx)
            cxx = (hl.call_price(t, x + hx, bench_1d_contract, vol) - 2 * c0
                   + hl.call_price(t, x - hx, bench_1d_contract, vol)) / hx**2
            resid = ct + 0.06 * x * cx + 0.5 * x * x * vol * vol * cxx - 0.06 * c0
            worst = max(worst, abs(resid) / (1 + c0))
    assert worst < 1e-4
    report(13, f"worst PDE residual {worst:.2e} < 1e-4")
