"""Command-line front end: pricing, Greeks, surfaces, implied quantities,
spread/basket valuation, simulation, calibration, and hedging paths.

Scalar results print as JSON; grids and paths print as CSV (stdout or
--output). Every randomized subcommand takes an explicit --seed so runs are
reproducible. Exit code 2 flags a violated precondition or unreadable input.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys

import numpy as np

from . import calibration as _calibration
from . import chains as _chains
from . import european as _european
from . import implied as _implied
from . import model as _model
from . import spread_basket as _spread
from .errors import HawkesLobError
from .european import EuroContract
from .implied import ImpliedVolQuery


def _parse_grid(text: str) -> np.ndarray:
    """Parse start:step:stop (stop inclusive) into an array."""
    try:
        start, step, stop = (float(p) for p in text.split(":"))
    except ValueError:
        raise ValueError(f"grid '{text}' is not of the form start:step:stop") from None
    if step <= 0 or stop < start:
        raise ValueError(f"grid '{text}' needs step > 0 and stop >= start")
    count = int(round((stop - start) / step)) + 1
    grid = start + step * np.arange(count)
    return grid[grid <= stop + 1e-9 * max(1.0, abs(stop))]


def _parse_floats(text: str) -> np.ndarray:
    return np.asarray([float(p) for p in text.split(",")], dtype=float)


def _fmt(x) -> str:
    """Full-precision scalar for CSV cells (floats round-trip exactly)."""
    return repr(float(x))


def _load_model(path: str) -> _model.EmgchpParams:
    return _model.EmgchpParams.load(path)


@contextlib.contextmanager
def _open_output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_rows(out, header, rows) -> None:
    writer = csv.writer(out)
    writer.writerow(header)
    writer.writerows(rows)


def _asset_constants(params: _model.EmgchpParams, asset: int):
    summary = _chains.summarize(params.chains[asset])
    lam = float(params.hawkes.lambda_inf[asset])
    mu_hat = float(params.hawkes.kernel.branching()[asset, asset])
    return summary, lam, mu_hat


def _cmd_price(args) -> int:
    params = _load_model(args.model)
    sigma_hat = _model.hawkes_bs_vol(params, args.asset)
    kind = "put" if args.put else "call"
    contract = EuroContract(args.strike, args.maturity, args.rate, kind)
    value = _european.price(0.0, args.spot, contract, sigma_hat)
    print(json.dumps({"price": value, "sigma_hat": sigma_hat, "kind": kind}))
    return 0


def _cmd_surface(args) -> int:
    params = _load_model(args.model)
    sigma_hat = _model.hawkes_bs_vol(params, args.asset)
    contract = EuroContract(args.strike, args.maturity, args.rate)
    spots = _parse_grid(args.spot_grid)
    times = _parse_grid(args.time_grid)
    grid = _european.price_surface(contract, sigma_hat, spots, times)
    rows = [
        (_fmt(t), _fmt(x), _fmt(grid[a, b]))
        for a, t in enumerate(times)
        for b, x in enumerate(spots)
    ]
    with _open_output(args.output) as out:
        _write_rows(out, ["t", "x", "price"], rows)
    return 0


def _cmd_greeks(args) -> int:
    params = _load_model(args.model)
    summary, lam, mu_hat = _asset_constants(params, args.asset)
    contract = EuroContract(args.strike, args.maturity, args.rate)
    rows = []
    for x in _parse_grid(args.spot_grid):
        report = _european.greeks(
            args.time,
            float(x),
            contract,
            summary.sigma_star,
            summary.a_star,
            mu_hat,
            lam,
            params.n_scale,
        )
        rows.append(
            (
                _fmt(x),
                _fmt(report.delta),
                _fmt(report.theta),
                _fmt(report.greek_sigma_star),
                _fmt(report.greek_a_star),
                _fmt(report.greek_mu_hat),
            )
        )
    with _open_output(args.output) as out:
        _write_rows(
            out, ["x", "delta", "theta", "c_sigma_star", "c_a_star", "c_mu_hat"], rows
        )
    return 0


def _cmd_implied(args) -> int:
    query = ImpliedVolQuery(args.price, args.spot, args.strike, args.rate, args.tau)
    vol = _implied.implied_vol(query)
    print(json.dumps({"implied_vol": vol}))
    return 0


def _cmd_implied_flow(args) -> int:
    params = _load_model(args.model)
    summary, lam, mu_hat = _asset_constants(params, args.asset)
    sigma_hat = _model.hawkes_bs_vol(params, args.asset)
    rows = []
    for tau in _parse_grid(args.t_grid):
        contract = EuroContract(args.strike, float(tau), args.rate)
        price = _european.call_price(0.0, args.spot, contract, sigma_hat)
        vol = _implied.implied_vol(
            ImpliedVolQuery(price, args.spot, args.strike, args.rate, float(tau))
        )
        flow = _implied.implied_order_flow(vol, summary.sigma_star, summary.a_star, mu_hat)
        rows.append((_fmt(tau), _fmt(vol), _fmt(flow.e_implied), _fmt(flow.var_implied)))
    with _open_output(args.output) as out:
        _write_rows(out, ["T", "implied_vol", "e_implied", "var_implied"], rows)
    return 0


def _sigma_bar_of(params: _model.EmgchpParams) -> float:
    if params.dim != 1:
        raise ValueError("spread mode expects one-dimensional models")
    return _model.hawkes_bs_vol(params, 0)


def _cmd_spread(args) -> int:
    vol1 = _sigma_bar_of(_load_model(args.model1))
    vol2 = _sigma_bar_of(_load_model(args.model2))
    asset1 = _spread.AssetDiffusion(args.s1, vol1)
    asset2 = _spread.AssetDiffusion(args.s2, vol2)
    rows = []
    for t in _parse_grid(args.t_grid):
        for rho in _parse_grid(args.rho_grid):
            value = _spread.margrabe_price(asset1, asset2, float(t), float(rho))
            rows.append((_fmt(t), _fmt(rho), _fmt(value)))
    with _open_output(args.output) as out:
        _write_rows(out, ["T", "rho", "price"], rows)
    return 0


def _cmd_spread2d(args) -> int:
    params = _load_model(args.model)
    if args.s1 is not None and args.s2 is not None:
        params = _model.EmgchpParams(
            params.hawkes,
            params.chains,
            np.log([args.s1, args.s2]),
            params.n_scale,
        )
    rows = []
    for t in _parse_grid(args.t_grid):
        rows.append((_fmt(t), _fmt(_spread.spread_2d_emgchp(params, float(t)))))
    with _open_output(args.output) as out:
        _write_rows(out, ["T", "price"], rows)
    return 0


def _cmd_basket(args) -> int:
    params = _load_model(args.model)
    if args.spots is not None:
        params = _model.EmgchpParams(
            params.hawkes, params.chains, np.log(_parse_floats(args.spots)), params.n_scale
        )
    weights = _parse_floats(args.weights)
    theta = -1 if args.put else 1
    rows = []
    for t in _parse_grid(args.t_grid):
        contract = _spread.BasketContract(weights, args.strike, float(t), args.rate, theta)
        rows.append((_fmt(t), _fmt(_spread.basket_price(params, contract))))
    with _open_output(args.output) as out:
        _write_rows(out, ["T", "price"], rows)
    print(
        json.dumps({"theta": theta, "strike": args.strike, "rate": args.rate}),
        file=sys.stderr,
    )
    return 0


def _cmd_simulate(args) -> int:
    with open(args.model) as fh:
        doc = json.load(fh)
    if args.format == "events" and "chains" not in doc:
        # a bare Hawkes parameter document is enough for the event stream
        from .hawkes import HawkesParams, simulate

        stream = simulate(HawkesParams.from_json_dict(doc), args.horizon, args.seed)
        rows = [(_fmt(t), int(j)) for t, j in zip(stream.times, stream.dims)]
        with _open_output(args.output) as out:
            _write_rows(out, ["time", "dim"], rows)
        return 0
    params = _model.EmgchpParams.from_json_dict(doc)
    if args.format == "events":
        stream = _model.simulate_marked_stream(params, args.horizon, args.seed)[0]
        rows = [(_fmt(t), int(j)) for t, j in zip(stream.times, stream.dims)]
        header = ["time", "dim"]
    elif args.format == "ticks":
        stream, marks = _model.simulate_marked_stream(params, args.horizon, args.seed)
        rows = [
            (_fmt(t), int(j), _fmt(m))
            for t, j, m in zip(stream.times, stream.dims, marks)
        ]
        header = ["time", "dim", "price_change"]
    else:
        paths = _model.emgchp_path(params, args.horizon, args.seed)
        rows = []
        for i in range(paths.dim):
            rows.append((_fmt(0.0), i, _fmt(paths.s0[i]), _fmt(np.exp(paths.s0[i]))))
            for t, s in zip(paths.times[i], paths.log_prices[i]):
                rows.append((_fmt(t), i, _fmt(s), _fmt(np.exp(s))))
        header = ["time", "asset", "log_price", "price"]
    with _open_output(args.output) as out:
        _write_rows(out, header, rows)
    return 0


def _cmd_calibrate(args) -> int:
    stream, marks = _calibration.load_events(args.input, args.dim)
    hawkes = _calibration.fit_hawkes_mle(stream, args.dim)
    chains = tuple(
        _calibration.fit_chain(stream, marks, i, args.smoothing) for i in range(args.dim)
    )
    params = _model.EmgchpParams(hawkes, chains)
    print(json.dumps(params.to_json_dict(), indent=2))
    return 0


def _cmd_mc(args) -> int:
    from .mc import mc_euro

    params = _load_model(args.model)
    sigma_hat = _model.hawkes_bs_vol(params, args.asset)
    kind = "put" if args.put else "call"
    contract = EuroContract(args.strike, args.maturity, args.rate, kind)
    value, se = mc_euro(sigma_hat, contract, args.spot, args.paths, args.seed)
    print(json.dumps({"price": value, "se": se, "paths": args.paths, "seed": args.seed}))
    return 0


def _cmd_hedge(args) -> int:
    from .mc import gbm_paths

    params = _load_model(args.model)
    sigma_hat = _model.hawkes_bs_vol(params, args.asset)
    contract = EuroContract(args.strike, args.maturity, args.rate)
    times, paths = gbm_paths(
        args.spot, args.rate, sigma_hat, args.maturity, args.steps, 1, args.seed
    )
    rows = []
    for t, spot in zip(times[:-1], paths[0, :-1]):
        portfolio = _european.hedge_portfolio(float(t), float(spot), contract, sigma_hat)
        rows.append(
            (
                _fmt(t),
                _fmt(spot),
                _fmt(portfolio.alpha_t),
                _fmt(portfolio.beta_t),
                _fmt(portfolio.capital),
            )
        )
    with _open_output(args.output) as out:
        _write_rows(out, ["t", "spot", "alpha", "beta", "capital"], rows)
    return 0


def _add_contract_flags(parser, maturity=True):
    parser.add_argument("--strike", type=float, required=True)
    parser.add_argument("--rate", type=float, required=True)
    if maturity:
        parser.add_argument("--maturity", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hawkeslob",
        description="Pricing and simulation for Hawkes-based limit-order-book models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="European option price from a model JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--spot", type=float, required=True)
    _add_contract_flags(p)
    p.add_argument("--put", action="store_true")
    p.add_argument("--asset", type=int, default=0)
    p.set_defaults(func=_cmd_price)

    p = sub.add_parser("surface", help="price surface over (t, x)")
    p.add_argument("--model", required=True)
    _add_contract_flags(p)
    p.add_argument("--spot-grid", required=True)
    p.add_argument("--time-grid", required=True)
    p.add_argument("--asset", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_surface)

    p = sub.add_parser("greeks", help="Greeks over a spot grid")
    p.add_argument("--model", required=True)
    _add_contract_flags(p)
    p.add_argument("--spot-grid", required=True)
    p.add_argument("--time", type=float, default=0.0)
    p.add_argument("--asset", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_greeks)

    p = sub.add_parser("implied", help="implied volatility from an observed price")
    p.add_argument("--price", type=float, required=True)
    p.add_argument("--spot", type=float, required=True)
    p.add_argument("--strike", type=float, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.set_defaults(func=_cmd_implied)

    p = sub.add_parser(
        "implied-flow", help="implied volatility and order flow over maturities"
    )
    p.add_argument("--model", required=True)
    p.add_argument("--spot", type=float, required=True)
    _add_contract_flags(p, maturity=False)
    p.add_argument("--t-grid", required=True)
    p.add_argument("--asset", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_implied_flow)

    p = sub.add_parser("spread", help="two-asset exchange option over (T, rho)")
    p.add_argument("--model1", required=True)
    p.add_argument("--model2", required=True)
    p.add_argument("--s1", type=float, required=True)
    p.add_argument("--s2", type=float, required=True)
    p.add_argument("--t-grid", required=True)
    p.add_argument("--rho-grid", required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_spread)

    p = sub.add_parser("spread2d", help="spread option on one 2-d model over T")
    p.add_argument("--model", required=True)
    p.add_argument("--s1", type=float)
    p.add_argument("--s2", type=float)
    p.add_argument("--t-grid", required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_spread2d)

    p = sub.add_parser("basket", help="basket option over T")
    p.add_argument("--model", required=True)
    p.add_argument("--weights", required=True, help="comma-separated, summing to 1")
    p.add_argument("--strike", type=float, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--t-grid", required=True)
    p.add_argument("--spots", help="comma-separated spot overrides")
    p.add_argument("--put", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_basket)

    p = sub.add_parser("simulate", help="simulate the model (events, ticks, or paths)")
    p.add_argument("--model", required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--format", choices=["events", "ticks", "paths"], default="events")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("calibrate", help="fit Hawkes kernel and jump chains from ticks")
    p.add_argument("--input", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--smoothing", type=float, default=1e-6)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("mc", help="Monte Carlo cross-check of the European price")
    p.add_argument("--model", required=True)
    p.add_argument("--spot", type=float, required=True)
    _add_contract_flags(p)
    p.add_argument("--paths", type=int, default=10**6)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--put", action="store_true")
    p.add_argument("--asset", type=int, default=0)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("hedge", help="replicating portfolio along a simulated path")
    p.add_argument("--model", required=True)
    p.add_argument("--spot", type=float, required=True)
    _add_contract_flags(p)
    p.add_argument("--steps", type=int, default=250)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--asset", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_hedge)

    return parser


def _apply_thread_cap() -> None:
    cap = os.environ.get("HLP_THREADS")
    if not cap:
        return
    try:
        import numba

        numba.set_num_threads(max(1, int(cap)))
    except (ValueError, ImportError):
        pass


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_thread_cap()
    try:
        return args.func(args)
    except (HawkesLobError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
