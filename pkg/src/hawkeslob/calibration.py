"""Tick-stream ingestion and maximum-likelihood parameter estimation.

Input files are CSV with header time,dim,price_change. The Hawkes kernel is
fitted by box-constrained quasi-Newton on the exact exponential-kernel
log-likelihood (O(events) per evaluation via the decayed-state recursion);
the jump chain is fitted by smoothed empirical transition frequencies.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ._kernels import hawkes_nll
from .chains import MarkovChainSpec
from .errors import CalibrationError, DataError, DegenerateChainError
from .hawkes import EventStream, HawkesParams

_MAX_BRANCHING = 0.999


@dataclass(frozen=True)
class TickRecord:
    """One marked event: arrival time, asset index, signed price change."""

    time: float
    dim: int
    price_change: float


def load_events(path, d: int | None = None) -> tuple[EventStream, np.ndarray]:
    """Read a time,dim,price_change CSV into an event stream plus marks.

    Rows must be nondecreasing in time within each dimension; malformed rows
    and out-of-range dimensions are rejected with their line number.
    """
    times, dims, marks = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:3]] != ["time", "dim", "price_change"]:
            raise DataError(f"{path}: expected header 'time,dim,price_change'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                t = float(row[0])
                j = int(row[1])
                mark = float(row[2])
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}: line {lineno}: malformed row {row!r}") from exc
            if t < 0:
                raise DataError(f"{path}: line {lineno}: negative time {t}")
            if j < 0 or (d is not None and j >= d):
                raise DataError(f"{path}: line {lineno}: unknown dim {j}")
            times.append(t)
            dims.append(j)
            marks.append(mark)
    times = np.asarray(times, dtype=float)
    dims = np.asarray(dims, dtype=np.int64)
    marks = np.asarray(marks, dtype=float)
    for j in np.unique(dims):
        if np.any(np.diff(times[dims == j]) < 0):
            raise DataError(f"{path}: times within dim {j} are not sorted")
    order = np.argsort(times, kind="stable")
    times, dims, marks = times[order], dims[order], marks[order]
    horizon = float(times[-1]) if times.size else 0.0
    try:
        stream = EventStream(times, dims, horizon)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
    return stream, marks


def write_ticks(path, stream: EventStream, marks: np.ndarray) -> None:
    marks = np.asarray(marks, dtype=float)
    if marks.shape[0] != len(stream):
        raise ValueError("one mark per event required")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "dim", "price_change"])
        for t, j, m in zip(stream.times, stream.dims, marks):
            writer.writerow([repr(float(t)), int(j), repr(float(m))])


def hawkes_log_likelihood(params: HawkesParams, stream: EventStream) -> float:
    """Exact log-likelihood of the stream under the exponential-kernel model."""
    return -float(
        hawkes_nll(
            stream.times,
            stream.dims,
            params.lambda_inf,
            params.kernel.alpha,
            params.kernel.beta,
            stream.horizon,
        )
    )


def _unpack(theta: np.ndarray, d: int):
    lam = theta[:d]
    branching = theta[d : d + d * d].reshape(d, d)
    beta = theta[d + d * d :].reshape(d, d)
    return lam, branching * beta, beta


def fit_hawkes_mle(
    stream: EventStream,
    d: int,
    beta_init: float = 1.0,
    max_iter: int = 500,
) -> HawkesParams:
    """Maximum-likelihood exponential-kernel fit.

    Optimizes over (lambda_inf, branching K, beta) so the stationarity
    constraint is a plain box K_ij <= 0.999; alpha is recovered as K * beta.
    """
    if len(stream) < 2:
        raise CalibrationError("need at least 2 events to fit")
    times, dims = stream.times, stream.dims
    horizon = stream.horizon
    rates = stream.counts(d) / horizon
    if np.any(rates == 0):
        raise CalibrationError("every dimension needs at least one event")

    def objective(theta):
        lam, alpha, beta = _unpack(theta, d)
        return hawkes_nll(times, dims, lam, alpha, beta, horizon) / len(stream)

    x0 = np.concatenate(
        [0.5 * rates, np.full(d * d, 0.5 / d), np.full(d * d, beta_init)]
    )
    bounds = (
        [(1e-10, None)] * d
        + [(0.0, _MAX_BRANCHING)] * (d * d)
        + [(1e-6, 1e6)] * (d * d)
    )
    result = minimize(
        objective, x0, method="L-BFGS-B", bounds=bounds, options={"maxiter": max_iter}
    )
    grad_norm = float(np.max(np.abs(result.jac)))
    if not result.success and grad_norm > 1e-3 * (1.0 + abs(result.fun)):
        raise CalibrationError(
            f"likelihood optimization did not converge: {result.message} "
            f"(gradient norm {grad_norm:.3g})"
        )
    lam, alpha, beta = _unpack(result.x, d)
    rho = float(np.max(np.abs(np.linalg.eigvals(alpha / beta))))
    if rho >= 1.0:
        raise CalibrationError(f"fitted branching matrix has spectral radius {rho:.4f} >= 1")
    return HawkesParams.from_arrays(lam, alpha, beta)


def fit_chain(
    stream: EventStream, marks: np.ndarray, dim: int, smoothing: float = 1e-6
) -> MarkovChainSpec:
    """Empirical jump-size chain for one dimension with additive smoothing.

    States are the distinct observed price changes (ascending); smoothing
    keeps short samples ergodic.
    """
    marks = np.asarray(marks, dtype=float)
    selected = marks[stream.dims == dim]
    values = np.unique(selected)
    if values.size < 2:
        raise DegenerateChainError(
            f"dim {dim}: need >= 2 distinct price changes, saw {values.size}"
        )
    index = np.searchsorted(values, selected)
    n = values.size
    counts = np.zeros((n, n))
    np.add.at(counts, (index[:-1], index[1:]), 1.0)
    counts += smoothing
    transition = counts / counts.sum(axis=1, keepdims=True)
    return MarkovChainSpec(transition, values)
