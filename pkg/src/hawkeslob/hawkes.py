"""Multivariate Hawkes processes with exponential excitation kernels.

The intensity of dimension i is

    lambda_i(t) = lambda_inf_i + sum over past events (s, j) of
                  alpha[i, j] * exp(-beta[i, j] * (t - s)),

so the branching matrix K = alpha / beta (element-wise) collects the kernel
integrals, and spectral radius rho(K) < 1 is the stationarity condition used
by every limit-theorem constant downstream.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from ._kernels import thinning_events
from .errors import StationarityError


@dataclass(frozen=True)
class ExponentialKernel:
    """Excitation kernel mu_ij(t) = alpha[i,j] * exp(-beta[i,j] * t)."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.atleast_2d(np.asarray(self.alpha, dtype=float))
        beta = np.atleast_2d(np.asarray(self.beta, dtype=float))
        if alpha.shape[0] != alpha.shape[1]:
            raise ValueError("alpha must be a square matrix")
        if beta.shape != alpha.shape:
            raise ValueError(f"beta shape {beta.shape} != alpha shape {alpha.shape}")
        if np.any(alpha < 0) or not np.all(np.isfinite(alpha)):
            raise ValueError("excitation amplitudes alpha must be finite and >= 0")
        if np.any(beta <= 0) or not np.all(np.isfinite(beta)):
            raise ValueError("decay rates beta must be finite and > 0")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def dim(self) -> int:
        return self.alpha.shape[0]

    def branching(self) -> np.ndarray:
        """Element-wise kernel integral over [0, inf): K_ij = alpha_ij / beta_ij."""
        return self.alpha / self.beta


@dataclass(frozen=True)
class HawkesParams:
    """Background intensities plus exponential kernel; rejects rho(K) >= 1 eagerly."""

    lambda_inf: np.ndarray
    kernel: ExponentialKernel

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.lambda_inf, dtype=float))
        if lam.ndim != 1 or lam.shape[0] != self.kernel.dim:
            raise ValueError("lambda_inf length must equal the kernel dimension")
        if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
            raise ValueError("background intensities must be finite and > 0")
        object.__setattr__(self, "lambda_inf", lam)
        rho = float(np.max(np.abs(np.linalg.eigvals(self.kernel.branching()))))
        if rho >= 1.0:
            raise StationarityError(
                f"branching matrix spectral radius {rho:.6g} >= 1; process is non-stationary"
            )

    @property
    def dim(self) -> int:
        return self.kernel.dim

    @classmethod
    def from_arrays(cls, lambda_inf, alpha, beta) -> "HawkesParams":
        return cls(np.asarray(lambda_inf, dtype=float), ExponentialKernel(alpha, beta))

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "lambda_inf": self.lambda_inf.tolist(),
            "alpha": self.kernel.alpha.tolist(),
            "beta": self.kernel.beta.tolist(),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "HawkesParams":
        params = cls.from_arrays(doc["lambda_inf"], doc["alpha"], doc["beta"])
        if "dim" in doc and int(doc["dim"]) != params.dim:
            raise ValueError(f"dim {doc['dim']} inconsistent with arrays of dim {params.dim}")
        return params

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)

    @classmethod
    def load(cls, path) -> "HawkesParams":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class EventStream:
    """Timestamped events (time, dim) over [0, horizon], time-sorted.

    Times must be strictly increasing within each dimension.
    """

    times: np.ndarray
    dims: np.ndarray
    horizon: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        dims = np.asarray(self.dims, dtype=np.int64)
        if times.shape != dims.shape or times.ndim != 1:
            raise ValueError("times and dims must be 1-d arrays of equal length")
        if times.size and (times[0] < 0 or times[-1] > self.horizon):
            raise ValueError("event times must lie in [0, horizon]")
        if np.any(np.diff(times) < 0):
            raise ValueError("event times must be nondecreasing")
        if dims.size and (dims.min() < 0):
            raise ValueError("dimension indices must be >= 0")
        for j in np.unique(dims):
            if np.any(np.diff(times[dims == j]) <= 0):
                raise ValueError(f"times within dimension {j} must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "horizon", float(self.horizon))

    def __len__(self) -> int:
        return self.times.size

    def times_of(self, dim: int) -> np.ndarray:
        return self.times[self.dims == dim]

    def counts(self, d: int) -> np.ndarray:
        return np.bincount(self.dims, minlength=d)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "dim"])
            for t, j in zip(self.times, self.dims):
                writer.writerow([repr(float(t)), int(j)])

    @classmethod
    def from_csv(cls, path, horizon: float | None = None) -> "EventStream":
        times, dims = [], []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header[:2]] != ["time", "dim"]:
                raise ValueError(f"{path}: expected header 'time,dim'")
            for row in reader:
                if not row:
                    continue
                times.append(float(row[0]))
                dims.append(int(row[1]))
        times = np.asarray(times, dtype=float)
        if horizon is None:
            horizon = float(times.max()) if times.size else 0.0
        return cls(times, np.asarray(dims, dtype=np.int64), horizon)


def branching_matrix(params: HawkesParams) -> np.ndarray:
    """K = integral of the kernel matrix: K_ij = alpha_ij / beta_ij."""
    return params.kernel.branching()


def stationarity_margin(params: HawkesParams) -> float:
    """Spectral radius of the branching matrix (must be < 1 for stationarity)."""
    return float(np.max(np.abs(np.linalg.eigvals(branching_matrix(params)))))


def expected_rate(params: HawkesParams) -> np.ndarray:
    """Stationary event rate per unit time: (I - K)^-1 lambda_inf."""
    kmat = branching_matrix(params)
    try:
        return np.linalg.solve(np.eye(params.dim) - kmat, params.lambda_inf)
    except np.linalg.LinAlgError as exc:  # unreachable once construction guards rho(K)
        raise StationarityError(f"I - K is singular: {exc}") from exc


def intensity_at(params: HawkesParams, history: EventStream, t: float, i: int) -> float:
    """Conditional intensity of dimension i at time t given events strictly before t."""
    if not 0 <= i < params.dim:
        raise ValueError(f"dimension index {i} out of range for d={params.dim}")
    if t < 0:
        raise ValueError("t must be >= 0")
    alpha = params.kernel.alpha
    beta = params.kernel.beta
    lam = float(params.lambda_inf[i])
    for j in range(params.dim):
        past = history.times_of(j)
        past = past[past < t]
        if past.size:
            lam += alpha[i, j] * float(np.exp(-beta[i, j] * (t - past)).sum())
    return lam


def simulate(params: HawkesParams, horizon: float, seed: int) -> EventStream:
    """Sample an event stream on [0, horizon] by Ogata thinning; deterministic in seed."""
    if horizon <= 0:
        raise ValueError("horizon must be > 0")
    times, dims = thinning_events(
        params.lambda_inf,
        params.kernel.alpha,
        params.kernel.beta,
        float(horizon),
        int(seed) % 2**32,
    )
    return EventStream(times, dims, float(horizon))
