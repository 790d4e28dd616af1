"""Numba-compiled inner loops for event-driven simulation and likelihood work.

Everything here is private: plain arrays in, plain arrays out. The rest of the
package owns validation and the public types.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def thinning_events(lambda_inf, alpha, beta, horizon, seed):
    """Ogata thinning for a multivariate Hawkes process with exponential kernels.

    The per-pair excitation state is kept as decayed accumulators
    R[i, j] = sum over past events s of dimension j of exp(-beta[i,j]*(t - s)),
    so each proposal costs O(d^2). Between events every kernel is decreasing,
    hence the intensity evaluated just after the last event is a valid bound.

    Returns (times, dims) for accepted events, times strictly increasing.
    """
    np.random.seed(seed)
    d = lambda_inf.shape[0]
    decayed = np.zeros((d, d))
    lam = np.empty(d)
    cap = 1024
    times = np.empty(cap)
    dims = np.empty(cap, dtype=np.int64)
    count = 0
    t = 0.0
    bound = lambda_inf.sum()
    while True:
        t_cand = t + np.random.exponential(1.0 / bound)
        if t_cand > horizon:
            break
        dt = t_cand - t
        t = t_cand
        for i in range(d):
            for j in range(d):
                decayed[i, j] *= np.exp(-beta[i, j] * dt)
        total = 0.0
        for i in range(d):
            s = lambda_inf[i]
            for j in range(d):
                s += alpha[i, j] * decayed[i, j]
            lam[i] = s
            total += s
        u = np.random.uniform(0.0, bound)
        if u <= total:
            # accepted; the same uniform picks the dimension
            k = d - 1
            acc = 0.0
            for i in range(d):
                acc += lam[i]
                if u <= acc:
                    k = i
                    break
            if count == cap:
                cap *= 2
                grown_t = np.empty(cap)
                grown_t[:count] = times
                times = grown_t
                grown_d = np.empty(cap, dtype=np.int64)
                grown_d[:count] = dims
                dims = grown_d
            times[count] = t
            dims[count] = k
            count += 1
            jump = 0.0
            for i in range(d):
                decayed[i, k] += 1.0
                jump += alpha[i, k]
            bound = total + jump
        else:
            bound = total
    return times[:count].copy(), dims[:count].copy()


@njit(cache=True)
def chain_states(cum_rows, cum_init, steps, seed):
    """Sample a Markov-chain state path; the first state is drawn from cum_init."""
    np.random.seed(seed)
    out = np.empty(steps, dtype=np.int64)
    if steps == 0:
        return out
    n = cum_init.shape[0]
    u = np.random.random()
    s = n - 1
    for k in range(n):
        if u <= cum_init[k]:
            s = k
            break
    out[0] = s
    for m in range(1, steps):
        u = np.random.random()
        nxt = n - 1
        for k in range(n):
            if u <= cum_rows[s, k]:
                nxt = k
                break
        s = nxt
        out[m] = s
    return out


@njit(cache=True)
def hawkes_nll(times, dims, lambda_inf, alpha, beta, horizon):
    """Negative log-likelihood of an exponential-kernel multivariate Hawkes process.

    One O(N*d^2) forward pass maintains the decayed excitation state for the
    event-term, then an O(N*d) pass accumulates the compensator.
    """
    d = lambda_inf.shape[0]
    decayed = np.zeros((d, d))
    loglik = 0.0
    t_prev = 0.0
    for m in range(times.shape[0]):
        t = times[m]
        j = dims[m]
        dt = t - t_prev
        for a in range(d):
            for b in range(d):
                decayed[a, b] *= np.exp(-beta[a, b] * dt)
        lam = lambda_inf[j]
        for b in range(d):
            lam += alpha[j, b] * decayed[j, b]
        if lam <= 0.0:
            return np.inf
        loglik += np.log(lam)
        for a in range(d):
            decayed[a, j] += 1.0
        t_prev = t
    comp = horizon * lambda_inf.sum()
    for m in range(times.shape[0]):
        rem = horizon - times[m]
        j = dims[m]
        for i in range(d):
            comp += alpha[i, j] / beta[i, j] * (1.0 - np.exp(-beta[i, j] * rem))
    return comp - loglik
