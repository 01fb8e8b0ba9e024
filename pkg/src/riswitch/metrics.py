"""End-to-end link metrics: effective channels, SINR, rates, objectives.

Receiver k sees sum_j (g^k T h^j) x_j + noise, so with transmit powers P
and noise power sigma^2 the SINR of user k is

    P_k |g^k T h^k|^2 / (sigma^2 + sum_{j != k} P_j |g^k T h^j|^2),

evaluated analytically (no symbol-level waveforms). Achieved metrics are
always computed on the true channels; the optimizer-facing variants use
the estimated ones and coincide with the truth under perfect CSI.

All evaluations, scalar or batched, run through `sinr_for_matrices` with
a fixed non-BLAS reduction order, so the number a search reports for a
pattern is bit-identical to what any later re-evaluation of that pattern
produces. Exact comparisons between search methods rely on this.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .errors import ConfigError
from .ris import RisMatrix

OBJECTIVES = ("sum_rate", "min_rate", "min_sinr")


@dataclass(frozen=True)
class LinkBudget:
    """Per-user transmit powers and receiver noise power, both in watts."""

    powers: tuple[float, ...]
    noise_power: float

    def __post_init__(self):
        if not (self.noise_power > 0):
            raise ConfigError("noise_power must be > 0")
        if any(p < 0 for p in self.powers):
            raise ConfigError("transmit powers must be >= 0")
        if not any(p > 0 for p in self.powers):
            raise ConfigError("at least one transmit power must be > 0")


def _matrix(t) -> np.ndarray:
    return t.t if isinstance(t, RisMatrix) else np.asarray(t)


def effective_channel(g_k: np.ndarray, t, h_j: np.ndarray) -> complex:
    """Scalar end-to-end channel g^k T h^j."""
    tm = _matrix(t)
    g_k = np.asarray(g_k).reshape(-1)
    h_j = np.asarray(h_j).reshape(-1)
    if tm.shape != (g_k.size, h_j.size) or g_k.size != h_j.size:
        raise ConfigError(
            f"dimension mismatch: g has {g_k.size}, T is {tm.shape}, h has {h_j.size}")
    return complex(g_k @ tm @ h_j)


def sinr_for_matrices(t_batch: np.ndarray, h: np.ndarray, g: np.ndarray,
                      powers: np.ndarray, noise_power: float) -> np.ndarray:
    """Per-user SINRs for a (C, M, M) batch of transfer matrices -> (C, K).

    h is (M, K) with column j the Tx_j vector, g is (K, M) with row k the
    Rx_k vector. einsum with optimize=False keeps the reduction order of
    every output element independent of the batch size.
    """
    k = g.shape[0]
    e = np.einsum("km,cmn,nj->ckj", g, t_batch, h, optimize=False)
    a = e.real ** 2 + e.imag ** 2
    off = 1.0 - np.eye(k)
    interference = np.einsum("ckj,kj,j->ck", a, off, powers, optimize=False)
    signal = powers * np.einsum("ckk->ck", a)
    return signal / (noise_power + interference)


def objective_for_matrices(kind: str, t_batch: np.ndarray, h: np.ndarray,
                           g: np.ndarray, powers: np.ndarray,
                           noise_power: float) -> np.ndarray:
    """Network objective per candidate matrix -> (C,)."""
    s = sinr_for_matrices(t_batch, h, g, powers, noise_power)
    if kind == "sum_rate":
        return np.log2(1.0 + s).sum(axis=1)
    if kind == "min_rate":
        return np.log2(1.0 + s).min(axis=1)
    if kind == "min_sinr":
        return s.min(axis=1)
    raise ConfigError(f"unknown objective kind: {kind!r} (one of {OBJECTIVES})")


def _budget_arrays(real: ChannelRealization, budget: LinkBudget) -> np.ndarray:
    if len(budget.powers) != real.K:
        raise ConfigError(f"budget has {len(budget.powers)} powers, realization has K={real.K}")
    return np.asarray(budget.powers, dtype=np.float64)


def sinr_all(t, real: ChannelRealization, budget: LinkBudget) -> np.ndarray:
    """Achieved SINRs of all K users (true channels) -> (K,)."""
    p = _budget_arrays(real, budget)
    return sinr_for_matrices(_matrix(t)[None], real.h, real.g, p, budget.noise_power)[0]


def sinr(k: int, t, real: ChannelRealization, budget: LinkBudget) -> float:
    """Achieved SINR of user k (1-based), evaluated on the true channels."""
    if not 1 <= k <= real.K:
        raise ConfigError(f"user index k={k} out of range 1..{real.K}")
    return float(sinr_all(t, real, budget)[k - 1])


def user_rate(k: int, t, real: ChannelRealization, budget: LinkBudget) -> float:
    """Shannon rate log2(1 + SINR_k) in bits/s/Hz."""
    return float(np.log2(1.0 + sinr(k, t, real, budget)))


def objective_value(kind: str, t, real: ChannelRealization, budget: LinkBudget) -> float:
    """Objective on the true channels (what a deployment would achieve)."""
    p = _budget_arrays(real, budget)
    return float(objective_for_matrices(kind, _matrix(t)[None], real.h, real.g,
                                        p, budget.noise_power)[0])


def objective_on_estimates(kind: str, t, real: ChannelRealization, budget: LinkBudget) -> float:
    """Objective on the estimated channels (what an optimizer can see)."""
    p = _budget_arrays(real, budget)
    return float(objective_for_matrices(kind, _matrix(t)[None], real.h_est, real.g_est,
                                        p, budget.noise_power)[0])
