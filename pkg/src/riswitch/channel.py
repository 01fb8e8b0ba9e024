"""Channel generation for an RIS-assisted multi-user SISO network.

Each of the K transmitters reaches the M-element surface through a Rician
link whose deterministic component carries the geometric phase of the
Tx-to-surface distance; the surface reaches each receiver through a
Rayleigh link. Large-scale attenuation follows a ``c0 * d**-alpha`` power
law anchored at a 1 m reference distance. The direct Tx-Rx path is
assumed blocked, and everything lives inside a single coherence time, so
there is no time index anywhere.

Reproducibility: every sampler takes an explicit ``numpy.random.Generator``.
`sample_network_realization` derives one generator per (user, link
direction) from a master seed via `substream`, so adding users or enabling
CSI noise never perturbs the draws of existing streams.

Complex Gaussian convention: ``CN(0, v)`` means real and imaginary parts
are independent ``N(0, v/2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# Stream codes for the substream counter scheme. A generator for user j
# (1-based) of stream S under prefix P is seeded with spawn_key
# (*P, S, j); callers typically use prefix=(trial,) or (point, trial).
STREAM_TX_RIS = 0
STREAM_RIS_RX = 1
STREAM_TX_RIS_ERR = 2
STREAM_RIS_RX_ERR = 3
STREAM_OPTIMIZER = 4


def substream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for the counter tuple `path` under `seed`."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(path)))


@dataclass(frozen=True)
class NetworkGeometry:
    """User count, element count, and the per-user link distances (meters)."""

    K: int
    M: int
    tx_ris_distances: tuple[float, ...]
    ris_rx_distances: tuple[float, ...]

    def __post_init__(self):
        errs = []
        if self.K < 1:
            errs.append("K must be a positive integer")
        if self.M < 1:
            errs.append("M must be a positive integer")
        for name, ds in (("tx_ris_distances", self.tx_ris_distances),
                         ("ris_rx_distances", self.ris_rx_distances)):
            if len(ds) != self.K:
                errs.append(f"{name} must have exactly K={self.K} entries")
            for i, d in enumerate(ds):
                if not (d > 0) or math.isinf(d):
                    errs.append(f"{name}[{i}] must be strictly positive and finite")
        if errs:
            raise ConfigError(errs)


@dataclass(frozen=True)
class FadingParams:
    """Small/large-scale fading parameters shared by all links.

    kappa is the Rician factor of the Tx-to-surface links (kappa = inf is
    accepted and yields the deterministic line-of-sight-only limit). c0 is
    the linear reference path gain at 1 m, alpha1/alpha2 the path-loss
    exponents of the two hops, wavelength the carrier wavelength in meters.
    """

    kappa: float
    c0: float
    alpha1: float
    alpha2: float
    wavelength: float

    def __post_init__(self):
        errs = []
        if math.isnan(self.kappa) or self.kappa < 0:
            errs.append("kappa must be >= 0 (inf allowed for the LoS-only limit)")
        if not (self.c0 > 0) or math.isinf(self.c0):
            errs.append("c0 must be strictly positive and finite")
        if self.alpha1 < 0 or self.alpha2 < 0:
            errs.append("path-loss exponents must be >= 0")
        if not (self.wavelength > 0):
            errs.append("wavelength must be strictly positive")
        if errs:
            raise ConfigError(errs)


@dataclass(frozen=True)
class CsiNoiseParams:
    """Additive channel-estimation noise: entries CN(0, 1/p), p linear."""

    enabled: bool = False
    p: float = math.inf

    def __post_init__(self):
        if self.enabled and not (self.p > 0):
            raise ConfigError("csi noise p must be > 0 when enabled")


@dataclass
class ChannelRealization:
    """One coherence-time draw of all Tx->RIS and RIS->Rx channels.

    h has shape (M, K), column j-1 holding the Tx_j->RIS vector; g has
    shape (K, M), row k-1 holding the RIS->Rx_k vector. h_est/g_est are
    what the optimizer sees: the same array objects when CSI is perfect,
    independent noisy copies otherwise.
    """

    h: np.ndarray
    g: np.ndarray
    h_est: np.ndarray
    g_est: np.ndarray

    @classmethod
    def from_truth(cls, h: np.ndarray, g: np.ndarray) -> "ChannelRealization":
        """Perfect-CSI realization: estimates alias the truth."""
        h = np.asarray(h, dtype=np.complex128)
        g = np.asarray(g, dtype=np.complex128)
        return cls(h=h, g=g, h_est=h, g_est=g)

    @property
    def M(self) -> int:
        return self.h.shape[0]

    @property
    def K(self) -> int:
        return self.h.shape[1]

    def truth_bytes(self) -> bytes:
        """Canonical byte image of the true channels (for pairing digests)."""
        return np.ascontiguousarray(self.h).tobytes() + np.ascontiguousarray(self.g).tobytes()


def path_loss(c0: float, d: float, alpha: float) -> float:
    """Large-scale linear power gain c0 * d**-alpha."""
    if not (c0 > 0):
        raise ConfigError("path_loss: c0 must be > 0")
    if not (d > 0):
        raise ConfigError("path_loss: d must be > 0")
    if alpha < 0:
        raise ConfigError("path_loss: alpha must be >= 0")
    return c0 * d ** (-alpha)


def _cn(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """n i.i.d. CN(0, variance) draws: the real block first, then the imaginary."""
    scale = math.sqrt(variance / 2.0)
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * scale


def _rician_weights(kappa: float) -> tuple[float, float]:
    # (diffuse, line-of-sight) amplitude weights; they satisfy w_n^2 + w_l^2 = 1
    if math.isinf(kappa):
        return 0.0, 1.0
    return math.sqrt(1.0 / (1.0 + kappa)), math.sqrt(kappa / (1.0 + kappa))


def sample_tx_ris_channel(j: int, geom: NetworkGeometry, fading: FadingParams,
                          rng: np.random.Generator) -> np.ndarray:
    """Draw the length-M Rician Tx_j->RIS vector (j is 1-based).

    Each entry is w_n * z_m + w_l * L with z_m ~ CN(0, c0 d^-alpha1),
    L = sqrt(c0 d^-alpha1) * exp(-i 2 pi d / wavelength) identical across
    elements, and (w_n, w_l) the Rician amplitude weights.
    """
    if not 1 <= j <= geom.K:
        raise ConfigError(f"user index j={j} out of range 1..{geom.K}")
    d = geom.tx_ris_distances[j - 1]
    gain = path_loss(fading.c0, d, fading.alpha1)
    w_n, w_l = _rician_weights(fading.kappa)
    los = math.sqrt(gain) * np.exp(-2j * math.pi * d / fading.wavelength)
    z = _cn(rng, geom.M, gain)
    return w_n * z + w_l * los


def sample_ris_rx_channel(k: int, geom: NetworkGeometry, fading: FadingParams,
                          rng: np.random.Generator) -> np.ndarray:
    """Draw the length-M Rayleigh RIS->Rx_k vector (k is 1-based)."""
    if not 1 <= k <= geom.K:
        raise ConfigError(f"user index k={k} out of range 1..{geom.K}")
    d = geom.ris_rx_distances[k - 1]
    gain = path_loss(fading.c0, d, fading.alpha2)
    return _cn(rng, geom.M, gain)


def apply_csi_noise(truth: np.ndarray, noise: CsiNoiseParams,
                    rng: np.random.Generator) -> np.ndarray:
    """truth + CN(0, 1/p) entry-wise; identity pass-through when disabled."""
    if not noise.enabled:
        return truth
    return truth + _cn(rng, truth.shape[0] if truth.ndim == 1 else truth.size, 1.0 / noise.p).reshape(truth.shape)


def sample_network_realization(geom: NetworkGeometry, fading: FadingParams,
                               noise: CsiNoiseParams, seed: int,
                               prefix: tuple[int, ...] = ()) -> ChannelRealization:
    """Draw all 2K channel vectors (and estimates) for one trial.

    Substream counters: user j's Tx->RIS vector comes from spawn_key
    (*prefix, STREAM_TX_RIS, j), its estimation error from
    (*prefix, STREAM_TX_RIS_ERR, j), and analogously for the RIS->Rx side.
    Distinct prefixes (e.g. trial indices) give independent realizations.
    """
    h = np.empty((geom.M, geom.K), dtype=np.complex128)
    g = np.empty((geom.K, geom.M), dtype=np.complex128)
    for j in range(1, geom.K + 1):
        h[:, j - 1] = sample_tx_ris_channel(j, geom, fading, substream(seed, *prefix, STREAM_TX_RIS, j))
        g[j - 1, :] = sample_ris_rx_channel(j, geom, fading, substream(seed, *prefix, STREAM_RIS_RX, j))
    if not noise.enabled:
        return ChannelRealization(h=h, g=g, h_est=h, g_est=g)
    h_est = np.empty_like(h)
    g_est = np.empty_like(g)
    for j in range(1, geom.K + 1):
        h_est[:, j - 1] = apply_csi_noise(h[:, j - 1], noise, substream(seed, *prefix, STREAM_TX_RIS_ERR, j))
        g_est[j - 1, :] = apply_csi_noise(g[j - 1, :], noise, substream(seed, *prefix, STREAM_RIS_RX_ERR, j))
    return ChannelRealization(h=h, g=g, h_est=h_est, g_est=g_est)
