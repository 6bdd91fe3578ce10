"""Direct-detection counterparts of the tomographic estimators.

Photon counting (Bernoulli-thinned number statistics), fixed-phase homodyne,
and heterodyne detection of coherent states, plus the corresponding analytic
variances computed from exact state moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapabilityError, ValidationError
from .homodyne import (
    BLOCK_SIZE,
    PURPOSE_HETERODYNE,
    PURPOSE_PHOTOCOUNT,
    block_generator,
)
from .states import (
    Coherent,
    Fock,
    Mixed,
    StateSpec,
    _check_eta,
    mean_photon,
    normal_moment,
    photon_distribution,
    smearing_variance,
    state_dim,
    state_tag,
    validate_state,
)


@dataclass
class PhotocountRecord:
    counts: np.ndarray
    eta: float
    seed: int
    state_tag: str

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 1 or self.counts.size < 1 or (self.counts < 0).any():
            raise ValidationError("counts must be a nonempty array of nonnegative integers")
        _check_eta(self.eta)

    @property
    def n(self) -> int:
        return self.counts.size


@dataclass
class HeterodyneRecord:
    alphas: np.ndarray
    eta: float
    seed: int
    state_tag: str

    def __post_init__(self):
        self.alphas = np.asarray(self.alphas, dtype=complex)
        if self.alphas.ndim != 1 or self.alphas.size < 1 or not np.isfinite(self.alphas).all():
            raise ValidationError("alphas must be a nonempty array of finite complex numbers")
        _check_eta(self.eta)

    @property
    def n(self) -> int:
        return self.alphas.size


def simulate_photocount(state: StateSpec, eta: float, n: int, seed: int) -> PhotocountRecord:
    """Draw true photon numbers, then thin each binomially with success probability eta."""
    validate_state(state)
    _check_eta(eta)
    if int(n) != n or n < 1:
        raise ValidationError(f"sample count must be a positive integer, got {n}")
    n = int(n)
    if isinstance(state, Mixed):
        probs, _ = photon_distribution(state, state_dim(state))
        cdf = np.cumsum(probs / probs.sum())
    counts = np.empty(n, dtype=np.int64)
    for block, start in enumerate(range(0, n, BLOCK_SIZE)):
        k = min(BLOCK_SIZE, n - start)
        rng = block_generator(seed, PURPOSE_PHOTOCOUNT, block)
        if isinstance(state, Coherent):
            true = rng.poisson(abs(state.beta) ** 2, k)
        elif isinstance(state, Fock):
            true = np.full(k, state.n, dtype=np.int64)
        else:
            true = np.searchsorted(cdf, rng.random(k)).astype(np.int64)
        counts[start : start + k] = true if eta == 1.0 else rng.binomial(true, eta)
    return PhotocountRecord(counts, eta, int(seed), state_tag(state))


def intensity_variance_direct(state: StateSpec, eta: float) -> float:
    """Variance of the rescaled photocurrent n/eta: <dn^2> + nbar (1/eta - 1)."""
    _check_eta(eta)
    nbar = mean_photon(state)
    n2 = nbar + normal_moment(state, 2, 2).real
    return (n2 - nbar * nbar) + nbar * (1.0 / eta - 1.0)


def quadrature_variance_direct(state: StateSpec, eta: float) -> float:
    """Variance of fixed-phase homodyne: <dx^2> + (1 - eta)/(4 eta)."""
    _check_eta(eta)
    nbar = mean_photon(state)
    a1 = normal_moment(state, 0, 1)
    a2 = normal_moment(state, 0, 2)
    x2 = (2.0 * a2.real + 2.0 * nbar + 1.0) / 4.0
    return (x2 - a1.real**2) + smearing_variance(eta)


def simulate_heterodyne(state: StateSpec, eta: float, n: int, seed: int) -> HeterodyneRecord:
    """Joint two-quadrature detection of a coherent state.

    Each outcome is alpha = beta + g with g complex Gaussian of per-quadrature
    variance 1/(2 eta), so mean |alpha|^2 - |beta|^2 = 1/eta. Only coherent
    states are supported; for anything else use amplitude_noise_direct.
    """
    validate_state(state)
    _check_eta(eta)
    if not isinstance(state, Coherent):
        raise CapabilityError(
            "heterodyne simulation supports coherent states only; "
            "use amplitude_noise_direct for the analytic comparison"
        )
    if int(n) != n or n < 1:
        raise ValidationError(f"sample count must be a positive integer, got {n}")
    n = int(n)
    sigma = math.sqrt(1.0 / (2.0 * eta))
    alphas = np.empty(n, dtype=complex)
    for block, start in enumerate(range(0, n, BLOCK_SIZE)):
        k = min(BLOCK_SIZE, n - start)
        rng = block_generator(seed, PURPOSE_HETERODYNE, block)
        alphas[start : start + k] = (
            state.beta + rng.normal(0.0, sigma, k) + 1j * rng.normal(0.0, sigma, k)
        )
    return HeterodyneRecord(alphas, eta, int(seed), state_tag(state))


def amplitude_noise_direct(state: StateSpec, eta: float) -> tuple[float, float]:
    """Covariance eigenvalues of ideal two-quadrature detection.

    (1/2) [nbar + 1/eta - |<a>|^2 +/- |<a^2> - <a>^2|], largest first.
    """
    _check_eta(eta)
    nbar = mean_photon(state)
    a1 = normal_moment(state, 0, 1)
    a2 = normal_moment(state, 0, 2)
    base = nbar + 1.0 / eta - abs(a1) ** 2
    split = abs(a2 - a1 * a1)
    return 0.5 * (base + split), 0.5 * (base - split)


def heterodyne_phase_variance(record: HeterodyneRecord) -> float:
    """Population variance of arg(alpha) over a heterodyne record."""
    if record.n < 1:
        raise ValidationError("empty heterodyne record")
    w = np.angle(record.alphas)
    return float(np.mean(w * w) - np.mean(w) ** 2)


_META_KEYS = ("state", "eta", "seed", "n")


def _write_record(path, tag: str, eta: float, seed: int, header: str, rows: np.ndarray, fmt: str):
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"# state={tag}\n# eta={eta!r}\n# seed={seed}\n# n={rows.shape[0]}\n")
        fh.write(header + "\n")
        np.savetxt(fh, rows, fmt=fmt, delimiter=",")


def save_photocount_csv(record: PhotocountRecord, path) -> None:
    _write_record(
        path, record.state_tag, record.eta, record.seed, "m", record.counts[:, None], "%d"
    )


def save_heterodyne_csv(record: HeterodyneRecord, path) -> None:
    rows = np.column_stack([record.alphas.real, record.alphas.imag])
    _write_record(path, record.state_tag, record.eta, record.seed, "re,im", rows, "%.17g")
