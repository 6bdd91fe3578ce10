"""Turn homodyne datasets into estimates: kernel means, errors, noise eigenvalues.

All accumulation is streaming and mergeable (Welford/Chan updates), so partial
results over disjoint sample ranges combine associatively to the sequential
answer; this keeps very long runs numerically stable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .homodyne import Dataset
from .kernels import (
    ComplexAmplitude,
    Observable,
    Phase,
    is_real_observable,
    kernel_observable,
)

CHUNK = 1 << 16


@dataclass
class StreamingMoments:
    """Mergeable single-pass mean/variance accumulator for a real stream."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def update(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return
        part = StreamingMoments(
            values.size, float(values.mean()), float(((values - values.mean()) ** 2).sum())
        )
        self.merge(part)

    def merge(self, other: "StreamingMoments") -> "StreamingMoments":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / total
        self.m2 += other.m2 + delta * delta * self.count * other.count / total
        self.count = total
        return self

    @property
    def population_variance(self) -> float:
        return self.m2 / self.count if self.count else 0.0

    @property
    def stderr(self) -> float:
        """Sample standard deviation over sqrt(n) (0.0 when n < 2)."""
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1)) / math.sqrt(self.count)


@dataclass
class ComplexStreamingMoments:
    """Mergeable accumulator for a complex stream: mean, |.|^2 spread, pseudo-spread."""

    count: int = 0
    mean: complex = 0.0 + 0.0j
    m2: float = 0.0
    c2: complex = 0.0 + 0.0j

    def update(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=complex)
        if values.size == 0:
            return
        vmean = complex(values.mean())
        delta = values - vmean
        part = ComplexStreamingMoments(
            values.size, vmean, float((delta.real**2 + delta.imag**2).sum()), complex((delta**2).sum())
        )
        self.merge(part)

    def merge(self, other: "ComplexStreamingMoments") -> "ComplexStreamingMoments":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.mean, self.m2, self.c2 = other.count, other.mean, other.m2, other.c2
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        w = self.count * other.count / total
        self.mean += delta * other.count / total
        self.m2 += other.m2 + abs(delta) ** 2 * w
        self.c2 += other.c2 + delta * delta * w
        self.count = total
        return self

    @property
    def covariance_eigenvalues(self) -> tuple[float, float]:
        """Largest and smallest eigenvalue of the 2x2 covariance of (Re, Im)."""
        if self.count == 0:
            return 0.0, 0.0
        spread = self.m2 / self.count
        pseudo = abs(self.c2) / self.count
        return 0.5 * (spread + pseudo), max(0.5 * (spread - pseudo), 0.0)


@dataclass
class Estimate:
    value: float
    stderr: float
    n: int


@dataclass
class ComplexEstimate:
    value: complex
    noise_plus: float
    noise_minus: float
    n: int


def estimate_to_json(est: Estimate) -> dict:
    return {"value": est.value, "stderr": est.stderr, "n": est.n}


def complex_estimate_to_json(est: ComplexEstimate) -> dict:
    return {
        "value": [est.value.real, est.value.imag],
        "noise_plus": est.noise_plus,
        "noise_minus": est.noise_minus,
        "n": est.n,
    }


def estimate_from_json(obj) -> Estimate:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return Estimate(float(obj["value"]), float(obj["stderr"]), int(obj["n"]))


def _real_kernel_chunks(data: Dataset, obs: Observable):
    if not is_real_observable(obs):
        raise TypeError(
            f"observable {obs!r} has a complex-valued kernel; use estimate_complex"
        )
    for start in range(0, data.n, CHUNK):
        sl = slice(start, start + CHUNK)
        vals = kernel_observable(obs, data.eta, data.x[sl], data.phi[sl])
        yield np.asarray(vals).real


def estimate_mean(data: Dataset, obs: Observable) -> Estimate:
    """Sample mean of a real-valued kernel with its standard error."""
    if data.n < 1:
        raise ValidationError("cannot estimate from an empty dataset")
    acc = StreamingMoments()
    for vals in _real_kernel_chunks(data, obs):
        acc.update(vals)
    return Estimate(acc.mean, acc.stderr, acc.count)


def estimate_complex(data: Dataset) -> ComplexEstimate:
    """Mean of the complex-amplitude kernel 2 x exp(i phi) plus its noise pair.

    noise_plus/minus are the eigenvalues of the covariance matrix of the
    kernel values, i.e. (spread of |w|^2 about the mean) split by the modulus
    of the pseudo-variance.
    """
    if data.n < 1:
        raise ValidationError("cannot estimate from an empty dataset")
    acc = ComplexStreamingMoments()
    for start in range(0, data.n, CHUNK):
        sl = slice(start, start + CHUNK)
        acc.update(kernel_observable(ComplexAmplitude(), data.eta, data.x[sl], data.phi[sl]))
    plus, minus = acc.covariance_eigenvalues
    return ComplexEstimate(acc.mean, plus, minus, acc.count)


def empirical_kernel_variance(data: Dataset, obs: Observable) -> float:
    """Population variance of the (real) kernel over the dataset."""
    if data.n < 1:
        raise ValidationError("cannot estimate from an empty dataset")
    acc = StreamingMoments()
    for vals in _real_kernel_chunks(data, obs):
        acc.update(vals)
    return acc.population_variance


@dataclass
class PhaseHistogram:
    """Normalized histogram of the phase kernel over (-pi, pi]."""

    masses: np.ndarray
    edges: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def densities(self) -> np.ndarray:
        return self.masses / self.widths


def phase_kernel_distribution(data: Dataset, bins: int) -> PhaseHistogram:
    """Histogram of w = arg(x exp(i phi)); bin masses sum to 1."""
    if data.n < 1:
        raise ValidationError("cannot histogram an empty dataset")
    if int(bins) != bins or bins < 8:
        raise ValidationError(f"need at least 8 bins, got {bins}")
    counts = np.zeros(int(bins))
    edges = np.linspace(-math.pi, math.pi, int(bins) + 1)
    for start in range(0, data.n, CHUNK):
        sl = slice(start, start + CHUNK)
        w = kernel_observable(Phase(), data.eta, data.x[sl], data.phi[sl])
        counts += np.histogram(w, bins=edges)[0]
    return PhaseHistogram(counts / data.n, edges)
