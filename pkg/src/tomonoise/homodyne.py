"""Synthetic phase-scanned homodyne records with reproducible counter-based seeding.

Sampling model: phi ~ Uniform[0, pi), then x from the ideal (eta = 1)
quadrature density at that phase, then additive Gaussian noise of variance
(1 - eta)/(4 eta) when eta < 1. Streams come from counter-based Philox
generators keyed by (seed, purpose, block index), so generation over disjoint
sample blocks can run in any order (or in parallel) and still concatenate to
the single-threaded sequence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NumericRangeError, ValidationError
from .states import (
    Coherent,
    Fock,
    StateSpec,
    _check_eta,
    hermite_functions,
    smearing_variance,
    state_dim,
    state_tag,
    validate_state,
)

BLOCK_SIZE = 1 << 16
GRID_NODES = 4096
GRID_MASS_TOL = 1e-6

# Purpose ids keep streams for different simulators independent at equal seeds.
PURPOSE_HOMODYNE = 1
PURPOSE_PHOTOCOUNT = 2
PURPOSE_HETERODYNE = 3
PURPOSE_FIXED_PHASE = 4

_U64 = np.uint64((1 << 64) - 1)


def block_generator(seed: int, purpose: int, block: int) -> np.random.Generator:
    """Philox generator for one sample block; key = (seed, purpose << 48 | block)."""
    key = np.array(
        [np.uint64(seed) & _U64, np.uint64((purpose << 48) | block)], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class QuadratureSample:
    x: float
    phi: float


@dataclass
class Dataset:
    """Columnar homodyne record: outcomes x, phases phi in [0, pi), plus metadata."""

    x: np.ndarray
    phi: np.ndarray
    eta: float
    state_tag: str
    seed: int

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.phi = np.asarray(self.phi, dtype=float)
        if self.x.ndim != 1 or self.x.shape != self.phi.shape or self.x.size < 1:
            raise ValidationError("dataset needs matching 1-D x and phi arrays with n >= 1")
        _check_eta(self.eta)
        if self.phi.min() < 0.0 or self.phi.max() >= math.pi:
            raise ValidationError("phases must lie in [0, pi)")

    @property
    def n(self) -> int:
        return self.x.size

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> QuadratureSample:
        return QuadratureSample(float(self.x[i]), float(self.phi[i]))

    def __iter__(self):
        for xi, pi in zip(self.x, self.phi):
            yield QuadratureSample(float(xi), float(pi))


class QuadratureGridSampler:
    """Inverse-CDF sampler for number-basis states on a fixed x grid.

    The conditional CDF at phase phi is assembled from the Fourier components
    of the density in phi (one component per off-diagonal of rho), so Fock and
    diagonal mixed states reduce to a single phase-independent lookup while
    coherence-bearing states use a per-sample bisection over the grid.
    """

    def __init__(self, state: StateSpec, halfwidth: float | None = None, nodes: int = GRID_NODES):
        validate_state(state)
        if isinstance(state, Coherent):
            raise ValidationError("coherent states are sampled in closed form, not on a grid")
        dim = state_dim(state)
        self.halfwidth = float(halfwidth) if halfwidth is not None else 3.0 + 2.0 * math.sqrt(dim)
        self.xgrid = np.linspace(-self.halfwidth, self.halfwidth, nodes)
        dx = self.xgrid[1] - self.xgrid[0]
        psi = hermite_functions(dim - 1, self.xgrid)
        if isinstance(state, Fock):
            rho = np.zeros((dim, dim), dtype=complex)
            rho[state.n, state.n] = 1.0
        else:
            rho = state.rho
        offsets = [
            d for d in range(dim) if np.max(np.abs(np.diagonal(rho, offset=d))) > 0.0
        ]
        cdfs = []
        for d in offsets:
            band = np.diagonal(rho, offset=d)
            g = np.einsum("n,nx,nx->x", band, psi[: dim - d], psi[d:dim])
            cdf = np.concatenate(([0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * dx)))
            cdfs.append(cdf)
        self.offsets = np.array(offsets)
        self.cdfs = np.stack(cdfs)
        self.mass = float(self.cdfs[0][-1].real)
        if self.mass < 1.0 - GRID_MASS_TOL:
            needed = self.halfwidth * math.sqrt(
                max(2.0, -math.log(max(1.0 - self.mass, 1e-300)) / math.log(10.0))
            )
            raise NumericRangeError(
                f"quadrature grid |x| <= {self.halfwidth:.2f} holds only mass {self.mass:.9f}; "
                f"a halfwidth of about {needed:.1f} is required"
            )
        self.phase_dependent = bool((self.offsets > 0).any())

    def _cdf_at(self, idx: np.ndarray, weights: np.ndarray) -> np.ndarray:
        gathered = self.cdfs[:, idx]
        return np.einsum("ds,ds->s", weights, gathered).real

    def sample(self, phi: np.ndarray, u: np.ndarray) -> np.ndarray:
        target = u * self.mass
        if not self.phase_dependent:
            return np.interp(target, self.cdfs[0].real, self.xgrid)
        weights = np.exp(1j * np.outer(self.offsets, phi))
        weights[1:] *= 2.0
        lo = np.zeros(phi.size, dtype=np.intp)
        hi = np.full(phi.size, self.xgrid.size - 1, dtype=np.intp)
        while int((hi - lo).max()) > 1:
            mid = (lo + hi) // 2
            below = self._cdf_at(mid, weights) <= target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        flo = self._cdf_at(lo, weights)
        fhi = self._cdf_at(hi, weights)
        t = np.clip((target - flo) / np.maximum(fhi - flo, 1e-300), 0.0, 1.0)
        return self.xgrid[lo] + t * (self.xgrid[hi] - self.xgrid[lo])


def _coherent_mean(beta: complex, phi: np.ndarray) -> np.ndarray:
    return (beta * np.exp(-1j * phi)).real


def _sample_block(
    state: StateSpec,
    eta: float,
    seed: int,
    block: int,
    count: int,
    sampler: QuadratureGridSampler | None,
) -> tuple[np.ndarray, np.ndarray]:
    rng = block_generator(seed, PURPOSE_HOMODYNE, block)
    phi = rng.uniform(0.0, math.pi, count)
    if isinstance(state, Coherent):
        x = _coherent_mean(state.beta, phi) + rng.normal(0.0, 0.5, count)
    else:
        x = sampler.sample(phi, rng.random(count))
    if eta < 1.0:
        x = x + rng.normal(0.0, math.sqrt(smearing_variance(eta)), count)
    return x, phi


def sample_homodyne(state: StateSpec, eta: float, n: int, seed: int) -> Dataset:
    """Draw n phase-scanned homodyne samples; identical inputs give identical output."""
    validate_state(state)
    _check_eta(eta)
    if int(n) != n or n < 1:
        raise ValidationError(f"sample count must be a positive integer, got {n}")
    n = int(n)
    sampler = None if isinstance(state, Coherent) else QuadratureGridSampler(state)
    xs = np.empty(n)
    phis = np.empty(n)
    for block, start in enumerate(range(0, n, BLOCK_SIZE)):
        count = min(BLOCK_SIZE, n - start)
        x, phi = _sample_block(state, eta, seed, block, count, sampler)
        xs[start : start + count] = x
        phis[start : start + count] = phi
    return Dataset(xs, phis, eta, state_tag(state), int(seed))


def sample_fixed_phase(
    state: StateSpec, eta: float, n: int, seed: int, phi: float = 0.0
) -> np.ndarray:
    """Homodyne outcomes at one fixed local-oscillator phase (direct x measurement)."""
    validate_state(state)
    _check_eta(eta)
    if int(n) != n or n < 1:
        raise ValidationError(f"sample count must be a positive integer, got {n}")
    n = int(n)
    sampler = None if isinstance(state, Coherent) else QuadratureGridSampler(state)
    out = np.empty(n)
    for block, start in enumerate(range(0, n, BLOCK_SIZE)):
        count = min(BLOCK_SIZE, n - start)
        rng = block_generator(seed, PURPOSE_FIXED_PHASE, block)
        if isinstance(state, Coherent):
            mu = (state.beta * np.exp(-1j * phi)).real
            x = mu + rng.normal(0.0, 0.5, count)
        else:
            x = sampler.sample(np.full(count, float(phi)), rng.random(count))
        if eta < 1.0:
            x = x + rng.normal(0.0, math.sqrt(smearing_variance(eta)), count)
        out[start : start + count] = x
    return out


def save_dataset_csv(dataset: Dataset, path) -> None:
    """CSV with `# key=value` metadata lines, an `x,phi` header, then one row per sample."""
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"# state={dataset.state_tag}\n")
        fh.write(f"# eta={dataset.eta!r}\n")
        fh.write(f"# seed={dataset.seed}\n")
        fh.write(f"# n={dataset.n}\n")
        fh.write("x,phi\n")
        np.savetxt(fh, np.column_stack([dataset.x, dataset.phi]), fmt="%.17g", delimiter=",")


def load_dataset_csv(path) -> Dataset:
    path = Path(path)
    meta = {}
    with path.open() as fh:
        pos = fh.tell()
        line = fh.readline()
        while line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
            pos = fh.tell()
            line = fh.readline()
        if line.strip() != "x,phi":
            raise ValidationError(f"{path}: expected 'x,phi' header, got {line.strip()!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    try:
        return Dataset(
            data[:, 0],
            data[:, 1],
            float(meta["eta"]),
            meta.get("state", "unknown"),
            int(meta.get("seed", 0)),
        )
    except KeyError as exc:
        raise ValidationError(f"{path}: missing metadata line {exc}") from exc


def dataset_to_json(dataset: Dataset) -> dict:
    return {
        "state_tag": dataset.state_tag,
        "eta": dataset.eta,
        "seed": dataset.seed,
        "n": dataset.n,
        "samples": [[float(x), float(p)] for x, p in zip(dataset.x, dataset.phi)],
    }


def dataset_from_json(obj) -> Dataset:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        samples = np.asarray(obj["samples"], dtype=float)
        return Dataset(
            samples[:, 0], samples[:, 1], float(obj["eta"]), obj["state_tag"], int(obj["seed"])
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise ValidationError(f"malformed dataset JSON: {exc}") from exc


def save_dataset_json(dataset: Dataset, path) -> None:
    Path(path).write_text(json.dumps(dataset_to_json(dataset)))


def load_dataset_json(path) -> Dataset:
    return dataset_from_json(json.loads(Path(path).read_text()))
