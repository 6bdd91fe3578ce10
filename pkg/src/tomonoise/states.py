"""Single-mode optical states: exact moments, photon statistics, quadrature densities.

Quadrature convention used throughout the package: x = (a + a^dag)/2, so the
vacuum quadrature distribution is a zero-mean Gaussian of variance 1/4.
Detector quantum efficiency eta < 1 is modelled, everywhere, as additive
zero-mean Gaussian noise of variance (1 - eta)/(4 eta) on top of the ideal
quadrature outcome; this is the single source of truth for inefficiency.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammainc, gammaln

from .errors import NumericRangeError, ValidationError

#: Vacuum variance of x = (a + a^dag)/2.
VACUUM_QUADRATURE_VARIANCE = 0.25

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
DIAGONAL_FLOOR = -1e-12
EIGENVALUE_FLOOR = -1e-10

_GAUSS_HERMITE_NODES = 64


def smearing_variance(eta: float) -> float:
    """Variance of the Gaussian noise modelling quantum efficiency eta."""
    _check_eta(eta)
    return (1.0 - eta) / (4.0 * eta)


def _check_eta(eta: float) -> None:
    if not (0.0 < eta <= 1.0):
        raise ValidationError(f"quantum efficiency must satisfy 0 < eta <= 1, got {eta}")


@dataclass(frozen=True)
class Coherent:
    """Coherent state with complex amplitude beta; mean photon number |beta|^2."""

    beta: complex

    def __post_init__(self):
        b = complex(self.beta)
        if not (math.isfinite(b.real) and math.isfinite(b.imag)):
            raise ValidationError("coherent amplitude must be finite")
        object.__setattr__(self, "beta", b)


@dataclass(frozen=True)
class Fock:
    """Photon-number eigenstate |n>."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValidationError(f"Fock level must be a nonnegative integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True, eq=False)
class Mixed:
    """Truncated number-basis density matrix rho[n, m], n, m = 0..dim-1."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
            raise ValidationError("mixed-state rho must be a square matrix")
        herm = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
        if herm > HERMITICITY_TOL:
            raise ValidationError(f"rho is not Hermitian: max |rho_nm - conj(rho_mn)| = {herm:.3e}")
        tr = rho.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"rho is not normalizable: trace = {tr:.12g}")
        diag = np.diag(rho).real
        if diag.min() < DIAGONAL_FLOOR:
            raise ValidationError(f"rho has a negative diagonal entry: min = {diag.min():.3e}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


StateSpec = Union[Coherent, Fock, Mixed]


def validate_state(state: StateSpec, strict: bool = False) -> None:
    """Re-run construction checks; with strict=True also require rho >= EIGENVALUE_FLOOR."""
    if not isinstance(state, (Coherent, Fock, Mixed)):
        raise ValidationError(f"not a state: {state!r}")
    if strict and isinstance(state, Mixed):
        lo = np.linalg.eigvalsh(state.rho).min()
        if lo < EIGENVALUE_FLOOR:
            raise ValidationError(f"rho is not positive semidefinite: min eigenvalue = {lo:.3e}")


def state_dim(state: StateSpec) -> int:
    """Number-basis truncation used by samplers and moment formulas.

    Coherent states get max(20, ceil(|beta|^2 + 8|beta| + 10)), which keeps the
    neglected photon-number tail below 1e-10.
    """
    if isinstance(state, Fock):
        return state.n + 1
    if isinstance(state, Mixed):
        return state.dim
    b = abs(state.beta)
    return max(20, math.ceil(b * b + 8.0 * b + 10.0))


def _pdf_dim(state: StateSpec) -> int:
    # Larger truncation for density evaluation: amplitude tail below ~1e-15.
    if isinstance(state, Coherent):
        b = abs(state.beta)
        return max(32, math.ceil(b * b + 12.0 * b + 30.0))
    return state_dim(state)


def state_tag(state: StateSpec) -> str:
    if isinstance(state, Coherent):
        b = state.beta
        return f"coherent(beta={b.real:.17g}{b.imag:+.17g}j)"
    if isinstance(state, Fock):
        return f"fock(n={state.n})"
    return f"mixed(dim={state.dim})"


def state_to_json(state: StateSpec) -> dict:
    """JSON form: coherent/fock/mixed with [re, im] pairs for complex entries."""
    if isinstance(state, Coherent):
        return {"type": "coherent", "beta": [state.beta.real, state.beta.imag]}
    if isinstance(state, Fock):
        return {"type": "fock", "n": state.n}
    rho = [[v.real, v.imag] for v in state.rho.reshape(-1)]
    return {"type": "mixed", "dim": state.dim, "rho": rho}


def state_from_json(obj) -> StateSpec:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"state JSON does not parse: {exc}") from exc
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValidationError("state JSON must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "coherent":
            re, im = obj["beta"]
            return Coherent(complex(re, im))
        if kind == "fock":
            return Fock(int(obj["n"]))
        if kind == "mixed":
            dim = int(obj["dim"])
            flat = obj["rho"]
            if len(flat) != dim * dim:
                raise ValidationError(f"mixed rho must have dim^2 = {dim * dim} entries, got {len(flat)}")
            rho = np.array([complex(re, im) for re, im in flat]).reshape(dim, dim)
            return Mixed(rho)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed state JSON: {exc}") from exc
    raise ValidationError(f"unknown state type {kind!r}")


def hermite_functions(nmax: int, x) -> np.ndarray:
    """Oscillator eigenfunctions psi_0..psi_nmax of the variance-1/4 convention.

    psi_n are orthonormal on the real line and satisfy
    psi_0(x) = (2/pi)^(1/4) exp(-x^2). Evaluated with the normalized
    three-term recurrence, which stays in range for n up to a few hundred.
    Returns an array of shape (nmax + 1, len(x)).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((nmax + 1, x.size))
    out[0] = (2.0 / math.pi) ** 0.25 * np.exp(-x * x)
    if nmax >= 1:
        out[1] = 2.0 * x * out[0]
    for k in range(1, nmax):
        out[k + 1] = (2.0 / math.sqrt(k + 1.0)) * x * out[k] - math.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def _annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def photon_distribution(state: StateSpec, dim: int) -> tuple[np.ndarray, float]:
    """Photon-number probabilities p_0..p_{dim-1} plus the neglected tail mass."""
    if int(dim) != dim or dim < 1:
        raise ValidationError(f"dim must be a positive integer, got {dim}")
    dim = int(dim)
    validate_state(state)
    if isinstance(state, Fock):
        probs = np.zeros(dim)
        tail = 0.0
        if state.n < dim:
            probs[state.n] = 1.0
        else:
            tail = 1.0
        return probs, tail
    if isinstance(state, Coherent):
        lam = abs(state.beta) ** 2
        if lam == 0.0:
            probs = np.zeros(dim)
            probs[0] = 1.0
            return probs, 0.0
        n = np.arange(dim)
        probs = np.exp(n * math.log(lam) - lam - gammaln(n + 1.0))
        tail = float(gammainc(dim, lam))
        return probs, tail
    diag = np.clip(np.diag(state.rho).real, 0.0, None)
    if dim >= state.dim:
        probs = np.zeros(dim)
        probs[: state.dim] = diag
    else:
        probs = diag[:dim].copy()
    return probs, float(max(0.0, 1.0 - probs.sum()))


def normal_moment(state: StateSpec, n: int, m: int) -> complex:
    """Normally ordered moment <a^dag^n a^m>.

    Closed forms for coherent and Fock states; exact ladder-operator matrix
    algebra on the truncated space for mixed states (requires n + m < dim).
    """
    if n < 0 or m < 0 or int(n) != n or int(m) != m:
        raise ValidationError(f"moment orders must be nonnegative integers, got ({n}, {m})")
    n, m = int(n), int(m)
    validate_state(state)
    if isinstance(state, Coherent):
        return (state.beta.conjugate() ** n) * (state.beta ** m)
    if isinstance(state, Fock):
        if n != m or n > state.n:
            return 0.0 + 0.0j
        return complex(math.perm(state.n, n))
    if n + m >= state.dim:
        raise NumericRangeError(
            f"moment order n + m = {n + m} exceeds the truncated space (dim = {state.dim}); "
            "pad rho with zero rows and columns to raise the cutoff"
        )
    a = _annihilation(state.dim)
    op = np.linalg.matrix_power(a.conj().T, n) @ np.linalg.matrix_power(a, m)
    return complex(np.trace(state.rho @ op))


def mean_photon(state: StateSpec) -> float:
    """Mean photon number <a^dag a>."""
    return normal_moment(state, 1, 1).real


def _ideal_pdf(state: StateSpec, phi: float, x: np.ndarray) -> np.ndarray:
    # Quadrature density at unit efficiency, via the truncated number basis.
    dim = _pdf_dim(state)
    if isinstance(state, Fock):
        psi = hermite_functions(state.n, x)
        return psi[state.n] ** 2
    if isinstance(state, Coherent):
        b = state.beta
        lam = abs(b) ** 2
        n = np.arange(dim)
        if lam == 0.0:
            amp = np.zeros(dim, dtype=complex)
            amp[0] = 1.0
        else:
            logmag = -0.5 * lam + n * math.log(abs(b)) - 0.5 * gammaln(n + 1.0)
            amp = np.exp(logmag) * np.exp(1j * n * np.angle(b))
        amp = amp * np.exp(-1j * n * phi)
        psi = hermite_functions(dim - 1, x)
        u = amp @ psi
        return np.abs(u) ** 2
    phases = np.exp(-1j * phi * np.arange(dim))
    rotated = (phases[:, None] * state.rho) * phases.conj()[None, :]
    psi = hermite_functions(dim - 1, x)
    return np.einsum("nm,nx,mx->x", rotated, psi, psi).real


def quadrature_pdf(state: StateSpec, phi: float, eta: float, x) -> np.ndarray | float:
    """Probability density of the homodyne outcome x at local-oscillator phase phi.

    At eta = 1 this is sum_{n,m} rho_nm exp(i (m - n) phi) psi_n(x) psi_m(x);
    for eta < 1 the ideal density is convolved with the efficiency Gaussian
    (Gauss-Hermite quadrature, 64 nodes).
    """
    _check_eta(eta)
    validate_state(state)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    phi = float(phi)
    if eta == 1.0:
        p = _ideal_pdf(state, phi, xs)
    else:
        sig = math.sqrt(smearing_variance(eta))
        nodes, weights = np.polynomial.hermite.hermgauss(_GAUSS_HERMITE_NODES)
        shifted = xs[None, :] - math.sqrt(2.0) * sig * nodes[:, None]
        vals = _ideal_pdf(state, phi, shifted.reshape(-1)).reshape(shifted.shape)
        p = (weights / math.sqrt(math.pi)) @ vals
    p = np.clip(p, 0.0, None)
    return float(p[0]) if np.isscalar(x) or np.asarray(x).ndim == 0 else p
