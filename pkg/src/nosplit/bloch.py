"""Bloch-sphere states and the hypothetical parameter-splitting machine."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from nosplit.qmath import Ket, inner_product, tensor

TWO_PI = 2.0 * math.pi
_POLE_TOL = 1e-15


def reduce_phase(phi: float) -> float:
    phi = math.fmod(float(phi), TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    # fmod of a value just below a multiple of 2pi can land on 2pi after the shift.
    return 0.0 if phi >= TWO_PI else phi


@dataclass(frozen=True)
class BlochAngles:
    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        theta = float(self.theta)
        if not math.isfinite(theta) or not math.isfinite(float(self.phi)):
            raise ValueError("Bloch angles must be finite")
        if theta < 0.0 or theta > math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", reduce_phase(self.phi))

    @property
    def at_pole(self) -> bool:
        return self.theta <= _POLE_TOL or math.pi - self.theta <= _POLE_TOL

    def canonical(self) -> BlochAngles:
        """Same point with phi set to 0 at the poles, where it has no meaning."""
        return BlochAngles(self.theta, 0.0) if self.at_pole else self

    def complement(self) -> BlochAngles:
        """Antipodal point, i.e. the orthogonal state."""
        return BlochAngles(math.pi - self.theta, self.phi + math.pi)


@dataclass(frozen=True)
class SplitComponents:
    """The four theta/phi-independent kets the split parts are built from."""

    psi11: Ket = field(default_factory=lambda: Ket.basis(0))
    psi12: Ket = field(default_factory=lambda: Ket.basis(1))
    psi21: Ket = field(default_factory=lambda: Ket.basis(0))
    psi22: Ket = field(default_factory=lambda: Ket.basis(1))

    def __post_init__(self) -> None:
        for name in ("psi11", "psi12", "psi21", "psi22"):
            if getattr(self, name).dims != (2,):
                raise ValueError(f"{name} must be a single-qubit ket")


DEFAULT_COMPONENTS = SplitComponents()


@dataclass(frozen=True)
class SplitMachine:
    components: SplitComponents = DEFAULT_COMPONENTS
    blank: Ket = field(default_factory=lambda: Ket.basis(0))

    def __post_init__(self) -> None:
        if self.blank.dims != (2,):
            raise ValueError("blank must be a single-qubit ket")
        if abs(self.blank.norm() - 1.0) > 1e-12:
            raise ValueError("blank must be normalized")


def make_state(a: BlochAngles) -> Ket:
    """cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return Ket.qubit(math.cos(a.theta / 2), cmath.exp(1j * a.phi) * math.sin(a.theta / 2))


def theta_part(theta: float, c: SplitComponents = DEFAULT_COMPONENTS) -> Ket:
    return c.psi11.scaled(math.cos(theta / 2)) + c.psi12.scaled(math.sin(theta / 2))


def phi_part(phi: float, c: SplitComponents = DEFAULT_COMPONENTS) -> Ket:
    """|psi21> + e^{i phi}|psi22>; left unnormalized (norm sqrt 2 for the defaults)."""
    return c.psi21 + c.psi22.scaled(cmath.exp(1j * phi))


@dataclass(frozen=True)
class Overlaps:
    p: complex
    q: complex
    r: complex


def overlaps(a1: BlochAngles, a2: BlochAngles, c: SplitComponents = DEFAULT_COMPONENTS) -> Overlaps:
    """p = <psi(a2)|psi(a1)>, q and r the matching overlaps of the split parts.

    The closed forms for default components are computed and checked against
    the constructed kets.
    """
    p = inner_product(make_state(a2), make_state(a1))
    q = inner_product(theta_part(a2.theta, c), theta_part(a1.theta, c))
    r = inner_product(phi_part(a2.phi, c), phi_part(a1.phi, c))
    if c == DEFAULT_COMPONENTS:
        x, y = xy(a1, a2)
        phase = cmath.exp(1j * (a1.phi - a2.phi))
        for got, want in ((p, x + phase * y), (q, complex(x + y)), (r, 1 + phase)):
            if abs(got - want) > 1e-14:
                raise ArithmeticError(f"overlap {got} disagrees with closed form {want}")
    return Overlaps(p, q, r)


def xy(a1: BlochAngles, a2: BlochAngles) -> tuple[float, float]:
    x = math.cos(a1.theta / 2) * math.cos(a2.theta / 2)
    y = math.sin(a1.theta / 2) * math.sin(a2.theta / 2)
    return x, y


def apply_machine(m: SplitMachine, a: BlochAngles) -> Ket:
    """The machine's claimed output on make_state(a) tensored with the blank."""
    return tensor(theta_part(a.theta, m.components), phi_part(a.phi, m.components))


# Batched counterparts used by the grid sweeps. Leading axis indexes points.

def make_states(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape + (2,), dtype=np.complex128)
    out[..., 0] = np.cos(theta / 2)
    out[..., 1] = np.exp(1j * np.asarray(phi)) * np.sin(theta / 2)
    return out


def theta_parts(theta: np.ndarray, c: SplitComponents = DEFAULT_COMPONENTS) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)[..., None]
    return np.cos(theta / 2) * c.psi11.amps + np.sin(theta / 2) * c.psi12.amps


def phi_parts(phi: np.ndarray, c: SplitComponents = DEFAULT_COMPONENTS) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)[..., None]
    return c.psi21.amps + np.exp(1j * phi) * c.psi22.amps


def batch_inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise <a_i|b_i>."""
    return np.einsum("...i,...i->...", a.conj(), b)
