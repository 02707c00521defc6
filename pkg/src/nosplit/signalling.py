"""Signalling witness: Bob splits his half of a singlet.

Without the machine Bob's reduced state is I/2 whatever basis Alice measures
in. With it, the ensembles Bob ends up holding after Alice measures in two
different bases are distinguishable, which would be a superluminal signal.
The machine is applied branch by branch for each basis; there is no single
linear map that acts correctly on both bases at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from nosplit import bloch
from nosplit.bloch import BlochAngles, SplitMachine
from nosplit.qmath import (
    DensityMatrix,
    Ket,
    density_from_ket,
    mixture,
    partial_trace,
    tensor,
    trace_distance,
)

WITNESS_THRESHOLD = 1e-9
BASELINE_TOL = 1e-12
_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class QubitBasis:
    """Orthonormal qubit basis {up, down}; down is the antipode of up."""

    up: BlochAngles
    down: BlochAngles = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "down", self.up.complement())

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.0) -> QubitBasis:
        return cls(BlochAngles(theta, phi))

    @classmethod
    def computational(cls) -> QubitBasis:
        return cls.from_angles(0.0, 0.0)

    @classmethod
    def hadamard(cls) -> QubitBasis:
        return cls.from_angles(math.pi / 2, 0.0)

    def swapped(self) -> QubitBasis:
        return QubitBasis(self.down)

    def kets(self) -> tuple[Ket, Ket]:
        return bloch.make_state(self.up), bloch.make_state(self.down)


def _same_angles(a: BlochAngles, b: BlochAngles) -> bool:
    dphi = abs(a.phi - b.phi) % (2 * math.pi)
    dphi = min(dphi, 2 * math.pi - dphi)
    return abs(a.theta - b.theta) <= _ANGLE_TOL and dphi <= _ANGLE_TOL


def same_basis(b1: QubitBasis, b2: QubitBasis) -> bool:
    """True when the bases coincide as labelled angle sets, up to swapping labels."""
    return ((_same_angles(b1.up, b2.up) and _same_angles(b1.down, b2.down))
            or (_same_angles(b1.up, b2.down) and _same_angles(b1.down, b2.up)))


def singlet(basis: QubitBasis) -> Ket:
    up, down = basis.kets()
    return (tensor(up, down) + tensor(down, up).scaled(-1.0)).scaled(1 / math.sqrt(2))


def bob_premeasure_rdm(basis: QubitBasis) -> DensityMatrix:
    return partial_trace(density_from_ket(singlet(basis)), [1])


def split_image(a: BlochAngles, m: SplitMachine | None = None) -> Ket:
    """Normalized image theta_part(theta) (x) Sigma(phi) of one basis state."""
    m = SplitMachine() if m is None else m
    sigma = bloch.phi_part(a.phi, m.components).normalized()
    return tensor(bloch.theta_part(a.theta, m.components).normalized(), sigma)


def bob_post_split_mixture(basis: QubitBasis, m: SplitMachine | None = None) -> DensityMatrix:
    """Equal-weight ensemble of the split images of the two basis states."""
    projectors = [density_from_ket(split_image(a, m), normalize=True) for a in (basis.up, basis.down)]
    return mixture(projectors, [0.5, 0.5])


@dataclass(frozen=True)
class SignallingResult:
    mixture1: DensityMatrix
    mixture2: DensityMatrix
    distance: float
    pre_split_distance: float
    degenerate: bool

    @property
    def signalling(self) -> bool:
        return (not self.degenerate and self.pre_split_distance <= BASELINE_TOL
                and self.distance > WITNESS_THRESHOLD)


def signalling_witness(b1: QubitBasis, b2: QubitBasis, m: SplitMachine | None = None) -> SignallingResult:
    """Trace distance between Bob's post-split ensembles for two bases.

    Identical bases (possibly relabelled) are reported as degenerate rather
    than rejected; their distance is zero by construction.
    """
    rho1 = bob_post_split_mixture(b1, m)
    rho2 = bob_post_split_mixture(b2, m)
    pre = trace_distance(bob_premeasure_rdm(b1), bob_premeasure_rdm(b2))
    return SignallingResult(rho1, rho2, trace_distance(rho1, rho2), pre, same_basis(b1, b2))
