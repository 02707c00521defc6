"""Entanglement bookkeeping before and after Bob runs the splitting machine.

Alice and Bob share (|0>|psi(a1)> + |1>|psi(a2)>)/sqrt2 with a blank qubit
on Bob's side. Splitting Bob's qubit is a local operation, so Alice's reduced
state must not become more mixed. For default components it always becomes at
least as mixed, and strictly more on a large part of the angle space.

Two pipelines exist. The literal one keeps the unnormalized split parts, so
the post-split state has norm sqrt2 and Alice's reduced matrix has trace 2.
The normalized one rescales the state to unit norm; all entropies come from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from nosplit import bloch
from nosplit.bloch import BlochAngles, SplitMachine
from nosplit.grid import SweepGrid, ViolationReport, as_points
from nosplit.qmath import (
    DensityMatrix,
    Ket,
    density_from_ket,
    eigenvalues_hermitian,
    partial_trace,
    settings,
    tensor,
    tensor_all,
    von_neumann_entropy,
)

ENTROPY_TOL = 1e-12
A_IDENTITY_TOL = 1e-12
_SQRT_HALF = 1 / math.sqrt(2)
ALICE0 = Ket.basis(0)
ALICE1 = Ket.basis(1)


@dataclass(frozen=True)
class LoccResult:
    p_abs: float
    q_abs: float
    r_abs: float
    A: float
    lambda_pre: float
    lambda_post: float
    entropy_pre: float
    entropy_post: float
    normalized: bool
    # Largest eigenvalues as 1/2 + |overlap|^2/2, kept for comparison only.
    lambda_pre_squared: float
    lambda_post_squared: float

    @property
    def entropy_delta(self) -> float:
        return self.entropy_post - self.entropy_pre

    @property
    def violation(self) -> bool:
        return self.entropy_post > self.entropy_pre + ENTROPY_TOL


def pre_split_state(a1: BlochAngles, a2: BlochAngles, blank: Ket | None = None) -> Ket:
    blank = Ket.basis(0) if blank is None else blank
    if abs(blank.norm() - 1.0) > settings.structural:
        raise ValueError("blank must be normalized")
    b0 = tensor_all([ALICE0, bloch.make_state(a1), blank])
    b1 = tensor_all([ALICE1, bloch.make_state(a2), blank])
    return (b0 + b1).scaled(_SQRT_HALF)


def alice_rdm_pre(state: Ket) -> DensityMatrix:
    return partial_trace(density_from_ket(state), [0])


def post_split_state(a1: BlochAngles, a2: BlochAngles, m: SplitMachine | None = None,
                     normalize: bool = False) -> Ket:
    m = SplitMachine() if m is None else m
    b0 = tensor(ALICE0, bloch.apply_machine(m, a1))
    b1 = tensor(ALICE1, bloch.apply_machine(m, a2))
    state = (b0 + b1).scaled(_SQRT_HALF)
    return state.normalized() if normalize else state


def alice_rdm_post(state: Ket, normalized: bool = True) -> DensityMatrix:
    """Alice's reduced state; ``normalized`` asks for unit trace."""
    rho = partial_trace(density_from_ket(state), [0])
    return rho.normalized() if normalized else rho


def closed_form_A(a1: BlochAngles, a2: BlochAngles) -> float:
    """|p|^2 - (|q||r|)^2 in closed form, with k = phi1 - phi2."""
    x, y = bloch.xy(a1, a2)
    ck = math.cos(a1.phi - a2.phi)
    return -(x * x + y * y + 4 * x * y + 2 * (x * x + y * y + x * y) * ck)


def locc_violation(a1: BlochAngles, a2: BlochAngles, m: SplitMachine | None = None,
                   normalize: bool = True) -> LoccResult:
    m = SplitMachine() if m is None else m
    ov = bloch.overlaps(a1, a2, m.components)
    p_abs, q_abs, r_abs = abs(ov.p), abs(ov.q), abs(ov.r)

    rho_pre = alice_rdm_pre(pre_split_state(a1, a2, m.blank))
    post = post_split_state(a1, a2, m, normalize=normalize)
    rho_post = alice_rdm_post(post, normalized=normalize)
    if not normalize:
        # Spectral quantities still need a state: rescale the literal matrix.
        rho_post = rho_post.normalized()
    return LoccResult(
        p_abs=p_abs,
        q_abs=q_abs,
        r_abs=r_abs,
        A=closed_form_A(a1, a2) if m.components == bloch.DEFAULT_COMPONENTS else p_abs**2 - (q_abs * r_abs) ** 2,
        lambda_pre=float(eigenvalues_hermitian(rho_pre)[-1]),
        lambda_post=float(eigenvalues_hermitian(rho_post)[-1]),
        entropy_pre=von_neumann_entropy(rho_pre),
        entropy_post=von_neumann_entropy(rho_post),
        normalized=normalize,
        lambda_pre_squared=0.5 + p_abs**2 / 2,
        lambda_post_squared=0.5 + (q_abs * r_abs) ** 2 / 2,
    )


def _binary_entropy(lam: np.ndarray) -> np.ndarray:
    lam = np.clip(lam, 0.0, 1.0)
    out = np.zeros_like(lam)
    for v in (lam, 1.0 - lam):
        nz = v > 0
        out[nz] -= v[nz] * np.log2(v[nz])
    return out


def _eig2_batch(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = rho[:, 0, 0].real
    d = rho[:, 1, 1].real
    b = rho[:, 0, 1]
    disc = np.sqrt((a - d) ** 2 + 4 * np.abs(b) ** 2)
    return 0.5 * (a + d - disc), 0.5 * (a + d + disc)


def evaluate_points(pts: np.ndarray, m: SplitMachine | None = None) -> dict[str, np.ndarray]:
    """Batched normalized pipeline over (N, 4) angle rows."""
    m = SplitMachine() if m is None else m
    c = m.components
    t1, p1, t2, p2 = pts.T
    s1 = bloch.make_states(t1, p1)
    s2 = bloch.make_states(t2, p2)
    blank = m.blank.amps

    # (N, alice, bob, bob') amplitude tensors.
    pre = np.stack([np.einsum("ni,j->nij", s1, blank), np.einsum("ni,j->nij", s2, blank)], axis=1) * _SQRT_HALF
    br1 = np.einsum("ni,nj->nij", bloch.theta_parts(t1, c), bloch.phi_parts(p1, c))
    br2 = np.einsum("ni,nj->nij", bloch.theta_parts(t2, c), bloch.phi_parts(p2, c))
    post = np.stack([br1, br2], axis=1) * _SQRT_HALF
    post = post / np.sqrt(np.einsum("nabc,nabc->n", post.conj(), post).real)[:, None, None, None]

    rho_pre = np.einsum("nabc,ndbc->nad", pre, pre.conj())
    rho_post = np.einsum("nabc,ndbc->nad", post, post.conj())
    lam_pre = _eig2_batch(rho_pre)[1]
    lam_post = _eig2_batch(rho_post)[1]
    e_pre = _binary_entropy(lam_pre)
    e_post = _binary_entropy(lam_post)

    p = bloch.batch_inner(s2, s1)
    q = bloch.batch_inner(bloch.theta_parts(t2, c), bloch.theta_parts(t1, c))
    r = bloch.batch_inner(bloch.phi_parts(p2, c), bloch.phi_parts(p1, c))
    x = np.cos(t1 / 2) * np.cos(t2 / 2)
    y = np.sin(t1 / 2) * np.sin(t2 / 2)
    ck = np.cos(p1 - p2)
    A = -(x * x + y * y + 4 * x * y + 2 * (x * x + y * y + x * y) * ck)
    return {
        "theta1": t1, "phi1": p1, "theta2": t2, "phi2": p2,
        "p_abs": np.abs(p), "q_abs": np.abs(q), "r_abs": np.abs(r),
        "A": A,
        "lambda_pre": lam_pre, "lambda_post": lam_post,
        "entropy_pre": e_pre, "entropy_post": e_post,
        "violation": e_post > e_pre + ENTROPY_TOL,
    }


def summarize(cols: dict[str, np.ndarray]) -> dict[str, Any]:
    p = np.asarray(cols["p_abs"], dtype=float)
    q = np.asarray(cols["q_abs"], dtype=float)
    r = np.asarray(cols["r_abs"], dtype=float)
    A = np.asarray(cols["A"], dtype=float)
    e_pre = np.asarray(cols["entropy_pre"], dtype=float)
    e_post = np.asarray(cols["entropy_post"], dtype=float)
    viol = np.asarray(cols["violation"], dtype=bool)
    ident_err = np.abs(A - (p**2 - (q * r) ** 2))
    delta = e_post - e_pre
    i_a = int(np.argmax(A))
    i_d = int(np.argmax(delta))

    def point(i: int) -> dict[str, Any]:
        return {"index": i, **{k: float(cols[k][i]) for k in ("theta1", "phi1", "theta2", "phi2")},
                "A": float(A[i]), "entropy_pre": float(e_pre[i]), "entropy_post": float(e_post[i])}

    return {
        "points": int(len(A)),
        "a_identity_max_error": float(ident_err.max()),
        "a_identity_holds": bool(ident_err.max() <= A_IDENTITY_TOL),
        "a_positive": int(np.sum(A > 0)),
        "max_A": point(i_a),
        "violations": int(viol.sum()),
        "violation_fraction": float(viol.mean()),
        "min_entropy_delta": float(delta.min()),
        "entropy_never_decreases": bool(delta.min() >= -ENTROPY_TOL),
        "max_entropy_increase": point(i_d),
        "witness_found": bool(viol.any()),
    }


def sweep(grid: SweepGrid | np.ndarray, m: SplitMachine | None = None) -> ViolationReport:
    pts = as_points(grid)
    cols = evaluate_points(pts, m)
    settings_echo = {"grid": grid.describe() if isinstance(grid, SweepGrid) else {"size": len(pts)},
                     "entropy_tol": ENTROPY_TOL, "a_identity_tol": A_IDENTITY_TOL}
    return ViolationReport("locc", settings_echo, cols, summarize(cols))


def passed(report: ViolationReport) -> bool:
    s = report.summary
    return s["a_identity_holds"] and s["witness_found"]
