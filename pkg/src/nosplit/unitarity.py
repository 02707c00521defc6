"""Inner-product preservation test for the splitting machine.

A unitary splitter would need <psi(a1)|psi(a2)> to equal the product of the
overlaps of the theta parts and of the phi parts. With default components the
difference is -(y + x e^{i(phi2-phi1)}), x = cos(t1/2)cos(t2/2) and
y = sin(t1/2)sin(t2/2), which vanishes only for orthogonal inputs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from nosplit import bloch
from nosplit.bloch import DEFAULT_COMPONENTS, BlochAngles, SplitComponents
from nosplit.grid import SweepGrid, ViolationReport, as_points
from nosplit.qmath import inner_product

DEFAULT_TOL = 1e-9
# Phase differences within this of n*pi are attributed to that n.
PHASE_TOL = 1e-6
N_WITNESSES = 10

CASE_NONE = ""
CASE_EVEN = "n_even"  # theta1 - theta2 = (2m+1) pi
CASE_ODD = "n_odd"  # theta1 + theta2 = (2m+1) pi
CASE_POLE = "pole"  # x = y = 0, any phase difference


@dataclass(frozen=True)
class UnitarityResult:
    lhs: complex
    rhs: complex
    residual: complex
    condition_met: bool
    witnesses: tuple[int, int] | None
    case: str = CASE_NONE


def closed_form_residual(a1: BlochAngles, a2: BlochAngles) -> complex:
    x, y = bloch.xy(a1, a2)
    return -(y + x * cmath.exp(1j * (a2.phi - a1.phi)))


def residual(a1: BlochAngles, a2: BlochAngles, c: SplitComponents = DEFAULT_COMPONENTS,
             tol: float = DEFAULT_TOL) -> UnitarityResult:
    lhs = inner_product(bloch.make_state(a1), bloch.make_state(a2))
    rhs = (inner_product(bloch.theta_part(a1.theta, c), bloch.theta_part(a2.theta, c))
           * inner_product(bloch.phi_part(a1.phi, c), bloch.phi_part(a2.phi, c)))
    res = lhs - rhs
    if c == DEFAULT_COMPONENTS:
        want = closed_form_residual(a1, a2)
        if abs(res - want) > 1e-14:
            raise ArithmeticError(f"residual {res} disagrees with closed form {want}")
    met, wit = condition_met(a1, a2, tol)
    return UnitarityResult(lhs, rhs, res, met, wit, _case_of(a1, a2, met))


def _witness(delta: float, t1: float, t2: float) -> tuple[int, int] | None:
    n = round(delta / math.pi)
    if abs(delta - n * math.pi) > PHASE_TOL:
        return None
    s = t1 - t2 if n % 2 == 0 else t1 + t2
    return n, round((s / math.pi - 1.0) / 2.0)


def _case_of(a1: BlochAngles, a2: BlochAngles, met: bool) -> str:
    if not met:
        return CASE_NONE
    wit = _witness(a2.phi - a1.phi, a1.theta, a2.theta)
    if wit is None:
        return CASE_POLE
    return CASE_EVEN if wit[0] % 2 == 0 else CASE_ODD


def condition_met(a1: BlochAngles, a2: BlochAngles, tol: float = DEFAULT_TOL) -> tuple[bool, tuple[int, int] | None]:
    """Whether the pair lies on the set where the overlap equation holds.

    Tested as |y + x e^{i(phi2-phi1)}| <= tol, which has the same zeros as the
    tangent form but no singularity at theta = pi. Returns the integers (n, m)
    with phi2 - phi1 = n pi and theta1 -/+ theta2 = (2m+1) pi when they exist;
    the pole pair (0, pi) satisfies the condition for every phase and then has
    no witness.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x, y = bloch.xy(a1, a2)
    met = abs(y + x * cmath.exp(1j * (a2.phi - a1.phi))) <= tol
    if not met:
        return False, None
    return True, _witness(a2.phi - a1.phi, a1.theta, a2.theta)


def evaluate_points(pts: np.ndarray, c: SplitComponents = DEFAULT_COMPONENTS,
                    tol: float = DEFAULT_TOL) -> dict[str, np.ndarray]:
    t1, p1, t2, p2 = pts.T
    s1 = bloch.make_states(t1, p1)
    s2 = bloch.make_states(t2, p2)
    lhs = bloch.batch_inner(s1, s2)
    rhs = (bloch.batch_inner(bloch.theta_parts(t1, c), bloch.theta_parts(t2, c))
           * bloch.batch_inner(bloch.phi_parts(p1, c), bloch.phi_parts(p2, c)))
    res = lhs - rhs
    p_abs = np.abs(bloch.batch_inner(s2, s1))

    x = np.cos(t1 / 2) * np.cos(t2 / 2)
    y = np.sin(t1 / 2) * np.sin(t2 / 2)
    delta = p2 - p1
    met = np.abs(y + x * np.exp(1j * delta)) <= tol

    n = np.rint(delta / np.pi)
    phase_ok = np.abs(delta - n * np.pi) <= PHASE_TOL
    odd = np.mod(n, 2) == 1
    s = np.where(odd, t1 + t2, t1 - t2)
    m = np.rint((s / np.pi - 1.0) / 2.0)
    has_wit = met & phase_ok
    case = np.full(len(pts), CASE_NONE, dtype=object)
    case[met & ~phase_ok] = CASE_POLE
    case[has_wit & ~odd] = CASE_EVEN
    case[has_wit & odd] = CASE_ODD
    return {
        "theta1": t1, "phi1": p1, "theta2": t2, "phi2": p2,
        "lhs_re": lhs.real, "lhs_im": lhs.imag,
        "rhs_re": rhs.real, "rhs_im": rhs.imag,
        "residual_re": res.real, "residual_im": res.imag,
        "residual_abs": np.abs(res),
        "p_abs": p_abs,
        "condition_met": met,
        "case": case,
        "n": np.where(has_wit, n, 0).astype(np.int64),
        "m": np.where(has_wit, m, 0).astype(np.int64),
    }


def summarize(cols: dict[str, np.ndarray], tol: float) -> dict[str, Any]:
    res_abs = np.asarray(cols["residual_abs"], dtype=float)
    met = np.asarray(cols["condition_met"], dtype=bool)
    zero = res_abs <= tol
    mismatch = np.flatnonzero(zero != met)
    cases = np.asarray(cols["case"], dtype=object)
    p_abs = np.asarray(cols["p_abs"], dtype=float)
    idx = np.flatnonzero(met)
    witnesses = []
    for i in idx[:N_WITNESSES]:
        witnesses.append({
            "index": int(i),
            **{k: float(cols[k][i]) for k in ("theta1", "phi1", "theta2", "phi2")},
            "residual_abs": float(res_abs[i]),
            "case": str(cases[i]),
            "n": int(cols["n"][i]), "m": int(cols["m"][i]),
        })
    return {
        "points": int(len(res_abs)),
        "condition_met": int(met.sum()),
        "zero_residual": int(zero.sum()),
        "sets_coincide": bool(len(mismatch) == 0),
        "mismatches": int(len(mismatch)),
        "orthogonal_when_met": bool(np.all(p_abs[met] <= tol)),
        "max_residual_condition_met": float(res_abs[met].max()) if met.any() else None,
        "min_residual_condition_not_met": float(res_abs[~met].min()) if (~met).any() else None,
        "max_residual": float(res_abs.max()),
        "case_counts": {c: int(np.sum(cases == c)) for c in (CASE_EVEN, CASE_ODD, CASE_POLE)},
        "witnesses": witnesses,
    }


def sweep(grid: SweepGrid | np.ndarray, tol: float = DEFAULT_TOL,
          c: SplitComponents = DEFAULT_COMPONENTS) -> ViolationReport:
    pts = as_points(grid)
    cols = evaluate_points(pts, c, tol)
    settings = {"tol": tol, "grid": grid.describe() if isinstance(grid, SweepGrid) else {"size": len(pts)}}
    return ViolationReport("unitarity", settings, cols, summarize(cols, tol))


def passed(report: ViolationReport) -> bool:
    s = report.summary
    return s["sets_coincide"] and s["orthogonal_when_met"]
