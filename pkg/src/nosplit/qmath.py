"""Dense complex linear algebra for small multipartite systems.

Kets and density matrices carry explicit subsystem dimensions. Subsystems are
ordered row-major: the first factor varies slowest in the flattened index.
Everything here targets total dimension <= 8, so the eigensolver is a plain
cyclic Jacobi iteration rather than a LAPACK call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 8


@dataclass
class Tolerances:
    """Global numerical tolerances shared by every module."""

    structural: float = 1e-12
    spectral: float = 1e-10
    jacobi_max_sweeps: int = 64


settings = Tolerances()


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


def _check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("at least one subsystem is required")
    if any(d < 2 for d in dims):
        raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
    return dims


@dataclass(frozen=True)
class Ket:
    """A pure state vector; normalization is not required."""

    dims: tuple[int, ...]
    amps: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        dims = _check_dims(self.dims)
        amps = _freeze(np.ravel(self.amps))
        if amps.size != math.prod(dims):
            raise ValueError(f"{amps.size} amplitudes do not match dims {dims}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def qubit(cls, a0: complex, a1: complex) -> Ket:
        return cls((2,), np.array([a0, a1]))

    @classmethod
    def basis(cls, index: int, dims: Sequence[int] = (2,)) -> Ket:
        amps = np.zeros(math.prod(dims), dtype=np.complex128)
        amps[index] = 1.0
        return cls(tuple(dims), amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> Ket:
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return Ket(self.dims, self.amps / n)

    def scaled(self, c: complex) -> Ket:
        return Ket(self.dims, self.amps * c)

    def __add__(self, other: Ket) -> Ket:
        if self.dims != other.dims:
            raise ValueError(f"dims mismatch: {self.dims} vs {other.dims}")
        return Ket(self.dims, self.amps + other.amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian PSD operator with subsystem dimensions; trace is not forced to 1."""

    dims: tuple[int, ...]
    mat: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        dims = _check_dims(self.dims)
        mat = _freeze(self.mat)
        d = math.prod(dims)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix entries must be finite")
        _require_hermitian(mat)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)
        lo = hermitian_eigvalsh(mat)[0]
        if lo < -settings.spectral:
            raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3e})")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def normalized(self) -> DensityMatrix:
        t = self.trace()
        if t <= 0.0:
            raise ValueError("cannot normalize a zero-trace matrix")
        return DensityMatrix(self.dims, self.mat / t)


def _require_hermitian(mat: np.ndarray) -> None:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    err = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if err > settings.structural:
        raise ValueError(f"matrix is not Hermitian (max deviation {err:.3e})")


def inner_product(a: Ket, b: Ket) -> complex:
    """Return <a|b>, conjugating the first argument."""
    if a.dims != b.dims:
        raise ValueError(f"dims mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amps, b.amps))


def tensor(a: Ket, b: Ket) -> Ket:
    return Ket(a.dims + b.dims, np.kron(a.amps, b.amps))


def tensor_all(kets: Iterable[Ket]) -> Ket:
    it = iter(kets)
    out = next(it)
    for k in it:
        out = tensor(out, k)
    return out


def density_from_ket(k: Ket, normalize: bool = False) -> DensityMatrix:
    """Return the projector |k><k|, divided by <k|k> when ``normalize`` is set."""
    mat = np.outer(k.amps, k.amps.conj())
    if normalize:
        n2 = float(np.vdot(k.amps, k.amps).real)
        if n2 == 0.0:
            raise ValueError("cannot normalize the zero vector")
        mat = mat / n2
    # Exact Hermitian symmetrization; outer products are Hermitian up to rounding.
    mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(k.dims, mat)


def mixture(states: Sequence[DensityMatrix], weights: Sequence[float]) -> DensityMatrix:
    if len(states) != len(weights) or not states:
        raise ValueError("need one weight per state")
    dims = states[0].dims
    if any(s.dims != dims for s in states):
        raise ValueError("all states must share dims")
    mat = sum(w * s.mat for w, s in zip(weights, states))
    return DensityMatrix(dims, mat)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems retain their original relative order.
    """
    keep = sorted(set(int(i) for i in keep))
    n = len(rho.dims)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"subsystem index out of range for dims {rho.dims}")
    drop = [i for i in range(n) if i not in keep]
    t = rho.mat.reshape(rho.dims + rho.dims)
    # Bring the layout to (keep, drop, keep', drop') and contract drop with drop'.
    perm = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    t = np.transpose(t, perm)
    dk = math.prod(rho.dims[i] for i in keep)
    dd = math.prod(rho.dims[i] for i in drop) if drop else 1
    t = t.reshape(dk, dd, dk, dd)
    out = np.einsum("ajbj->ab", t)
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(tuple(rho.dims[i] for i in keep), out)


def _eig2(mat: np.ndarray) -> np.ndarray:
    a = mat[0, 0].real
    d = mat[1, 1].real
    b = mat[0, 1]
    tr = a + d
    # tr^2 - 4 det written as a sum of squares, which is never negative.
    disc = math.sqrt((a - d) ** 2 + 4.0 * (b.real**2 + b.imag**2))
    return np.array([0.5 * (tr - disc), 0.5 * (tr + disc)])


def _offdiag_norm(mat: np.ndarray) -> float:
    off = mat - np.diag(np.diag(mat))
    return float(np.linalg.norm(off))


def jacobi_eigvalsh(mat: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Converged when the off-diagonal Frobenius norm is at most
    ``tol * max(1, ||mat||_F)``.
    """
    a = np.array(mat, dtype=np.complex128, copy=True)
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    tol = (settings.structural if tol is None else tol) * scale
    negligible = 1e-30 * scale
    for _ in range(settings.jacobi_max_sweeps):
        if _offdiag_norm(a) <= tol:
            return np.sort(np.diag(a).real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g <= negligible:
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = apq / g
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * g)
                if abs(theta) > 1e150:
                    t = 0.5 / abs(theta)
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # Columns p, q of the unitary D(phase) @ R(c, s).
                u_pp, u_pq = c, s
                u_qp, u_qq = -s * phase.conjugate(), c * phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * u_pp + col_q * u_qp
                a[:, q] = col_p * u_pq + col_q * u_qq
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(u_pp) * row_p + np.conj(u_qp) * row_q
                a[q, :] = np.conj(u_pq) * row_p + np.conj(u_qq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    if _offdiag_norm(a) <= tol:
        return np.sort(np.diag(a).real)
    raise RuntimeError("Jacobi iteration did not converge")


def hermitian_eigvalsh(mat: np.ndarray, method: str = "auto") -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    ``method`` is ``"auto"`` (closed form for 2x2, Jacobi otherwise),
    ``"closed"`` or ``"jacobi"``.
    """
    mat = np.asarray(mat, dtype=np.complex128)
    _require_hermitian(mat)
    n = mat.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    if method == "auto":
        method = "closed" if n == 2 else "jacobi"
    if method == "closed":
        if n != 2:
            raise ValueError("closed-form eigenvalues need a 2x2 matrix")
        return _eig2(mat)
    if method == "jacobi":
        if n == 1:
            return np.array([mat[0, 0].real])
        return jacobi_eigvalsh(mat)
    raise ValueError(f"unknown method {method!r}")


def eigenvalues_hermitian(rho: DensityMatrix | np.ndarray, method: str = "auto") -> np.ndarray:
    mat = rho.mat if isinstance(rho, DensityMatrix) else rho
    return hermitian_eigvalsh(mat, method)


def entropy_from_eigenvalues(evals: np.ndarray) -> float:
    """Shannon entropy in bits with 0 log 0 = 0; tiny negative rounding is clipped."""
    lam = np.clip(np.asarray(evals, dtype=float), 0.0, None)
    lam = lam[lam > 0.0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    tr = rho.trace()
    if abs(tr - 1.0) > settings.spectral:
        raise ValueError(f"entropy needs a unit-trace state, trace is {tr!r}")
    s = entropy_from_eigenvalues(eigenvalues_hermitian(rho))
    return min(s, math.log2(rho.dim))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the sum of absolute eigenvalues of rho - sigma."""
    if rho.dims != sigma.dims:
        raise ValueError(f"dims mismatch: {rho.dims} vs {sigma.dims}")
    for m in (rho, sigma):
        if abs(m.trace() - 1.0) > settings.spectral:
            raise ValueError("trace distance needs unit-trace states")
    diff = rho.mat - sigma.mat
    diff = 0.5 * (diff + diff.conj().T)
    d = 0.5 * float(np.sum(np.abs(hermitian_eigvalsh(diff))))
    return min(d, 1.0)
