"""Dense Hermitian kernel: staircase patterns, the skew projection P, the
J operator, a cyclic-Jacobi eigensolver, positive-diagonal Householder QR,
and the spectral matrix exponential.

Matrices are dense complex128 numpy arrays; the staircase structure is
enforced by explicit masking so leakage is measurable rather than assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateSpectrum, NoConvergence, NonzeroDiagonal,
                     NotHermitian, ShapeMismatch, SingularInput)
from .hessfn import HessenbergFunction

HERMITIAN_TOL = 1e-12
EIGEN_TOL = 1e-13
SIMPLICITY_REL_GAP = 1e-8  # default gap tolerance, relative to spectral range


@dataclass(frozen=True)
class Spectrum:
    """Strictly increasing eigenvalue list with its simplicity diagnostic."""

    values: np.ndarray  # ascending
    simple: bool

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def spread(self) -> float:
        return float(self.values[-1] - self.values[0])

    def min_gap(self) -> float:
        return float(np.min(np.diff(self.values))) if self.n > 1 else np.inf


def staircase_mask(h: HessenbergFunction) -> np.ndarray:
    """Boolean allowed-entry mask: (i, j) allowed iff j <= h(i) and i <= h(j)."""
    n = h.n
    mask = np.zeros((n, n), dtype=bool)
    for i in range(1, n + 1):
        for j in range(i, h(i) + 1):
            mask[i - 1, j - 1] = True
            mask[j - 1, i - 1] = True
    return mask


@dataclass
class StaircaseHermitian:
    """A Hermitian matrix constrained to the h-staircase pattern."""

    h: HessenbergFunction
    matrix: np.ndarray
    real_mode: bool = False

    def __post_init__(self) -> None:
        a = np.asarray(self.matrix, dtype=complex)
        if a.shape != (self.h.n, self.h.n):
            raise ShapeMismatch(f"expected {self.h.n}x{self.h.n}, got {a.shape}")
        if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(a))):
            raise NotHermitian("matrix is not Hermitian within tolerance")
        if np.any(np.abs(a[~staircase_mask(self.h)]) > 0):
            raise ShapeMismatch("entries outside the staircase pattern")
        if self.real_mode and np.any(a.imag != 0):
            raise ShapeMismatch("real mode requires exactly zero imaginary parts")
        self.matrix = a

    @property
    def n(self) -> int:
        return self.h.n

    def spectrum(self) -> Spectrum:
        return hermitian_eigen(self.matrix)[0]

    def to_json(self) -> str:
        # exact decimal strings via repr round-tripping
        return json.dumps({
            "h": list(self.h.values),
            "real_mode": self.real_mode,
            "re": [[repr(float(x)) for x in row] for row in self.matrix.real],
            "im": [[repr(float(x)) for x in row] for row in self.matrix.imag],
        })

    @classmethod
    def from_json(cls, text: str) -> "StaircaseHermitian":
        from .hessfn import validate
        d = json.loads(text)
        re = np.array([[float(x) for x in row] for row in d["re"]])
        im = np.array([[float(x) for x in row] for row in d["im"]])
        return cls(validate(d["h"]), re + 1j * im, real_mode=d["real_mode"])


def _check_hermitian(L: np.ndarray) -> np.ndarray:
    L = np.asarray(L, dtype=complex)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ShapeMismatch(f"expected square matrix, got {L.shape}")
    if np.max(np.abs(L - L.conj().T)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(L))):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return L


def skew_projection(L: np.ndarray) -> np.ndarray:
    """P(L) = L_lower - L_upper; skew Hermitian, L - P(L) upper triangular."""
    L = _check_hermitian(L)
    return np.tril(L, -1) - np.triu(L, 1)


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"incompatible shapes {A.shape}, {B.shape}")
    return A @ B - B @ A


def _band_weights(n: int) -> np.ndarray:
    idx = np.arange(n)
    return np.abs(idx[:, None] - idx[None, :]).astype(float)


def apply_J(omega: np.ndarray) -> np.ndarray:
    """Multiply the k-th sub/superdiagonal by k (diagonal is annihilated)."""
    omega = np.asarray(omega, dtype=complex)
    return omega * _band_weights(omega.shape[0])


def apply_J_inverse(omega: np.ndarray) -> np.ndarray:
    """Divide the k-th sub/superdiagonal by k; defined on zero-diagonal input."""
    omega = np.asarray(omega, dtype=complex)
    if np.any(np.abs(np.diag(omega)) > 0):
        raise NonzeroDiagonal("J-inverse requires a zero diagonal")
    w = _band_weights(omega.shape[0])
    np.fill_diagonal(w, 1.0)
    return omega / w


def hermitian_eigen(L: np.ndarray,
                    tol: float = EIGEN_TOL,
                    max_sweeps: int = 60,
                    gap_tol: float = SIMPLICITY_REL_GAP
                    ) -> tuple[Spectrum, np.ndarray]:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Returns (spectrum ascending, U) with U*.L.U = diag(spectrum); the
    residual contract is ||L U - U diag|| <= tol-ish * ||L||.
    """
    L = _check_hermitian(L)
    n = L.shape[0]
    A = L.copy()
    V = np.eye(n, dtype=complex)
    scale = max(np.max(np.abs(A)), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(np.triu(A, 1)) ** 2))
        if off <= tol * scale * n:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                # unit phase as a complex quotient keeps real input exactly real
                u = apq / abs(apq)
                tau = (A[q, q].real - A[p, p].real) / (2.0 * abs(apq))
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) \
                    if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns: B = A G with G[[c, s u], [-s conj(u), c]] on (p, q)
                colp = c * A[:, p] - s * np.conj(u) * A[:, q]
                colq = s * u * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = colp, colq
                rowp = c * A[p, :] - s * u * A[q, :]
                rowq = s * np.conj(u) * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rowp, rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                colp = c * V[:, p] - s * np.conj(u) * V[:, q]
                colq = s * u * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = colp, colq
    else:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    lam = np.real(np.diag(A))
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    V = V[:, order]
    spread = max(float(lam[-1] - lam[0]), 1e-300)
    simple = n < 2 or float(np.min(np.diff(lam))) > gap_tol * spread
    return Spectrum(lam, simple), V


def qr_positive(M: np.ndarray, tol: float = 1e-13
                ) -> tuple[np.ndarray, np.ndarray]:
    """Householder QR with diag(R) real positive; unique for nonsingular M."""
    M = np.asarray(M, dtype=complex)
    n, m = M.shape
    if n != m:
        raise ShapeMismatch("QR normalization requires a square matrix")
    R = M.copy()
    Q = np.eye(n, dtype=complex)
    scale = max(np.max(np.abs(M)), 1e-300)
    for k in range(n):
        x = R[k:, k].copy()
        nx = np.linalg.norm(x)
        if nx <= tol * scale:
            raise SingularInput(f"column {k} numerically singular")
        phase = x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0
        v = x.copy()
        v[0] += phase * nx
        nv = np.linalg.norm(v)
        if nv > 0:
            v /= nv
            R[k:, :] -= 2.0 * np.outer(v, v.conj() @ R[k:, :])
            Q[:, k:] -= 2.0 * np.outer(Q[:, k:] @ v, v.conj())
        R[k + 1:, k] = 0.0
    # rotate residual diagonal phases into Q
    d = np.diag(R).copy()
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    Q = Q * phases[None, :]
    R = R * np.conj(phases)[:, None]
    if np.min(np.abs(np.diag(R))) <= tol * scale:
        raise SingularInput("R has a numerically zero diagonal entry")
    return Q, R


def expm_hermitian(L: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(t L) through the eigendecomposition; exact for Hermitian input."""
    spec, U = hermitian_eigen(L)
    return (U * np.exp(t * spec.values)[None, :]) @ U.conj().T


def random_staircase(h: HessenbergFunction,
                     seed: int,
                     real_mode: bool = False,
                     scale: float = 1.0,
                     gap_tol: float = SIMPLICITY_REL_GAP,
                     max_retries: int = 16) -> StaircaseHermitian:
    """Deterministic sample of M_h with i.i.d. normal entries in the pattern.

    The sample's own (computed) spectrum serves as the isospectral datum; a
    degenerate draw is retried with a derived seed.
    """
    n = h.n
    mask = staircase_mask(h)
    for attempt in range(max_retries):
        rng = np.random.default_rng(np.random.PCG64(seed + (attempt << 32)))
        diag = rng.standard_normal(n) * scale
        A = np.zeros((n, n), dtype=complex)
        for i in range(1, n + 1):
            for j in range(i + 1, h(i) + 1):
                re = rng.standard_normal() * scale
                im = 0.0 if real_mode else rng.standard_normal() * scale
                A[i - 1, j - 1] = re + 1j * im
                A[j - 1, i - 1] = re - 1j * im
        A[np.arange(n), np.arange(n)] = diag
        A[~mask] = 0.0
        sample = StaircaseHermitian(h, A, real_mode=real_mode)
        if sample.spectrum().simple:
            return sample
    raise DegenerateSpectrum(
        f"no simple-spectrum sample after {max_retries} retries (seed {seed})")
