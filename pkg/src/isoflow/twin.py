"""The unitary correspondence between staircase isospectral matrices and
Hessenberg flags: membership in Z_h = {U | U^{-1} Lambda U staircase}, the
flag built from a staircase matrix, flag-containment residuals, and the
two-sided torus invariance checks.

Only quotient-level invariants are tested; the pointwise matrix-to-flag map
is defined up to torus phases, and flags are handled through projectors so
residuals are basis independent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, NotInZh, NotUnitary
from .hessfn import HessenbergFunction
from .matcore import (Spectrum, StaircaseHermitian, hermitian_eigen,
                      staircase_mask)

UNITARY_TOL = 1e-10
MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True)
class FlagFrame:
    """Unitary frame; the flag's i-th space is the span of the first i
    columns."""

    U: np.ndarray

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def projector(self, i: int) -> np.ndarray:
        cols = self.U[:, :i]
        return cols @ cols.conj().T


def _check_unitary(U: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    resid = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
    if resid > tol:
        raise NotUnitary(f"U*U - I residual {resid:.3e} > {tol:.1e}")
    return U


def in_Z_h(U: np.ndarray, spectrum: Spectrum, h: HessenbergFunction,
           tol: float = MEMBERSHIP_TOL) -> tuple[bool, float]:
    """Max modulus of U^{-1} Lambda U outside the staircase pattern, and
    whether it is within tol."""
    U = _check_unitary(U)
    A = U.conj().T @ np.diag(spectrum.values).astype(complex) @ U
    outside = ~staircase_mask(h)
    residual = float(np.max(np.abs(A[outside]))) if outside.any() else 0.0
    return residual <= tol, residual


def _phase_normalize(W: np.ndarray) -> np.ndarray:
    """Make the largest-modulus entry of each column real positive."""
    W = W.copy()
    for k in range(W.shape[1]):
        idx = int(np.argmax(np.abs(W[:, k])))
        pivot = W[idx, k]
        if abs(pivot) > 0:
            W[:, k] *= np.conj(pivot) / abs(pivot)
    return W


def twin_flag(L: StaircaseHermitian) -> tuple[FlagFrame, Spectrum]:
    """Frame U = W* from the eigendecomposition L = W Lambda W*, so that
    U^{-1} Lambda U = L and U is in Z_h by construction."""
    spec, W = hermitian_eigen(L.matrix)
    if not spec.simple:
        raise DegenerateSpectrum("spectrum is not simple")
    U = _phase_normalize(W).conj().T
    ok, residual = in_Z_h(U, spec, L.h)
    if not ok:
        raise NotInZh(f"round-trip residual {residual:.3e}")
    return FlagFrame(U), spec


def hessenberg_flag_residual(frame: FlagFrame, spectrum: Spectrum,
                             h: HessenbergFunction) -> float:
    """max_i ||(I - Pi_{h(i)}) Lambda Pi_i||_2; zero iff the flag satisfies
    Lambda V_i inside V_{h(i)} for every i."""
    U = _check_unitary(frame.U)
    n = frame.n
    Lam = np.diag(spectrum.values).astype(complex)
    eye = np.eye(n)
    worst = 0.0
    for i in range(1, n + 1):
        Pi = FlagFrame(U).projector(i)
        Ph = FlagFrame(U).projector(h(i))
        r = float(np.linalg.norm((eye - Ph) @ Lam @ Pi, ord=2))
        worst = max(worst, r)
    return worst


def double_quotient_invariants(U: np.ndarray, spectrum: Spectrum,
                               h: HessenbergFunction,
                               seed: int = 0,
                               trials: int = 100,
                               tol: float = MEMBERSHIP_TOL) -> dict:
    """Verify Z_h stability under both torus actions and the two quotient
    invariants, over random diagonal phase matrices."""
    U = _check_unitary(U)
    ok, base_resid = in_Z_h(U, spectrum, h, tol)
    if not ok:
        raise NotInZh(f"frame residual {base_resid:.3e} > {tol:.1e}")
    n = U.shape[0]
    Lam = np.diag(spectrum.values).astype(complex)
    rng = np.random.default_rng(seed)
    L0 = U.conj().T @ Lam @ U
    report = {
        "base_residual": base_resid,
        "max_left_residual": 0.0,
        "max_right_residual": 0.0,
        "max_left_quotient_change": 0.0,
        "max_right_quotient_change": 0.0,
        "max_conjugation_entry_error": 0.0,
        "trials": trials,
    }
    proj0 = [FlagFrame(U).projector(i) for i in range(1, n + 1)]
    for _ in range(trials):
        d1 = np.exp(2j * np.pi * rng.random(n))
        d2 = np.exp(2j * np.pi * rng.random(n))
        left = d1[:, None] * U          # D1 U
        right = U * d2[None, :]         # U D2
        _ok, r_left = in_Z_h(left, spectrum, h, tol)
        _ok, r_right = in_Z_h(right, spectrum, h, tol)
        report["max_left_residual"] = max(report["max_left_residual"], r_left)
        report["max_right_residual"] = max(report["max_right_residual"], r_right)
        # left action fixes the staircase matrix (the X_h point)
        L_left = left.conj().T @ Lam @ left
        report["max_left_quotient_change"] = max(
            report["max_left_quotient_change"],
            float(np.max(np.abs(L_left - L0))))
        # right action fixes the flag projectors (the Y_h point)
        for i in range(1, n + 1):
            Pi = FlagFrame(right).projector(i)
            report["max_right_quotient_change"] = max(
                report["max_right_quotient_change"],
                float(np.max(np.abs(Pi - proj0[i - 1]))))
        # conjugation action on the staircase entries: b_ij -> t_i/t_j b_ij
        t = np.exp(2j * np.pi * rng.random(n))
        D = np.diag(t)
        conj_matrix = D @ L0 @ np.conj(D).T
        expected = L0 * (t[:, None] * np.conj(t)[None, :])
        report["max_conjugation_entry_error"] = max(
            report["max_conjugation_entry_error"],
            float(np.max(np.abs(conj_matrix - expected))))
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report)
