"""The generalized Toda flow dL/dt = [L, P(L)] on staircase Hermitian
matrices: RK4 / adaptive integration, a QR-factorization closed-form oracle,
limit classification with Morse data, and the Lyapunov diagnostics.

Sign convention: with P = L_lower - L_upper as written, F = Tr(L N),
N = diag(1..n), strictly decreases along the flow; generic forward limits
put the spectrum on the diagonal in descending order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._kernels import BACKEND, rk4_advance
from .errors import (DegenerateSpectrum, DriftExceeded, NotConverged,
                     StepUnderflow)
from .hessfn import HessenbergFunction, hess_inversions, pattern_pairs
from .matcore import (Spectrum, StaircaseHermitian, apply_J_inverse,
                      commutator, hermitian_eigen, skew_projection,
                      staircase_mask)

DRIFT_GUARD = 1e-6            # integrator-misconfiguration trip wire
CONVERGENCE_REL = 1e-6        # off-diagonal norm threshold, relative to spread
QR_CHUNK_EXPONENT = 10.0      # max |t| * spread handled by one QR factorization


def _field_matrix(L: np.ndarray) -> np.ndarray:
    P = np.tril(L, -1) - np.triu(L, 1)
    return L @ P - P @ L


def vector_field(L: StaircaseHermitian) -> StaircaseHermitian:
    """[L, P(L)], re-masked to the staircase pattern of L."""
    F = _field_matrix(L.matrix)
    mask = staircase_mask(L.h)
    F[~mask] = 0.0
    return StaircaseHermitian(L.h, F, real_mode=L.real_mode)


def lyapunov_F(L: StaircaseHermitian | np.ndarray) -> float:
    """F = a_1 + 2 a_2 + ... + n a_n = Tr(L N)."""
    m = L.matrix if isinstance(L, StaircaseHermitian) else np.asarray(L)
    n = m.shape[0]
    return float(np.arange(1, n + 1) @ m.real.diagonal())


def dissipation_rate(L: StaircaseHermitian | np.ndarray) -> float:
    """dF/dt along the flow: -2 sum_{i<j} (j - i) |b_ij|^2."""
    m = L.matrix if isinstance(L, StaircaseHermitian) else np.asarray(L)
    n = m.shape[0]
    i, j = np.triu_indices(n, 1)
    return -2.0 * float(np.sum((j - i) * np.abs(m[i, j]) ** 2))


def gradient_identity(L: np.ndarray | StaircaseHermitian) -> float:
    """Max-norm residual of -J^{-1}([L, N]) = P(L); contract <= 1e-14 ||L||."""
    m = L.matrix if isinstance(L, StaircaseHermitian) else np.asarray(L, dtype=complex)
    n = m.shape[0]
    N = np.diag(np.arange(1, n + 1, dtype=float))
    lhs = -apply_J_inverse(commutator(m, N))
    return float(np.max(np.abs(lhs - skew_projection(m))))


def offdiag_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - np.diag(np.diag(m))))


def default_step(spread: float) -> float:
    """Fixed RK4 step scaled to the spectral range (the field's stiffness)."""
    return min(1e-2, 4e-3 / max(spread, 1e-9))


@dataclass
class Trajectory:
    h: HessenbergFunction
    real_mode: bool
    initial_spectrum: Spectrum
    times: list[float] = field(default_factory=list)
    states: list[np.ndarray] = field(default_factory=list)
    spectrum_drift: list[float] = field(default_factory=list)
    leakage: list[float] = field(default_factory=list)
    lyapunov: list[float] = field(default_factory=list)
    offdiag: list[float] = field(default_factory=list)
    max_F_increase: float = 0.0
    backend: str = BACKEND

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self) -> str:
        import csv
        import io
        buf = io.StringIO()
        w = csv.writer(buf)
        n = self.h.n
        head = ["t"]
        head += [f"re_{i}_{j}" for i in range(1, n + 1) for j in range(i, n + 1)]
        head += [f"im_{i}_{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        head += ["drift", "leakage", "F", "offdiag"]
        w.writerow(head)
        for idx, t in enumerate(self.times):
            m = self.states[idx]
            row = [repr(t)]
            row += [repr(float(m[i - 1, j - 1].real))
                    for i in range(1, n + 1) for j in range(i, n + 1)]
            row += [repr(float(m[i - 1, j - 1].imag))
                    for i in range(1, n + 1) for j in range(i + 1, n + 1)]
            row += [repr(self.spectrum_drift[idx]), repr(self.leakage[idx]),
                    repr(self.lyapunov[idx]), repr(self.offdiag[idx])]
            w.writerow(row)
        return buf.getvalue()


def integrate(L0: StaircaseHermitian,
              t_end: float,
              step: float | None = None,
              adaptive: bool = False,
              n_samples: int = 60,
              rtol: float = 1e-10,
              drift_guard: float = DRIFT_GUARD) -> Trajectory:
    """Integrate the flow from t = 0 to t_end (t_end < 0 runs backward).

    Each state is re-masked to the staircase pattern with the pre-mask
    leakage recorded; spectrum drift is measured per sample against the
    initial spectrum.
    """
    spec0 = L0.spectrum()
    if not spec0.simple:
        raise DegenerateSpectrum("initial spectrum is not simple")
    spread = max(spec0.spread, 1e-12)
    traj = Trajectory(L0.h, L0.real_mode, spec0)
    mask = staircase_mask(L0.h)
    m = L0.matrix.copy()

    def record(t: float, leak: float) -> None:
        spec = hermitian_eigen(m)[0]
        drift = float(np.max(np.abs(spec.values - spec0.values))) / spread
        traj.times.append(t)
        traj.states.append(m.copy())
        traj.spectrum_drift.append(drift)
        traj.leakage.append(leak)
        traj.lyapunov.append(lyapunov_F(m))
        traj.offdiag.append(offdiag_norm(m))
        if drift > drift_guard:
            raise DriftExceeded(
                f"spectrum drift {drift:.3e} at t = {t:.3f} "
                f"exceeds guard {drift_guard:.1e}")

    record(0.0, 0.0)
    if t_end == 0.0:
        return traj

    if adaptive:
        _integrate_adaptive(traj, m, mask, t_end, rtol, n_samples, record)
        return traj

    dt = step if step is not None else default_step(spread)
    dt = abs(dt) * (1.0 if t_end > 0 else -1.0)
    total_steps = max(1, int(np.ceil(abs(t_end / dt))))
    dt = t_end / total_steps
    chunk = max(1, total_steps // n_samples)
    done = 0
    while done < total_steps:
        take = min(chunk, total_steps - done)
        leak, f_inc = rk4_advance(m, mask, dt, take)
        done += take
        if t_end > 0 and f_inc > traj.max_F_increase:
            traj.max_F_increase = f_inc
        record(done * dt, leak)
    return traj


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784,
                   11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                   -92097 / 339200, 187 / 2100, 1 / 40])


def _integrate_adaptive(traj, m, mask, t_end, rtol, n_samples, record):
    """Embedded Dormand-Prince 5(4) with PI step control."""
    outside = ~mask
    direction = 1.0 if t_end > 0 else -1.0
    t = 0.0
    dt = direction * min(1e-2, abs(t_end) / 10)
    dt_min = abs(t_end) * 1e-12
    sample_every = abs(t_end) / n_samples
    next_sample = sample_every
    err_prev = 1.0
    scale = max(np.max(np.abs(m)), 1.0)
    f_prev = lyapunov_F(m)
    while direction * (t_end - t) > 1e-15 * abs(t_end):
        if abs(dt) < dt_min:
            raise StepUnderflow(f"step collapsed to {dt:.3e} at t = {t:.3f}")
        if direction * (t + dt - t_end) > 0:
            dt = t_end - t
        ks = []
        for s in range(7):
            y = m.copy()
            for j, a in enumerate(_DP_A[s]):
                if a != 0.0:
                    y += (dt * a) * ks[j]
            ks.append(_field_matrix(y))
        y5 = m + dt * sum(b * k for b, k in zip(_DP_B5, ks) if b != 0.0)
        y4 = m + dt * sum(b * k for b, k in zip(_DP_B4, ks) if b != 0.0)
        err = float(np.max(np.abs(y5 - y4))) / (rtol * scale)
        if err <= 1.0:
            t += dt
            leak = float(np.max(np.abs(y5[outside]))) if outside.any() else 0.0
            y5[outside] = 0.0
            m[:, :] = y5
            f = lyapunov_F(m)
            if direction > 0 and f - f_prev > traj.max_F_increase:
                traj.max_F_increase = f - f_prev
            f_prev = f
            if abs(t) >= next_sample - 1e-12 or \
                    direction * (t_end - t) <= 1e-15 * abs(t_end):
                record(t, leak)
                next_sample += sample_every
            # PI controller
            fac = 0.9 * err ** -0.14 * err_prev ** 0.08
            err_prev = max(err, 1e-10)
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        dt *= min(5.0, max(0.2, fac))
    return traj


def qr_solution(L0: StaircaseHermitian, t: float) -> StaircaseHermitian:
    """Closed-form flow solution via QR factorization of exp(t L0).

    exp(t L) = Q R with positive-diagonal normalization gives
    L(t) = Q* L(0) Q. Long times are split into well-conditioned chunks
    using the flow's composition property.
    """
    from .matcore import qr_positive
    m = L0.matrix.copy()
    mask = staircase_mask(L0.h)
    if t == 0.0:
        return StaircaseHermitian(L0.h, m, real_mode=L0.real_mode)
    spec = hermitian_eigen(m)[0]
    spread = max(spec.spread, 1e-12)
    chunks = max(1, int(np.ceil(abs(t) * spread / QR_CHUNK_EXPONENT)))
    dt = t / chunks
    for _ in range(chunks):
        spec, U = hermitian_eigen(m)
        center = 0.5 * (spec.values[0] + spec.values[-1])
        # centering rescales exp(dt L) by a positive scalar: same Q
        E = (U * np.exp(dt * (spec.values - center))[None, :]) @ U.conj().T
        if L0.real_mode:
            E = E.real.astype(complex)
        Q, _R = qr_positive(E)
        m = Q.conj().T @ m @ Q
        m = 0.5 * (m + m.conj().T)
        if L0.real_mode:
            m = m.real.astype(complex)
        m[~mask] = 0.0
    return StaircaseHermitian(L0.h, m, real_mode=L0.real_mode)


@dataclass(frozen=True)
class EquilibriumReport:
    """Limit equilibrium A_sigma with its Morse data."""

    sigma: tuple[int, ...]
    morse_index: int                  # stable-manifold dimension
    eigenvalues: tuple[float, ...]    # linearization spectrum

    def to_json(self) -> str:
        return json.dumps({
            "sigma": list(self.sigma),
            "morse_index": self.morse_index,
            "eigenvalues": list(self.eigenvalues),
        })


def _match_diagonal(diag: np.ndarray, lam: np.ndarray) -> tuple[int, ...]:
    """sigma with diag[i] ~ lam[sigma(i)]; bijectivity is required."""
    sigma = tuple(int(np.argmin(np.abs(lam - a))) + 1 for a in diag)
    if sorted(sigma) != list(range(1, len(lam) + 1)):
        raise NotConverged(f"diagonal does not match the spectrum: {sigma}")
    return sigma


def equilibrium_report(h: HessenbergFunction, spec: Spectrum,
                       sigma: tuple[int, ...],
                       real_mode: bool = False) -> EquilibriumReport:
    eigs = linearization_spectrum(h, spec, sigma, real_mode=real_mode)
    mult = 1 if real_mode else 2
    return EquilibriumReport(sigma, mult * hess_inversions(h, sigma),
                             tuple(eigs))


@dataclass(frozen=True)
class LimitsReport:
    sigma_minus: tuple[int, ...]
    sigma_plus: tuple[int, ...]
    backward: EquilibriumReport
    forward: EquilibriumReport


def classify_limits(L0: StaircaseHermitian,
                    horizon: float = 600.0,
                    threshold: float = CONVERGENCE_REL) -> LimitsReport:
    """Run the flow to both time limits and read off the limit permutations.

    Long-time propagation uses the QR oracle, which has no accumulation
    error; NotConverged is raised if the off-diagonal norm is still above
    threshold at the horizon.
    """
    spec0 = L0.spectrum()
    if not spec0.simple:
        raise DegenerateSpectrum("spectrum is not simple")
    spread = max(spec0.spread, 1e-12)
    tol = threshold * spread
    lam = spec0.values

    def run(direction: float) -> tuple[int, ...]:
        state = L0
        t = 0.0
        dt = direction * QR_CHUNK_EXPONENT / spread
        while offdiag_norm(state.matrix) > tol:
            if abs(t) >= horizon:
                raise NotConverged(
                    f"off-diagonal norm {offdiag_norm(state.matrix):.3e} > "
                    f"{tol:.3e} at |t| = {abs(t):.1f}")
            state = qr_solution(state, dt)
            t += dt
        return _match_diagonal(np.real(np.diag(state.matrix)), lam)

    sig_plus = run(+1.0)
    sig_minus = run(-1.0)
    return LimitsReport(
        sig_minus, sig_plus,
        equilibrium_report(L0.h, spec0, sig_minus, L0.real_mode),
        equilibrium_report(L0.h, spec0, sig_plus, L0.real_mode))


def linearization_spectrum(h: HessenbergFunction, spec: Spectrum,
                           sigma: tuple[int, ...] | list[int],
                           real_mode: bool = False) -> list[float]:
    """Analytic linearization eigenvalues at A_sigma:
    lam[sigma(j)] - lam[sigma(i)] over pattern pairs, doubled in the complex
    case (real and imaginary directions)."""
    if not spec.simple:
        raise DegenerateSpectrum("spectrum is not simple")
    lam = spec.values
    out: list[float] = []
    mult = 1 if real_mode else 2
    for i, j in pattern_pairs(h):
        v = float(lam[sigma[j - 1] - 1] - lam[sigma[i - 1] - 1])
        out.extend([v] * mult)
    return out


def fd_linearization(h: HessenbergFunction, spec: Spectrum,
                     sigma: tuple[int, ...] | list[int],
                     real_mode: bool = False,
                     step: float = 1e-5) -> tuple[np.ndarray, float]:
    """Central-difference Jacobian of the flow in staircase b-coordinates at
    A_sigma. Returns (diagonal entries, max off-diagonal residual); the field
    is quadratic, so central differences are exact up to roundoff."""
    n = h.n
    lam = spec.values
    A0 = np.diag(lam[np.asarray(sigma) - 1]).astype(complex)
    pairs = pattern_pairs(h)
    comps = [1.0] if real_mode else [1.0, 1.0j]
    dim = len(pairs) * len(comps)

    def coords(m: np.ndarray) -> np.ndarray:
        vals = []
        for i, j in pairs:
            vals.append(m[i - 1, j - 1].real)
            if not real_mode:
                vals.append(m[i - 1, j - 1].imag)
        return np.array(vals)

    J = np.zeros((dim, dim))
    col = 0
    for i, j in pairs:
        for comp in comps:
            E = np.zeros((n, n), dtype=complex)
            E[i - 1, j - 1] = comp
            E[j - 1, i - 1] = np.conj(comp)
            fp = _field_matrix(A0 + step * E)
            fm = _field_matrix(A0 - step * E)
            J[:, col] = coords(fp - fm) / (2.0 * step)
            col += 1
    diag = np.diag(J).copy()
    off = float(np.max(np.abs(J - np.diag(diag)))) if dim > 1 else 0.0
    return diag, off
