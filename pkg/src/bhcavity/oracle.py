"""Exact master-equation evolution on a truncated Fock basis.

For small systems the full density matrix can be evolved under

    d rho / dt = -i [H, rho] + sum_i gamma_i (2 a_i rho a_i^dag
                                              - a_i^dag a_i rho - rho a_i^dag a_i),

with H = chi sum_i a_i^dag^2 a_i^2 - sum_{i<j} J_ij (a_i^dag a_j + h.c.)
       + sum_i i (eps_i a_i^dag - eps_i^* a_i).

This provides an independent check of the stochastic engine: the same
centered moments (m, S, C) are extracted from rho, with the +1/2 diagonal
offset converting normal ordering to the symmetric ordering used by the
phase-space variables.  Populations stay small in validation runs, so tiny
per-mode cutoffs suffice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .ensemble import GaussianMoments
from .model import ParameterError, SystemSpec

__all__ = [
    "DimensionCapError",
    "TraceDriftError",
    "FockConfig",
    "DensityMatrix",
    "destroy_ops",
    "build_generators",
    "vacuum_rho",
    "evolve",
    "moments_from_rho",
    "run_oracle",
]


class DimensionCapError(ValueError):
    """Requested Hilbert-space dimension exceeds the configured cap."""


class TraceDriftError(RuntimeError):
    """Integration lost more trace than tolerated; reduce the step size."""


@dataclass(frozen=True)
class FockConfig:
    """Truncated-basis evolution settings.

    n_max is the largest occupation kept per mode, so one mode has
    n_max + 1 levels and the product space (n_max+1)^n_wells states.
    """

    n_max: int
    dt: float = 2e-3
    t_final: float = 10.0
    sample_every: int = 100
    dim_cap: int = 10_000
    trace_tol: float = 1e-6

    def __post_init__(self):
        if self.n_max < 1:
            raise ParameterError("n_max must be >= 1")
        if self.dt <= 0 or self.t_final <= 0:
            raise ParameterError("dt and t_final must be > 0")
        if self.sample_every < 1:
            raise ParameterError("sample_every must be a positive integer")
        n_steps = round(self.t_final / self.dt)
        if n_steps < 1 or abs(n_steps * self.dt - self.t_final) > 1e-9 * max(1.0, self.t_final):
            raise ParameterError("t_final must be an integer multiple of dt")
        if n_steps % self.sample_every != 0:
            raise ParameterError("sample_every must divide t_final/dt exactly")

    @property
    def n_steps(self) -> int:
        return round(self.t_final / self.dt)

    @property
    def n_samples(self) -> int:
        return self.n_steps // self.sample_every + 1

    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * (self.dt * self.sample_every)

    def dimension(self, n_wells: int) -> int:
        dim = (self.n_max + 1) ** n_wells
        if dim > self.dim_cap:
            raise DimensionCapError(
                f"Hilbert dimension {dim} exceeds cap {self.dim_cap}; "
                "lower n_max or raise dim_cap"
            )
        return dim


@dataclass
class DensityMatrix:
    """Density matrix over the truncated product Fock basis."""

    matrix: np.ndarray
    t: float = 0.0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def check(self, herm_tol: float = 1e-8, trace_tol: float = 1e-6, eig_tol: float = 1e-8) -> None:
        """Raise if the matrix fails Hermiticity, unit trace, or positivity."""
        m = self.matrix
        if not np.allclose(m, m.conj().T, atol=herm_tol):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > trace_tol:
            raise ValueError(f"trace deviates from 1 by {abs(np.trace(m) - 1.0):.2e}")
        w = np.linalg.eigvalsh(m)
        if w.min() < -eig_tol:
            raise ValueError(f"negative eigenvalue {w.min():.2e}")


def destroy_ops(n_wells: int, n_max: int) -> list[sp.csr_matrix]:
    """Annihilation operator for each mode on the product basis."""
    levels = n_max + 1
    a_single = sp.diags(np.sqrt(np.arange(1, levels)), offsets=1, format="csr")
    eye = sp.identity(levels, format="csr")
    ops = []
    for i in range(n_wells):
        factors = [a_single if j == i else eye for j in range(n_wells)]
        op = factors[0]
        for f in factors[1:]:
            op = sp.kron(op, f, format="csr")
        ops.append(op.astype(complex))
    return ops


def build_generators(
    spec: SystemSpec, cfg: FockConfig
) -> tuple[sp.csr_matrix, list[tuple[float, sp.csr_matrix]]]:
    """Hamiltonian and (rate, annihilator) pairs on the truncated basis.

    The loss term for well i acts as gamma_i (2 a rho a^dag - a^dag a rho
    - rho a^dag a), i.e. jump operator sqrt(2 gamma_i) a_i in standard
    Lindblad form.
    """
    cfg.dimension(spec.n_wells)
    a = destroy_ops(spec.n_wells, cfg.n_max)
    n = spec.n_wells
    H = sp.csr_matrix(a[0].shape, dtype=complex)
    for i in range(n):
        adag = a[i].conj().T
        if spec.chi != 0.0:
            H = H + spec.chi * (adag @ adag @ a[i] @ a[i])
        eps = spec.pump[i]
        if eps != 0:
            H = H + 1j * (eps * adag - np.conj(eps) * a[i])
        for j in range(i + 1, n):
            Jij = spec.coupling[i, j]
            if Jij != 0.0:
                H = H - Jij * (adag @ a[j] + a[j].conj().T @ a[i])
    jumps = [(float(spec.loss[i]), a[i]) for i in range(n) if spec.loss[i] > 0.0]
    return sp.csr_matrix(H), jumps


def vacuum_rho(n_wells: int, cfg: FockConfig) -> DensityMatrix:
    dim = cfg.dimension(n_wells)
    m = np.zeros((dim, dim), dtype=complex)
    m[0, 0] = 1.0
    return DensityMatrix(matrix=m, t=0.0)


def _liouvillian(H: sp.csr_matrix, jumps) -> sp.csr_matrix:
    """Superoperator L acting on row-major vec(rho): vec(A rho B) = kron(A, B.T) vec(rho)."""
    dim = H.shape[0]
    eye = sp.identity(dim, format="csr", dtype=complex)
    L = -1j * (sp.kron(H, eye) - sp.kron(eye, H.T))
    for gamma, a in jumps:
        adag_a = (a.conj().T @ a).tocsr()
        L = L + gamma * (
            2.0 * sp.kron(a, a.conj())
            - sp.kron(adag_a, eye)
            - sp.kron(eye, adag_a.T)
        )
    return L.tocsr()


def evolve(
    rho0: DensityMatrix,
    generators: tuple[sp.csr_matrix, list],
    cfg: FockConfig,
) -> tuple[np.ndarray, list[DensityMatrix]]:
    """Fixed-step fourth-order (RK4) integration of the master equation.

    Returns (times, density matrices on the sample grid).  The trace is
    monitored and never renormalized; drift beyond cfg.trace_tol raises
    TraceDriftError.
    """
    H, jumps = generators
    dim = H.shape[0]
    if rho0.matrix.shape != (dim, dim):
        raise ParameterError("rho0 dimension does not match the generators")
    L = _liouvillian(H, jumps)
    v = rho0.matrix.reshape(-1).astype(complex)
    dt = cfg.dt
    out = [DensityMatrix(matrix=v.reshape(dim, dim).copy(), t=0.0)]
    times = cfg.times()
    for s in range(1, cfg.n_samples):
        for _ in range(cfg.sample_every):
            k1 = L @ v
            k2 = L @ (v + 0.5 * dt * k1)
            k3 = L @ (v + 0.5 * dt * k2)
            k4 = L @ (v + dt * k3)
            v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = v.reshape(dim, dim)
        drift_now = abs(np.trace(rho).real - 1.0)
        if drift_now > cfg.trace_tol:
            raise TraceDriftError(
                f"trace drifted by {drift_now:.2e} at t={times[s]:g}; reduce dt"
            )
        out.append(DensityMatrix(matrix=rho.copy(), t=float(times[s])))
    return times, out


def moments_from_rho(rho: DensityMatrix, a_ops: list[sp.csr_matrix]) -> GaussianMoments:
    """Centered symmetric-ordering moments (m, S, C) from a density matrix.

    C picks up the +delta_ij/2 offset that converts <a_i^dag a_j> to the
    symmetrically ordered covariance measured by the phase-space ensemble.
    """
    n = len(a_ops)
    r = rho.matrix
    m = np.array([np.trace(a.toarray() @ r) for a in a_ops])
    S = np.zeros((n, n), dtype=complex)
    C = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            aiaj = (a_ops[i] @ a_ops[j]).toarray()
            adiaj = (a_ops[i].conj().T @ a_ops[j]).toarray()
            S[i, j] = np.trace(aiaj @ r) - m[i] * m[j]
            C[i, j] = np.trace(adiaj @ r) - np.conj(m[i]) * m[j]
    C += 0.5 * np.eye(n)
    return GaussianMoments(m=m, S=S, C=C, n_samples=0, t=rho.t)


def run_oracle(spec: SystemSpec, cfg: FockConfig) -> tuple[np.ndarray, list[GaussianMoments]]:
    """Vacuum-start master-equation run returning moments on the sample grid."""
    gens = build_generators(spec, cfg)
    rho0 = vacuum_rho(spec.n_wells, cfg)
    times, rhos = evolve(rho0, gens, cfg)
    a = destroy_ops(spec.n_wells, cfg.n_max)
    return times, [moments_from_rho(r, a) for r in rhos]
