"""Single-trajectory phase-space integration.

One realization starts from a sampled Wigner vacuum and advances an Ito
stochastic equation with additive noise on the damped wells,

    d alpha = drift(alpha) dt + sqrt(gamma_i) dW_i,

where dW_i is a complex Wiener increment with E[dW* dW] = dt.  The default
scheme is a deterministic Heun (second-order) step with the full noise
increment added once per step; Euler-Maruyama is kept as a cross-check.
Because the noise is additive, the Ito and Stratonovich readings coincide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ParameterError, SystemSpec, drift, noise_amplitudes

__all__ = [
    "TrajectoryDivergedError",
    "TrajectoryState",
    "IntegratorConfig",
    "sample_vacuum",
    "step",
    "run_meanfield",
]

SCHEMES = ("heun_additive", "euler_maruyama")


class TrajectoryDivergedError(RuntimeError):
    """A phase-space amplitude crossed the overflow guard."""


@dataclass
class TrajectoryState:
    alpha: np.ndarray  # (n,) complex phase-space amplitudes
    t: float = 0.0


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-grid integration settings.

    The reporting grid has spacing dt * sample_every and must tile
    [0, t_final] exactly; there is no interpolation.
    """

    dt: float = 1e-3
    t_final: float = 100.0
    sample_every: int = 100
    scheme: str = "heun_additive"
    overflow_guard: float = 1e6

    def __post_init__(self):
        if self.dt <= 0 or self.t_final <= 0:
            raise ParameterError("dt and t_final must be > 0")
        if self.sample_every < 1:
            raise ParameterError("sample_every must be a positive integer")
        if self.scheme not in SCHEMES:
            raise ParameterError(f"scheme must be one of {SCHEMES}")
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
        """Number of recorded sample times, including t = 0."""
        return self.n_steps // self.sample_every + 1

    @property
    def sample_dt(self) -> float:
        return self.dt * self.sample_every

    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.sample_dt


def sample_vacuum(n_wells: int, rng: np.random.Generator) -> TrajectoryState:
    """Draw one Wigner vacuum sample: alpha_i = (u + iv)/2 with u, v ~ N(0,1).

    This gives E[alpha] = 0, E[|alpha|^2] = 1/2 and E[alpha^2] = 0, so the
    symmetric-ordering population N = E[|alpha|^2] - 1/2 vanishes.
    """
    u, v = rng.standard_normal((2, n_wells))
    return TrajectoryState(alpha=0.5 * (u + 1j * v), t=0.0)


def _noise_increment(spec: SystemSpec, dt: float, rng: np.random.Generator) -> np.ndarray:
    # E[dW* dW] = gamma dt per damped well, E[dW dW] = 0
    u, v = rng.standard_normal((2, spec.n_wells))
    return noise_amplitudes(spec) * np.sqrt(dt / 2.0) * (u + 1j * v)


def step(
    state: TrajectoryState,
    spec: SystemSpec,
    dt: float,
    rng: np.random.Generator,
    scheme: str = "heun_additive",
) -> TrajectoryState:
    """Advance one step.  Raises TrajectoryDivergedError past the 1e6 guard."""
    if dt <= 0:
        raise ParameterError("dt must be > 0")
    if scheme not in SCHEMES:
        raise ParameterError(f"scheme must be one of {SCHEMES}")
    alpha = state.alpha
    dW = _noise_increment(spec, dt, rng)
    f1 = drift(spec, alpha)
    pred = alpha + f1 * dt + dW
    if scheme == "heun_additive":
        f2 = drift(spec, pred)
        new_alpha = alpha + 0.5 * (f1 + f2) * dt + dW
    else:
        new_alpha = pred
    guard = 1e6
    if not np.all(np.abs(new_alpha.real) < guard) or not np.all(np.abs(new_alpha.imag) < guard):
        raise TrajectoryDivergedError(f"|alpha| exceeded {guard:g} at t={state.t + dt:g}")
    return TrajectoryState(alpha=new_alpha, t=state.t + dt)


def run_meanfield(
    spec: SystemSpec,
    init: np.ndarray | None,
    cfg: IntegratorConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Noiseless (classical) integration on the sample grid.

    ``init = None`` starts from the zero field, the classical counterpart of
    the vacuum.  Returns (times, series) with series[k] the field at
    times[k]; classical populations are |alpha_i|^2 with no -1/2 correction.
    """
    n = spec.n_wells
    if init is None:
        alpha = np.zeros(n, dtype=complex)
    else:
        alpha = np.array(init, dtype=complex)
        if alpha.shape != (n,):
            raise ParameterError(f"init must have shape ({n},)")
        if not np.all(np.isfinite(alpha)):
            raise ParameterError("init must be finite")

    dt = cfg.dt
    heun = cfg.scheme == "heun_additive"
    series = np.empty((cfg.n_samples, n), dtype=complex)
    series[0] = alpha
    guard = cfg.overflow_guard
    for s in range(1, cfg.n_samples):
        for _ in range(cfg.sample_every):
            f1 = drift(spec, alpha)
            if heun:
                pred = alpha + f1 * dt
                f2 = drift(spec, pred)
                alpha = alpha + 0.5 * (f1 + f2) * dt
            else:
                alpha = alpha + f1 * dt
        if not np.all(np.abs(alpha.real) < guard) or not np.all(np.abs(alpha.imag) < guard):
            raise TrajectoryDivergedError(f"mean-field solution exceeded {guard:g}")
        series[s] = alpha
    return cfg.times(), series
