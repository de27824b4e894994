"""Open Bose-Hubbard network definition.

A system is a set of bosonic modes (wells) on a symmetric coupling graph,
with an on-site Kerr-type collisional nonlinearity chi, coherent atom
injection with complex amplitude eps_i, and Markovian loss at rate gamma_i
into an empty bath.  All rates are dimensionless (hbar = 1, time in units
of the reference loss rate).

The phase-space drift implemented here is

    d alpha_i / dt = eps_i - gamma_i alpha_i - 2i chi |alpha_i|^2 alpha_i
                     + i sum_j J_ij alpha_j,

with additive complex Gaussian noise of strength sqrt(gamma_i) entering
only the damped wells (see :mod:`bhcavity.dynamics`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "ParameterError",
    "DampedWell",
    "TrimerConfig",
    "SystemSpec",
    "make_trimer",
    "drift",
    "noise_amplitudes",
]


class ParameterError(ValueError):
    """A physical parameter lies outside its allowed domain."""


class DampedWell(Enum):
    """Which well of the triangle carries the loss.

    The pump always sits at well 1 (index 0).  Damping the pumped well or
    one of the other two gives the only two inequivalent configurations;
    damping well 3 is related to damping well 2 by the triangle symmetry.
    """

    PUMPED_WELL = "pumped_well"
    OTHER_WELL = "other_well"


@dataclass(frozen=True)
class TrimerConfig:
    damped_well: DampedWell = DampedWell.OTHER_WELL

    def __post_init__(self):
        if not isinstance(self.damped_well, DampedWell):
            object.__setattr__(self, "damped_well", DampedWell(self.damped_well))

    @property
    def loss_index(self) -> int:
        """0-based index of the damped well."""
        return 0 if self.damped_well is DampedWell.PUMPED_WELL else 1


@dataclass(frozen=True)
class SystemSpec:
    """Immutable description of a pumped, damped Bose-Hubbard network.

    coupling : (n, n) real symmetric tunneling matrix with zero diagonal,
        entries >= 0.
    chi : collisional nonlinearity, >= 0.
    pump : (n,) complex injection amplitudes.
    loss : (n,) bath coupling rates, >= 0.
    """

    coupling: np.ndarray
    chi: float
    pump: np.ndarray
    loss: np.ndarray

    def __post_init__(self):
        J = np.array(self.coupling, dtype=float)
        pump = np.atleast_1d(np.array(self.pump, dtype=complex))
        loss = np.atleast_1d(np.array(self.loss, dtype=float))

        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise ParameterError("coupling must be a square matrix")
        n = J.shape[0]
        if n < 1:
            raise ParameterError("need at least one well")
        if pump.shape != (n,) or loss.shape != (n,):
            raise ParameterError(
                f"pump/loss must have length {n}, got {pump.shape} and {loss.shape}"
            )
        if not (np.all(np.isfinite(J)) and np.all(np.isfinite(pump)) and np.all(np.isfinite(loss))):
            raise ParameterError("all parameters must be finite")
        if not np.array_equal(J, J.T):
            raise ParameterError("coupling matrix must be exactly symmetric")
        if np.any(np.diag(J) != 0.0):
            raise ParameterError("coupling matrix must have zero diagonal")
        if np.any(J < 0.0):
            raise ParameterError("coupling strengths must be >= 0")
        chi = float(self.chi)
        if not np.isfinite(chi) or chi < 0.0:
            raise ParameterError("chi must be finite and >= 0")
        if np.any(loss < 0.0):
            raise ParameterError("loss rates must be >= 0")

        for arr in (J, pump, loss):
            arr.setflags(write=False)
        object.__setattr__(self, "coupling", J)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "pump", pump)
        object.__setattr__(self, "loss", loss)

    @property
    def n_wells(self) -> int:
        return self.coupling.shape[0]

    @property
    def has_loss(self) -> bool:
        return bool(np.any(self.loss > 0.0))

    def to_dict(self) -> dict:
        """JSON-friendly representation (complex numbers as [re, im] pairs)."""
        return {
            "n_wells": self.n_wells,
            "coupling": self.coupling.tolist(),
            "chi": self.chi,
            "pump": [[z.real, z.imag] for z in self.pump],
            "loss": self.loss.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemSpec":
        pump = np.array([complex(re, im) for re, im in d["pump"]])
        spec = cls(
            coupling=np.array(d["coupling"], dtype=float),
            chi=float(d["chi"]),
            pump=pump,
            loss=np.array(d["loss"], dtype=float),
        )
        if "n_wells" in d and int(d["n_wells"]) != spec.n_wells:
            raise ParameterError("n_wells inconsistent with coupling matrix shape")
        return spec


def make_trimer(
    J: float,
    chi: float,
    epsilon: complex,
    gamma: float,
    config: TrimerConfig | DampedWell | str = DampedWell.OTHER_WELL,
) -> SystemSpec:
    """Build the three-well triangle: all-to-all coupling J, pump at well 1,
    loss at well 1 or well 2 depending on ``config``."""
    if not isinstance(config, TrimerConfig):
        config = TrimerConfig(DampedWell(config))
    if J <= 0:
        raise ParameterError("trimer coupling J must be > 0")
    if gamma < 0:
        raise ParameterError("loss rate gamma must be >= 0")
    if chi < 0:
        raise ParameterError("nonlinearity chi must be >= 0")

    coupling = J * (np.ones((3, 3)) - np.eye(3))
    pump = np.zeros(3, dtype=complex)
    pump[0] = epsilon
    loss = np.zeros(3)
    loss[config.loss_index] = gamma
    return SystemSpec(coupling=coupling, chi=chi, pump=pump, loss=loss)


def drift(spec: SystemSpec, alpha: np.ndarray) -> np.ndarray:
    """Deterministic part of d alpha/dt at the phase-space point ``alpha``."""
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.shape != (spec.n_wells,):
        raise ParameterError(f"alpha must have shape ({spec.n_wells},)")
    if not np.all(np.isfinite(alpha)):
        raise ParameterError("alpha must be finite")
    return (
        spec.pump
        - spec.loss * alpha
        - 2j * spec.chi * np.abs(alpha) ** 2 * alpha
        + 1j * (spec.coupling @ alpha)
    )


def noise_amplitudes(spec: SystemSpec) -> np.ndarray:
    """Per-well additive noise strength sqrt(gamma_i); zero for undamped wells."""
    return np.sqrt(spec.loss)
