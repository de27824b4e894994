"""Closed-form chi = 0 steady states for the two trimer configurations.

These serve as independent oracles for the stochastic and mean-field
integrators.  With loss at the pumped well the classical fixed point is

    alpha_1 = -i eps / (2J - i gamma),   alpha_2 = alpha_3 = +i eps / (2J - i gamma),

all populations |eps|^2 / (gamma^2 + 4 J^2).  With loss at the second well
the classical equations admit the stationary numbers

    N_1 = N_2 = |eps|^2 / (gamma^2 + 4 J^2),
    N_3 = |eps|^2 (gamma^2 + J^2) / (J^2 (gamma^2 + 4 J^2)),

but time integration shows only well 2 actually relaxes to its value; the
outer wells keep oscillating, so the triple is a reference, not an
attractor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ParameterError

__all__ = ["SteadyState", "steady_loss_at_pumped", "steady_numbers_loss_at_second"]


@dataclass(frozen=True)
class SteadyState:
    alpha: np.ndarray        # (n,) complex fixed-point amplitudes
    populations: np.ndarray  # (n,) classical |alpha_i|^2

    @property
    def phases(self) -> np.ndarray:
        """Phase angle of each amplitude, for inspecting relative phases."""
        return np.angle(self.alpha)


def steady_loss_at_pumped(J: float, gamma: float, epsilon: complex) -> SteadyState:
    """Classical chi=0 fixed point of the trimer pumped and damped at well 1."""
    if J <= 0 or gamma <= 0:
        raise ParameterError("J and gamma must be > 0")
    denom = 2.0 * J - 1j * gamma
    a1 = -1j * epsilon / denom
    a23 = 1j * epsilon / denom
    alpha = np.array([a1, a23, a23])
    return SteadyState(alpha=alpha, populations=np.abs(alpha) ** 2)


def steady_numbers_loss_at_second(J: float, gamma: float, epsilon: complex) -> np.ndarray:
    """Stationary classical populations for pump at well 1, loss at well 2.

    Only N_2 is reached dynamically; N_1 and N_3 are the formal stationary
    values about which the undamped wells oscillate.
    """
    if J <= 0 or gamma <= 0:
        raise ParameterError("J and gamma must be > 0")
    e2 = abs(epsilon) ** 2
    base = e2 / (gamma**2 + 4.0 * J**2)
    n3 = e2 * (gamma**2 + J**2) / (J**2 * (gamma**2 + 4.0 * J**2))
    return np.array([base, base, n3])
