"""Quadrature statistics and entanglement criteria on Gaussian moments.

Quadratures are X_j(theta) = a_j e^{-i theta} + a_j^dag e^{i theta} and
Y_j(theta) = X_j(theta + pi/2), so the vacuum variance is 1.  From the
centered moments (m, S, C) the quadrature covariances follow as

    Cov(X_i, X_j) =  2 Re(S_ij e^{-2i theta}) + 2 Re(C_ij)
    Cov(Y_i, Y_j) = -2 Re(S_ij e^{-2i theta}) + 2 Re(C_ij)

Implemented witnesses, all pi-periodic in theta and minimized over a shared
angle:

* single-mode squeezing: V(X_i) < 1;
* Duan-Simon: V(X_j + X_k) + V(Y_j - Y_k) >= 4 for separable states;
* Reid EPR: product of inferred variances below 1 means mode i is steered
  by measurements on mode j;
* van Loock-Furusawa pair form V_ij (with an optimized gain on the third
  mode) and triple form V_ijk, with Teh-Reid thresholds for mixed states;
* Olsen-Bradley-Reid (OBR) product of variances inferred from the combined
  other two modes, witnessing two-on-one steering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ensemble import GaussianMoments
from .model import ParameterError

__all__ = [
    "DegenerateConditioningError",
    "IncompleteReportError",
    "QuadratureStats",
    "quad_stats",
    "squeezing",
    "min_heisenberg_product",
    "heisenberg_product",
    "duan_simon",
    "reid_epr",
    "vlf_pair",
    "vlf_triple",
    "obr",
    "optimize_angle",
    "CRITERION_FUNCS",
    "CriterionCurve",
    "CorrelationReport",
    "evaluate_report",
    "classify",
    "trimer_criteria",
]


class DegenerateConditioningError(ZeroDivisionError):
    """A conditioning variance vanished; the inferred variance is undefined."""


class IncompleteReportError(ValueError):
    """The report lacks curves required for classification."""


@dataclass
class QuadratureStats:
    """Means and covariance blocks of X(theta) and Y(theta) quadratures."""

    theta: float
    mean_x: np.ndarray  # (n,)
    mean_y: np.ndarray  # (n,)
    cov_xx: np.ndarray  # (n, n)
    cov_yy: np.ndarray  # (n, n)


def quad_stats(g: GaussianMoments, theta: float) -> QuadratureStats:
    rot = np.exp(-1j * theta)
    rot2 = np.exp(-2j * theta)
    sym = 2.0 * np.real(g.S * rot2)
    herm = 2.0 * np.real(g.C)
    return QuadratureStats(
        theta=float(theta),
        mean_x=2.0 * np.real(g.m * rot),
        mean_y=2.0 * np.imag(g.m * rot),
        cov_xx=sym + herm,
        cov_yy=-sym + herm,
    )


def squeezing(g: GaussianMoments, i: int) -> tuple[float, float]:
    """Minimum of V(X_i(theta)) over theta, and the minimizing angle.

    Closed form: V_min = 2 C_ii - 2 |S_ii| at theta = arg(S_ii)/2 + pi/2.
    Values below 1 mean the mode is squeezed.
    """
    _check_indices(g, (i,))
    s = g.S[i, i]
    v_min = 2.0 * g.C[i, i].real - 2.0 * abs(s)
    theta = (np.angle(s) / 2.0 + np.pi / 2.0) % np.pi if abs(s) > 0 else 0.0
    return float(v_min), float(theta)


def heisenberg_product(g: GaussianMoments, i: int, theta: float) -> float:
    """V(X_i) V(Y_i) at one angle; >= 1 for any physical state."""
    qs = quad_stats(g, theta)
    return float(qs.cov_xx[i, i] * qs.cov_yy[i, i])


def min_heisenberg_product(g: GaussianMoments, i: int) -> float:
    """min over theta of V(X_i) V(Y_i) = 4 (C_ii^2 - |S_ii|^2)."""
    _check_indices(g, (i,))
    return float(4.0 * (g.C[i, i].real ** 2 - abs(g.S[i, i]) ** 2))


def _check_indices(g: GaussianMoments, idx: tuple, distinct: bool = False) -> None:
    for i in idx:
        if not 0 <= i < g.n_wells:
            raise ParameterError(f"well index {i} out of range for {g.n_wells} wells")
    if distinct and len(set(idx)) != len(idx):
        raise ParameterError(f"well indices must be distinct, got {idx}")


def duan_simon(g: GaussianMoments, j: int, k: int, theta: float) -> float:
    """V(X_j + X_k) + V(Y_j - Y_k); below 4 witnesses inseparability."""
    _check_indices(g, (j, k), distinct=True)
    qs = quad_stats(g, theta)
    vx = qs.cov_xx[j, j] + qs.cov_xx[k, k] + 2.0 * qs.cov_xx[j, k]
    vy = qs.cov_yy[j, j] + qs.cov_yy[k, k] - 2.0 * qs.cov_yy[j, k]
    return float(vx + vy)


def _inferred(v_ii: float, cov: float, v_jj: float) -> float:
    if v_jj <= 0.0:
        raise DegenerateConditioningError("conditioning variance is not positive")
    return v_ii - cov * cov / v_jj


def reid_epr(g: GaussianMoments, i: int, j: int, theta: float) -> float:
    """Product of inferred variances of mode i given measurements on mode j.

    Below 1 demonstrates EPR steering of i by j (and hence entanglement).
    The criterion is directional: swap i and j for the other direction.
    """
    _check_indices(g, (i, j), distinct=True)
    qs = quad_stats(g, theta)
    vx = _inferred(qs.cov_xx[i, i], qs.cov_xx[i, j], qs.cov_xx[j, j])
    vy = _inferred(qs.cov_yy[i, i], qs.cov_yy[i, j], qs.cov_yy[j, j])
    return float(vx * vy)


def vlf_pair(g: GaussianMoments, i: int, j: int, k: int, theta: float) -> tuple[float, float]:
    """V(X_i - X_j) + V(Y_i + Y_j + g_k Y_k) with the variance-optimal gain.

    Returns (value, gain).  Violation (< 4) of any two of the three pairings
    witnesses tripartite inseparability; the Teh-Reid thresholds on the sum
    of all three are 8 (entanglement) and 4 (genuine tripartite steering).
    """
    _check_indices(g, (i, j, k), distinct=True)
    qs = quad_stats(g, theta)
    xx, yy = qs.cov_xx, qs.cov_yy
    if yy[k, k] <= 0.0:
        raise DegenerateConditioningError("V(Y_k) is not positive")
    gain = -(yy[k, i] + yy[k, j]) / yy[k, k]
    vx = xx[i, i] + xx[j, j] - 2.0 * xx[i, j]
    vy = (
        yy[i, i]
        + yy[j, j]
        + gain**2 * yy[k, k]
        + 2.0 * yy[i, j]
        + 2.0 * gain * (yy[i, k] + yy[j, k])
    )
    return float(vx + vy), float(gain)


def vlf_triple(g: GaussianMoments, i: int, j: int, k: int, theta: float) -> float:
    """V(X_i - (X_j + X_k)/sqrt2) + V(Y_i + (Y_j + Y_k)/sqrt2).

    Below 4 proves tripartite inseparability on its own; below 2 genuine
    tripartite entanglement; below 1 genuine tripartite steering.
    """
    _check_indices(g, (i, j, k), distinct=True)
    qs = quad_stats(g, theta)
    xx, yy = qs.cov_xx, qs.cov_yy
    half = 0.5 * (xx[j, j] + xx[k, k] + 2.0 * xx[j, k])
    vx = xx[i, i] + half - np.sqrt(2.0) * (xx[i, j] + xx[i, k])
    half = 0.5 * (yy[j, j] + yy[k, k] + 2.0 * yy[j, k])
    vy = yy[i, i] + half + np.sqrt(2.0) * (yy[i, j] + yy[i, k])
    return float(vx + vy)


def obr(g: GaussianMoments, i: int, j: int, k: int, theta: float) -> tuple[float, tuple[int, int]]:
    """Product of variances of mode i inferred from the combination X_j +/- X_k.

    The sign is chosen independently for the X and Y blocks to minimize each
    inferred variance.  Returns (value, (sign_x, sign_y)); below 1 means
    modes j and k jointly steer mode i.
    """
    _check_indices(g, (i, j, k), distinct=True)
    qs = quad_stats(g, theta)

    def best(cov: np.ndarray) -> tuple[float, int]:
        out = []
        for s in (+1, -1):
            denom = cov[j, j] + cov[k, k] + 2.0 * s * cov[j, k]
            num = cov[i, j] + s * cov[i, k]
            out.append((_inferred(cov[i, i], num, denom), s))
        return min(out)

    vx, sx = best(qs.cov_xx)
    vy, sy = best(qs.cov_yy)
    return float(vx * vy), (sx, sy)


#: criterion id -> (function, number of well indices it takes)
CRITERION_FUNCS: dict[str, tuple[Callable, int]] = {
    "variance_x": (lambda g, i, theta: float(quad_stats(g, theta).cov_xx[i, i]), 1),
    "duan_simon": (duan_simon, 2),
    "reid_epr": (reid_epr, 2),
    "vlf_pair": (vlf_pair, 3),
    "vlf_triple": (vlf_triple, 3),
    "obr": (obr, 3),
}


def _value_of(result) -> float:
    return result[0] if isinstance(result, tuple) else result


def optimize_angle(
    g: GaussianMoments,
    criterion: str | Callable,
    args: tuple = (),
    coarse_step_deg: float = 1.0,
    refine_step_deg: float = 0.1,
) -> tuple[float, float]:
    """Minimize a criterion over theta in [0, pi).

    Scans a coarse grid, then refines around the best point.  Returns
    (theta_opt in radians, minimum value).
    """
    fn = CRITERION_FUNCS[criterion][0] if isinstance(criterion, str) else criterion
    coarse = np.deg2rad(np.arange(0.0, 180.0, coarse_step_deg))
    vals = np.array([_value_of(fn(g, *args, th)) for th in coarse])
    best = int(np.argmin(vals))
    th0 = coarse[best]
    span = np.deg2rad(coarse_step_deg)
    fine = th0 + np.linspace(-span, span, int(round(2 * coarse_step_deg / refine_step_deg)) + 1)
    fine = np.mod(fine, np.pi)
    fvals = np.array([_value_of(fn(g, *args, th)) for th in fine])
    bestf = int(np.argmin(fvals))
    if fvals[bestf] <= vals[best]:
        return float(fine[bestf]), float(fvals[bestf])
    return float(th0), float(vals[best])


@dataclass
class CriterionCurve:
    """One criterion instance evaluated over the angle grid, with its optimum."""

    criterion: str
    indices: tuple[int, ...]       # 0-based well indices
    theta_deg: np.ndarray          # coarse angle grid, degrees
    values: np.ndarray
    extras: list                   # per-angle gain / sign choices (may be empty)
    theta_opt_deg: float
    value_opt: float
    extra_opt: object = None

    @property
    def label(self) -> str:
        """1-based label matching the usual table notation, e.g. 'EPR_23'."""
        ids = "".join(str(i + 1) for i in self.indices)
        names = {
            "variance_x": f"V(X_{ids})",
            "duan_simon": f"DS_{ids}",
            "reid_epr": f"EPR_{ids}",
            "vlf_pair": f"V_{ids}",
            "vlf_triple": f"V_{ids}",
            "obr": f"OBR_{ids}",
        }
        return names[self.criterion]


@dataclass
class CorrelationReport:
    """All criterion curves at one sample time, plus classification flags."""

    t: float
    moments: GaussianMoments
    curves: dict[tuple[str, tuple[int, ...]], CriterionCurve]
    flags: dict = field(default_factory=dict)

    def curve(self, criterion: str, indices: tuple[int, ...]) -> CriterionCurve:
        return self.curves[(criterion, tuple(indices))]

    def optimum(self, criterion: str, indices: tuple[int, ...]) -> tuple[float, float]:
        c = self.curve(criterion, indices)
        return c.value_opt, c.theta_opt_deg


def trimer_criteria(n_wells: int) -> list[tuple[str, tuple[int, ...]]]:
    """The standard criterion set: all single modes, pairs, ordered pairs,
    and (for three wells) the three pairings and cyclic triples."""
    items: list[tuple[str, tuple[int, ...]]] = []
    for i in range(n_wells):
        items.append(("variance_x", (i,)))
    for i in range(n_wells):
        for j in range(i + 1, n_wells):
            items.append(("duan_simon", (i, j)))
    for i in range(n_wells):
        for j in range(n_wells):
            if i != j:
                items.append(("reid_epr", (i, j)))
    if n_wells == 3:
        items += [
            ("vlf_pair", (0, 1, 2)),
            ("vlf_pair", (0, 2, 1)),
            ("vlf_pair", (1, 2, 0)),
            ("vlf_triple", (0, 1, 2)),
            ("vlf_triple", (1, 2, 0)),
            ("vlf_triple", (2, 0, 1)),
            ("obr", (0, 1, 2)),
            ("obr", (1, 2, 0)),
            ("obr", (2, 0, 1)),
        ]
    return items


def evaluate_report(
    g: GaussianMoments,
    angle_step_deg: float = 1.0,
    criteria: list[tuple[str, tuple[int, ...]]] | None = None,
) -> CorrelationReport:
    """Evaluate every criterion over the angle grid and locate its optimum."""
    if criteria is None:
        criteria = trimer_criteria(g.n_wells)
    thetas_deg = np.arange(0.0, 180.0, angle_step_deg)
    thetas = np.deg2rad(thetas_deg)
    curves = {}
    for name, idx in criteria:
        fn = CRITERION_FUNCS[name][0]
        raw = [fn(g, *idx, th) for th in thetas]
        if raw and isinstance(raw[0], tuple):
            values = np.array([r[0] for r in raw])
            extras = [r[1] for r in raw]
        else:
            values = np.array(raw, dtype=float)
            extras = []
        th_opt, v_opt = optimize_angle(g, name, idx, coarse_step_deg=angle_step_deg)
        extra_opt = _value_of_extra(fn, g, idx, th_opt) if extras else None
        curves[(name, idx)] = CriterionCurve(
            criterion=name,
            indices=idx,
            theta_deg=thetas_deg,
            values=values,
            extras=extras,
            theta_opt_deg=float(np.rad2deg(th_opt)),
            value_opt=v_opt,
            extra_opt=extra_opt,
        )
    report = CorrelationReport(t=g.t, moments=g, curves=curves)
    if g.n_wells == 3:
        report.flags = classify(report)
    return report


def _value_of_extra(fn, g, idx, theta):
    res = fn(g, *idx, theta)
    return res[1] if isinstance(res, tuple) else None


def _pair_key(i: int, j: int) -> str:
    return f"{min(i, j) + 1}{max(i, j) + 1}"


def classify(report: CorrelationReport) -> dict:
    """Classification flags for a three-well report.

    Conventions: keys use 1-based well labels; 'asymmetric steering' for a
    pair means exactly one direction has its angle-optimized product below
    1, while 'two_way_angle_exists' records whether some single angle lets
    both directions steer at once.
    """
    g = report.moments
    n = g.n_wells
    if n != 3:
        raise IncompleteReportError("classification is defined for three-well reports")
    need = trimer_criteria(3)
    missing = [key for key in need if tuple(key) not in report.curves]
    if missing:
        raise IncompleteReportError(f"report lacks curves: {missing}")

    flags: dict = {}
    flags["squeezing"] = {
        str(i + 1): bool(report.curve("variance_x", (i,)).value_opt < 1.0) for i in range(3)
    }
    flags["duan_simon_violation"] = {
        _pair_key(i, j): bool(report.curve("duan_simon", (i, j)).value_opt < 4.0)
        for i in range(3)
        for j in range(i + 1, 3)
    }
    steer = {}
    for i in range(3):
        for j in range(3):
            if i != j:
                steer[f"{i + 1}{j + 1}"] = bool(report.curve("reid_epr", (i, j)).value_opt < 1.0)
    flags["steering"] = steer

    asym = {}
    two_way = {}
    for i in range(3):
        for j in range(i + 1, 3):
            a = steer[f"{i + 1}{j + 1}"]
            b = steer[f"{j + 1}{i + 1}"]
            asym[_pair_key(i, j)] = bool(a != b)
            va = report.curve("reid_epr", (i, j)).values
            vb = report.curve("reid_epr", (j, i)).values
            two_way[_pair_key(i, j)] = bool(np.any((va < 1.0) & (vb < 1.0)))
    flags["asymmetric_steering"] = asym
    flags["two_way_angle_exists"] = two_way

    pair_vals = {
        (i, j): report.curve("vlf_pair", (i, j, k)).value_opt
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
    }
    n_violated = sum(1 for v in pair_vals.values() if v < 4.0)
    vlf_sum = float(sum(pair_vals.values()))
    flags["vlf_pair_violations"] = {
        _pair_key(i, j): bool(v < 4.0) for (i, j), v in pair_vals.items()
    }
    flags["vlf_two_of_three"] = bool(n_violated >= 2)
    flags["tehreid_sum"] = vlf_sum
    flags["tehreid_entanglement"] = bool(vlf_sum < 8.0)
    flags["tehreid_genuine_steering"] = bool(vlf_sum < 4.0)

    triples = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    trip_vals = {t: report.curve("vlf_triple", t).value_opt for t in triples}
    flags["vlf_triple_inseparability"] = bool(any(v < 4.0 for v in trip_vals.values()))
    flags["vlf_triple_genuine_entanglement"] = bool(any(v < 2.0 for v in trip_vals.values()))
    flags["vlf_triple_genuine_steering"] = bool(any(v < 1.0 for v in trip_vals.values()))

    obr_flags = {
        "".join(str(x + 1) for x in t): bool(report.curve("obr", t).value_opt < 1.0)
        for t in triples
    }
    flags["obr_steering"] = obr_flags

    bip = {}
    for i in range(3):
        for j in range(i + 1, 3):
            key = _pair_key(i, j)
            bip[key] = bool(
                flags["duan_simon_violation"][key]
                or steer[f"{i + 1}{j + 1}"]
                or steer[f"{j + 1}{i + 1}"]
            )
    flags["bipartite_entanglement"] = bip

    flags["tripartite_entanglement"] = bool(
        flags["vlf_two_of_three"]
        or flags["tehreid_entanglement"]
        or flags["vlf_triple_genuine_entanglement"]
        or any(obr_flags.values())
    )
    flags["w_type"] = bool(any(bip.values()) and flags["tripartite_entanglement"])
    return flags
