"""Trajectory ensembles and phase-space moment accumulation.

Trajectories are integrated in fixed-size blocks by a compiled kernel; each
trajectory k draws every random number from a counter-based stream keyed by
(seed, k), and block partial sums are reduced in block order.  The result
is therefore bit-identical for any worker count.

First and second moments are accumulated per replica sub-ensemble
(trajectory k belongs to replica k mod R); replica scatter provides the
sampling-error estimates for any derived quantity.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernel import integrate_block
from .dynamics import IntegratorConfig
from .model import ParameterError, SystemSpec

__all__ = [
    "EnsembleDivergenceError",
    "GridLookupError",
    "GaussianMoments",
    "MomentAccumulator",
    "ErrorEstimate",
    "run_ensemble",
    "moments_at",
    "replica_moments_at",
    "estimate_error",
    "population",
    "population_series",
]

BLOCK_SIZE = 500
DIVERGENCE_WARN_FRACTION = 1e-3
DIVERGENCE_FAIL_FRACTION = 0.05


class EnsembleDivergenceError(RuntimeError):
    """More than the tolerated fraction of trajectories diverged."""


class GridLookupError(KeyError):
    """Requested time is not on the sample grid."""


@dataclass
class GaussianMoments:
    """Centered first and second phase-space moments at one sample time.

    m[i]    = E[alpha_i]
    S[i, j] = E[d alpha_i d alpha_j]           (symmetric)
    C[i, j] = E[conj(d alpha_i) d alpha_j]     (Hermitian, real diagonal)

    Ensemble averages of the Wigner variables are symmetrically ordered
    operator moments, so the vacuum has m = 0, S = 0, C = I/2.
    """

    m: np.ndarray
    S: np.ndarray
    C: np.ndarray
    n_samples: int
    t: float

    @property
    def n_wells(self) -> int:
        return self.m.shape[0]

    @classmethod
    def vacuum(cls, n_wells: int) -> "GaussianMoments":
        return cls(
            m=np.zeros(n_wells, dtype=complex),
            S=np.zeros((n_wells, n_wells), dtype=complex),
            C=0.5 * np.eye(n_wells, dtype=complex),
            n_samples=0,
            t=0.0,
        )


@dataclass
class MomentAccumulator:
    """Running moment sums on the sample grid, split into replica sub-ensembles.

    counts[r] trajectories contributed to replica r; divergent trajectories
    are excluded entirely and only counted.  merge() adds sums element-wise,
    so any partition of a trajectory set reduces to the same totals up to
    floating-point reassociation.
    """

    times: np.ndarray              # (T,)
    counts: np.ndarray             # (R,) int64
    divergent_counts: np.ndarray   # (R,) int64
    sum_alpha: np.ndarray          # (R, T, n) complex
    sum_sym: np.ndarray            # (R, T, n, n) complex, sum of a_i a_j
    sum_herm: np.ndarray           # (R, T, n, n) complex, sum of conj(a_i) a_j

    @classmethod
    def empty(cls, times: np.ndarray, n_wells: int, n_replicas: int) -> "MomentAccumulator":
        T = len(times)
        return cls(
            times=np.asarray(times, dtype=float),
            counts=np.zeros(n_replicas, dtype=np.int64),
            divergent_counts=np.zeros(n_replicas, dtype=np.int64),
            sum_alpha=np.zeros((n_replicas, T, n_wells), dtype=complex),
            sum_sym=np.zeros((n_replicas, T, n_wells, n_wells), dtype=complex),
            sum_herm=np.zeros((n_replicas, T, n_wells, n_wells), dtype=complex),
        )

    @property
    def count(self) -> int:
        return int(self.counts.sum())

    @property
    def divergent_count(self) -> int:
        return int(self.divergent_counts.sum())

    @property
    def n_replicas(self) -> int:
        return len(self.counts)

    @property
    def n_wells(self) -> int:
        return self.sum_alpha.shape[2]

    @property
    def divergent_fraction(self) -> float:
        total = self.count + self.divergent_count
        return self.divergent_count / total if total else 0.0

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if self.n_replicas != other.n_replicas or self.n_wells != other.n_wells:
            raise ParameterError("accumulators have incompatible shapes")
        if not np.allclose(self.times, other.times, rtol=0.0, atol=1e-12):
            raise ParameterError("accumulators live on different sample grids")
        return MomentAccumulator(
            times=self.times,
            counts=self.counts + other.counts,
            divergent_counts=self.divergent_counts + other.divergent_counts,
            sum_alpha=self.sum_alpha + other.sum_alpha,
            sum_sym=self.sum_sym + other.sum_sym,
            sum_herm=self.sum_herm + other.sum_herm,
        )

    def _iadd(self, other: "MomentAccumulator") -> None:
        self.counts += other.counts
        self.divergent_counts += other.divergent_counts
        self.sum_alpha += other.sum_alpha
        self.sum_sym += other.sum_sym
        self.sum_herm += other.sum_herm

    def time_index(self, t: float) -> int:
        idx = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[idx] - t) > 1e-9 * max(1.0, abs(t)):
            raise GridLookupError(
                f"t={t} is not on the sample grid (spacing {self.times[1] - self.times[0]:g})"
            )
        return idx


def _moments_from_sums(sum_a, sum_s, sum_h, count, t) -> GaussianMoments:
    m = sum_a / count
    S = sum_s / count - np.outer(m, m)
    C = sum_h / count - np.outer(np.conj(m), m)
    return GaussianMoments(m=m, S=S, C=C, n_samples=int(count), t=float(t))


def moments_at(acc: MomentAccumulator, t: float) -> GaussianMoments:
    """Centered moments over the full ensemble at grid time t."""
    idx = acc.time_index(t)
    if acc.count == 0:
        raise EnsembleDivergenceError("no surviving trajectories")
    return _moments_from_sums(
        acc.sum_alpha[:, idx].sum(axis=0),
        acc.sum_sym[:, idx].sum(axis=0),
        acc.sum_herm[:, idx].sum(axis=0),
        acc.count,
        acc.times[idx],
    )


def replica_moments_at(acc: MomentAccumulator, t: float) -> list[GaussianMoments]:
    """Per-replica centered moments at grid time t (for error estimation)."""
    idx = acc.time_index(t)
    out = []
    for r in range(acc.n_replicas):
        if acc.counts[r] == 0:
            continue
        out.append(
            _moments_from_sums(
                acc.sum_alpha[r, idx],
                acc.sum_sym[r, idx],
                acc.sum_herm[r, idx],
                acc.counts[r],
                acc.times[idx],
            )
        )
    return out


@dataclass
class ErrorEstimate:
    """Sampling error of one derived quantity from replica scatter."""

    value: float            # full-ensemble value
    replica_values: np.ndarray

    @property
    def se(self) -> float:
        r = len(self.replica_values)
        if r < 2:
            return float("nan")
        return float(np.std(self.replica_values, ddof=1) / np.sqrt(r))


def estimate_error(acc: MomentAccumulator, t: float, fn) -> ErrorEstimate:
    """Evaluate fn(GaussianMoments) -> float on the ensemble and each replica."""
    full = fn(moments_at(acc, t))
    reps = np.array([fn(g) for g in replica_moments_at(acc, t)], dtype=float)
    return ErrorEstimate(value=float(full), replica_values=reps)


def population(g: GaussianMoments, i: int) -> float:
    """Well population N_i = E[|alpha_i|^2] - 1/2 (symmetric-ordering offset)."""
    if not 0 <= i < g.n_wells:
        raise ParameterError(f"well index {i} out of range")
    return float(g.C[i, i].real + abs(g.m[i]) ** 2 - 0.5)


def population_series(acc: MomentAccumulator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Populations and replica standard errors at every sample time.

    Returns (times, N, SE) with N and SE of shape (T, n_wells).
    """
    n = acc.n_wells
    T = len(acc.times)
    N = np.empty((T, n))
    SE = np.empty((T, n))
    for s in range(T):
        g = _moments_from_sums(
            acc.sum_alpha[:, s].sum(axis=0),
            acc.sum_sym[:, s].sum(axis=0),
            acc.sum_herm[:, s].sum(axis=0),
            acc.count,
            acc.times[s],
        )
        reps = []
        for r in range(acc.n_replicas):
            if acc.counts[r] == 0:
                continue
            reps.append(
                _moments_from_sums(
                    acc.sum_alpha[r, s],
                    acc.sum_sym[r, s],
                    acc.sum_herm[r, s],
                    acc.counts[r],
                    acc.times[s],
                )
            )
        for i in range(n):
            N[s, i] = population(g, i)
            vals = [population(gr, i) for gr in reps]
            SE[s, i] = np.std(vals, ddof=1) / np.sqrt(len(vals)) if len(vals) > 1 else np.nan
    return acc.times.copy(), N, SE


def _run_block(spec: SystemSpec, cfg: IntegratorConfig, seed: int, k_start: int,
               n_traj: int, n_replicas: int) -> MomentAccumulator:
    times = cfg.times()
    block = MomentAccumulator.empty(times, spec.n_wells, n_replicas)
    noise_amp = np.sqrt(spec.loss)
    noise_idx = np.nonzero(noise_amp > 0.0)[0].astype(np.int64)
    noise_coef = noise_amp[noise_idx] * np.sqrt(cfg.dt / 2.0)
    integrate_block(
        np.uint64(seed),
        np.uint64(k_start),
        np.int64(n_traj),
        np.int64(n_replicas),
        spec.coupling,
        float(spec.chi),
        spec.pump,
        spec.loss,
        noise_idx,
        noise_coef,
        float(cfg.dt),
        np.int64(cfg.sample_every),
        np.int64(cfg.n_samples),
        cfg.scheme == "heun_additive",
        float(cfg.overflow_guard),
        block.counts,
        block.divergent_counts,
        block.sum_alpha,
        block.sum_sym,
        block.sum_herm,
    )
    return block


def run_ensemble(
    spec: SystemSpec,
    cfg: IntegratorConfig,
    n_traj: int,
    seed: int,
    workers: int | None = None,
    replicas: int = 10,
    block_size: int = BLOCK_SIZE,
) -> MomentAccumulator:
    """Integrate n_traj vacuum-seeded trajectories and accumulate moments.

    Deterministic for fixed (seed, n_traj, cfg) regardless of ``workers``:
    trajectory streams depend only on (seed, k) and block partial sums are
    reduced in ascending block order.
    """
    if n_traj < 1:
        raise ParameterError("n_traj must be >= 1")
    if replicas < 2:
        raise ParameterError("need at least 2 replicas for error estimation")
    if workers is None:
        import os

        workers = os.cpu_count() or 1
    workers = max(1, int(workers))
    seed = int(seed) % 2**64

    starts = list(range(0, n_traj, block_size))
    blocks = [(k0, min(block_size, n_traj - k0)) for k0 in starts]
    total = MomentAccumulator.empty(cfg.times(), spec.n_wells, replicas)

    if workers == 1:
        for k0, nb in blocks:
            total._iadd(_run_block(spec, cfg, seed, k0, nb, replicas))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # batched so partial sums reduce in canonical block order while
            # holding at most `workers` block results in memory
            for batch_start in range(0, len(blocks), workers):
                batch = blocks[batch_start : batch_start + workers]
                futures = [
                    pool.submit(_run_block, spec, cfg, seed, k0, nb, replicas)
                    for k0, nb in batch
                ]
                for fut in futures:
                    total._iadd(fut.result())

    frac = total.divergent_fraction
    if frac > DIVERGENCE_FAIL_FRACTION:
        raise EnsembleDivergenceError(
            f"{total.divergent_count}/{n_traj} trajectories diverged "
            f"({100 * frac:.2f}% > {100 * DIVERGENCE_FAIL_FRACTION:.1f}%)"
        )
    if frac > DIVERGENCE_WARN_FRACTION:
        warnings.warn(
            f"{total.divergent_count}/{n_traj} trajectories diverged ({100 * frac:.3f}%)",
            RuntimeWarning,
            stacklevel=2,
        )
    return total
