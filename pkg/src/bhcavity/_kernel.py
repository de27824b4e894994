"""Compiled trajectory-batch integrator.

Each trajectory k owns a counter-based Philox-4x64-10 stream keyed by
(seed, k), so the noise sequence is a pure function of (seed, k, draw
index): results are bit-identical for any worker count or block schedule.
The word stream matches numpy's Philox bit generator for the same key and
counter, which the test suite checks directly.

Box-Muller converts pairs of 64-bit words to standard normals.  Per step a
trajectory consumes two normals for every damped well (real and imaginary
noise quadratures); the first 2n draws of a stream set the Wigner vacuum
initial condition.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

# Philox 4x64 round multipliers and Weyl key increments.
_M0 = uint64(0xD2E7470EE14C6C93)
_M1 = uint64(0xCA5A826395121157)
_W0 = uint64(0x9E3779B97F4A7C15)
_W1 = uint64(0xBB67AE8584CAA73B)
_MASK32 = uint64(0xFFFFFFFF)

_TWO_PI = 2.0 * np.pi
_INV_2_53 = 2.0 ** -53


@njit(cache=True, nogil=True)
def _mulhi(a, b):
    # high 64 bits of the 128-bit product, via 32-bit limbs
    ah = a >> uint64(32)
    al = a & _MASK32
    bh = b >> uint64(32)
    bl = b & _MASK32
    albl = al * bl
    albh = al * bh
    ahbl = ah * bl
    mid = (albl >> uint64(32)) + (albh & _MASK32) + (ahbl & _MASK32)
    return ah * bh + (albh >> uint64(32)) + (ahbl >> uint64(32)) + (mid >> uint64(32))


@njit(cache=True, nogil=True)
def _philox4x64(c0, c1, c2, c3, k0, k1, out):
    """Ten Philox rounds on counter (c0..c3) under key (k0, k1)."""
    for r in range(10):
        if r > 0:
            k0 = k0 + _W0
            k1 = k1 + _W1
        hi0 = _mulhi(_M0, c0)
        lo0 = _M0 * c0
        hi1 = _mulhi(_M1, c2)
        lo1 = _M1 * c2
        n0 = hi1 ^ c1 ^ k0
        n1 = lo1
        n2 = hi0 ^ c3 ^ k1
        n3 = lo0
        c0, c1, c2, c3 = n0, n1, n2, n3
    out[0] = c0
    out[1] = c1
    out[2] = c2
    out[3] = c3


@njit(cache=True, nogil=True)
def _raw_block(seed, stream, ctr, out):
    """Block ``ctr`` of stream (seed, stream).

    numpy's Philox generator bumps the counter before producing a block, so
    block index b sits at counter b + 1; we mirror that to stay word-exact.
    """
    _philox4x64(
        uint64(ctr) + uint64(1), uint64(0), uint64(0), uint64(0), uint64(seed), uint64(stream), out
    )


@njit(cache=True, nogil=True)
def _fill_normals(out, n_need, seed, stream, ctr):
    """Fill out[:n_need] with standard normals; returns the advanced counter.

    Consecutive word pairs feed Box-Muller, four words (= four normals) per
    Philox block.
    """
    words = np.empty(4, dtype=np.uint64)
    i = 0
    while i < n_need:
        _raw_block(seed, stream, ctr, words)
        ctr = ctr + uint64(1)
        for p in range(2):
            w1 = words[2 * p]
            w2 = words[2 * p + 1]
            u1 = (np.float64(w1 >> uint64(11)) + 1.0) * _INV_2_53  # in (0, 1]
            u2 = np.float64(w2 >> uint64(11)) * _INV_2_53          # in [0, 1)
            r = np.sqrt(-2.0 * np.log(u1))
            phi = _TWO_PI * u2
            if i < n_need:
                out[i] = r * np.cos(phi)
                i += 1
            if i < n_need:
                out[i] = r * np.sin(phi)
                i += 1
    return ctr


@njit(cache=True, nogil=True)
def _drift_into(alpha, pump, loss, chi, J, out):
    n = alpha.shape[0]
    for i in range(n):
        hop = 0.0 + 0.0j
        for j in range(n):
            Jij = J[i, j]
            if Jij != 0.0:
                hop += Jij * alpha[j]
        a = alpha[i]
        n2 = a.real * a.real + a.imag * a.imag
        out[i] = pump[i] - loss[i] * a - 2j * chi * n2 * a + 1j * hop


@njit(cache=True, nogil=True)
def integrate_block(
    seed,
    k_start,
    n_traj,
    n_replicas,
    J,
    chi,
    pump,
    loss,
    noise_idx,
    noise_coef,
    dt,
    sample_every,
    n_samples,
    use_heun,
    guard,
    counts,
    divergent_counts,
    sum_alpha,
    sum_sym,
    sum_herm,
):
    """Integrate trajectories k_start .. k_start+n_traj-1 and accumulate moments.

    Accumulator arrays are indexed by replica r = k mod n_replicas.  A
    trajectory whose amplitude leaves the guard box contributes nothing and
    is counted in divergent_counts.
    """
    n = J.shape[0]
    n_noise = noise_idx.shape[0]
    per_interval = 2 * n_noise * sample_every

    alpha = np.empty(n, dtype=np.complex128)
    f1 = np.empty(n, dtype=np.complex128)
    f2 = np.empty(n, dtype=np.complex128)
    pred = np.empty(n, dtype=np.complex128)
    dW = np.zeros(n, dtype=np.complex128)
    samples = np.empty((n_samples, n), dtype=np.complex128)
    nbuf = np.empty(max(2 * n, per_interval), dtype=np.float64)

    for b in range(n_traj):
        k = k_start + b
        ctr = uint64(0)

        # vacuum initial condition from the head of the stream
        ctr = _fill_normals(nbuf, 2 * n, seed, k, ctr)
        for i in range(n):
            alpha[i] = 0.5 * (nbuf[2 * i] + 1j * nbuf[2 * i + 1])
            samples[0, i] = alpha[i]

        diverged = False
        for s in range(1, n_samples):
            if n_noise > 0:
                ctr = _fill_normals(nbuf, per_interval, seed, k, ctr)
            pos = 0
            for _ in range(sample_every):
                for m in range(n_noise):
                    dW[noise_idx[m]] = noise_coef[m] * (nbuf[pos] + 1j * nbuf[pos + 1])
                    pos += 2
                _drift_into(alpha, pump, loss, chi, J, f1)
                if use_heun:
                    for i in range(n):
                        pred[i] = alpha[i] + f1[i] * dt + dW[i]
                    _drift_into(pred, pump, loss, chi, J, f2)
                    for i in range(n):
                        alpha[i] = alpha[i] + 0.5 * (f1[i] + f2[i]) * dt + dW[i]
                else:
                    for i in range(n):
                        alpha[i] = alpha[i] + f1[i] * dt + dW[i]
                for i in range(n):
                    a = alpha[i]
                    if not (abs(a.real) < guard and abs(a.imag) < guard):
                        diverged = True
                        break
                if diverged:
                    break
            if diverged:
                break
            for i in range(n):
                samples[s, i] = alpha[i]

        r = int(k % n_replicas)
        if diverged:
            divergent_counts[r] += 1
            continue
        counts[r] += 1
        for s in range(n_samples):
            for i in range(n):
                ai = samples[s, i]
                sum_alpha[r, s, i] += ai
                for j in range(n):
                    aj = samples[s, j]
                    sum_sym[r, s, i, j] += ai * aj
                    sum_herm[r, s, i, j] += np.conj(ai) * aj
