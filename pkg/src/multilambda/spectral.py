"""Instantaneous spectrum of the transfer Hamiltonian and its continuation in time.

The eigensolver is a cyclic Jacobi rotation scheme.  The matrices here are
small (N+2 for a handful of intermediate states) and dense, Jacobi delivers
near machine precision eigenvectors, and having the solver in-package keeps
the spectral layer free of hidden tolerance choices.

Eigenvalue curves are continued through time by greedy eigenvector-overlap
matching between consecutive snapshots.  That is reliable exactly when the
time grid is fine enough that consecutive eigenbases barely rotate; if the
best available overlap for some state drops below 0.5 the continuation is
refused rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    AmbiguousTracking,
    DegenerateSums,
    NonSymmetricInput,
    NotSingleResonance,
)
from .model import MultiLambdaSystem, PulsePair, build_hamiltonian, s_sums

__all__ = [
    "eigendecompose",
    "SpectralSnapshot",
    "track_spectrum",
    "track_curve",
    "track_vectors",
    "Side",
    "AsymptoticEigenvalues",
    "asymptotic_eigenvalues_offres",
    "asymptotic_eigenvalues_res",
    "asymptotics_valid",
]

# Convergence: off-diagonal Frobenius mass relative to the full matrix norm.
_JACOBI_RTOL = 1e-13
_MAX_SWEEPS = 60

# Continuation is refused when the best overlap drops below this.
_MIN_OVERLAP = 0.5


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def eigendecompose(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a real
    symmetric matrix, by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius norm falls below 1e-13 of the
    matrix norm.  Returns ``(w, v)`` with ``h @ v[:, j] == w[j] * v[:, j]``.
    """
    a = np.array(h, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSymmetricInput("matrix must be square")
    if not np.array_equal(a, a.T):
        raise NonSymmetricInput("matrix must be exactly symmetric")
    n = a.shape[0]
    v = np.eye(n)
    norm_h = float(np.linalg.norm(a))
    if norm_h == 0.0:
        return np.zeros(n), v
    for _ in range(_MAX_SWEEPS):
        if _offdiag_norm(a) <= _JACOBI_RTOL * norm_h:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                # Stable tangent of the rotation angle; sign keeps |t| <= 1.
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta != 0.0 else 1.0
                if t == 0.0:
                    continue
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


@dataclass(frozen=True, eq=False)
class SpectralSnapshot:
    """Spectrum of H(t) at one time, with continuation labels.

    ``eigenvalues`` are ascending and ``eigenvectors[:, j]`` belongs to
    ``eigenvalues[j]``.  ``track_ids[j]`` is the persistent label of that
    curve: labels are assigned by ascending order in the first snapshot and
    carried forward by overlap matching.
    """

    t: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    track_ids: np.ndarray


def _fix_initial_signs(v: np.ndarray) -> None:
    for j in range(v.shape[1]):
        i = int(np.argmax(np.abs(v[:, j])))
        if v[i, j] < 0:
            v[:, j] = -v[:, j]


def _greedy_match(prev_v: np.ndarray, cur_v: np.ndarray, t: float) -> np.ndarray:
    """Pair previous columns with current ones by descending |overlap|.

    Returns ``match[j] = i`` meaning current column j continues previous
    column i.  Flips current column signs so every matched overlap is
    positive.  Raises AmbiguousTracking when a pair has |overlap| < 0.5.
    """
    n = prev_v.shape[1]
    overlap = prev_v.T @ cur_v
    score = np.abs(overlap)
    match = np.full(n, -1)
    for _ in range(n):
        i, j = np.unravel_index(int(np.argmax(score)), score.shape)
        best = score[i, j]
        if best < _MIN_OVERLAP:
            raise AmbiguousTracking(
                f"best eigenvector overlap {best:.3f} < {_MIN_OVERLAP} at t={t}; "
                "refine the time grid"
            )
        if overlap[i, j] < 0:
            cur_v[:, j] = -cur_v[:, j]
        match[j] = i
        score[i, :] = -1.0
        score[:, j] = -1.0
    return match


def track_spectrum(
    system: MultiLambdaSystem, pulses: PulsePair, time_grid
) -> list[SpectralSnapshot]:
    """Diagonalize H(t) over a time grid and link the curves by continuity."""
    grid = np.asarray(time_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("time grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("time grid must be strictly increasing")
    snapshots: list[SpectralSnapshot] = []
    prev_v = None
    prev_ids = None
    for t in grid:
        wp, ws = pulses.values(t)
        w, v = eigendecompose(build_hamiltonian(system, wp, ws))
        if prev_v is None:
            ids = np.arange(w.size)
            _fix_initial_signs(v)
        else:
            match = _greedy_match(prev_v, v, float(t))
            ids = prev_ids[match]
        for arr in (w, v, ids):
            arr.setflags(write=False)
        snapshots.append(SpectralSnapshot(float(t), w, v, ids))
        prev_v, prev_ids = v, ids
    return snapshots


def track_curve(snapshots: list[SpectralSnapshot], track_id: int) -> np.ndarray:
    """Eigenvalue of one labelled curve across all snapshots."""
    out = np.empty(len(snapshots))
    for k, snap in enumerate(snapshots):
        (j,) = np.nonzero(snap.track_ids == track_id)[0]
        out[k] = snap.eigenvalues[j]
    return out


def track_vectors(snapshots: list[SpectralSnapshot], track_id: int) -> np.ndarray:
    """Eigenvector of one labelled curve, rows indexed like the snapshots."""
    dim = snapshots[0].eigenvectors.shape[0]
    out = np.empty((len(snapshots), dim))
    for k, snap in enumerate(snapshots):
        (j,) = np.nonzero(snap.track_ids == track_id)[0]
        out[k] = snap.eigenvectors[:, j]
    return out


class Side(Enum):
    """Which tail of the pulse sequence an asymptotic formula describes."""

    EARLY = "early"
    LATE = "late"


@dataclass(frozen=True)
class AsymptoticEigenvalues:
    """Leading-order small and large vanishing eigenvalues on one side."""

    side: Side
    small: float
    large: tuple[float, ...]


def asymptotics_valid(pulses: PulsePair, t: float, side: Side, ratio: float = 0.1) -> bool:
    """Whether ``t`` is far enough into the requested tail for the expansions.

    Early means the pump is still negligible against the Stokes field
    (omega_p/omega_s < ratio), late the reverse.  The formulas extrapolate
    smoothly outside this domain but lose accuracy; callers decide.
    """
    wp, ws = pulses.values(t)
    if side is Side.EARLY:
        return ws > 0 and wp / ws < ratio
    return wp > 0 and ws / wp < ratio


def asymptotic_eigenvalues_offres(
    system: MultiLambdaSystem, omega_p: float, omega_s: float, side: Side
) -> AsymptoticEigenvalues:
    """Leading-order vanishing eigenvalues with no resonant state.

    Early in the sequence the two curves that vanish asymptotically behave as
    ``-res/S_b2 * omega_p^2`` (small) and ``-S_b2 * omega_s^2`` (large) with
    ``res = S_a2 S_b2 - S_ab^2``; late, the roles of the sums and envelopes
    swap.  The denominator sum must not vanish.
    """
    s = s_sums(system)
    res = s.s_a2 * s.s_b2 - s.s_ab**2
    if side is Side.EARLY:
        if s.b2_is_zero():
            raise DegenerateSums("S_b2 vanishes; early asymptotics undefined")
        return AsymptoticEigenvalues(
            side, -res / s.s_b2 * omega_p**2, (-s.s_b2 * omega_s**2,)
        )
    if s.a2_is_zero():
        raise DegenerateSums("S_a2 vanishes; late asymptotics undefined")
    return AsymptoticEigenvalues(side, -res / s.s_a2 * omega_s**2, (-s.s_a2 * omega_p**2,))


def asymptotic_eigenvalues_res(
    system: MultiLambdaSystem, n: int, omega_p: float, omega_s: float, side: Side
) -> AsymptoticEigenvalues:
    """Leading-order vanishing eigenvalues with exactly state ``n`` resonant.

    Three curves vanish in each tail: a small one quadratic in the weak
    envelope and a symmetric pair linear in the strong one.  The bracket
    combines the detuning sums taken without the resonant state.
    """
    res = system.resonant_indices()
    if res != (n,):
        raise NotSingleResonance(
            f"need detuning {n} exactly zero and all others nonzero, got zeros at {res}"
        )
    s = s_sums(system, excluded=n)
    an, bn = system.alphas[n], system.betas[n]
    bracket = an * an * s.s_b2 - 2.0 * an * bn * s.s_ab + bn * bn * s.s_a2
    if side is Side.EARLY:
        return AsymptoticEigenvalues(
            side,
            -bracket / (bn * bn) * omega_p**2,
            (-bn * omega_s, bn * omega_s),
        )
    return AsymptoticEigenvalues(
        side,
        -bracket / (an * an) * omega_s**2,
        (-an * omega_p, an * omega_p),
    )
