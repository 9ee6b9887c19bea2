"""Transition matrices for random walks with uniform jumps, spectra, gaps, Dobrushin bounds.

The jump walk with rate alpha moves on the weighted graph A(alpha) obtained by
superimposing a complete graph of total weight alpha on every vertex pair,
scaled by 1/n: A(alpha) = A + (alpha/n) 11^T, with degree matrix
D(alpha) = D + alpha I and transition matrix P(alpha) = D(alpha)^{-1} A(alpha).

All spectra are computed through the symmetric similarity
N = D(alpha)^{-1/2} A(alpha) D(alpha)^{-1/2}, so eigenvalues are real and
eigenvectors come back D(alpha)-orthonormal. The eigensolver is LAPACK's
symmetric driver via ``numpy.linalg.eigh`` (accurate to a few ulp times the
spectral norm, which is 1 here); non-convergence raises, it is never truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BranchCrossingError,
    ConventionError,
    DisconnectedGraphError,
    NumericalError,
)
from .graphs import WeightedGraph, is_connected

SLEM = "slem"
PAPER = "paper-literal"

TOL_UNIT = 1e-9   # band around +1/-1 for the paper-literal exclusion
TOL_TIE = 1e-9    # eigenvalues closer than this are one level


def normalize_convention(convention: str) -> str:
    if convention in (SLEM,):
        return SLEM
    if convention in (PAPER, "paper"):
        return PAPER
    raise ValueError(f"unknown convention {convention!r}; use 'slem' or 'paper'")


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    """A graph together with a jump rate, its transition matrix and stationary law."""

    graph: WeightedGraph
    alpha: float
    P: np.ndarray
    pi: np.ndarray


def build_transition(g: WeightedGraph, alpha: float) -> TransitionSystem:
    """Transition system of the jump walk: P(alpha) = (D + alpha I)^{-1} (A + (alpha/n) 11^T).

    The stationary law is pi_i = (d_i + alpha) / (volume + alpha n).
    """
    alpha = float(alpha)
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if not is_connected(g):
        raise DisconnectedGraphError("transition system requires a connected graph")
    a = g.adjacency()
    d = a.sum(axis=1)
    a_alpha = a + alpha / g.n
    d_alpha = d + alpha
    p = a_alpha / d_alpha[:, None]
    pi = (d + alpha) / (d.sum() + alpha * g.n)
    return TransitionSystem(graph=g, alpha=alpha, P=p, pi=pi)


def split_form_transition(g: WeightedGraph, alpha: float) -> np.ndarray:
    """The same matrix assembled the other way:

    (D+aI)^{-1} D P  +  (D+aI)^{-1} a I 1 (1/n) 1^T,   P = D^{-1} A.

    Kept as an independent construction; tests require entrywise agreement
    with :func:`build_transition` to 1e-14.
    """
    alpha = float(alpha)
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    a = g.adjacency()
    d = a.sum(axis=1)
    p_srw = a / d[:, None]
    scale = d / (d + alpha)
    jump = alpha / (d + alpha)
    return scale[:, None] * p_srw + np.outer(jump, np.full(g.n, 1.0 / g.n))


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    """Full real spectrum of P(alpha) with the selected non-unit eigenvalue.

    ``eigenvalues`` are sorted descending; ``eigenvectors`` columns are
    D(alpha)-orthonormal and aligned with them. ``v_star`` is the selected
    eigenvector renormalised to Euclidean unit length with its largest-modulus
    entry made positive. ``candidates`` marks the indices admissible under the
    selection convention.
    """

    alpha: float
    convention: str
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    candidates: np.ndarray
    lambda_star: float
    star_index: int
    v_star: np.ndarray
    gap: float
    t_rel: float
    degenerate_multiplicity: int
    tied_sign: bool
    near_unit: bool


def _gap_trel(lambda_star: float) -> tuple[float, float]:
    mod = abs(lambda_star)
    if mod >= 1.0 - TOL_UNIT:
        return 0.0, math.inf
    gap = 1.0 - mod
    return gap, 1.0 / gap


def spectrum(ts: TransitionSystem, convention: str) -> SpectralSummary:
    """Eigendecomposition of P(alpha) plus selection of lambda_star.

    Conventions: ``slem`` excludes only the Perron eigenvalue 1 (bipartite
    graphs then give lambda_star = -1 and an infinite relaxation time);
    ``paper`` additionally excludes everything within 1e-9 of -1 and raises
    :class:`ConventionError` when nothing remains.
    """
    conv = normalize_convention(convention)
    g, alpha = ts.graph, ts.alpha
    a_alpha = g.adjacency() + alpha / g.n
    d_alpha = g.degrees() + alpha
    s = 1.0 / np.sqrt(d_alpha)
    sym = s[:, None] * a_alpha * s[None, :]
    sym = (sym + sym.T) / 2.0
    try:
        w, u = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver failed to converge: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    w = w[order]
    u = u[:, order]
    if w[0] > 1.0 + 1e-10 or w[-1] < -1.0 - 1e-10:
        raise NumericalError(f"eigenvalues escaped [-1, 1]: range [{w[-1]}, {w[0]}]")
    unit = np.flatnonzero(np.abs(w - 1.0) <= TOL_UNIT)
    if len(unit) != 1:
        raise NumericalError(
            f"expected exactly one unit eigenvalue, found {len(unit)} (disconnected input?)"
        )
    perron = int(unit[0])

    vecs = s[:, None] * u  # columns are D(alpha)-orthonormal eigenvectors of P(alpha)

    candidates = np.ones(g.n, dtype=bool)
    candidates[perron] = False
    if conv == PAPER:
        candidates &= np.abs(w - 1.0) > TOL_UNIT
        candidates &= np.abs(w + 1.0) > TOL_UNIT
    if not candidates.any():
        raise ConventionError(
            "no admissible eigenvalue under the paper-literal convention "
            "(all non-Perron eigenvalues are within 1e-9 of -1 or +1)"
        )
    cidx = np.flatnonzero(candidates)
    mods = np.abs(w[cidx])
    mstar = float(mods.max())
    level = cidx[np.abs(mods - mstar) <= TOL_TIE]
    plus = [i for i in level if w[i] > 0.0]
    minus = [i for i in level if w[i] <= 0.0]
    tied = mstar > TOL_TIE and bool(plus) and bool(minus)
    # among the level pick the largest signed eigenvalue, first occurrence
    star_index = int(level[np.argmax(w[level])])
    lambda_star = float(w[star_index])

    v = vecs[:, star_index].copy()
    v /= np.linalg.norm(v)
    if v[int(np.argmax(np.abs(v)))] < 0.0:
        v = -v

    others = np.arange(g.n) != perron
    near_unit = bool(np.any(others & ((np.abs(w - 1.0) <= TOL_UNIT) | (np.abs(w + 1.0) <= TOL_UNIT))))

    gap, t_rel = _gap_trel(lambda_star)
    return SpectralSummary(
        alpha=alpha,
        convention=conv,
        eigenvalues=w,
        eigenvectors=vecs,
        candidates=candidates,
        lambda_star=lambda_star,
        star_index=star_index,
        v_star=v,
        gap=gap,
        t_rel=t_rel,
        degenerate_multiplicity=int(len(level)),
        tied_sign=tied,
        near_unit=near_unit,
    )


def relaxation(summary_or_lambda) -> tuple[float, float]:
    """(spectral gap, relaxation time) for a summary or a bare lambda_star value."""
    lam = summary_or_lambda.lambda_star if isinstance(summary_or_lambda, SpectralSummary) else float(summary_or_lambda)
    return _gap_trel(lam)


def mixing_time_bounds(t_rel: float, pi_min: float, epsilon: float) -> tuple[float, float]:
    """Two-sided mixing-time bounds from the relaxation time.

    lower = (ln(1/eps) + ln(1/2)) (t_rel - 1),
    upper = (ln(1/eps) + ln(1/pi_min)) t_rel, natural logarithms.
    """
    if not 0.0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if not 0.0 < pi_min < 1.0:
        raise ValueError(f"pi_min must lie in (0, 1), got {pi_min}")
    if not math.isfinite(t_rel) or t_rel < 1.0:
        raise ValueError(f"t_rel must be finite and >= 1, got {t_rel}")
    lower = (math.log(1.0 / epsilon) + math.log(0.5)) * (t_rel - 1.0)
    upper = (math.log(1.0 / epsilon) + math.log(1.0 / pi_min)) * t_rel
    return lower, upper


def dobrushin(ts: TransitionSystem) -> float:
    """Dobrushin ergodic coefficient: half the max total-variation row distance."""
    p = ts.P
    diff = np.abs(p[:, None, :] - p[None, :, :]).sum(axis=2)
    return float(diff.max()) / 2.0


def dobrushin_min_form(ts: TransitionSystem) -> float:
    """Equivalent overlap form 1 - min_{i,j} sum_k min(p_ik, p_jk); tested against :func:`dobrushin`."""
    p = ts.P
    overlap = np.minimum(p[:, None, :], p[None, :, :]).sum(axis=2)
    return 1.0 - float(overlap.min())


def dobrushin_bound(alpha: float, d_max: float) -> float:
    """Lower bound alpha / (d_max + alpha) on the spectral gap of P(alpha)."""
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if d_max <= 0.0:
        raise ValueError(f"d_max must be > 0, got {d_max}")
    return alpha / (d_max + alpha)


def alpha_bar_closed_form(gamma0: float, d_max: float) -> float:
    """Smallest alpha whose Dobrushin bound exceeds gamma0: gamma0 d_max / (1 - gamma0)."""
    if gamma0 >= 1.0:
        return math.inf
    return gamma0 * d_max / (1.0 - gamma0)


@dataclass(frozen=True)
class AlphaBar:
    """Jump rates beyond which the gap provably / empirically beats the alpha=0 gap."""

    gamma0: float
    closed_form: float
    searched: float | None


def alpha_bar(g: WeightedGraph, convention: str = SLEM, grid: Sequence[float] | None = None) -> AlphaBar:
    """Closed-form and grid-searched improvement thresholds for the jump rate.

    ``closed_form`` makes the Dobrushin bound exceed the alpha=0 gap (infinite
    when that gap is already 1); ``searched`` is the smallest grid point whose
    recomputed gap actually beats it (None if none does). Default grid:
    64 log-spaced points in [1e-3, 1e3].
    """
    conv = normalize_convention(convention)
    base = spectrum(build_transition(g, 0.0), conv)
    gamma0 = base.gap
    d_max = float(g.degrees().max())
    closed = alpha_bar_closed_form(gamma0, d_max)
    if grid is None:
        grid = np.logspace(-3.0, 3.0, 64)
    searched = None
    for a in grid:
        if spectrum(build_transition(g, float(a)), conv).gap > gamma0:
            searched = float(a)
            break
    return AlphaBar(gamma0=gamma0, closed_form=closed, searched=searched)


def track_branch(
    g: WeightedGraph,
    alpha_grid: Sequence[float],
    v_ref: np.ndarray,
) -> list[tuple[float, float, np.ndarray]]:
    """Follow one eigenvalue branch along an ascending alpha grid.

    At each alpha the eigenpair whose eigenvector has the largest absolute
    D(alpha)-weighted overlap with the previously tracked vector is selected;
    an overlap below 0.5 raises :class:`BranchCrossingError` (refine the grid).
    When the matched eigenvalue sits in a (near-)degenerate group, the
    continuation vector is the projection of the previous vector onto that
    group's eigenspace and the reported eigenvalue is the projection-weighted
    group average, which keeps tracking well defined through exact symmetry
    degeneracies. Returns (alpha, eigenvalue, eigenvector) per grid point,
    eigenvectors sign-aligned along the branch.
    """
    alphas = [float(a) for a in alpha_grid]
    if not alphas:
        raise ValueError("alpha grid is empty")
    if any(a < 0.0 for a in alphas):
        raise ValueError("alpha grid must be nonnegative")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alpha grid must be strictly ascending")
    a_base = g.adjacency()
    d_base = a_base.sum(axis=1)
    v_prev = np.asarray(v_ref, dtype=float)
    out: list[tuple[float, float, np.ndarray]] = []
    for alpha in alphas:
        d_alpha = d_base + alpha
        s = np.sqrt(d_alpha)
        sym = (1.0 / s)[:, None] * (a_base + alpha / g.n) * (1.0 / s)[None, :]
        sym = (sym + sym.T) / 2.0
        try:
            w, u = np.linalg.eigh(sym)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"symmetric eigensolver failed to converge: {exc}") from exc
        u_prev = s * v_prev
        u_prev /= np.linalg.norm(u_prev)
        overlaps = u.T @ u_prev
        j = int(np.argmax(np.abs(overlaps)))
        group = np.flatnonzero(np.abs(w - w[j]) <= TOL_TIE)
        coeff = overlaps[group]
        total = float(np.linalg.norm(coeff))
        if total < 0.5:
            raise BranchCrossingError(
                f"branch lost at alpha={alpha}: best overlap {total:.3f} < 0.5"
            )
        u_new = u[:, group] @ coeff
        u_new /= np.linalg.norm(u_new)
        lam = float((coeff * coeff) @ w[group] / (coeff @ coeff))
        v = u_new / s
        out.append((alpha, lam, v))
        v_prev = v
    return out
