"""First-order behaviour of the selected eigenvalue as the jump rate leaves zero.

For an eigenpair (lambda, v) of P = D^{-1}A the branch lambda(alpha) through
it satisfies

    lambda'(0) = [ (1/n)(1^T v)^2 - lambda v^T v ] / (v^T D v),

and the relaxation time improves for small alpha iff the modulus of the
governing eigenvalue decreases. The denominator is always positive; for
lambda < 0 the numerator is positive too, so those branches always rise
(improvement). For lambda > 0 improvement is equivalent to

    (1/n)(1^T v)^2 < lambda v^T v.

Degenerate levels are handled by the reduced pencil V^T((1/n)11^T - lambda I)V
over a D-orthonormalised eigenbasis V, whose eigenvalues are the per-branch
derivatives; the worst branch governs the modulus and hence the classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NumericalError
from .graphs import WeightedGraph
from .spectral import (
    SLEM,
    SpectralSummary,
    TOL_TIE,
    build_transition,
    normalize_convention,
    spectrum,
    track_branch,
)

IMPROVES = "IMPROVES"
WORSENS = "WORSENS"

TOL_SIGN = 1e-9        # |lambda_star| below this routes to the zero case
TOL_STATIONARY = 1e-12  # branch derivatives below this count as exactly zero


def lambda_first_order(g: WeightedGraph, lambda_star: float, v_star: np.ndarray) -> float:
    """First-order eigenvalue derivative along a simple branch.

    Scale-invariant in v_star. The pair must solve A v = lambda D v; a cheap
    residual check guards against mismatched input.
    """
    v = np.asarray(v_star, dtype=float)
    a = g.adjacency()
    d = a.sum(axis=1)
    resid = np.linalg.norm(a @ v - lambda_star * d * v)
    if resid > 1e-7 * np.linalg.norm(d * v):
        raise ValueError(f"(lambda, v) is not an eigenpair of D^-1 A (residual {resid:.2e})")
    num = (v.sum() ** 2) / g.n - lambda_star * float(v @ v)
    den = float(v @ (d * v))
    return num / den


def degenerate_first_order(g: WeightedGraph, lambda_star: float, basis: np.ndarray) -> np.ndarray:
    """Branch derivatives of a (possibly) multiple eigenvalue, ascending.

    ``basis`` columns must span the eigenspace and be D-orthonormal
    (V^T D V = I). Returns the eigenvalues of V^T((1/n)11^T - lambda I)V;
    for a single column this equals :func:`lambda_first_order` exactly.
    """
    v = np.asarray(basis, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if v.ndim != 2 or v.shape[0] != g.n or v.shape[1] < 1:
        raise ValueError(f"basis must be n x k with n={g.n}, got shape {v.shape}")
    a = g.adjacency()
    d = a.sum(axis=1)
    gram = v.T @ (d[:, None] * v)
    if np.abs(gram - np.eye(v.shape[1])).max() > 1e-10:
        raise ValueError("basis is not D-orthonormal (V^T D V != I within 1e-10)")
    resid = np.abs(a @ v - lambda_star * d[:, None] * v).max()
    if resid > 1e-7:
        raise ValueError(f"basis does not span the eigenspace (residual {resid:.2e})")
    ones_proj = v.T @ np.ones(g.n)
    reduced = np.outer(ones_proj, ones_proj) / g.n - lambda_star * (v.T @ v)
    reduced = (reduced + reduced.T) / 2.0
    return np.linalg.eigvalsh(reduced)


def finite_difference_derivative(
    g: WeightedGraph, lambda_star: float, v_star: np.ndarray, h: float = 1e-5
) -> float:
    """One-sided second-order stencil (-3 f(0) + 4 f(h/2) - f(h)) / h along the tracked branch.

    Independent of the analytic formula; alpha >= 0 forbids central differencing.
    """
    if h <= 0.0:
        raise ValueError(f"h must be > 0, got {h}")
    branch = track_branch(g, [0.0, h / 2.0, h], v_star)
    lam0 = branch[0][1]
    if abs(lam0 - lambda_star) > 1e-8:
        raise NumericalError(
            f"tracked branch starts at {lam0}, expected lambda_star={lambda_star}"
        )
    return (-3.0 * lam0 + 4.0 * branch[1][1] - branch[2][1]) / h


class NandS(NamedTuple):
    """Improvement condition for a positive simple lambda_star, in both forms."""

    holds: bool
    lhs: float             # (1/n)(1^T v)^2
    rhs: float             # lambda_star v^T v
    laplacian_lhs: float   # 1 - lambda_star (= gap)
    laplacian_rhs: float   # v^T L_K v / (n v^T v), L_K = nI - 11^T


def nand_s_check(lambda_star: float, v_star: np.ndarray, n: int) -> NandS:
    """Evaluate (1/n)(1^T v)^2 < lambda v^T v and its complete-graph-Laplacian twin.

    Only defined for lambda_star > 0; the two boolean forms must agree
    (covered by tests). The Laplacian quadratic form equals the unordered
    pair sum over (v_i - v_j)^2.
    """
    if lambda_star <= 0.0:
        raise ValueError(f"condition requires lambda_star > 0, got {lambda_star}")
    v = np.asarray(v_star, dtype=float)
    lhs = (v.sum() ** 2) / n
    vtv = float(v @ v)
    rhs = lambda_star * vtv
    lap = n * np.eye(n) - np.ones((n, n))
    laplacian_rhs = float(v @ (lap @ v)) / (n * vtv)
    return NandS(
        holds=bool(lhs < rhs),
        lhs=float(lhs),
        rhs=float(rhs),
        laplacian_lhs=1.0 - lambda_star,
        laplacian_rhs=laplacian_rhs,
    )


@dataclass(frozen=True, eq=False)
class _Branch:
    """One eigenvalue branch at the governing modulus level."""

    level_value: float       # exact eigenvalue the branch starts from
    derivative: float        # lambda'(0) along the branch
    rate: float              # d|lambda|/dalpha contribution of the branch
    vector: np.ndarray       # adapted eigenvector (limit of the true branch)


@dataclass(frozen=True, eq=False)
class PerturbationReport:
    """Small-alpha verdict for one graph.

    ``lambda_first`` is the derivative of the governing branch; for a simple
    lambda_star it equals numerator/denominator. ``gap_derivative`` is
    d(gap)/dalpha at 0+ (positive means the relaxation time improves) and is
    the scan margin. ``branch_values`` lists derivatives of every branch at
    the governing modulus level, both signs when tied.
    """

    convention: str
    lambda_star: float
    numerator: float
    denominator: float
    lambda_first: float
    fd_estimate: float
    fd_agreement: float
    classification: str
    gap_derivative: float
    branch_values: tuple[float, ...]
    degenerate: bool
    tied_sign: bool
    stationary: bool


def _level_branches(g: WeightedGraph, summary: SpectralSummary) -> list[_Branch]:
    """All branches at the modulus level of lambda_star, with their modulus rates."""
    w = summary.eigenvalues
    vecs = summary.eigenvectors
    lam = summary.lambda_star
    cidx = np.flatnonzero(summary.candidates)
    level_idx = cidx[np.abs(np.abs(w[cidx]) - abs(lam)) <= TOL_TIE]
    zero_case = abs(lam) <= TOL_SIGN

    branches: list[_Branch] = []
    if zero_case:
        groups = [level_idx]
    else:
        groups = [
            level_idx[w[level_idx] > 0.0],
            level_idx[w[level_idx] <= 0.0],
        ]
    for idx in groups:
        if len(idx) == 0:
            continue
        level_value = float(w[idx[0]])
        basis = vecs[:, idx]
        derivs = degenerate_first_order(g, level_value, basis)
        # eigenvectors of the reduced pencil give the adapted branch vectors
        ones_proj = basis.T @ np.ones(g.n)
        reduced = np.outer(ones_proj, ones_proj) / g.n - level_value * (basis.T @ basis)
        reduced = (reduced + reduced.T) / 2.0
        _, y = np.linalg.eigh(reduced)
        for k, deriv in enumerate(derivs):
            if zero_case:
                rate = abs(deriv)
            elif level_value > 0.0:
                rate = float(deriv)
            else:
                rate = -float(deriv)
            branches.append(
                _Branch(
                    level_value=level_value,
                    derivative=float(deriv),
                    rate=rate,
                    vector=basis @ y[:, k],
                )
            )
    return branches


def classify_small_alpha(
    g: WeightedGraph,
    convention: str = SLEM,
    h: float = 1e-5,
    summary: SpectralSummary | None = None,
) -> PerturbationReport:
    """Classify whether small jump rates improve or worsen the relaxation time.

    Rules at the governing modulus level:

    * lambda_star < 0: the branch derivative is provably positive, so the
      modulus shrinks (IMPROVES);
    * lambda_star > 0: IMPROVES iff the worst branch derivative is negative,
      else WORSENS;
    * |lambda_star| <= 1e-9: |lambda(alpha)| = |alpha lambda'(0)| + O(alpha^2),
      so any nonzero branch derivative WORSENS, all-zero is stationary
      (reported IMPROVES with the stationary flag).

    Degenerate levels classify from the worst branch; sign-tied levels
    evaluate both signs and take the worst case. Every report carries a
    finite-difference cross-check along the governing branch.
    """
    conv = normalize_convention(convention)
    if summary is None:
        summary = spectrum(build_transition(g, 0.0), conv)
    lam = summary.lambda_star
    branches = _level_branches(g, summary)
    if not branches:
        raise NumericalError("no branches found at the governing level")

    worst = max(branches, key=lambda b: b.rate)
    worst_rate = worst.rate
    gap_derivative = -worst_rate
    zero_case = abs(lam) <= TOL_SIGN

    if zero_case:
        stationary = worst_rate <= TOL_STATIONARY
        classification = IMPROVES if stationary else WORSENS
    else:
        stationary = False
        classification = IMPROVES if worst_rate < 0.0 else WORSENS

    if lam < -TOL_SIGN and any(b.derivative <= 0.0 for b in branches):
        raise NumericalError(
            "negative-lambda branch with nonpositive derivative; "
            "this contradicts the positivity of the first-order term"
        )

    fd = finite_difference_derivative(g, worst.level_value, worst.vector, h)
    fd_agreement = abs(worst.derivative - fd) / max(1.0, abs(worst.derivative))

    v = summary.v_star
    d = g.degrees()
    numerator = (v.sum() ** 2) / g.n - lam * float(v @ v)
    denominator = float(v @ (d * v))

    return PerturbationReport(
        convention=conv,
        lambda_star=lam,
        numerator=float(numerator),
        denominator=denominator,
        lambda_first=worst.derivative,
        fd_estimate=float(fd),
        fd_agreement=float(fd_agreement),
        classification=classification,
        gap_derivative=float(gap_derivative),
        branch_values=tuple(float(b.derivative) for b in branches),
        degenerate=summary.degenerate_multiplicity > 1,
        tied_sign=summary.tied_sign,
        stationary=stationary,
    )


def sweep_confirms(
    g: WeightedGraph,
    summary: SpectralSummary,
    worsens: bool,
    alphas: tuple[float, ...] = (1e-3, 1e-2),
) -> bool:
    """Direct check of the classification against branch-tracked gaps.

    Tracks every branch at the governing modulus level to each test alpha and
    compares 1 - max|lambda(alpha)| with the alpha=0 gap. For a WORSENS
    verdict all test points must show a strictly smaller gap; for IMPROVES a
    strictly larger one.
    """
    branches = _level_branches(g, summary)
    gap0 = summary.gap
    for alpha in alphas:
        worst_mod = 0.0
        for b in branches:
            path = track_branch(g, [0.0, alpha / 2.0, alpha], b.vector)
            worst_mod = max(worst_mod, abs(path[-1][1]))
        gap_alpha = 1.0 - worst_mod
        if worsens and not gap_alpha < gap0:
            return False
        if not worsens and not gap_alpha > gap0:
            return False
    return True
