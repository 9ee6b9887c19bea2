"""Sufficient conditions for small-jump improvement, and the Rayleigh minimum they rest on.

Every condition below compares the alpha=0 spectral gap against a threshold
that only uses coarse graph data:

* gap < 1/n                                    (smallest, always sound)
* gap < min(#negative, #positive entries)/n    (cluster form, uses v_star signs)
* gap < c * d_mean^2 / second_moment(d)        (degree irregularity form)
* gap < c * d_mean / d_max                     (weakest, easiest to check)

The degree forms come with two constants: the published one (c = 4) and the
sharp one (c = 1) that the constrained Rayleigh minimum actually certifies.
Implication tests run against the sharp constants; the published constant is
reported and audited, never asserted sound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import DegreeStats, WeightedGraph, degree_stats
from .perturb import NandS, TOL_SIGN, nand_s_check
from .spectral import (
    AlphaBar,
    SLEM,
    SpectralSummary,
    alpha_bar,
    build_transition,
    normalize_convention,
    spectrum,
)

PAPER_CONSTANT = 4.0
SHARP_CONSTANT = 1.0


@dataclass(frozen=True)
class Verdict:
    threshold: float
    holds: bool


@dataclass(frozen=True)
class Cor2Verdict:
    mu: float
    threshold: float
    holds: bool


def corollary1(gamma: float, n: int) -> Verdict:
    """gap < 1/n."""
    return Verdict(threshold=1.0 / n, holds=bool(gamma < 1.0 / n))


def corollary2(gamma: float, v_star: np.ndarray) -> Cor2Verdict:
    """gap < min(mu, 1 - mu) with mu the proportion of negative eigenvector entries.

    Entries within 1e-12 * max|v| of zero are counted in neither class, and
    the threshold uses min(#negative, #positive)/n, which can only shrink it;
    this keeps the condition sound in the presence of dead entries.
    """
    v = np.asarray(v_star, dtype=float)
    band = 1e-12 * float(np.abs(v).max())
    neg = int((v < -band).sum())
    pos = int((v > band).sum())
    if neg + pos == 0:
        raise ValueError("eigenvector has no entries outside the dead band")
    n = len(v)
    mu = neg / n
    threshold = min(neg, pos) / n
    return Cor2Verdict(mu=mu, threshold=threshold, holds=bool(gamma < threshold))


def theorem2(gamma: float, stats: DegreeStats, constant: str = "sharp") -> Verdict:
    """gap < c * d_mean^2 / second_moment(d), c = 4 (paper) or 1 (sharp)."""
    c = _constant(constant)
    threshold = c * stats.snr
    return Verdict(threshold=threshold, holds=bool(gamma < threshold))


def corollary4(gamma: float, stats: DegreeStats, constant: str = "sharp") -> Verdict:
    """gap < c * d_mean / d_max, c = 4 (paper) or 1 (sharp)."""
    c = _constant(constant)
    threshold = c * stats.d_mean / stats.d_max
    return Verdict(threshold=threshold, holds=bool(gamma < threshold))


def _constant(constant: str) -> float:
    if constant == "paper":
        return PAPER_CONSTANT
    if constant == "sharp":
        return SHARP_CONSTANT
    raise ValueError(f"constant must be 'paper' or 'sharp', got {constant!r}")


def rayleigh_minimum(stats: DegreeStats) -> tuple[float, np.ndarray]:
    """Minimum of f^T L_K f / (n f^T f) over unit f with f . d = 0, and its minimiser.

    L_K = nI - 11^T is the complete-graph Laplacian. The minimum equals
    d_mean^2 / second_moment(d) and is attained by the normalised projection
    of the all-ones vector onto the hyperplane orthogonal to d; for regular
    degree vectors every feasible f attains it.
    """
    d = np.asarray(stats.d, dtype=float)
    n = len(d)
    min_value = float(d.sum() ** 2 / (n * (d * d).sum()))
    raw = 1.0 - (d.sum() / (d * d).sum()) * d
    norm = np.linalg.norm(raw)
    if norm < 1e-12 * np.sqrt(n):
        # regular degrees: the ones vector lies along d, any unit f with f.d=0 works
        f = np.zeros(n)
        f[0], f[1] = 1.0, -1.0
        f /= np.linalg.norm(f)
    else:
        f = raw / norm
    return min_value, f


@dataclass(frozen=True, eq=False)
class ConditionReport:
    """Every condition evaluated on one graph at alpha = 0."""

    convention: str
    n: int
    gamma: float
    lambda_star: float
    lambda_star_simple: bool  # simple and not sign-tied at its modulus level
    cor1: Verdict
    cor2: Cor2Verdict
    thm2_paper: Verdict
    thm2_sharp: Verdict
    cor4_paper: Verdict
    cor4_sharp: Verdict
    nand_s: NandS | None      # None when lambda_star <= 0
    rayleigh_min: float
    alpha_bar: AlphaBar | None
    consistency: tuple[str, ...]      # implication violations; empty means consistent
    paper_constant_witness: bool      # thm2 with the published constant held but NandS failed


def full_report(
    g: WeightedGraph,
    convention: str = SLEM,
    summary: SpectralSummary | None = None,
    search_alpha_bar: bool = True,
) -> ConditionReport:
    """Evaluate the whole condition ladder plus the improvement-threshold rates.

    For a simple positive lambda_star every sharp sufficient condition that
    holds must be matched by the necessary-and-sufficient condition; any
    violation is surfaced in ``consistency`` (and would indicate a bug, these
    implications are theorems).
    """
    conv = normalize_convention(convention)
    if summary is None:
        summary = spectrum(build_transition(g, 0.0), conv)
    stats = degree_stats(g)
    gamma = summary.gap
    lam = summary.lambda_star
    simple = summary.degenerate_multiplicity == 1 and not summary.tied_sign

    c1 = corollary1(gamma, g.n)
    c2 = corollary2(gamma, summary.v_star)
    t2p = theorem2(gamma, stats, "paper")
    t2s = theorem2(gamma, stats, "sharp")
    c4p = corollary4(gamma, stats, "paper")
    c4s = corollary4(gamma, stats, "sharp")
    nand = nand_s_check(lam, summary.v_star, g.n) if lam > TOL_SIGN else None
    ray_min, _ = rayleigh_minimum(stats)
    bar = alpha_bar(g, conv) if search_alpha_bar else None

    violations: list[str] = []
    if nand is not None and simple:
        if c1.holds and not nand.holds:
            violations.append("cor1 held but NandS failed")
        if c2.holds and not nand.holds:
            violations.append("cor2 held but NandS failed")
        if t2s.holds and not nand.holds:
            violations.append("thm2(sharp) held but NandS failed")
    if c4s.holds and not t2s.holds:
        violations.append("cor4(sharp) held but thm2(sharp) failed")

    witness = bool(nand is not None and simple and t2p.holds and not nand.holds)

    return ConditionReport(
        convention=conv,
        n=g.n,
        gamma=gamma,
        lambda_star=lam,
        lambda_star_simple=simple,
        cor1=c1,
        cor2=c2,
        thm2_paper=t2p,
        thm2_sharp=t2s,
        cor4_paper=c4p,
        cor4_sharp=c4s,
        nand_s=nand,
        rayleigh_min=ray_min,
        alpha_bar=bar,
        consistency=tuple(violations),
        paper_constant_witness=witness,
    )
