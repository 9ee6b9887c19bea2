"""Counterexample hunting: two-vertex closed forms, catalog scans, random-model scans.

A counterexample is a graph whose relaxation time strictly increases for all
sufficiently small jump rates. Candidates are found by the first-order
classification and only reported after a direct branch-tracked sweep confirms
the gap really shrinks at alpha in {1e-3, 1e-2}; the two confirmations
(derivative sign and sweep) are independent.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .conditions import full_report
from .errors import DisconnectedGraphError, GenerationError, GraphFormatError
from .graphs import WeightedGraph, generate, parse_graph6, write_edgelist
from .perturb import (
    IMPROVES,
    TOL_SIGN,
    TOL_STATIONARY,
    WORSENS,
    classify_small_alpha,
    sweep_confirms,
)
from .spectral import SLEM, build_transition, normalize_convention, spectrum

SWEEP_ALPHAS = (1e-3, 1e-2)


# ---------------------------------------------------------------------------
# weighted two-vertex graphs: everything in closed form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoNodeParams:
    """Weights of the two-vertex graph [[a11, a12], [a12, a22]]; a12 > 0 keeps it connected."""

    a11: float
    a12: float
    a22: float

    def __post_init__(self) -> None:
        if self.a12 <= 0.0:
            raise GraphFormatError(f"a12 must be > 0 for connectivity, got {self.a12}")
        if self.a11 < 0.0 or self.a22 < 0.0:
            raise GraphFormatError("self-loop weights must be nonnegative")

    def graph(self) -> WeightedGraph:
        edges = [(0, 1, self.a12)]
        if self.a11 > 0.0:
            edges.append((0, 0, self.a11))
        if self.a22 > 0.0:
            edges.append((1, 1, self.a22))
        return WeightedGraph(2, tuple(edges), name=f"two-node({self.a11:g},{self.a12:g},{self.a22:g})")


@dataclass(frozen=True, eq=False)
class TwoNodeClosedForm:
    lambda_star: float
    v_star: np.ndarray
    numerator: float      # (1/2)(1^T v)^2 - lambda v^T v, via the explicit expansion
    lambda_first: float   # numerator / (v^T D v)


def two_node_closed_form(p: TwoNodeParams) -> TwoNodeClosedForm:
    """Closed-form non-unit eigenpair and first-order term for the two-vertex graph.

    lambda_star = det(A) / ((a11+a12)(a22+a12)), eigenvector (1, -(a11+a12)/(a22+a12)),
    and the numerator of the first-order term expands to

        [(a22-a11)^2 (a11+a12)(a22+a12) - 2 det(A) ((a11+a12)^2 + (a22+a12)^2)]
        / [2 (a11+a12)(a22+a12)^3].
    """
    d1 = p.a11 + p.a12
    d2 = p.a22 + p.a12
    det = p.a11 * p.a22 - p.a12 * p.a12
    lam = det / (d1 * d2)
    v = np.array([1.0, -d1 / d2])
    numerator = (
        (p.a22 - p.a11) ** 2 * d1 * d2 - 2.0 * det * (d1 * d1 + d2 * d2)
    ) / (2.0 * d1 * d2 ** 3)
    vdv = d1 * v[0] * v[0] + d2 * v[1] * v[1]
    return TwoNodeClosedForm(
        lambda_star=float(lam), v_star=v, numerator=float(numerator),
        lambda_first=float(numerator / vdv),
    )


# ---------------------------------------------------------------------------
# scan records
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScanRecord:
    """Per-graph verdict row."""

    id: str
    n: int
    convention: str
    lambda_star: float
    lambda_first: float
    classification: str
    margin: float                      # d(gap)/dalpha at 0+; negative for WORSENS
    cor1: bool
    cor2: bool
    thm2_sharp: bool
    cor4_sharp: bool
    nand_s: bool | None
    degenerate: bool
    tied_sign: bool
    stationary: bool
    near_unit: bool
    sweep_confirmed: bool | None       # None unless classified WORSENS
    consistency_violations: tuple[str, ...] = ()
    paper_constant_witness: bool = False
    edges: tuple[tuple[int, int, float], ...] = ()

    def flags(self) -> str:
        toks = []
        if self.degenerate:
            toks.append("degenerate")
        if self.tied_sign:
            toks.append("tied")
        if self.stationary:
            toks.append("stationary")
        if self.near_unit:
            toks.append("near_unit")
        if self.sweep_confirmed is True:
            toks.append("sweep_confirmed")
        elif self.sweep_confirmed is False:
            toks.append("sweep_unconfirmed")
        if self.consistency_violations:
            toks.append("inconsistent")
        if self.paper_constant_witness:
            toks.append("paper_constant_witness")
        return "|".join(toks)


@dataclass(eq=False)
class ScanSummary:
    """Aggregate of one scan run."""

    provenance: str
    convention: str
    total: int = 0
    classified: int = 0
    skipped: int = 0
    counterexamples: int = 0
    worsens_unconfirmed: int = 0
    degenerate: int = 0
    tied: int = 0
    stationary: int = 0
    paper_constant_witnesses: int = 0
    consistency_violations: int = 0
    min_margin_records: tuple[ScanRecord, ...] = ()
    elapsed: float = 0.0


def analyze_graph(g: WeightedGraph, convention: str = SLEM, graph_id: str | None = None,
                  search_alpha_bar: bool = True) -> ScanRecord:
    """Classify one graph and evaluate its condition ladder; sweep-confirm WORSENS verdicts."""
    conv = normalize_convention(convention)
    summary = spectrum(build_transition(g, 0.0), conv)
    report = classify_small_alpha(g, conv, summary=summary)
    cond = full_report(g, conv, summary=summary, search_alpha_bar=search_alpha_bar)
    confirmed = None
    if report.classification == WORSENS:
        confirmed = sweep_confirms(g, summary, worsens=True, alphas=SWEEP_ALPHAS)
    return ScanRecord(
        id=graph_id or g.name or "<anonymous>",
        n=g.n,
        convention=conv,
        lambda_star=report.lambda_star,
        lambda_first=report.lambda_first,
        classification=report.classification,
        margin=report.gap_derivative,
        cor1=cond.cor1.holds,
        cor2=cond.cor2.holds,
        thm2_sharp=cond.thm2_sharp.holds,
        cor4_sharp=cond.cor4_sharp.holds,
        nand_s=None if cond.nand_s is None else cond.nand_s.holds,
        degenerate=report.degenerate,
        tied_sign=report.tied_sign,
        stationary=report.stationary,
        near_unit=summary.near_unit,
        sweep_confirmed=confirmed,
        consistency_violations=cond.consistency,
        paper_constant_witness=cond.paper_constant_witness,
        edges=g.edges,
    )


def _scan_graph6_line(convention: str, payload: tuple[int, bytes]):
    idx, line = payload
    try:
        g = parse_graph6(line)
    except DisconnectedGraphError as exc:
        return idx, None, f"disconnected: {exc}"
    except GraphFormatError as exc:
        return idx, None, f"malformed: {exc}"
    return idx, analyze_graph(g, convention), None


def _scan_generated(convention: str, model: str, params: dict, payload: tuple[int, int]):
    idx, seed = payload
    try:
        g = generate(model, seed=seed, **params)
    except GenerationError as exc:
        return idx, None, f"generation failed: {exc}"
    return idx, analyze_graph(g, convention), None


def _finalize(
    provenance: str,
    convention: str,
    results: Iterable[tuple[int, ScanRecord | None, str | None]],
    top_k: int,
    started: float,
    dump_dir: str | Path | None,
) -> tuple[ScanSummary, list[ScanRecord]]:
    summary = ScanSummary(provenance=provenance, convention=convention)
    all_records: list[ScanRecord] = []
    for _idx, record, _skip_reason in sorted(results, key=lambda r: r[0]):
        summary.total += 1
        if record is None:
            summary.skipped += 1
            continue
        summary.classified += 1
        summary.degenerate += record.degenerate
        summary.tied += record.tied_sign
        summary.stationary += record.stationary
        summary.paper_constant_witnesses += record.paper_constant_witness
        summary.consistency_violations += bool(record.consistency_violations)
        if record.classification == WORSENS:
            if record.sweep_confirmed:
                summary.counterexamples += 1
            else:
                summary.worsens_unconfirmed += 1
        all_records.append(record)
    worsens = [r for r in all_records if r.classification == WORSENS]
    improves = [r for r in all_records if r.classification == IMPROVES]
    improves.sort(key=lambda r: r.margin)
    closest = tuple(improves[:top_k])
    summary.min_margin_records = closest
    summary.elapsed = time.perf_counter() - started
    if dump_dir is not None and worsens:
        dump_counterexamples(worsens, dump_dir)
    return summary, worsens + list(closest)


def _run(worker, payloads, parallelism: int):
    if parallelism <= 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        chunk = max(1, len(payloads) // (4 * parallelism))
        return list(pool.map(worker, payloads, chunksize=chunk))


def dump_counterexamples(records: Sequence[ScanRecord], dump_dir: str | Path) -> list[Path]:
    """Write each WORSENS record as a weighted edge-list file plus a report line."""
    out_dir = Path(dump_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    report_lines = []
    for i, r in enumerate(records):
        g = WeightedGraph(r.n, r.edges, name=r.id)
        path = out_dir / f"counterexample_{i:04d}.el"
        path.write_text(write_edgelist(g, comments=[f"id: {r.id}", f"convention: {r.convention}"]))
        written.append(path)
        report_lines.append(
            f"{path.name}: id={r.id} lambda_star={float(r.lambda_star)!r} "
            f"lambda_first={float(r.lambda_first)!r} margin={float(r.margin)!r} flags={r.flags()}"
        )
    (out_dir / "counterexamples.txt").write_text("\n".join(report_lines) + "\n")
    return written


def _read_graph6_lines(source) -> tuple[str, list[bytes]]:
    if isinstance(source, (str, Path)):
        provenance = str(source)
        raw = Path(source).read_bytes().splitlines()
    elif hasattr(source, "read"):
        provenance = getattr(source, "name", "<stream>")
        data = source.read()
        if isinstance(data, str):
            data = data.encode("ascii")
        raw = data.splitlines()
    else:
        provenance = "<lines>"
        raw = [line.encode("ascii") if isinstance(line, str) else bytes(line) for line in source]
    return provenance, [line for line in raw if line.strip()]


def scan_catalog(
    source,
    convention: str = SLEM,
    limit: int | None = None,
    top_k: int = 10,
    parallelism: int = 1,
    dump_dir: str | Path | None = None,
) -> tuple[ScanSummary, list[ScanRecord]]:
    """Scan a graph6 catalog (path, stream, or iterable of lines).

    Disconnected and malformed lines are counted as skips. Output is ordered
    by input position regardless of parallelism; records contain every
    (confirmed or not) WORSENS graph plus the top-k smallest-margin IMPROVES.
    """
    conv = normalize_convention(convention)
    started = time.perf_counter()
    provenance, lines = _read_graph6_lines(source)
    if limit is not None:
        lines = lines[:limit]
    worker = partial(_scan_graph6_line, conv)
    results = _run(worker, list(enumerate(lines)), parallelism)
    return _finalize(provenance, conv, results, top_k, started, dump_dir)


def scan_random(
    model: str,
    params: dict,
    count: int,
    seed: int = 0,
    convention: str = SLEM,
    top_k: int = 10,
    parallelism: int = 1,
    dump_dir: str | Path | None = None,
) -> tuple[ScanSummary, list[ScanRecord]]:
    """Scan ``count`` seeded random graphs; graph i uses seed ``seed + i``.

    Fully reproducible from (model, params, seed); generator connectivity
    failures count as skips.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    conv = normalize_convention(convention)
    started = time.perf_counter()
    provenance = f"{model}({params},seed={seed},count={count})"
    worker = partial(_scan_generated, conv, model, dict(params))
    payloads = [(i, seed + i) for i in range(count)]
    results = _run(worker, payloads, parallelism)
    return _finalize(provenance, conv, results, top_k, started, dump_dir)


# ---------------------------------------------------------------------------
# two-node grid search
# ---------------------------------------------------------------------------

def _classify_two_node(cf: TwoNodeClosedForm) -> tuple[str, float, bool]:
    """(classification, gap derivative, stationary) from the closed forms.

    Same rules as the spectral classification; the non-unit eigenvalue of a
    two-vertex graph is always simple so no branch machinery is needed.
    """
    lam, lam1 = cf.lambda_star, cf.lambda_first
    if abs(lam) <= TOL_SIGN:
        rate = abs(lam1)
        stationary = rate <= TOL_STATIONARY
        return (IMPROVES if stationary else WORSENS), -rate, stationary
    rate = lam1 if lam > 0.0 else -lam1
    return (IMPROVES if rate < 0.0 else WORSENS), -rate, False


def two_node_grid_search(
    a11_values: Sequence[float],
    a12_values: Sequence[float],
    a22_values: Sequence[float],
) -> list[ScanRecord]:
    """Classify every grid point via the closed forms; return the WORSENS records.

    The worsening region sits where det(A) is at or near zero with unequal
    self-loops, on the lambda_star >= 0 side.
    """
    if not (len(a11_values) and len(a12_values) and len(a22_values)):
        raise ValueError("empty two-node grid")
    records = []
    for a11 in a11_values:
        for a12 in a12_values:
            for a22 in a22_values:
                p = TwoNodeParams(float(a11), float(a12), float(a22))
                cf = two_node_closed_form(p)
                classification, margin, stationary = _classify_two_node(cf)
                if classification != WORSENS:
                    continue
                g = p.graph()
                summary = spectrum(build_transition(g, 0.0), SLEM)
                confirmed = sweep_confirms(g, summary, worsens=True, alphas=SWEEP_ALPHAS)
                cond = full_report(g, SLEM, summary=summary, search_alpha_bar=False)
                records.append(
                    ScanRecord(
                        id=g.name or "two-node",
                        n=2,
                        convention=SLEM,
                        lambda_star=cf.lambda_star,
                        lambda_first=cf.lambda_first,
                        classification=classification,
                        margin=margin,
                        cor1=cond.cor1.holds,
                        cor2=cond.cor2.holds,
                        thm2_sharp=cond.thm2_sharp.holds,
                        cor4_sharp=cond.cor4_sharp.holds,
                        nand_s=None if cond.nand_s is None else cond.nand_s.holds,
                        degenerate=False,
                        tied_sign=False,
                        stationary=stationary,
                        near_unit=summary.near_unit,
                        sweep_confirmed=confirmed,
                        edges=g.edges,
                    )
                )
    return records


def default_parallelism() -> int:
    """Worker count for scans; the RWJ_THREADS environment variable overrides."""
    env = os.environ.get("RWJ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"RWJ_THREADS must be an integer, got {env!r}")
    return 1
