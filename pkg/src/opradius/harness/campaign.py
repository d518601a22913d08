"""Verification campaigns over random ensembles."""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import bounds
from ..errors import InvalidSpec
from . import properties as P
from .ensembles import EnsembleSpec, draw, trial_rng

QUANTILES = (0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0)
_NEEDS_BOUNDS = {"soundness", "refinement", "derivation_chain", "integral_chain_pair",
                 "integral_chain", "fixed_point"}


@dataclass
class VerificationReport:
    specs: list
    properties: list
    records: list
    summary: dict
    wall_time: float = field(default=0.0, compare=False)

    @property
    def violation_count(self) -> int:
        return self.summary["violation_count"]

    @property
    def error_count(self) -> int:
        return self.summary["error_count"]

    def to_dict(self) -> dict:
        """Deterministic content only; wall time is kept out so identical
        campaigns serialize identically."""
        return {"specs": [s.to_dict() for s in self.specs], "properties": list(self.properties),
                "summary": self.summary, "records": self.records}


def parse_properties(selection) -> list[str]:
    """``"all"``, a comma-separated string, or an iterable of property names."""
    if selection is None or selection == "all":
        return list(P.PROPERTIES)
    if isinstance(selection, str):
        selection = [s for s in (p.strip() for p in selection.split(",")) if s]
    out = []
    for p in selection:
        if p == "all":
            return list(P.PROPERTIES)
        if p not in P.PROPERTIES:
            raise InvalidSpec(f"unknown property {p!r}; expected one of {', '.join(P.PROPERTIES)}")
        if p not in out:
            out.append(p)
    return [p for p in P.PROPERTIES if p in out]


def run_trial(spec: EnsembleSpec, index: int, props) -> dict:
    """Evaluate the selected properties on one trial.  Never raises: failures
    are recorded under ``errors``."""
    trial = draw(spec, index)
    rec = P.Recorder()
    errors = []
    record = {"ensemble": spec.label, "trial": index, "params": {"t": trial.t, "r": trial.r}}
    # a stream separate from the one that drew the matrices, for lemma vectors
    aux = np.random.default_rng(trial_rng(spec, index).integers(0, 2**63))

    def guard(name, fn, *args):
        try:
            fn(*args)
        except Exception as exc:  # aggregated, the campaign carries on
            errors.append([name, f"{type(exc).__name__}: {exc}"])

    results, refs, scales, by_id = [], {}, {}, {}
    if _NEEDS_BOUNDS & set(props) or "product_chain" in props:
        try:
            cx = P.context_for(trial)
            refs = P.references(cx)
            scales = {k: P.target_scale(k, cx) for k in refs}
            record["references"] = {k: [v.lower, v.upper] for k, v in sorted(refs.items())}
        except Exception as exc:
            errors.append(["references", f"{type(exc).__name__}: {exc}"])
            cx = None
        if cx is not None and _NEEDS_BOUNDS & set(props):
            for id in bounds.applicable_ids(cx):
                try:
                    results.extend(bounds.evaluate_many([id], cx))
                except Exception as exc:
                    errors.append([id, f"{type(exc).__name__}: {exc}"])
            by_id = {r.id: r for r in results}
            rows = []
            for res in results:
                row = res.to_dict()
                row["slack"] = P.slack_of(res, refs[res.target])
                rows.append(row)
            record["bounds"] = rows

    checks = {
        "soundness": lambda: P.check_soundness(rec, results, refs, scales),
        "refinement": lambda: P.check_refinement(rec, by_id, scales),
        "derivation_chain": lambda: P.check_derivation_chain(rec, by_id, refs, scales),
        "product_chain": lambda: P.check_product_chain(rec, cx, refs, scales),
        "integral_chain_pair": lambda: P.check_integral_chain_pair(rec, by_id, refs, scales),
        "integral_chain": lambda: P.check_integral_chain(rec, by_id, refs, scales),
        "fixed_point": lambda: P.check_fixed_point(rec, by_id, refs, scales),
        "lemmas": lambda: P.check_lemmas(rec, trial, aux),
        "equality": lambda: P.check_equality(rec, trial),
        "homogeneity": lambda: P.check_homogeneity(rec, trial),
    }
    for name in props:
        if name in _NEEDS_BOUNDS | {"product_chain"} and not refs:
            continue
        guard(name, checks[name])
    record["violations"] = rec.violations
    record["warnings"] = rec.warnings
    record["errors"] = errors
    return record


def _run_chunk(tasks):
    return [(si, k, run_trial(spec, k, props)) for si, spec, k, props in tasks]


def _quantiles(values) -> dict:
    if not values:
        return {}
    q = np.quantile(np.asarray(values, dtype=float), QUANTILES)
    return {f"{p:g}": float(v) for p, v in zip(QUANTILES, q)}


def summarize(records, props) -> dict:
    slacks, by_prop = {}, {p: 0 for p in props}
    violations = warnings = errors = 0
    for rec in records:
        for row in rec.get("bounds", ()):
            slacks.setdefault(row["id"], []).append(row["slack"])
        for v in rec["violations"]:
            by_prop[v[0]] = by_prop.get(v[0], 0) + 1
        violations += len(rec["violations"])
        warnings += len(rec["warnings"])
        errors += len(rec["errors"])
    return {
        "trials": len(records),
        "violation_count": violations,
        "warning_count": warnings,
        "error_count": errors,
        "violations_by_property": by_prop,
        "bounds": {id: {"count": len(v), "slack_quantiles": _quantiles(v)}
                   for id, v in sorted(slacks.items())},
    }


def run_campaign(specs, properties="all", workers: int | None = 1,
                 chunk_size: int = 8) -> VerificationReport:
    """Run every selected property on every trial of every spec.

    ``workers`` > 1 spreads trials over a process pool; ``None`` uses one
    process per CPU.  Records are sorted by (spec position, trial index), so
    the report does not depend on scheduling.
    """
    specs = list(specs)
    for s in specs:
        if not isinstance(s, EnsembleSpec):
            raise InvalidSpec(f"expected EnsembleSpec, got {type(s).__name__}")
    props = parse_properties(properties)
    start = time.perf_counter()
    if not props:
        return VerificationReport(specs, [], [], summarize([], []), time.perf_counter() - start)

    tasks = [(si, spec, k, props) for si, spec in enumerate(specs) for k in range(spec.trials)]
    chunks = [tasks[i:i + chunk_size] for i in range(0, len(tasks), chunk_size)]
    workers = (os.cpu_count() or 1) if workers is None else max(1, int(workers))
    if workers == 1 or len(chunks) <= 1:
        out = [r for c in chunks for r in _run_chunk(c)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = [r for part in pool.map(_run_chunk, chunks) for r in part]
    out.sort(key=lambda x: (x[0], x[1]))
    records = [r for _, _, r in out]
    return VerificationReport(specs, props, records, summarize(records, props),
                              time.perf_counter() - start)
