"""Acceptance criteria, each run at its stated sizes, seeds and time limit.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
pytest terminal summary.  Run this file directly to get only the lines.
"""

from __future__ import annotations

import json
import sys
import time

import pytest

from uqbethe.suites import BASIC_SUITES, SuiteConfig, run_suite

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # running the file directly
    ACCEPTANCE_LINES = []

SEEDS = (1, 2, 3)


def _record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def _run(names, cfg):
    start = time.perf_counter()
    reports = [run_suite(n, cfg) for n in names]
    return reports, time.perf_counter() - start


def _summary(reports) -> tuple[bool, int, int, dict | None]:
    total = sum(r["summary"]["total"] for r in reports)
    passed = sum(r["summary"]["passed"] for r in reports)
    cex = next((r["counterexample"] for r in reports if r["counterexample"]), None)
    return passed == total and total > 0, passed, total, cex


def _nonzero_ranks(reports) -> set:
    return {c["params"]["N"] for r in reports for c in r["checks"] if c["info"].get("nonzero")}


def _criterion(number, title, names, limit, cfg=None, extra=None):
    cfg = cfg or SuiteConfig(seeds=SEEDS)
    reports, elapsed = _run(names, cfg)
    ok, passed, total, cex = _summary(reports)
    notes = []
    if extra is not None:
        extra_ok, note = extra(reports)
        ok = ok and extra_ok
        if note:
            notes.append(note)
    in_time = elapsed < limit
    detail = f"{passed}/{total} checks, seeds {list(cfg.seeds)}, {elapsed:.1f} s (limit {limit} s)"
    if notes:
        detail += "; " + "; ".join(notes)
    _record(number, title, ok and in_time, detail)
    assert ok, json.dumps(cex)[:2000]
    assert in_time, f"took {elapsed:.1f} s, limit {limit} s"


def _needs_nonzero(ranks):
    def check(reports):
        seen = _nonzero_ranks(reports)
        missing = sorted(set(ranks) - seen)
        return not missing, f"nonzero vectors for N in {sorted(seen)}"
    return check


def test_criterion_01_rmatrix():
    def tuples(reports):
        n = min(c["info"].get("tuples", 0) for r in reports for c in r["checks"])
        ranks = sorted({c["params"]["N"] for r in reports for c in r["checks"]})
        return n >= 20 and ranks == [2, 3, 4], f"{n} spectral tuples per case, N in {ranks}"
    _criterion(1, "Yang-Baxter and unitarity", ["yang-baxter", "unitarity"], 5, extra=tuples)


def test_criterion_02_representations():
    _criterion(2, "generator relations, RLL, twist relation", ["relations", "rll", "twist"], 10)


def test_criterion_03_gauss():
    def dims(reports):
        d = max(c["info"]["dim"] for r in reports for c in r["checks"])
        return d <= 81, f"largest module dim {d}"
    _criterion(3, "Gauss decomposition and embedded RLL", ["gauss"], 20, extra=dims)


def test_criterion_04_combinatorics():
    _criterion(4, "combinatorics", ["enumeration", "y-forms", "factorization", "po-sim", "exa3"], 10)


def test_criterion_05_method_agreement():
    def cover(reports):
        ok, note = _needs_nonzero([2, 3, 4])(reports)
        rank4 = [c for r in reports for c in r["checks"] if c["params"]["N"] == 4 and c["params"]["n"] == [1, 1, 1]]
        return ok and len(rank4) >= 2 * len(SEEDS), note
    _criterion(5, "direct sum equals recurrence", ["method-agreement"], 60, extra=cover)


def test_criterion_06_coincidence():
    def stretch(reports):
        ok, note = _needs_nonzero([2, 3])(reports)
        hits = [c for r in reports for c in r["checks"] if c["params"]["N"] == 3 and c["params"]["n"] == [2, 2]]
        return ok and len(hits) == len(SEEDS) and all(c["info"]["nonzero"] for c in hits), note + ", N=3 n=(2,2) included"
    _criterion(6, "direct twisted weight equals eta times trace", ["coincidence"], 120, extra=stretch)


def test_criterion_07_coproduct():
    def assoc(reports):
        ok, note = _needs_nonzero([2, 3])(reports)
        splits = {tuple(c["params"]["split"]) for r in reports for c in r["checks"]
                  if c["params"]["N"] == 3 and c["params"]["n"] == [1, 1]}
        return ok and {(2, 1), (1, 2)} <= splits, note + ", three-factor splits (2,1) and (1,2)"
    _criterion(7, "coproduct identity", ["coproduct"], 60, extra=assoc)


def test_criterion_08_qsymmetry():
    _criterion(8, "q-symmetry under adjacent transpositions", ["qsymmetry"], 30, extra=_needs_nonzero([2, 3]))


def test_criterion_09_generator_formula():
    def cover(reports):
        reps = {(c["params"]["rep"], c["params"]["variant"]) for r in reports for c in r["checks"]}
        need = {(k, v) for k in ("vector", "verma2") for v in ("orig", "twist")}
        return need <= reps, "vector and verma2 (K=4, n<=3), both variants"
    _criterion(9, "generator-side formula equals direct sum", ["generator-formula"], 30, extra=cover)


def test_criterion_10_determinism():
    start = time.perf_counter()
    cfg = SuiteConfig(seeds=(7,), N=3, max_excitations=2)
    mismatched = []
    for name in BASIC_SUITES:
        a = json.dumps(run_suite(name, cfg), indent=2)
        b = json.dumps(run_suite(name, cfg), indent=2)
        if a != b:
            mismatched.append(name)
    parallel = SuiteConfig(seeds=(7,), N=3, max_excitations=2, workers=2)
    for name in ("method-agreement", "coincidence"):
        if json.dumps(run_suite(name, cfg)) != json.dumps(run_suite(name, parallel)):
            mismatched.append(f"{name} (workers=2)")
    elapsed = time.perf_counter() - start
    ok = not mismatched
    detail = f"{len(BASIC_SUITES)} suites rerun, plus 2 under a worker pool, {elapsed:.1f} s"
    if mismatched:
        detail += f"; differing: {mismatched}"
    _record(10, "byte-identical reports on rerun", ok, detail)
    assert ok, mismatched


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failures = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
