"""Acceptance criteria, each run at its stated tolerance and time limit.

Run directly (``python tests/test_acceptance.py``) for one PASS/FAIL line per
criterion; under pytest the same lines appear in the terminal summary.
"""
import sys
import time
from dataclasses import dataclass

import pytest

from symtensor.harness import ExperimentSpec, run


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    suite: str
    only: tuple  # name prefixes within the suite
    limit: float  # seconds
    expected: int  # number of checks the criterion consists of
    options: tuple = ()


CRITERIA = [
    Criterion(1, "exact polarity duality, 20 pairs in R2 x R3", "duality", ("duality/2x3",), 60, 20,
              (("dims", ((2, 3),)),)),
    Criterion(2, "crossnorm sandwich on (Binf3, Binf3), 200 tensors", "sandwich", ("sandwich/cube3",), 180, 200,
              (("tol", 1e-6),)),
    Criterion(3, "Grothendieck bound for m=n in {2,3} and the H2 witness", "grothendieck",
              ("grothendieck",), 300, 3, (("samples", 500), ("tol", 1e-4))),
    Criterion(4, "hull coincidence on cubes and cross-polytopes", "hulls",
              ("hulls/cubes", "hulls/cross/"), 60, 2),
    Criterion(5, "Hilbertian sandwich for the injective hull on (B1, B1)", "hulls",
              ("hulls/cross-sandwich",), 120, 100),
    Criterion(6, "Loewner and John ellipsoids of products", "ellipsoids",
              ("ellipsoids/loewner-pi-cube", "ellipsoids/john-eps-cross"), 60, 2, (("tol", 1e-3),)),
    Criterion(7, "enough symmetries: commutant dimension 1 on R2, R3, R6", "symmetries",
              ("symmetries",), 10, 3, (("dims", ((2, 3),)),)),
    Criterion(8, "uniform property and linear invariance, 20 map pairs (+5 ellipsoid)", "uniform",
              ("uniform/2x3",), 60, 25, (("dims", ((2, 3),)),)),
    Criterion(9, "sections under eps and coordinate images under pi", "hulls",
              ("hulls/sections",), 60, 21),
    Criterion(10, "Hilbert-factor collapse on (B2, Binf2), 100 tensors", "sandwich",
              ("sandwich/hilbert-collapse",), 120, 100, (("tol", 1e-4),)),
]


def evaluate(c: Criterion, seed: int = 0):
    """Return ``(passed, seconds, message)``."""
    spec = ExperimentSpec(c.suite, seed=seed, **dict(c.options))
    start = time.perf_counter()
    records = []
    for prefix in c.only:
        records += run(ExperimentSpec(**{**spec.__dict__, "only": prefix})).records
    seconds = time.perf_counter() - start
    failed = [r.name for r in records if not r.passed]
    ok = not failed and len(records) == c.expected and seconds <= c.limit
    msg = f"{len(records) - len(failed)}/{len(records)} checks passed in {seconds:.1f}s (limit {c.limit:.0f}s)"
    if failed:
        msg += "; failing: " + ", ".join(failed[:3])
    elif len(records) != c.expected:
        msg += f"; expected {c.expected} checks"
    return ok, seconds, msg


def line(c: Criterion, ok: bool, msg: str) -> str:
    return f"{'PASS' if ok else 'FAIL'} criterion {c.number:2d}: {c.title}: {msg}"


RESULTS = []


@pytest.mark.parametrize("c", CRITERIA, ids=lambda c: f"criterion-{c.number:02d}")
def test_criterion(c):
    ok, _, msg = evaluate(c)
    RESULTS.append(line(c, ok, msg))
    assert ok, msg


def main() -> int:
    ok_all = True
    for c in CRITERIA:
        ok, _, msg = evaluate(c)
        print(line(c, ok, msg), flush=True)
        ok_all &= ok
    return 0 if ok_all else 1


if __name__ == "__main__":
    sys.exit(main())
