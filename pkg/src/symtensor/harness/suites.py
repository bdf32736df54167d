"""Property suites, the parallel runner, and the run report."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import __version__
from ..convex.bodies import Interval
from ..convex.io import FORMAT
from ..convex.rational import Rational, format_rational
from . import checks

SUITES = ("duality", "uniform", "sandwich", "hulls", "ellipsoids", "symmetries", "grothendieck")


@dataclass(frozen=True)
class ExperimentSpec:
    """What to run.  ``samples`` overrides each suite's default sample count.

    ``dims`` holds tuples: ``(2, 3)`` is a factor pair for duality/uniform and
    a list of factor dimensions for symmetries.
    """

    suite: str = "all"
    seed: int = 0
    tol: float | None = None
    samples: int | None = None
    dims: tuple | None = None
    m: int | None = None
    n: int | None = None
    only: str | None = None

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from all, {', '.join(SUITES)}")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tolerances must be positive")
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be positive")

    def cli_args(self) -> str:
        parts = [f"--seed {self.seed}"]
        if self.tol is not None:
            parts.append(f"--tol {self.tol!r}")
        if self.samples is not None:
            parts.append(f"--samples {self.samples}")
        if self.dims is not None:
            parts.append("--dims " + ",".join("x".join(str(a) for a in d) for d in self.dims))
        if self.m is not None:
            parts.append(f"--m {self.m}")
        if self.n is not None:
            parts.append(f"--n {self.n}")
        return " ".join(parts)


@dataclass(frozen=True)
class CheckTask:
    name: str
    suite: str
    func: str
    params: tuple  # sorted (key, value) pairs so the task pickles and hashes


def _task(name, suite, func, **params) -> CheckTask:
    return CheckTask(name, suite, func, tuple(sorted(params.items())))


def _count(spec, default):
    return spec.samples if spec.samples is not None else default


def _pairs(spec, default=((2, 3),)):
    return [d for d in (spec.dims or default) if len(d) == 2]


def duality_tasks(spec):
    out = []
    for d1, d2 in _pairs(spec):
        for i in range(20):
            out.append(_task(f"duality/{d1}x{d2}/pair-{i:02d}", "duality", "duality_pair",
                             seed=spec.seed, index=i, d1=d1, d2=d2, points=_count(spec, 100)))
    return out


def uniform_tasks(spec):
    out = []
    for d1, d2 in _pairs(spec):
        for i in range(20):
            out.append(_task(f"uniform/{d1}x{d2}/pair-{i:02d}", "uniform", "uniform_pair",
                             seed=spec.seed, index=i, d1=d1, d2=d2))
        for i in range(5):
            out.append(_task(f"uniform/{d1}x{d2}/hilbert-{i:02d}", "uniform", "hilbert_invariance",
                             seed=spec.seed, index=i, d1=d1, d2=d2))
    return out


def sandwich_tasks(spec):
    tol = spec.tol or 1e-6
    out = [_task(f"sandwich/cube3/u-{i:03d}", "sandwich", "sandwich_cube", seed=spec.seed, index=i, tol=tol)
           for i in range(_count(spec, 200))]
    out += [_task(f"sandwich/hilbert-collapse/u-{i:03d}", "sandwich", "hilbert_collapse",
                  seed=spec.seed, index=i, tol=max(tol, 1e-4))
            for i in range(_count(spec, 100))]
    return out


def hulls_tasks(spec):
    tol = max(spec.tol or 1e-4, 1e-4)
    out = [
        _task("hulls/cubes/pi-inj", "hulls", "hull_cubes", seed=spec.seed, which="pi_inj", points=_count(spec, 100)),
        _task("hulls/cross/eps-proj", "hulls", "hull_cubes", seed=spec.seed, which="eps_proj", points=_count(spec, 100)),
    ]
    out += [_task(f"hulls/cross-sandwich/u-{i:03d}", "hulls", "hull_sandwich", seed=spec.seed, index=i, tol=tol)
            for i in range(_count(spec, 100))]
    for M, N in checks.section_pairs():
        tag = "".join(map(str, M)) + "-" + "".join(map(str, N))
        out.append(_task(f"hulls/sections/{tag}", "hulls", "sections_and_images", seed=spec.seed, M=M, N=N))
    return out


def ellipsoids_tasks(spec):
    tol = spec.tol or 1e-3
    out = [
        _task("ellipsoids/loewner-pi-cube", "ellipsoids", "loewner_product", seed=spec.seed, tol=tol),
        _task("ellipsoids/john-eps-cross", "ellipsoids", "john_product", seed=spec.seed, tol=tol),
    ]
    out += [_task(f"ellipsoids/containment-{i:02d}", "ellipsoids", "loewner_john_sandwich", seed=spec.seed, index=i)
            for i in range(5)]
    out += [_task(f"ellipsoids/bm-product-{i:02d}", "ellipsoids", "bm_product", seed=spec.seed, index=i)
            for i in range(5)]
    return out


def symmetries_tasks(spec):
    if spec.dims:
        factors = [a for d in spec.dims for a in d]
    else:
        factors = [2, 3]
    out = [_task(f"symmetries/R{d}", "symmetries", "commutant", seed=spec.seed, dims=(d,)) for d in factors]
    if len(factors) > 1:
        name = "x".join(f"R{d}" for d in factors)
        out.append(_task(f"symmetries/{name}", "symmetries", "commutant", seed=spec.seed, dims=tuple(factors)))
    return out


def grothendieck_tasks(spec):
    if spec.m is not None or spec.n is not None:
        dims = [(spec.m or spec.n, spec.n or spec.m)]
    else:
        dims = [(2, 2), (3, 3)]
    out = [_task(f"grothendieck/{m}x{n}", "grothendieck", "grothendieck", seed=spec.seed, m=m, n=n,
                 samples=_count(spec, 500), tol=spec.tol or 1e-4) for m, n in dims]
    out.append(_task("grothendieck/hadamard-witness", "grothendieck", "hadamard_witness", seed=spec.seed))
    return out


TASKS = {
    "duality": duality_tasks,
    "uniform": uniform_tasks,
    "sandwich": sandwich_tasks,
    "hulls": hulls_tasks,
    "ellipsoids": ellipsoids_tasks,
    "symmetries": symmetries_tasks,
    "grothendieck": grothendieck_tasks,
}


def plan(spec: ExperimentSpec) -> list:
    names = SUITES if spec.suite == "all" else (spec.suite,)
    tasks = [t for s in names for t in TASKS[s](spec)]
    if spec.only:
        tasks = [t for t in tasks if t.name == spec.only or t.name.startswith(spec.only.rstrip("/") + "/")]
    return tasks


# -- results ----------------------------------------------------------------


def jsonable(value):
    """Rationals become strings, intervals ``[lo, hi]``, numpy scalars plain numbers."""
    if isinstance(value, Rational):
        return format_rational(value)
    if isinstance(value, Interval):
        return [float(value.lo), float(value.hi)]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


@dataclass
class CheckRecord:
    name: str
    suite: str
    status: str  # pass, fail or error
    exact: bool
    detail: dict
    reproduce: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def run_task(task: CheckTask):
    """Run one check and return ``(record, seconds)``; exceptions become ``error`` records."""
    start = time.perf_counter()
    try:
        out = getattr(checks, task.func)(**dict(task.params))
        status = "pass" if out.passed else "fail"
        rec = CheckRecord(task.name, task.suite, status, out.exact, jsonable(out.detail))
    except Exception as exc:  # reported, never swallowed silently
        rec = CheckRecord(task.name, task.suite, "error", False,
                          {"error": f"{type(exc).__name__}: {exc}"})
    return rec, time.perf_counter() - start


@dataclass
class RunReport:
    suite: str
    seed: int
    records: list
    timing: dict = field(default_factory=dict)

    @property
    def failed(self) -> list:
        return [r for r in self.records if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failed

    def summary(self) -> dict:
        counts = {"total": len(self.records), "passed": 0, "failed": 0, "errors": 0}
        for r in self.records:
            counts["passed" if r.passed else ("errors" if r.status == "error" else "failed")] += 1
        return counts

    def to_dict(self) -> dict:
        """Deterministic content only; timings live in :meth:`timing_dict`."""
        return {
            "format": FORMAT,
            "type": "run-report",
            "environment": {"version": __version__, "seed": self.seed},
            "suite": self.suite,
            "summary": self.summary(),
            "records": [asdict(r) for r in self.records],
        }

    def timing_dict(self) -> dict:
        return {"format": FORMAT, "type": "run-timing",
                "seconds": {k: round(v, 6) for k, v in sorted(self.timing.items())},
                "total_seconds": round(sum(self.timing.values()), 6)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "suite", "status", "exact", "reproduce"])
        for r in self.records:
            w.writerow([r.name, r.suite, r.status, int(r.exact), r.reproduce or ""])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, obj: dict) -> "RunReport":
        if obj.get("format") != FORMAT or obj.get("type") != "run-report":
            raise ValueError("not a symtensor run report")
        recs = [CheckRecord(**r) for r in obj["records"]]
        return cls(obj["suite"], obj["environment"]["seed"], recs)


def run(spec: ExperimentSpec, jobs: int = 1) -> RunReport:
    tasks = plan(spec)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [run_task(t) for t in tasks]
    records, timing = [], {}
    for rec, seconds in results:
        if not rec.passed:
            rec.reproduce = f"symtensor check {rec.suite} {spec.cli_args()} --only {rec.name}"
        records.append(rec)
        timing[rec.name] = seconds
    records.sort(key=lambda r: r.name)
    return RunReport(spec.suite, spec.seed, records, timing)
