"""Sampled Grothendieck inequality ``ω2(u) <= π(u) <= K_G ω2(u)`` on cube tensors."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..convex.bodies import HPolytope
from ..convex.rational import format_rational, identity
from .tensor_norms import TensorElement, eps_norm, omega2_norm, pi_norm

KG_UPPER = 1.78222


@dataclass(frozen=True)
class GrothendieckConfig:
    """What to sample: ``samples`` tensors for each ``(m, n)`` in ``dims``.

    Half the samples are random sign matrices and half small-integer
    matrices with entries in ``[-entry_bound, entry_bound]``.
    """

    kg_upper: float = KG_UPPER
    samples: int = 500
    dims: tuple = ((2, 2),)
    seed: int = 0
    tol: float = 1e-4
    entry_bound: int = 3

    def __post_init__(self):
        if not self.kg_upper > 1:
            raise ValueError("kg_upper must exceed 1")
        if self.samples < 1 or self.tol <= 0:
            raise ValueError("need a positive sample count and tolerance")
        object.__setattr__(self, "dims", tuple(tuple(int(a) for a in d) for d in self.dims))


@dataclass
class SampleRecord:
    m: int
    n: int
    u: list
    eps: str
    pi: str
    omega2: list
    ratio: float
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


@dataclass
class GrothendieckReport:
    config: GrothendieckConfig
    records: list
    max_ratio: float
    witness: dict
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "samples": [asdict(r) for r in self.records],
            "summary": {
                "max_ratio": self.max_ratio,
                "witness": self.witness,
                "violations": self.violations,
            },
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "u", "eps", "pi", "omega2_lo", "omega2_hi", "ratio", "ok"])
        for r in self.records:
            w.writerow([r.m, r.n, " ".join(r.u), r.eps, r.pi, repr(r.omega2[0]), repr(r.omega2[1]),
                        repr(r.ratio), int(r.ok)])
        return buf.getvalue()


def sample_tensors(m: int, n: int, count: int, rng: np.random.Generator, entry_bound: int = 3):
    """Alternate random sign matrices with random small-integer matrices (never zero)."""
    out = []
    while len(out) < count:
        if len(out) % 2 == 0:
            M = rng.choice([-1, 1], size=(m, n))
        else:
            M = rng.integers(-entry_bound, entry_bound + 1, size=(m, n))
            if not M.any():
                continue
        out.append([[int(a) for a in row] for row in M])
    return out


def cube(d: int) -> HPolytope:
    return HPolytope(identity(d))


def evaluate(M, kg_upper: float = KG_UPPER, tol: float = 1e-4) -> SampleRecord:
    m, n = len(M), len(M[0])
    u = TensorElement.from_matrix(M)
    P, Q = cube(m), cube(n)
    e = eps_norm(u, P, Q).value
    p = pi_norm(u, P, Q).value
    w = omega2_norm(u, P, Q)
    pf = float(p)
    return SampleRecord(
        m, n, [format_rational(a) for a in u.entries], format_rational(e), format_rational(p),
        [w.lo, w.hi], pf / w.interval.mid,
        lower_ok=w.lo - tol <= pf, upper_ok=pf <= kg_upper * w.hi + tol,
    )


def _evaluate_batch(args):
    batch, kg, tol = args
    return [evaluate(M, kg, tol) for M in batch]


def grothendieck_experiment(cfg: GrothendieckConfig, jobs: int = 1) -> GrothendieckReport:
    rng = np.random.default_rng(cfg.seed)
    mats = []
    for m, n in cfg.dims:
        mats.extend(sample_tensors(m, n, cfg.samples, rng, cfg.entry_bound))
    if jobs > 1:
        chunks = [mats[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_evaluate_batch, [(c, cfg.kg_upper, cfg.tol) for c in chunks]))
        records = [None] * len(mats)
        for i, part in enumerate(parts):
            records[i::jobs] = part
    else:
        records = [evaluate(M, cfg.kg_upper, cfg.tol) for M in mats]
    best = max(range(len(records)), key=lambda i: records[i].ratio)
    violations = [
        {"index": i, "u": r.u, "m": r.m, "n": r.n, "pi": r.pi, "omega2": r.omega2,
         "failed": [k for k, ok in (("lower", r.lower_ok), ("upper", r.upper_ok)) if not ok]}
        for i, r in enumerate(records) if not r.ok
    ]
    witness = {"index": best, "m": records[best].m, "n": records[best].n, "u": records[best].u}
    return GrothendieckReport(cfg, records, records[best].ratio, witness, violations)
