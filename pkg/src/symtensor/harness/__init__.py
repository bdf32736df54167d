from .corpus import builtin_ball, random_hpolytope, random_vpolytope, rng_for
from .suites import SUITES, CheckRecord, ExperimentSpec, RunReport, plan, run
