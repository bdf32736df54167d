from .gamma2 import Gamma2ConvergenceError, Gamma2Result, gamma2_norm
from .omega2 import omega2_product, omega2_support
from .tensor_norms import (
    EpsNorm,
    NormReport,
    Omega2Norm,
    PiNorm,
    TensorElement,
    as_tensor,
    eps_norm,
    norm_report,
    omega2_norm,
    pi_norm,
    t_u,
    u_t,
)
