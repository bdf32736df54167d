from .hulls import EmbeddingData, eps_proj_product, pi_inj_product, sign_kronecker_generators
from .products import (
    build_from_recipe,
    dual_product,
    eps_product,
    hilbert2_product,
    pi_product,
    tensor_product,
)
from .sections import image_body, section_body
from .shape import EPS, EPS_PROJ, HILBERT2, OMEGA2, PI, PI_INJ, ProductKind, TensorShape, inner_h, kron
