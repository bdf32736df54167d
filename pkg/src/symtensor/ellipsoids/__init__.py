from .banach_mazur import BanachMazurCertificate, InternalInconsistencyError, bm_certificate, bm_product_certificate
from .mvee import MveeResult, john, khachiyan, loewner, relative_distance
from .products import ProductCheckReport, loewner_john_product_check
from .symmetries import (
    GroupGenerators,
    commutant_dimension,
    group_closure,
    kron_group,
    signed_permutation_group,
)
