"""Exact signatures of quadratic and hermitian forms over étale QQ-algebras."""

__version__ = "0.1.0"

from .numerics import (  # noqa: E402
    DomainError,
    NotAUnit,
    RealAlgebraic,
    SturmChain,
    UniPoly,
    count_real_roots,
    isolate_real_roots,
    refine,
    sign_at,
    squarefree_check,
    sturm_chain,
)
from .etale import (  # noqa: E402
    RATIONALS,
    EtaleAlgebra,
    Ordering,
    RelativeEtale,
    extensions_of_ordering,
    orderings,
    pullback_check,
    trace,
    trace_form,
)
from .quadratic import (  # noqa: E402
    QuadForm,
    diagonal,
    diagonalize,
    hyperbolic,
    orth_sum,
    pfister,
    scale,
    signature_at,
    tensor,
    transfer_quadratic,
)
from .algebras import (  # noqa: E402
    DivisionSpec,
    InvolutionType,
    InvolutiveAlgebra,
    center,
    degree,
    nil_set,
    type_at,
)
from .hermitian import (  # noqa: E402
    HermForm,
    diagonal_form,
    direct_product,
    hyperbolic_herm,
    nonsingular,
    q_tensor_h,
)
from .morita import (  # noqa: E402
    MoritaContext,
    check_brcom_square,
    functor_F,
    product_of_forms,
    reduce_to_division,
    scalar_extend,
)
from .signatures import (  # noqa: E402
    ReferenceForm,
    TotalSignature,
    eta_signature,
    find_reference_form,
    find_two_power_form,
    m_signature,
    total_signature,
    two_power_multiple_match,
)
from .knebusch import (  # noqa: E402
    TransferContext,
    split_at,
    transfer_hermitian,
    verify_extend_nil,
    verify_ktf_commutative,
    verify_ktf_hermitian,
    zero_plus_weakly_hyperbolic_check,
)
