"""Exact and certified computation of permanents, generalized matrix
functions and Schur power matrices, with checkers and searches for the
classical permanent inequalities."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DimensionError,
    DomainError,
    FieldMismatchError,
    NotHermitianError,
    NotPSDError,
    ParseError,
    PermlabError,
    SearchStateError,
    SizeGuardError,
    VerificationError,
)
from .numeric import ApproxComplex, CyclotomicNumber, GaussianRational, cyclo_make, embed  # noqa: E402
from .matrix import (  # noqa: E402
    CorrelationMatrix,
    Matrix,
    PartitionedView,
    det,
    eigenvalues_hermitian,
    gram_from_rows,
    hadamard,
    is_psd,
    kronecker,
    rank,
)
from .matrix_io import format_matrix, load_matrix, parse_matrix  # noqa: E402
from .permanent import per_glynn, per_naive, per_ryser, permanent  # noqa: E402
from .gmf import (  # noqa: E402
    Character,
    Partition,
    PermGroup,
    Permutation,
    gmf,
    immanant,
    irreducible_character,
    linear_characters,
    normalized_gmf,
    subgroup_from_generators,
    symmetric_group,
)
from .schur import SchurPower, row_sums, schur_power, spectral_summary  # noqa: E402
from .reports import ConjectureReport  # noqa: E402
from .registry import builtin_drury, builtin_instance, builtin_shchesnovich, verify_paper  # noqa: E402
from .search import SearchConfig, SearchState, search  # noqa: E402
