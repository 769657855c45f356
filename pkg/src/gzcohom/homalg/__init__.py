from .rings import GF, QQ, ZZ, Ring, RingError, parse_ring
from .matrix import Mat, MatrixError, SparseMatrix
from .snf import SmithForm, invariant_factors, matrix_rank, smith_decomposition, smith_normal_form
from .lattice import LatticeError, Solver, Subquotient, kernel_basis, span_basis
from .modules import Module, ModuleError, ModuleMorphism, invert_matrix, morphism_is_iso, parse_module
from .complexes import (
    CohomologyResult,
    Complex,
    ComplexError,
    HomologyGroup,
    complex_homology,
    homology_at,
    homology_group,
    simple_complex,
)
from .spectral import (
    FilteredComplex,
    SpectralError,
    SpectralSequence,
    SSPage,
    check_coherence,
    check_convergence,
    pages,
)
