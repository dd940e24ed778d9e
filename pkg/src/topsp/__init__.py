"""Signal processing on graphs and simplicial complexes."""

from .complex import (
    SimplicialComplex,
    boundary_matrix,
    cofaces,
    faces,
    from_maximal_simplices,
    hodge_laplacian,
    line_graph_laplacian,
)
from .kernels import BACKEND
from .spectral import SpectralBasis, betti, eig_sym, gft, harmonic_basis, hodge_decompose, igft

__version__ = "0.1.0"
