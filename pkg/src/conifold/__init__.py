"""Harmonic analysis and deformation counts for conifolds.

Link spectra -> exceptional weights -> Fredholm data of the weighted
Laplacian -> stability of cones and dimensions of moduli spaces, with the
topological inputs computed exactly from simplicial models.
"""

from .errors import (
    CompletenessError,
    ConifoldError,
    DomainError,
    ExceptionalWeightError,
    InputError,
    NumericError,
    Refusal,
    StructuralError,
)
from .fredholm import (
    ConeEndSpec,
    ConifoldModel,
    FredholmReport,
    ac_end_harmonic_count,
    ac_laplacian_dims,
    cs_laplacian_dims,
    csac_laplacian_dims,
    index_change,
    laplacian_dims,
)
from .moduli import ModuliReport, StabilityReport, dim_ac, dim_compact, dim_cs, dim_csac, stability_check
from .spectra import (
    LinkSpectrum,
    circle_spectrum,
    explicit_spectrum,
    flat_torus_spectrum,
    harvey_lawson_gram,
    product_spectrum,
    sphere_spectrum,
)
from .surd import QuadSurd
from .topology import ComplexPair, ConifoldTopology, assemble_topology, betti, relative_betti, restriction_rank
from .weights import exceptional_in_interval, exceptional_set, is_nonexceptional, nearest_exceptional

__version__ = "0.1.0"
