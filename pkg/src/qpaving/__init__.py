"""Gaussian Gabor frame bounds, lattice theta sums and quantum packing problems."""

from .errors import (CatalogError, ConsistencyError, DimensionError, DomainTruncationError,
                     InvalidLatticeError, NotAFrameError, NumericError, ParseError, QPavingError,
                     ResourceCapError, TruncationWarning)
from .lattice import Lattice, ShapeParam2D, adjoint_lattice, dual_lattice, hexagonal_lattice, square_lattice
from .phase import PhasePoint
from .theta import GaussWidth, TruncationPolicy

__version__ = "0.1.0"
