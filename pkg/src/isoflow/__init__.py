"""isoflow: generalized Toda flow on staircase isospectral Hermitian
matrices, and GKM cohomology of the associated twin spaces."""

from ._kernels import BACKEND as FLOW_BACKEND  # noqa: F401

__version__ = "0.1.0"
