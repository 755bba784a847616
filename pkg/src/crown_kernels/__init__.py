"""Hardy space and Cauchy-Szego kernel checks at SU(1,1) scale."""

from . import boundary, crown, kernels, mat2, rootsys, triples
from ._accel import BACKEND

__all__ = ["boundary", "crown", "kernels", "mat2", "rootsys", "triples", "BACKEND"]
__version__ = "0.1.0"
