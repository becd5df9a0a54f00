"""Exact border-rank certification for small 3-tensors over Q(i)."""

from .linalg import GaussianRational, IndexSet, Matrix
from .tensor import Tensor3
from .verdict import Outcome, Reason, Verdict

__all__ = ["GaussianRational", "IndexSet", "Matrix", "Tensor3", "Outcome", "Reason", "Verdict"]
__version__ = "0.1.0"
