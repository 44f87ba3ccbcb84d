"""Geometry of complex Grassmann manifolds G_n(C^{n+m}) and their noncompact duals.

Matrices are complex NumPy arrays. Tangent vectors and chart points are n x m;
frames are (n+m) x n with orthonormal (compact) or J-orthonormal columns.
Library errors raise GrassgeoError(message, kind, value).
"""

from ._core import *  # noqa: F401,F403
from ._core import GrassgeoError, GrassmannSpace

__all__ = [name for name in dir() if not name.startswith("_")]
