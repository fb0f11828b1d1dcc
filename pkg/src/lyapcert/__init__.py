"""Exact Lyapunov certificates for a degree-7 planar polynomial vector field.

``algebra`` and ``sturm`` hold the exact arithmetic, ``systems`` the vector
fields, ``certify`` and ``nonexist`` the two halves of the stability claim,
``simulate`` the floating-point side.
"""

__version__ = "0.1.0"
