"""Numerical tolerances used across the package.

Functions read these at call time, so assigning e.g.
``polymoduli.tolerances.RESIDUAL = 1e-10`` changes the defaults globally.
Every function that uses one also accepts an explicit override.
"""

# max-norm residual accepted as "zero" by membership tests
RESIDUAL = 1e-9

# arccos arguments outside [-1, 1] by at most this much are clamped
ACOS_CLAMP = 1e-12

# central finite-difference step for Jacobians
FD_STEP = 1e-6

# singular values below NULLITY_REL * s_max count as zero
NULLITY_REL = 1e-7

# |det(u, v, w)| below this marks three cone edges as coplanar
GENERAL_POSITION = 1e-9

# closure tolerance during reconstruction = CLOSURE_FACTOR * membership tol
CLOSURE_FACTOR = 100.0

# faces with area <= FACE_AREA_REL * diameter**2 are degenerate
FACE_AREA_REL = 1e-12

# a dihedral angle within this of 0 (mod 2pi) is a folded edge
ZERO_DIHEDRAL = 1e-12

# a dihedral angle within this of pi is reported as a flat edge
FLAT_DIHEDRAL = 1e-9
