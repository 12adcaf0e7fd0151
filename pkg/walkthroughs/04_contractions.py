"""Contractive matrices: codilators, the mediating isometry, and relative orthogonality.

Run: python walkthroughs/04_contractions.py
"""

from __future__ import annotations

import random

import numpy as np

from dagrel.matcontr import (
    Matrix, mat_codilator, mat_coind_pushout, mat_mediator, mat_rel_orthogonal, random_contraction,
    random_isometry_matrix,
)

R = Matrix(np.array([[0.5]]))
c = mat_codilator(R)
print("R = [1/2]: d =", c.d, "E =", c.E.round(6).tolist(), "M =", c.M.round(6).tolist())
print("left leg:\n" + c.left.pretty())

rng = random.Random(1)
R = random_contraction(rng, 3, 2)
c = mat_codilator(R)
print("\nrandom 2x3 contraction, codilator rank", c.d)
print("residuals:", {k: f"{v:.1e}" for k, v in c.residuals.items()})

# Any other codilation factors through the codilator by a unique isometry.
U = random_isometry_matrix(rng, c.left.rows, c.left.rows + 1)
C = mat_mediator(c, Matrix(U.data @ c.left.data), Matrix(U.data @ c.right.data))
print("recovered mediator matches:", np.allclose(C.data, U.data))

# Co-independent pushout of two isometries with a shared line.
k = Matrix(np.array([[1.0], [0.0]]))
cs = mat_coind_pushout(k, Matrix(np.array([[0.0], [1.0], [0.0]])))
print("\npushout legs are relatively orthogonal:",
      mat_rel_orthogonal(cs.left, cs.right, k, Matrix(np.array([[0.0], [1.0], [0.0]]))))
