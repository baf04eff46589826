#!/usr/bin/env python3
"""Core entropy from angle arithmetic alone.

The doubling map acts on pairs of orbit angles; counting how a pair's
separating arcs map onto each other gives a nonnegative integer
transition matrix whose leading eigenvalue lambda determines the core
entropy h = log lambda.  No polynomial coefficients are needed - the
whole computation is exact integer bookkeeping plus one eigenvalue.
"""

from fractions import Fraction

import numpy as np

from slowmating import (
    core_entropy,
    is_reducible,
    leading_eigenvalue,
    pair_transitions,
    transpose_relation,
)

print("angle        lambda      h = log lambda   matrix  reducible")
for theta in [Fraction(1, 3), Fraction(3, 7), Fraction(1, 4),
              Fraction(3, 15), Fraction(9, 56), Fraction(5, 12)]:
    lam, h, matrix = core_entropy(theta)
    print("%-9s  %9.6f   %14.6f   %2dx%-3d  %s"
          % (theta, lam, h, matrix.n, matrix.n, is_reducible(matrix)))

# entropy is a property of the dynamics, not of the matrix layout:
# a matrix and its transpose share the leading eigenvalue
_, _, m = core_entropy(Fraction(3, 15))
mt = m.transpose()
print()
print("transpose pair shares lambda:", transpose_relation(m, mt))
print("lambda(M) - lambda(M^T) = %.3g"
      % abs(leading_eigenvalue(m) - leading_eigenvalue(mt)))

# the same eigenvalue from the characteristic polynomial, as a check
lam = leading_eigenvalue(m)
coeffs = np.poly(m.array().astype(float))
print("char poly residual at lambda: %.3g" % abs(np.polyval(coeffs, lam)))
