#!/usr/bin/env python3
"""Exhaustive solution census of the overflow equation on a small network.

For every subset S of nodes, assume the nodes in S run below capacity
and the rest overflow; the equation then becomes linear.  Solving all
2**n linear systems and keeping the pattern-consistent results gives a
complete census of the nonlinear equation's solutions.

On the three-node overflow triangle the census depends on the input
rate: a single below-capacity solution for small inputs, a one-parameter
family at the critical rate, and a single all-overloaded solution beyond
it.  This works only for small n; the iterative solver needs at most
1 + n(n+1)/2 linear solves instead of 2**n.
"""

import numpy as np

from trafficflow import OracleKind, enumerate_solutions, gen_example4

for alpha1 in (0.5, 0.9, 1.0, 1.5, 4.0):
    verdict = enumerate_solutions(gen_example4(alpha1))
    print(f"input rate {alpha1}: {verdict.kind.value} "
          f"({verdict.patterns_checked} patterns checked)")
    if verdict.kind is OracleKind.UNIQUE:
        print("   rates =", np.round(verdict.solutions[0], 6))
    elif verdict.kind is OracleKind.CONTINUUM:
        print("   base  =", np.round(verdict.base, 6))
        print("   family:", verdict.direction_note)
        print("   every point of the family solves the equation exactly;")
        print("   the below-capacity slack of node 3 absorbs the shift.")
