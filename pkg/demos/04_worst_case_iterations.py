#!/usr/bin/env python3
"""The overflow solver's iteration count has a sharp worst case.

The solver nests two loops: the outer loop grows the set of overloaded
nodes, the inner loop re-derives the below-capacity nodes.  A chain
network with forward routing and near-full backward overflow forces the
outer loop to discover the overloaded nodes one at a time, and the inner
loop to re-scan all remaining candidates each pass, for a total of
exactly 1 + n(n+1)/2 linear solves.
"""

from trafficflow import gen_example2, solve_overflow

print(" n   bound  solves  outer  residual")
for n in range(1, 21):
    net = gen_example2(n)
    solution, trace = solve_overflow(
        net, best_effort=True, delegate_zero_overflow=False
    )
    bound = 1 + n * (n + 1) // 2
    marker = "=" if trace.inner_iterations_total == bound else "!"
    print(
        f"{n:2d}   {bound:5d}  {trace.inner_iterations_total:5d}{marker} "
        f"{trace.outer_iterations:5d}  {solution.residual:.1e}"
    )
print()
print("Every row attains the bound exactly; the residual certifies each")
print("returned solution against the nonlinear equation.")
