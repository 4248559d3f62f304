#!/usr/bin/env python3
"""Walk through the three traffic equations on one small network.

A fluid network is (alpha, mu, P, Q): exogenous input rates, service
capacities, a routing matrix, and an overflow matrix.  The total arrival
rate vector solves a fixed-point equation whose shape depends on how
overloaded nodes are treated:

  open network     rates = alpha + rates @ P
  capacity-clipped rates = alpha + min(rates, mu) @ P
  overflow         rates = alpha + min(rates, mu) @ P + max(rates - mu, 0) @ Q
"""

import numpy as np

from trafficflow import (
    Equation,
    make_network,
    residual,
    solve_goodman_massey,
    solve_jackson,
    solve_overflow,
    tarski_fixed_point,
)

# Three nodes in a line; node 2 is undersized, and its excess is pushed
# onward to node 3 through the overflow matrix.
net = make_network(
    alpha=[1.2, 0.0, 0.0],
    mu=[2.0, 0.8, 2.0],
    p=[[0.0, 0.9, 0.0], [0.0, 0.0, 0.7], [0.0, 0.0, 0.0]],
    q=[[0.0, 0.0, 0.0], [0.0, 0.0, 0.9], [0.0, 0.0, 0.0]],
)

print("Open-network solve (pretends capacity is infinite):")
jackson = solve_jackson(net)
print("  rates =", jackson.rates)
print("  node 2 gets", jackson.rates[1], "but can only serve", net.mu[1])

print()
print("Capacity-clipped solve (overload stays in the buffer):")
clipped, trace = solve_goodman_massey(net)
print("  rates =", clipped.rates)
print("  overloaded nodes (0-based):", sorted(clipped.unstable))
print("  found in", trace.outer_iterations, "linear solves")

print()
print("The same fixed point from below, by monotone iteration:")
lfp = tarski_fixed_point(make_network(net.alpha, net.mu, net.p))
print("  rates =", lfp.rates, " (agrees:", np.allclose(lfp.rates, clipped.rates), ")")

print()
print("Overflow solve (excess at node 2 is rerouted to node 3):")
overflow, trace = solve_overflow(net)
print("  rates =", overflow.rates)
print("  node 3 now receives the overflow:", overflow.rates[2], ">", clipped.rates[2])
print("  outer passes:", trace.outer_iterations,
      " total linear solves:", trace.inner_iterations_total)

print()
print("Residuals against each equation:")
for kind in Equation:
    print(f"  {kind.value:15s} {residual(net, overflow.rates, kind):.3e}")
