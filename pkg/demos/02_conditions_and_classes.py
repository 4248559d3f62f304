#!/usr/bin/env python3
"""When do the traffic equations have a unique nonnegative solution?

Two structural conditions on the routing matrix decide this:

* filled-or-drained (FD): every communicating class receives outside
  input or leaks flow out of the network.
* non-isolated (NI): every class receives input, leaks, or at least
  routes into another class.  NI is strictly weaker than FD and is
  exactly equivalent to the capacity-clipped equation having a unique
  nonnegative solution.

For overflow networks there is an extra spectral requirement: every mix
of routing rows (on candidate-stable nodes) with overflow rows must have
spectral radius below 1.
"""

from trafficflow import condition_report, gen_example3, gen_example4

print("A two-class network that separates FD from NI:")
report = condition_report(gen_example3())
for k, cls in enumerate(report.decomposition.classes):
    print(
        f"  class {sorted(i + 1 for i in cls)}: "
        f"fillable={report.decomposition.fillable[k]}, "
        f"externally drained={report.decomposition.ext_drainable[k]}, "
        f"internally drained={report.decomposition.int_drainable[k]}"
    )
print("  FD holds:", report.filled_or_drained, " NI holds:", report.non_isolated)
print("  second class only drains into the first, so FD fails but NI holds")

print()
print("An overflow triangle where the spectral requirement fails:")
report = condition_report(gen_example4(1.0))
print("  NI holds:", report.non_isolated)
print("  overloaded set of the clipped solution:",
      sorted(i + 1 for i in report.gm_unstable))
print("  spectral verdict:", report.overflow_condition)
print("  picking the routing row of node 3 and overflow rows of nodes 1-2")
print("  yields a doubly stochastic matrix with radius exactly 1, so no")
print("  uniqueness guarantee exists for this network at any input rate.")
