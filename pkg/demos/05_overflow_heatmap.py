#!/usr/bin/env python3
"""Sweep the cell-grid family and map the fraction of overloaded nodes.

The cell-grid networks pack 4-node cells into an m x m grid, feed the
south-west corner node with input equal to the square of the node count,
and scale cross-cell routing by delta and cross-cell overflow by
epsilon.  Because every row sum stays at or below 0.99, the uniqueness
condition holds on the whole parameter square and each sweep point has
one certified solution.

The fraction of overloaded nodes grows from a single flooded corner cell
at (0, 0) to the whole grid, non-decreasing in both parameters.  Writes
overflow_map.csv and overflow_map.svg next to this script.
"""

import pathlib

from trafficflow.cli import main

out = pathlib.Path(__file__).parent / "overflow_map"
code = main(["heatmap", "--m", "3", "--step", "0.1", "--out", str(out)])
raise SystemExit(code)
