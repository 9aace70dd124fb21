"""
No kernel, no agreement
=======================

"""

from minmax_consensus import RunConfig, ValueDomain, check_stabilization, run
from minmax_consensus.scenarios import scenario_empty_kernel

# two disjoint cycles, one holding 0 and the other 1
s, inputs = scenario_empty_kernel(6)
for algorithm in ("minmax", "min"):
    trace = run(RunConfig(ValueDomain((0, 1)), inputs, s, algorithm=algorithm, horizon=50))
    rep = check_stabilization(trace)
    print(f"{algorithm}: final outputs {trace.ys(50)} -> {rep.status}")
