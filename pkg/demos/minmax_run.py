"""
A MinMax run checked against the graph oracle
=============================================

"""

from minmax_consensus import CutoffFamily, Oracle, RunConfig, ValueDomain, check_stabilization, run
from minmax_consensus.dynamic_graph import restrict_to_active
from minmax_consensus.scenarios import scenario_bounded_delay

# a random cycle of 3 digraphs on 6 nodes, rooted with delay 2
s = scenario_bounded_delay(6, T=2, L=3, seed=1)
inputs = [3, 1, 4, 1, 2, 0]
starts = [1, 2, 1, 4, 1, 3]

cfg = RunConfig(ValueDomain.range(5), inputs, s, starts, CutoffFamily.half(), horizon=240)
trace = run(cfg)

# outputs round by round for the first few rounds
for t in range(0, 8):
    print(f"round {t}: y = {trace.ys(t)}")

report = check_stabilization(trace, s.period)
print(report.status, "at round", report.round, "on value", report.value)

# the oracle predicts the stable value from the active graph alone
oracle = Oracle(restrict_to_active(s, starts), inputs)
print("predicted m*:", oracle.m_star(), "reached by round", oracle.t_star())
