"""
Kernels of eventually periodic dynamic graphs
=============================================

"""

from minmax_consensus import Digraph, Schedule
from minmax_consensus.dynamic_graph import integral_limit, kernel, limit_superior, min_delay

# a schedule is a finite prefix followed by a cycle that repeats forever
chain = Digraph.chain(range(4))
s = Schedule([Digraph(4)] * 2, [chain])
print("graph at round 5:", s.graph_at(5).extra_edges())

# only the cycle matters in the limit
print("limit superior:", limit_superior(s).extra_edges())
print("integral limit:", integral_limit(s).extra_edges())
print("kernel:", sorted(kernel(s)))

# two empty prefix rounds push the minimal delay up
print("minimal delay:", min_delay(s))

# two disjoint cycles have no common root
split = Schedule.constant(Digraph(4, [(0, 1), (1, 0), (2, 3), (3, 2)]))
print("kernel of two cycles:", sorted(kernel(split)), "delay:", min_delay(split, cap=10))
