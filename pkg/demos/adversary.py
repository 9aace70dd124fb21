"""
Alternating chains against MinMax
=================================

"""

from minmax_consensus import CutoffFamily
from minmax_consensus.dynamic_graph import kernel
from minmax_consensus.scenarios import AdversaryStall, adversary_alternating_chains

# u holds 1, everyone else 0; play G until v1 outputs 1, then H until it outputs 0
res = adversary_alternating_chains(5, CutoffFamily.half(), max_phases=4)
print("phase ends:", res.phase_ends)
print("v1 outputs:", [res.trace.records[t].states[1].y for t in res.phase_ends])

# G and H together close a directed cycle through every node
print("kernel of the realized schedule:", sorted(kernel(res.schedule)))

# once v1 has heard u through H, the fifth phase cannot flip it back
try:
    adversary_alternating_chains(5, CutoffFamily.half(), max_phases=5)
except AdversaryStall as exc:
    print("stalled:", exc)
