"""The polarized Pfaffian separates O(4,C) from SO(4,C) conjugacy.

Traces cannot tell a representation from its conjugate by a reflection; ``Q``
changes sign.  Run with ``python3 demos/orthogonal_pfaffian.py``.
"""

import numpy as np

from realforms.grouprep import P0
from realforms.harness import sample_real_form
from realforms.invariants import trace_coordinates

rep = sample_real_form("SO_pq_copy(4,0)", num_generators=2, seed=0)
flipped = rep.conjugate(P0(4))

a = trace_coordinates(rep, cap=2)
b = trace_coordinates(flipped, cap=2)
print("largest trace difference:", np.abs(a.traces - b.traces).max())
for words, qa, qb in list(zip(a.qwords, a.qvalues, b.qvalues))[:4]:
    print(f"Q{words}: {qa.real:+.6f} vs {qb.real:+.6f}")
