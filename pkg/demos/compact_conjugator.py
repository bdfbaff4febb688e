"""Two SU(2) representations conjugate in SL(2,C) are conjugate in SU(2).

The conjugator ``W h`` has a positive factor ``h`` commuting with the image;
its unitary polar factor is ``W``.  Run with ``python3 demos/compact_conjugator.py``.
"""

import numpy as np

from realforms.classifier import compact_conjugator
from realforms.grouprep import GroupKind, Representation
from realforms.harness import sample_real_form

diag = Representation(GroupKind("SL", 2), [np.diag([np.exp(0.3j), np.exp(-0.3j)]), np.diag([1j, -1j])])
W = sample_real_form("SU(2,0)", 1, 5).generators[0]
P = W @ np.diag([4.0, 0.25])
U, resid = compact_conjugator(diag, diag.conjugate(W), P)
print("P is unitary:", np.allclose(P.conj().T @ P, np.eye(2)))
print("U equals W:", np.allclose(U, W), f"| conjugation residual {resid:.1e}")
