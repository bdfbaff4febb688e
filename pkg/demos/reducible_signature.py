"""Signature bookkeeping for a reducible Phi2-fixed representation.

``U(2,0) + U(1,0) + (chi + Phi2(chi))`` is conjugated into ``U(4,1)``: a
self-paired block keeps its own signature, a cross pair contributes ``(1,1)``.
Run with ``python3 demos/reducible_signature.py``.
"""

import numpy as np
from scipy.linalg import block_diag

from realforms.grouprep import GroupKind, Representation
from realforms.harness import sample_real_form, scramble
from realforms.reducible import classify_semisimple, split_phi_stable

blocks = [sample_real_form("U(2,0)", 2, 1), sample_real_form("U(1,0)", 2, 2)]
chi = [np.array([[2.0 + 1j]]), np.array([[0.5]])]
gens = [
    block_diag(blocks[0].generators[k], blocks[1].generators[k], chi[k], 1 / chi[k].conj()) for k in range(2)
]
rep, _ = scramble(Representation(GroupKind("GL", 5), gens), np.random.default_rng(0))

pairing = split_phi_stable(rep, "Phi2")
print("self-paired blocks:", len(pairing.self_paired), "| cross pairs:", len(pairing.cross_paired))
cert = classify_semisimple(rep, "Phi2")
print("real form:", cert.tag, f"(max residual {cert.max_residual:.1e})")
