"""Hide a U(2,1) representation inside GL(3,C), then recover the real form.

Run with ``python3 demos/classify_scrambled.py``.
"""

import numpy as np

from realforms.classifier import classify_irreducible, verify_certificate
from realforms.grouprep import RealFormTag
from realforms.harness import sample_real_form, scramble
from realforms.invariants import PHI2, is_phi_fixed

rng = np.random.default_rng(1)
tag = RealFormTag("U", (2, 1))
rep = sample_real_form(tag, num_generators=2, seed=3)
hidden, P0 = scramble(rep, rng)
print("seeded real form:", tag)
print("max |imag| of the scrambled generators:", max(np.abs(g.imag).max() for g in hidden.generators))

verdict = is_phi_fixed(hidden, PHI2)
print("Phi2-fixed:", verdict.fixed, "| trace coordinates agree:", verdict.coordinates_agree)

cert = classify_irreducible(hidden, PHI2)
print("recovered real form:", cert.tag, "via", cert.branch)
report = verify_certificate(hidden, cert)
print(f"certificate verified: {report.passed} (max relative residual {report.max_residual:.1e})")
