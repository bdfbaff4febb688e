"""Conjugation certificates for representations fixed by the real structures Phi1 and Phi2."""
