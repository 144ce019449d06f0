"""Integrable differential systems built as F = R adj(DPhi) G(Phi).

Construction, pullback of first integrals, exact/sampled verification and
trajectory-based conservation checks.
"""

__version__ = "0.1.0"
