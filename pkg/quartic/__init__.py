from __future__ import annotations

from .base import CharPoly, IdentityCheck, IdentityResult, poly_ring
from .base import IdentityFailedError as IdentityFailedError
from .base import NotDivisibleError as NotDivisibleError

KUMMER_IDS = (
    "cremona_ordinary",
    "transl_phi1_phi2",
    "psi_equal_params",
    "singular_points_ordinary",
    "prank1_sigma",
    "prank1_phi",
    "prank1_singular_points",
)
HEISENBERG_IDS = ("frobenius_quotient", "delta0_mod2")
APPENDIX_IDS = ("appendix_substitution", "appendix_plane_model", "corollary_scaling", "igusa_chain")
KKM_IDS = ("kkm_ordinary_dual", "kkm_supersingular_dual")

IDENTITY_IDS: tuple[str, ...] = KUMMER_IDS + HEISENBERG_IDS + APPENDIX_IDS + KKM_IDS

__all__ = [
    "IDENTITY_IDS",
    "CharPoly",
    "IdentityCheck",
    "load_identity",
    "poly_ring",
    "verify_identity",
]


def load_identity(name: str) -> IdentityCheck:
    if name in KUMMER_IDS:
        from . import kummer

        return getattr(kummer, name)()
    if name in HEISENBERG_IDS:
        from . import heisenberg

        return getattr(heisenberg, name)()
    if name in APPENDIX_IDS:
        from . import appendix

        return getattr(appendix, name)()
    if name in KKM_IDS:
        from . import kkm

        return getattr(kkm, name)()
    available = ", ".join(IDENTITY_IDS)
    raise ValueError(f"Unknown identity: {name!r}. Available: {available}")


def verify_identity(name: str, points: int = 100, seed: int = 0) -> IdentityResult:
    """Screen at random points over F_{2^16} or F_{3^8}, then verify by exact division."""
    return load_identity(name).verify(points=points, seed=seed)
