"""Canonical-singularity checks and cusp-form bounds for Kuga varieties over A_p."""

from .cyclo import SingularityType, UnityExponent, snap
from .rst import Scenario, Verdict, analyze, build_table, preset
from .symplectic import KugaElement, SiegelPoint, SpElement

__version__ = "0.1.0"
