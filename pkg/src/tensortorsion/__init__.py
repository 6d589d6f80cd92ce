"""Graded-module algebra over F_p[x_1..x_d]: Groebner bases, resolutions,
Ext/Tor, homological degree, and torsion bounds for tensor products."""

from .algebra import GradedFreeModule, GradedMatrix, Poly, Ring
from .bounds import BoundReport, evaluate_bound, tensor_power_probe, verify_suite
from .groebner import Submodule, buchberger, normal_form, syzygies
from .homological import ModulePres, free_resolution, minimalize, tensor_pres, tor_module
from .invariants import hdeg, hilbert_series, invariant_set

__all__ = [
    "BoundReport", "GradedFreeModule", "GradedMatrix", "ModulePres", "Poly", "Ring", "Submodule",
    "buchberger", "evaluate_bound", "free_resolution", "hdeg", "hilbert_series", "invariant_set",
    "minimalize", "normal_form", "syzygies", "tensor_power_probe", "tensor_pres", "tor_module",
    "verify_suite",
]
