"""Concrete logarithmic vertex algebra models and their associated graded."""

from .core import OutOfScope, State, borcherds_n0_check, borcherds_sides
from .fock import FockState, FreeBoson, fb_mode_apply, fb_zeta_coeff, fock_basis
from .graded import gr_bracket, gr_product_check
from .vector_fields import vector_field_check
from .vm import (DegreeCapExceeded, PBWState, VirasoroMagri, pbw_basis, vm_commutator_check,
                 vm_confluence_check, vm_DL_check, vm_L_mode, vm_normal_form)

__all__ = [
    "OutOfScope", "State", "borcherds_n0_check", "borcherds_sides",
    "FockState", "FreeBoson", "fb_mode_apply", "fb_zeta_coeff", "fock_basis",
    "gr_bracket", "gr_product_check", "vector_field_check",
    "DegreeCapExceeded", "PBWState", "VirasoroMagri", "pbw_basis", "vm_commutator_check",
    "vm_confluence_check", "vm_DL_check", "vm_L_mode", "vm_normal_form",
]
