from .audits import LEMMAS, LemmaAuditReport, run_audit
from .constants import LEDGER, ConstantsLedger, choose_alpha, longpath_bound
from .cylinder import CylinderRecord, run_cylinder_experiment
from .scaling import ScalingRecord, family_sweep, run_scaling_experiment

__all__ = [
    "LEDGER", "LEMMAS", "ConstantsLedger", "CylinderRecord", "LemmaAuditReport",
    "ScalingRecord", "choose_alpha", "family_sweep", "longpath_bound", "run_audit",
    "run_cylinder_experiment", "run_scaling_experiment",
]
