"""Family classification, closed forms and their numeric verification."""
from .build import DegenerateParameter, NoRoot, RiccatiChain, build_closed_form, s2a_chain
from .closed_forms import (
    ClosedForm,
    EllipticBB,
    EllipticBinomial,
    ExpRational,
    NearSingularity,
    RationalForm,
    eval_closed_form,
)
from .families import (
    FAMILY_ORDER,
    FamilyMatch,
    canonical_subequation,
    classify_family,
    family_members,
    s1_instance,
    s2a_from_params,
    s2a_instance,
    s2b_instance,
    s3a_instance,
    s3b_instance,
)
from .verify import (
    VerificationReport,
    elliptic_residues,
    find_poles,
    numeric_residue,
    sample_points,
    verify_numeric,
)
from .weierstrass import OutOfRadius, wp_derivatives, wp_eval, wp_jets, wp_radius

__all__ = [
    "ClosedForm",
    "DegenerateParameter",
    "EllipticBB",
    "EllipticBinomial",
    "ExpRational",
    "FAMILY_ORDER",
    "FamilyMatch",
    "NearSingularity",
    "NoRoot",
    "OutOfRadius",
    "RationalForm",
    "RiccatiChain",
    "VerificationReport",
    "build_closed_form",
    "canonical_subequation",
    "classify_family",
    "elliptic_residues",
    "eval_closed_form",
    "family_members",
    "find_poles",
    "numeric_residue",
    "s1_instance",
    "s2a_chain",
    "s2a_from_params",
    "s2a_instance",
    "s2b_instance",
    "s3a_instance",
    "s3b_instance",
    "sample_points",
    "verify_numeric",
    "wp_derivatives",
    "wp_eval",
    "wp_jets",
    "wp_radius",
]
