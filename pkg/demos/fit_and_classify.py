"""
Fitting first-order subequations
================================

Fit degree 1, 2 and 3 subequations to the Laurent branches of instances
from each solution family and compare with the family's canonical form.
"""

from fractions import Fraction

from subeq_lab import fit_subequation
from subeq_lab.solutions import (
    canonical_subequation,
    classify_family,
    s1_instance,
    s2a_from_params,
    s2b_instance,
    s3a_instance,
    s3b_instance,
)

examples = {
    "S3b": s3b_instance(1, 1, 0),
    "S3a": s3a_instance(2, Fraction(1, 3), 5),
    "S2A": s2a_from_params(1, Fraction(1, 3), Fraction(5, 4)),
    "S2B": s2b_instance(1, 2, 3),
    "S1": s1_instance(2, 1, 2, 3, 4),
}

for name, ode in examples.items():
    match = classify_family(ode)
    rep = fit_subequation(ode, match.degree)
    same = rep.subequation.normalized() == canonical_subequation(ode, name).normalized()
    print(f"{name}: classified {match.family}, fit {rep.status}, canonical form matches: {same}")
    print("   ", rep.subequation.normalized())

###############################################################################
# A generic instance
# ------------------
# Nothing fits, in agreement with the classification.

generic = examples["S3b"].replace(c2=Fraction(1, 2))
print([fit_subequation(generic, m).status for m in (1, 2, 3)], classify_family(generic).family)
