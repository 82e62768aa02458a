"""
An elliptic solution and its poles
==================================

Build the binomial elliptic solution for an S3b instance, verify it against
the ODE at seeded points, then locate poles and read off their residues.
"""

import numpy as np

from subeq_lab.solutions import (
    build_closed_form,
    canonical_subequation,
    elliptic_residues,
    eval_closed_form,
    s3b_instance,
    sample_points,
    verify_numeric,
)

ode = s3b_instance(1, 1, 0)  # c5 = -16, c7 = 2
cf = build_closed_form(ode, e0=0)
print(cf.kind, {k: str(v) for k, v in cf.params().items()})

# every candidate tried for g3 is listed with its residual
for note in cf.notes:
    print("  ", note)

pts = sample_points(cf, 20, seed=1)
rep = verify_numeric(cf, ode, canonical_subequation(ode, "S3b"), pts)
print(f"verification passed={rep.passed}, ode {rep.max_rel_ode_residual:.1e}, "
      f"subequation {rep.max_rel_subeq_residual:.1e}")

###############################################################################
# Poles
# -----
# One pole per residue a, w a, w^2 a in each period cell; the sum is zero.

found = elliptic_residues(cf)
for p, r in found:
    print(f"pole {p:.6f}  residue {r:.12f}")
print("sum of residues:", abs(sum(r for _, r in found)))

# u along a short ray from z0
for x in np.linspace(0.1, 0.4, 4):
    print(f"u({x:.2f}) = {eval_closed_form(cf, x)[0]:.10f}")
