"""
Laurent branches and residue sums
=================================

Expand a solution at a movable pole on all three branches, look at the
Fuchs indices, then test which residue-sum conditions an instance breaks.
"""

from subeq_lab import (
    OdeInstance,
    as_cyclo,
    check_fuchs_indices,
    enumerate_conditions,
    expand_laurent,
    indicial_polynomial,
    match_elliptic_families,
    ode_residual,
)

# a = 1, c1 = 12: the leading coefficients are u_{-1} = a and u_0 = -1
ode = OdeInstance(as_cyclo(1), c1=12, c4=12)
for r in ode.branches():
    u = expand_laurent(ode, r, 12)
    print(f"residue {r}:", [str(u.coefficient(e)) for e in range(-1, 4)])
    # the truncated series solves the ODE exactly to its guaranteed order
    assert ode_residual(u, ode).is_zero()

# indices -1 and (7 +- sqrt(-23))/2: no nonnegative integer, so the series is unique
poly = indicial_polynomial(ode, ode.a)
print("indicial polynomial (constant first):", [str(c) for c in poly])
print("integer Fuchs indices:", check_fuchs_indices(poly).integer_roots)

###############################################################################
# Residue conditions
# ------------------
# An elliptic solution needs every residue sum of (u^(k))^n to vanish.

print("family:", match_elliptic_families(ode))
print("violated:", [(c.k, c.n) for c in enumerate_conditions(ode, 4, 10)])

# switching on c2 breaks the very first condition, (k, n) = (0, 2)
bad = ode.replace(c2=as_cyclo(4))
first = enumerate_conditions(bad, 4, 10)[0]
print(f"with c2 = 4: first violation (k={first.k}, n={first.n}) value {first.value}")
