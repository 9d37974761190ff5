"""Verifying the Poisson axioms symbolically
=============================================

The Jacobi identity reduces to four polynomial identities
J^{ijk} = sum_l (pi^{il} d_l pi^{jk} + cyclic) = 0.  Exact rational
arithmetic makes "J == 0" a decidable statement: no tolerance, no sampling.
"""

from poisson4 import (
    Bivector,
    Expr,
    flaschka_ratiu,
    is_poisson,
    jacobiator,
    linear_part,
    model,
    parse,
    rank_at,
    Point4,
)

# Every catalogue model is Poisson, with the deformation parameter s kept
# symbolic: one check covers the whole one-parameter family.
for name in ("lefschetz", "fold", "cusp", "birth", "merge", "flip", "wrinkle"):
    b = flaschka_ratiu(model(name).casimirs)
    print(f"{name:10s} Jacobiator == 0:", bool(is_poisson(b)))

# Rescaling by any non-vanishing k preserves the axioms for these rank <= 2
# structures; with a concrete positive k this is again an exact identity.
k = parse("1 + x^2 + y^2 + z^2 + t^2")
scaled = flaschka_ratiu(model("wrinkle").casimirs, k=k)
print("\nwrinkle with k = 1 + |p|^2 still Poisson:", bool(is_poisson(scaled)))

# A failing example, with the offending triple as a witness:
# pi = dx^dy + x dz^dt mixes two symplectic planes with an x-dependent scale.
bad = Bivector.from_upper({(0, 1): Expr.one(), (2, 3): parse("x")})
verdict = is_poisson(bad)
print("\npi = dx^dy + x dz^dt Poisson:", bool(verdict))
print("  witness triple:", verdict.witness_triple, " J =", verdict.witness)
print("  full Jacobiator:", {k_: str(v) for k_, v in jacobiator(bad).items()})

# Rank stratification: 0 on the critical locus, 2 on the open leaves, never 4.
cusp = flaschka_ratiu(model("cusp").casimirs)
print("\ncusp rank at (1, 0, 0, 1) on the arc x^2 = t:", rank_at(cusp, Point4(1, 0, 0, 1)))
print("cusp rank at (0, 1, 0, 0) off the arc:      ", rank_at(cusp, Point4(0, 1, 0, 0)))

# The linear part at the origin defines a Lie algebra.  For the cusp:
# [x, y] = 2z, [x, z] = 2y, [y, z] = 3t.
sc = linear_part(cusp)
print("\ncusp linearisation:")
for (i, j), e in sc.linear.items():
    names = "xyzt"
    if not e.is_zero:
        print(f"  [{names[i]}, {names[j]}] = {e}")

# The birth move carries an affine term: its {y,z} bracket has the constant
# -3s, which linearisation drops (and reports).
import warnings

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    sc_birth = linear_part(flaschka_ratiu(model("birth").casimirs))
print("\nbirth dropped constants:", {k_: str(v) for k_, v in sc_birth.dropped.items()})

# The wrinkling move linearises to zero exactly at s = 0; for symbolic s the
# table is s-proportional, so "trivial" is a statement about s = 0 only.
print("wrinkle linear part, s = 0, trivial:",
      linear_part(flaschka_ratiu(model("wrinkle", 0).casimirs)).is_trivial())
print("wrinkle linear part, s symbolic, {x,y} =",
      linear_part(flaschka_ratiu(model("wrinkle").casimirs)).linear[(0, 1)])
