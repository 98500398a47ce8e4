"""Decide the radical degree of composites of irreducible maps in A4.

Run with ``python3 demos/degree_of_composites.py``.
"""
from meshcover.cli import path_morphisms
from meshcover.rep_engine import HereditaryAlgebra, knit
from meshcover.textio import format_verdict
from meshcover.translation_quiver import universal_cover
from meshcover.wellbehaved import build_well_behaved, composite_degree, verify_graded_covering

# %% Knit, unfold and build a well-behaved functor from the mesh category
comp = knit(HereditaryAlgebra.linear_A(4))
tc = universal_cover(comp.quiver, "P4", 12)
F = build_well_behaved(tc, comp)
print("mesh defects:", F.problems() or "none")

# %% The functor induces bijections on graded pieces
r = verify_graded_covering(F, "P4~0", "I3~0", 2)
print("graded piece (P4, I3, 2) bijective:", r.bijective)

# %% A sectional path: its composite is nonzero and of exact degree 3
hs, _ = path_morphisms(comp, ["P4", "P3", "P2", "P1"])
print(format_verdict(composite_degree(F, hs)))

# %% A path through a mesh with one middle term: the composite vanishes
hs, _ = path_morphisms(comp, ["P4", "P3", "M0010"])
print(format_verdict(composite_degree(F, hs)))

# %% Perturbing by rad^2 changes nothing here: rad^2 between neighbours is zero in a Dynkin component
hs, note = path_morphisms(comp, ["P3", "P2", "M0110"], 1)
print(note)
print(format_verdict(composite_degree(F, hs)).splitlines()[0])
