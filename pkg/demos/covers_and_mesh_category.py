"""Unfold a tube into its universal cover and compute in the mesh category.

Run with ``python3 demos/covers_and_mesh_category.py``.
"""
from meshcover.mesh_category import MeshCategory
from meshcover.modulation import attach_split_modulation, pull_back_modulation
from meshcover.textio import parse_tq
from meshcover.translation_quiver import check_covering, is_with_length, universal_cover

# %% A rank-2 tube: the cycle a1 -> b1 -> a2 -> b2 -> a1 with tau swapping a1 and a2
TUBE = """
vertex a1
vertex b1 proj inj
vertex a2
vertex b2 proj inj
arrow a1 b1
arrow b1 a2
arrow a2 b2
arrow b2 a1
tau a1 -> a2
tau a2 -> a1
"""
tube, _ = parse_tq(TUBE)
print("tube is with length:", is_with_length(tube)[0])

# %% Its universal cover, truncated at radius 6 around a1
tc = universal_cover(tube, "a1", 6)
print(f"cover: {len(tc.cover.vertices)} vertices, interior {len(tc.interior())}")
print("covering axioms on the interior:", check_covering(tc.interior_morphism()) or "ok")
print("cover is with length:", is_with_length(tc.interior_quiver())[0])

# %% Mesh category of the cover with the split modulation pulled back from the tube.
# Each mesh has a single middle term, so the mesh relation kills every path of length >= 2.
cat = MeshCategory(pull_back_modulation(tc, attach_split_modulation(tube)))
x = "a1~0"
for y in sorted(tc.interior(), key=lambda v: (cat.hom(x, v).length or 0, v)):
    h = cat.hom(x, y)
    if h.length is None:
        continue
    chain = [cat.radical_power(x, y, n, "generators").dim for n in range(h.length + 2)]
    print(f"hom({x}, {y}): dim {h.dim}, length {h.length}, rad chain {chain}")
