import itertools
import threading

import pytest

from meshcover.fields import QQ, Subspace
from meshcover.mesh_category import MeshCategory, PathExplosion, compose, hom_basis, radical_power
from meshcover.modulation import attach_split_modulation, pull_back_modulation
from meshcover.translation_quiver import NotWithLength, TranslationQuiver, universal_cover
from quivers import a2, tube2, two_middle_mesh, za2_quotient, za3_quotient


def cover_category(base, root, radius, dims=None):
    tc = universal_cover(base, root, radius)
    mq = pull_back_modulation(tc, attach_split_modulation(base, dims))
    return tc, MeshCategory(mq)


def test_a2_hom_dimensions_and_composition():
    cat = MeshCategory(attach_split_modulation(a2()))
    assert cat.hom("S2", "S1").dim == 0
    assert cat.hom("S2", "P1").dim == 1
    assert cat.hom("S1", "S1").dim == 1
    u, v = cat.arrow_class(("S2", "P1"), 0), cat.arrow_class(("P1", "S1"), 0)
    assert cat.compose(u, v).is_zero()
    assert cat.compose(cat.identity("S2"), u) == u


def test_one_full_mesh_with_two_middles():
    tc, cat = cover_category(za3_quotient(3), "v0_1", 6)
    q = tc.cover
    for x in tc.interior():
        if x in q.tau and len(q.pred[x]) == 2:
            h = cat.hom(q.tau[x], x)
            assert h.ambient_dim == 2 and h.dim == 1
            return
    pytest.fail("no two-middle mesh in the interior")


def test_arrow_classes_independent_for_dim_two():
    dims = {("s", "y1"): 1, ("s", "y2"): 2, ("y1", "x"): 1, ("y2", "x"): 2}
    cat = MeshCategory(attach_split_modulation(two_middle_mesh(), dims))
    a, b = cat.arrow_class(("s", "y2"), 0), cat.arrow_class(("s", "y2"), 1)
    assert Subspace(QQ, 2, [a.coords, b.coords]).dim == 2
    assert cat.hom("s", "x").dim == 1 + 4 - 1
    with pytest.raises(IndexError):
        cat.arrow_class(("s", "y2"), 2)


def test_associativity_on_za2_cover():
    tc, cat = cover_category(za2_quotient(3), "u0_1", 4)
    verts = tc.interior()
    for x, y, z, w in itertools.product(verts, repeat=4):
        hs = [cat.hom(x, y), cat.hom(y, z), cat.hom(z, w)]
        if not all(h.dim for h in hs):
            continue
        for cu, cv, cw in itertools.product(*[range(h.dim) for h in hs]):
            u, v, t = (cat.element_class(h.source, h.target, h.representative(
                [1 if i == c else 0 for i in range(h.dim)])) for h, c in zip(hs, (cu, cv, cw)))
            assert cat.compose(cat.compose(u, v), t) == cat.compose(u, cat.compose(v, t))


def test_radical_shortcut_matches_generators():
    for base, root in [(za2_quotient(2), "u0_1"), (za3_quotient(2), "v0_1"), (tube2(), "a1")]:
        tc, cat = cover_category(base, root, 5)
        interior = tc.interior()
        for x, y in itertools.product(interior, repeat=2):
            h = cat.hom(x, y)
            top = (h.length or 0) + 2
            for n in range(top):
                assert cat.radical_power(x, y, n) == cat.radical_power(x, y, n, method="generators")


def test_prop_chain_on_paths():
    tc, cat = cover_category(za3_quotient(2), "v0_1", 6)
    for x, y in itertools.product(tc.interior(), repeat=2):
        h = cat.hom(x, y)
        if h.length is None:
            continue
        for i in range(h.length + 1):
            assert cat.radical_power(x, y, i).dim == h.dim
        assert cat.radical_power(x, y, h.length + 1).dim == 0
        assert cat.graded_piece(x, y, h.length)[0] == h.dim
        assert cat.graded_piece(x, y, h.length + 1)[0] == 0
    x = tc.interior()[0]
    assert cat.graded_piece(x, x, 0)[0] == 1 and cat.radical_power(x, x, 1).dim == 0


def test_module_level_helpers_share_a_cache():
    mq = attach_split_modulation(a2())
    assert hom_basis(mq, "S2", "P1") is hom_basis(mq, "S2", "P1")
    assert radical_power(mq, "S2", "S1", 0).dim == 0


def test_not_with_length_and_path_cap():
    tq = TranslationQuiver.build("abc", [("a", "b"), ("b", "c"), ("c", "a")], "abc", "abc")
    with pytest.raises(NotWithLength):
        MeshCategory(attach_split_modulation(tq)).hom("a", "a")
    tc, _ = cover_category(za3_quotient(2), "v0_1", 8)
    mq = pull_back_modulation(tc, attach_split_modulation(za3_quotient(2)))
    cat = MeshCategory(mq, path_cap=1)
    x = tc.base_vertex
    with pytest.raises(PathExplosion):
        for y in tc.interior():
            cat.hom(x, y)


def test_concurrent_fill_is_consistent():
    tc, cat = cover_category(za3_quotient(3), "v0_1", 6)
    pairs = list(itertools.product(tc.interior(), repeat=2))
    ref = {p: MeshCategory(cat.mq).hom(*p).dim for p in pairs}
    errors = []

    def work():
        for p in pairs:
            if cat.hom(*p).dim != ref[p]:
                errors.append(p)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
