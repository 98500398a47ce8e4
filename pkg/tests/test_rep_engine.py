import itertools
from fractions import Fraction

import pytest

from meshcover.fields import GroundField, QQ
from meshcover.rep_engine import (
    HereditaryAlgebra,
    KnittingFailure,
    ModuleMorphism,
    NotDynkin,
    NotIrreducible,
    Representation,
    almost_split,
    brute_force_indecomposable_dimvecs,
    direct_sum,
    factorization_lemma_holds,
    hom,
    identity_morphism,
    irr_space,
    is_dynkin,
    is_indecomposable,
    knit,
    positive_roots,
    projective,
    rad_hom,
    rad_power,
    simple,
    strongly_irreducible_check,
)
from meshcover.translation_quiver import validate

A2 = HereditaryAlgebra.linear_A(2)


def test_hom_examples():
    S1, S2 = simple(A2, "1"), simple(A2, "2")
    assert hom(S1, S2) == []
    P1 = projective(A2, "1")
    assert P1.dimension_vector == (1, 1)
    (e,) = hom(P1, P1)
    assert identity_morphism(P1) == e.scale(e.comps["1"][0][0] ** -1)
    assert all(h.is_intertwiner() for h in hom(P1, S1) + hom(S2, P1))


def test_indecomposability():
    assert is_indecomposable(simple(A2, "1"))
    assert not is_indecomposable(direct_sum([simple(A2, "1"), simple(A2, "2")])[0])
    with pytest.raises(ValueError):
        is_indecomposable(Representation.zero(A2))


def test_indecomposability_over_small_field():
    K = GroundField(2)
    alg = HereditaryAlgebra.linear_A(2, K)
    # (k^2 -> k^2, identity) is P1 + P1
    M = Representation(alg, {"1": 2, "2": 2}, {"a1": [[1, 0], [0, 1]]})
    assert not is_indecomposable(M)


def test_dynkin_check():
    assert is_dynkin(HereditaryAlgebra.subspace_D4())
    e6 = HereditaryAlgebra(QQ, tuple("123456"), (("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "5"), ("e", "3", "6")))
    assert is_dynkin(e6)
    d4_tilde = HereditaryAlgebra(QQ, tuple("12345"), tuple((f"a{i}", str(i), "5") for i in range(1, 5)))
    assert not is_dynkin(d4_tilde)
    with pytest.raises(NotDynkin):
        knit(d4_tilde)
    with pytest.raises(NotDynkin):
        HereditaryAlgebra(QQ, ("1", "2"), (("a", "1", "2"), ("b", "2", "1")))


def test_positive_root_oracle_counts():
    assert len(positive_roots(HereditaryAlgebra.linear_A(4))) == 10
    assert len(positive_roots(HereditaryAlgebra.subspace_D4())) == 12


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_knit_linear_a(n):
    comp = knit(HereditaryAlgebra.linear_A(n))
    assert len(comp.names) == n * (n + 1) // 2
    roots = set(positive_roots(comp.alg))
    assert {comp.module_of[x].dimension_vector for x in comp.names} == roots
    assert validate(comp.quiver) == []
    assert all(is_indecomposable(comp.module_of[x]) for x in comp.names)


def test_knit_a2_shape():
    comp = knit(A2)
    assert len(comp.quiver.arrows) == 2 and len(comp.ass) == 1
    assert comp.resolve("S2") == "P2" and comp.resolve("S1") == "I1"


def test_knit_d4():
    comp = knit(HereditaryAlgebra.subspace_D4())
    assert len(comp.names) == 12
    assert {comp.module_of[x].dimension_vector for x in comp.names} == set(positive_roots(comp.alg))


@pytest.mark.parametrize("n", [2, 3])
def test_brute_force_search_agrees(n):
    alg = HereditaryAlgebra.linear_A(n, GroundField(2))
    comp = knit(alg)
    assert brute_force_indecomposable_dimvecs(alg) == {comp.module_of[x].dimension_vector for x in comp.names}


def test_knit_over_prime_field():
    comp = knit(HereditaryAlgebra.subspace_D4(GroundField(3)))
    assert len(comp.names) == 12


def test_knit_is_deterministic():
    from meshcover.textio import export_component

    alg = HereditaryAlgebra.linear_A(4)
    assert export_component(knit(alg)) == export_component(knit(alg))


def test_radical_examples():
    comp = knit(HereditaryAlgebra.linear_A(3))
    assert rad_power(comp, "P3", "P1", 0).dim == len(hom(comp.module("P3"), comp.module("P1")))
    assert rad_power(comp, "P3", "P1", 2).dim == 1
    assert rad_power(comp, "P3", "P1", 3).dim == 0
    # the composite P3 -> P2 -> P1 spans rad^2
    h = comp.irr_reps[("P2", "P1")][0] @ comp.irr_reps[("P3", "P2")][0]
    assert comp.radical.contains(h, "P3", "P1", 2) and not h.is_zero()
    assert irr_space(comp, "P3", "P1") == []
    c2 = knit(A2)
    assert rad_hom(c2, "S2", "S1").dim == 0
    assert len(irr_space(c2, "S2", "P1")) == 1
    assert all(irr_space(comp, x, x) == [] for x in comp.names)


@pytest.mark.parametrize("alg", [HereditaryAlgebra.linear_A(4), HereditaryAlgebra.subspace_D4()])
def test_irr_dimensions_match_arrows(alg):
    comp = knit(alg)
    for x, y in itertools.product(comp.names, repeat=2):
        want = len(comp.irr_reps.get((x, y), []))
        assert len(irr_space(comp, x, y)) == want
        assert comp.quiver.has_arrow(x, y) == (want > 0)
    N = comp.radical.nilpotency_index
    assert N is not None and N <= len(comp.names)


def test_almost_split_a2():
    comp = knit(A2)
    (f, g), cert = almost_split(comp, "S1")
    assert cert.ok and (g @ f).is_zero()
    assert f.source.dimension_vector == (0, 1) and g.target.dimension_vector == (1, 0)
    with pytest.raises(ValueError):
        almost_split(comp, "P1")


@pytest.mark.parametrize("alg", [HereditaryAlgebra.linear_A(4), HereditaryAlgebra.subspace_D4()])
def test_every_sequence_certified(alg):
    comp = knit(alg)
    for x in comp.ass:
        _, cert = almost_split(comp, x)
        assert cert.ok


def test_factorization_lemma_a3():
    comp = knit(HereditaryAlgebra.linear_A(3))
    for x, z in itertools.product(comp.names, repeat=2):
        if comp.quiver.succ[x]:
            assert factorization_lemma_holds(comp, x, z, 1)


def test_strongly_irreducible():
    comp = knit(HereditaryAlgebra.subspace_D4())
    for x in comp.names:
        parts = [(y, u) for (y, _), u in comp.left_almost_split(x)]
        if parts:
            assert strongly_irreducible_check(comp, x, parts)
    (y, u), = [(y, u) for (y, _), u in comp.left_almost_split("P4")][:1]
    assert not strongly_irreducible_check(comp, "P4", [(y, u), (y, u.scale(2))])
    c3 = knit(HereditaryAlgebra.linear_A(3))
    comp2 = c3.irr_reps[("P2", "P1")][0] @ c3.irr_reps[("P3", "P2")][0]
    with pytest.raises(NotIrreducible):
        strongly_irreducible_check(c3, "P3", [("P1", comp2)])
