"""Well-behaved functors from the mesh category of a cover into a knitted component.

A functor is stored by its values on arrows: ``on_arrows[(x, y)][i]`` is the
module morphism ``pi x -> pi y`` assigned to the ``i``-th basis arrow of
``M(x, y)``.  Paths are sent to composites, and the mesh relations of the
cover are annihilated by construction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import fields as la
from .fields import Subspace
from .mesh_category import MeshCategory, MeshClass
from .modulation import ModulatedQuiver, attach_split_modulation, pull_back_modulation
from .rep_engine import (
    ARComponent,
    ModuleMorphism,
    NotIrreducible,
    Representation,
    ambient_dim,
    direct_sum,
    from_vector,
    hom,
    identity_morphism,
    into_sum,
    solve_combination,
    strongly_irreducible_check,
    zero_morphism,
)
from .translation_quiver import TruncatedCover, decidable, lift_path, mesh_at


class CoverMismatch(ValueError):
    pass


class AssemblyFailure(RuntimeError):
    def __init__(self, x: str, reason: str):
        super().__init__(f"mesh at {x}: {reason}")
        self.x = x


class SeedNotStronglyIrreducible(ValueError):
    pass


class UndecidableTruncation(ValueError):
    def __init__(self, message: str, min_radius: int):
        super().__init__(f"{message} (needs radius >= {min_radius})")
        self.min_radius = min_radius


class OracleMismatch(AssertionError):
    pass


def component_modulation(comp: ARComponent) -> ModulatedQuiver:
    """Split modulation of the component quiver: ``dim M(X, Y) = dim irr(X, Y)`` and identity pairings."""
    dims = {a: len(comp.irr_reps[a]) for a in comp.quiver.arrows}
    return attach_split_modulation(comp.quiver, dims, field=comp.field)


@dataclass(eq=False)
class WellBehavedFunctor:
    cover: TruncatedCover
    comp: ARComponent
    mq: ModulatedQuiver  # modulation pulled back to the cover
    category: MeshCategory
    on_arrows: dict[tuple[str, str], list[ModuleMorphism]] = field(default_factory=dict)

    def module(self, x: str) -> Representation:
        return self.comp.module_of[self.cover.pi(x)]

    def arrow(self, x: str, y: str, i: int = 0) -> ModuleMorphism:
        return self.on_arrows[(x, y)][i]

    def on_path(self, path: Sequence[str], indices: Sequence[int]) -> ModuleMorphism:
        out = identity_morphism(self.module(path[0]))
        for (s, t), i in zip(zip(path, path[1:]), indices):
            out = self.on_arrows[(s, t)][i] @ out
        return out

    def image(self, cls: MeshClass) -> ModuleMorphism:
        out = zero_morphism(self.module(cls.source), self.module(cls.target))
        for (path, idx), c in cls.terms():
            out = out + self.on_path(path, idx).scale(c)
        return out

    def mesh_defect(self, x: str) -> ModuleMorphism:
        """Image of ``gamma_x``; zero for a well-behaved functor."""
        gamma = self.category._gammas[x]
        start = self.module(gamma.start)
        out = zero_morphism(start, self.module(x))
        for m, (k, i), c in gamma.entries():
            out = out + (self.on_arrows[(m, x)][i] @ self.on_arrows[(gamma.start, m)][k]).scale(c)
        return out

    def problems(self) -> list[str]:
        """Violations of the defining properties on the interior (empty when well behaved)."""
        out = []
        tc = self.cover
        for x in tc.interior():
            if x in self.category._gammas and not self.mesh_defect(x).is_zero():
                out.append(f"mesh relation at {x} is not annihilated")
        for (x, y), fs in sorted(self.on_arrows.items()):
            if not (tc.is_interior(x) or tc.is_interior(y)):
                continue
            X, Y = tc.pi(x), tc.pi(y)
            try:
                independent = strongly_irreducible_check(self.comp, X, [(Y, f) for f in fs])
            except NotIrreducible:
                independent = False
            if not independent or len(fs) != len(self.comp.irr_reps[(X, Y)]):
                out.append(f"images of the arrows {x}->{y} do not form a basis of irr({X},{Y})")
        return out

    def dump(self) -> str:
        from .textio import dump_matrix

        lines = []
        for (x, y) in sorted(self.on_arrows):
            for i, f in enumerate(self.on_arrows[(x, y)]):
                for v in self.comp.alg.vertices:
                    lines.append(dump_matrix(f"F[{x}->{y}#{i}]@{v}", f.comps[v], f.source.dims[v]))
        return "\n".join(lines) + "\n"


def _check_cover(tc: TruncatedCover, comp: ARComponent) -> None:
    base, q = tc.base, comp.quiver
    if set(base.vertices) != set(q.vertices) or set(base.arrows) != set(q.arrows) or dict(base.tau) != dict(q.tau):
        raise CoverMismatch("cover is not a cover of the component quiver")


def _annihilators(E: Representation, Y: Representation, f: ModuleMorphism) -> list[ModuleMorphism]:
    """Basis of ``{h in Hom(E, Y) : h f = 0}``."""
    K = E.K
    basis = hom(E, Y)
    if not basis:
        return []
    n = ambient_dim(f.source, Y)
    cols = [(b @ f).vector() for b in basis]
    A = la.transpose(cols, n) if n else []
    combos = la.nullspace(K, A, ncols=len(basis)) if A else la.identity(K, len(basis))
    out = []
    for c in combos:
        h = zero_morphism(E, Y)
        for coeff, b in zip(c, basis):
            if coeff != 0:
                h = h + b.scale(coeff)
        out.append(h)
    return out


def _first_epi(candidates: Sequence[ModuleMorphism]) -> ModuleMorphism | None:
    """Deterministic choice: basis order first, then small integer combinations."""
    for h in candidates:
        if h.is_surjective():
            return h
    if len(candidates) < 2:
        return None
    for coeffs in itertools.product(range(3), repeat=len(candidates)):
        if sum(1 for c in coeffs if c) < 2:
            continue
        h = zero_morphism(candidates[0].source, candidates[0].target)
        for c, b in zip(coeffs, candidates):
            if c:
                h = h + b.scale(c)
        if h.is_surjective():
            return h
    return None


def build_well_behaved(tc: TruncatedCover, comp: ARComponent) -> WellBehavedFunctor:
    """Construct ``F`` vertex by vertex in increasing length.

    Arrows into a vertex without a complete mesh receive the knitted
    representatives.  At a mesh ending in ``y`` whose arrows out of ``tau y``
    are assigned, the assembled map ``f: F(tau y) -> E`` is completed by the
    first epimorphism ``g: E -> F y`` with ``g f = 0``; the arrow images are
    the components of ``g`` twisted by the inverse mesh coefficients, so the
    image of ``gamma_y`` is ``g f = 0``.
    """
    _check_cover(tc, comp)
    mq = pull_back_modulation(tc, component_modulation(comp))
    cat = MeshCategory(mq)
    F = WellBehavedFunctor(tc, comp, mq, cat)
    cover, pi, ell = tc.cover, tc.pi, tc.length
    K = comp.field
    for y in sorted(cover.vertices, key=lambda v: (ell[v], v)):
        if not cover.pred[y]:
            continue
        gamma = cat._gammas.get(y)
        if gamma is None:
            for m in cover.pred[y]:
                F.on_arrows[(m, y)] = list(comp.irr_reps[(pi(m), pi(y))])
            continue
        s = gamma.start
        middles = [(m, i) for m in sorted(gamma.terms) for i in range(mq.dims[(m, y)])]
        E, inj, _ = direct_sum([F.module(m) for m, _ in middles])
        f = into_sum(F.module(s), E, inj, [F.on_arrows[(s, m)][i] for m, i in middles])
        if not f.is_injective():
            raise AssemblyFailure(y, "assembled map out of tau is not injective")
        if any(E.dims[v] != f.source.dims[v] + F.module(y).dims[v] for v in comp.alg.vertices):
            raise AssemblyFailure(y, "middle term has the wrong dimension vector")
        g = _first_epi(_annihilators(E, F.module(y), f))
        if g is None:
            raise AssemblyFailure(y, "no epimorphism annihilates the assembled map")
        comps = [g @ e for e in inj]
        pos = 0
        for m in sorted(gamma.terms):
            d = mq.dims[(m, y)]
            gk = comps[pos:pos + d]
            pos += d
            S = la.inverse(K, gamma.terms[m])
            images = []
            for i in range(d):
                h = zero_morphism(F.module(m), F.module(y))
                for k in range(d):
                    if S[i][k] != 0:
                        h = h + gk[k].scale(S[i][k])
                images.append(h)
            F.on_arrows[(m, y)] = images
    return F


def _inverse_automorphism(t: ModuleMorphism) -> ModuleMorphism:
    K = t.K
    return ModuleMorphism(t.target, t.source, {v: la.inverse(K, m) if m else [] for v, m in t.comps.items()})


def seeded_build(tc: TruncatedCover, comp: ARComponent, x: str,
                 seed: Mapping[str, Sequence[ModuleMorphism]]) -> WellBehavedFunctor:
    """A well-behaved functor sending the arrows out of ``x`` to prescribed morphisms.

    ``seed`` maps each successor of ``x`` (cover name or component name) to
    the list ``f_{y,1..d}``.  The standard functor is conjugated by module
    automorphisms ``t_y`` of the successors, solved from ``t_y F(x->y) = f_y``;
    conjugation keeps every mesh relation and every irreducible class basis.
    """
    F0 = build_well_behaved(tc, comp)
    cover, pi = tc.cover, tc.pi
    X = pi(x)
    lookup = {}
    for y in cover.succ[x]:
        lookup[y] = y
        lookup[pi(y)] = y
    prescribed: dict[str, list[ModuleMorphism]] = {}
    for key, fs in seed.items():
        if key not in lookup:
            raise SeedNotStronglyIrreducible(f"{key} is not a successor of {x}")
        prescribed[lookup[key]] = list(fs)
    for y in cover.succ[x]:
        fs = prescribed.get(y)
        if fs is None or len(fs) != F0.mq.dims[(x, y)]:
            raise SeedNotStronglyIrreducible(f"seed must give {F0.mq.dims[(x, y)]} morphisms into {y}")
    try:
        ok = strongly_irreducible_check(comp, X, [(pi(y), f) for y, fs in prescribed.items() for f in fs])
    except NotIrreducible as exc:
        raise SeedNotStronglyIrreducible(str(exc)) from exc
    if not ok:
        raise SeedNotStronglyIrreducible("seed classes are linearly dependent")

    K = comp.field
    twist: dict[str, ModuleMorphism] = {}
    for y, fs in prescribed.items():
        current = F0.on_arrows[(x, y)]
        if all(a == b for a, b in zip(current, fs)):
            continue
        Y = F0.module(y)
        ends = hom(Y, Y)
        n = ambient_dim(F0.module(x), Y)
        cols = [[v for f0 in current for v in (b @ f0).vector()] for b in ends]
        target = [v for f in fs for v in f.vector()]
        c = solve_combination(K, cols, target, n * len(fs))
        t = None
        if c is not None:
            t = zero_morphism(Y, Y)
            for coeff, b in zip(c, ends):
                if coeff != 0:
                    t = t + b.scale(coeff)
        if t is None or not t.is_iso():
            raise AssemblyFailure(y, "seed is not reachable from the standard functor by an automorphism")
        twist[y] = t
    F = WellBehavedFunctor(tc, comp, F0.mq, F0.category)
    inverses = {y: _inverse_automorphism(t) for y, t in twist.items()}
    for (s, t), fs in F0.on_arrows.items():
        out = []
        for f in fs:
            if s in inverses:
                f = f @ inverses[s]
            if t in twist:
                f = twist[t] @ f
            out.append(f)
        F.on_arrows[(s, t)] = out
    for y, fs in prescribed.items():
        if any(a != b for a, b in zip(F.on_arrows[(x, y)], fs)):
            raise AssemblyFailure(y, "prescription not reproduced")
    return F


# Covering properties ----------------------------------------------------------

@dataclass(frozen=True)
class GradedMapReport:
    domain_dim: int  # sum over the fibre of the graded pieces of the mesh category
    target_dim: int  # dim rad^n / rad^(n+1) in the module category
    rank: int
    lands_in_rad_n: bool

    @property
    def bijective(self) -> bool:
        return self.lands_in_rad_n and self.rank == self.domain_dim == self.target_dim


@dataclass(frozen=True)
class GradedCoveringReport:
    x: str
    y: str
    n: int
    covariant: GradedMapReport
    contravariant: GradedMapReport

    @property
    def bijective(self) -> bool:
        return self.covariant.bijective and self.contravariant.bijective


@dataclass(frozen=True)
class HomMapReport:
    domain_dim: int
    target_dim: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.domain_dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dim


@dataclass(frozen=True)
class InjectivityReport:
    x: str
    y: str
    covariant: HomMapReport
    contravariant: HomMapReport

    @property
    def injective(self) -> bool:
        return self.covariant.injective and self.contravariant.injective

    @property
    def bijective(self) -> bool:
        return self.injective and self.covariant.surjective and self.contravariant.surjective


def _graded_map(F: WellBehavedFunctor, sources, targets, n: int, X: str, Y: str) -> GradedMapReport:
    R = F.comp.radical
    top, below = R.power(X, Y, n), R.power(X, Y, n + 1)
    images, dom = [], 0
    for a, b in zip(sources, targets):
        d, basis = F.category.graded_piece(a, b, n)
        dom += d
        h = F.category.hom(a, b)
        images.extend(F.image(MeshClass(h, vec)).vector() for vec in basis)
    inside = all(top.contains(v) for v in images)
    reduced = Subspace(F.comp.field, below.n, below.basis + images)
    return GradedMapReport(dom, top.dim - below.dim, reduced.dim - below.dim, inside)


def verify_graded_covering(F: WellBehavedFunctor, x: str, y: str, n: int) -> GradedCoveringReport:
    """Rank check of the maps induced by ``F`` on ``rad^n / rad^(n+1)``, summed over fibres.

    Covariant: ``sum_{z over pi y} R^n/R^(n+1) (x, z)``; contravariant:
    ``sum_{z over pi x} R^n/R^(n+1) (z, y)``.
    """
    tc = F.cover
    if n < 0:
        raise ValueError("n must be nonnegative")
    ell = tc.length
    if not tc.is_interior(x) or not tc.is_interior(y):
        raise UndecidableTruncation(f"{x} or {y} is on the boundary", max(tc.depth[x], tc.depth[y]) + 2)
    if not decidable(tc, x, level=ell[x] + n + 1):
        raise UndecidableTruncation(f"fibre sums from {x} leave the truncation", tc.depth[x] + n + 2)
    if not decidable(tc, y, backward=True, level=ell[y] - n - 1):
        raise UndecidableTruncation(f"fibre sums into {y} leave the truncation", tc.depth[y] + n + 2)
    X, Y = tc.pi(x), tc.pi(y)
    zs = tc.fiber(Y)
    cov = _graded_map(F, [x] * len(zs), zs, n, X, Y)
    ws = tc.fiber(X)
    contra = _graded_map(F, ws, [y] * len(ws), n, X, Y)
    return GradedCoveringReport(x, y, n, cov, contra)


def _hom_map(F: WellBehavedFunctor, sources, targets, X: str, Y: str) -> HomMapReport:
    images, dom = [], 0
    for a, b in zip(sources, targets):
        h = F.category.hom(a, b)
        dom += h.dim
        for i in range(h.dim):
            coords = [F.comp.field.zero] * h.dim
            coords[i] = F.comp.field.one
            images.append(F.image(MeshClass(h, coords)).vector())
    M, N = F.comp.module_of[X], F.comp.module_of[Y]
    rank = Subspace(F.comp.field, ambient_dim(M, N), images).dim
    return HomMapReport(dom, len(hom(M, N)), rank)


def verify_injectivity(F: WellBehavedFunctor, x: str, y: str) -> InjectivityReport:
    """Rank check that ``sum_{z over pi y} k(x, z) -> Hom(F x, F y)`` (and its dual) is injective."""
    tc = F.cover
    if not decidable(tc, x) or not decidable(tc, y, backward=True):
        raise UndecidableTruncation(f"the cones of {x} and {y} leave the truncation", tc.radius + 1)
    X, Y = tc.pi(x), tc.pi(y)
    zs = tc.fiber(Y)
    ws = tc.fiber(X)
    return InjectivityReport(x, y, _hom_map(F, [x] * len(zs), zs, X, Y), _hom_map(F, ws, [y] * len(ws), X, Y))


def check_generalized_standard(comp: ARComponent) -> bool:
    """True iff some radical power vanishes on every pair of modules of the component."""
    return comp.radical.nilpotency_index is not None


# Degrees of composites -------------------------------------------------------------

NOT_IN_RAD_N_PLUS_1 = "NotInRadNPlus1"
IN_RAD_N_PLUS_1_NONZERO = "InRadNPlus1Nonzero"
ZERO = "Zero"


@dataclass(frozen=True, eq=False)
class Witness:
    """``h_i = f_i + h'_i`` with ``f_1...f_n = 0``; ``eps_i = h'_i`` for ``i`` in ``indices`` else ``f_i``."""

    indices: tuple[int, ...]
    f: tuple[ModuleMorphism, ...]
    eps: tuple[ModuleMorphism, ...]


@dataclass(frozen=True, eq=False)
class DegreeVerdict:
    kind: str
    path: tuple[str, ...]
    mesh_product: MeshClass | None = None
    composite: ModuleMorphism | None = None
    witness: Witness | None = None
    composite_rank: int = 0


def compose_all(maps: Sequence[ModuleMorphism]) -> ModuleMorphism:
    """``maps[0]`` first, then ``maps[1]``, and so on."""
    out = maps[0]
    for m in maps[1:]:
        out = m @ out
    return out


def find_nonzero_expansion(fs: Sequence[ModuleMorphism], primes: Sequence[ModuleMorphism]):
    """Smallest index set ``S`` (by size, then lexicographically) whose term of
    ``prod (f_i + h'_i)`` (``h'_i`` at ``i`` in ``S``) is nonzero, or ``None``."""
    n = len(fs)
    for t in range(1, n + 1):
        for S in itertools.combinations(range(n), t):
            eps = [primes[i] if i in S else fs[i] for i in range(n)]
            if not compose_all(eps).is_zero():
                return S, eps
    return None


def _names_along(comp: ARComponent, path: Sequence[ModuleMorphism]) -> list[str]:
    by_id = {id(M): name for name, M in comp.module_of.items()}
    names = []
    for i, h in enumerate(path):
        s, t = by_id.get(id(h.source)), by_id.get(id(h.target))
        if s is None or t is None:
            raise NotIrreducible(f"morphism {i + 1} is not between modules of the component")
        if names and names[-1] != s:
            raise ValueError(f"morphisms {i} and {i + 1} are not composable")
        if not names:
            names.append(s)
        names.append(t)
    return names


def _lift_start(tc: TruncatedCover, X: str) -> str:
    options = [v for v in tc.fiber(X) if tc.is_interior(v)]
    if not options:
        from .translation_quiver import LiftEscapesTruncation

        raise LiftEscapesTruncation(f"no interior vertex over {X}")
    return min(options, key=lambda v: (tc.depth[v], v))


def composite_degree(F: WellBehavedFunctor, path: Sequence[ModuleMorphism], oracle: bool = True) -> DegreeVerdict:
    """Decide whether ``h_1 ... h_n`` avoids ``rad^(n+1)``, lies in it nonzero, or vanishes.

    The classes of the ``h_i`` are lifted along the cover and multiplied in
    the mesh category: a nonzero product means the composite avoids
    ``rad^(n+1)``.  Otherwise the composite is in ``rad^(n+1)`` and the module
    composite decides between a witness and zero.  With ``oracle`` the verdict
    is checked against direct radical membership.
    """
    comp, tc, cat = F.comp, F.cover, F.category
    K = comp.field
    names = _names_along(comp, path)
    arrows = list(zip(names, names[1:]))
    lifted = lift_path(tc, arrows, _lift_start(tc, names[0]))
    R = comp.radical
    classes, fs = [], []
    for i, ((X, Y), (x, y), h) in enumerate(zip(arrows, lifted, path), 1):
        reps = F.on_arrows[(x, y)]
        rad2 = R.power(X, Y, 2)
        c = solve_combination(K, [r.vector() for r in reps] + rad2.basis, h.vector(), rad2.n)
        if c is None or all(a == 0 for a in c[:len(reps)]):
            raise NotIrreducible(f"h_{i} is not irreducible")
        c = c[:len(reps)]
        cls = None
        f = zero_morphism(h.source, h.target)
        for j, a in enumerate(c):
            if a != 0:
                term = cat.arrow_class((x, y), j).scale(a)
                cls = term if cls is None else cls + term
                f = f + reps[j].scale(a)
        classes.append(cls)
        fs.append(f)
    product = classes[0]
    for cls in classes[1:]:
        product = cat.compose(product, cls)
    composite = compose_all(path)
    n = len(path)
    rank = sum(la.rank(K, m) for m in composite.comps.values() if m)
    if not product.is_zero():
        verdict = DegreeVerdict(NOT_IN_RAD_N_PLUS_1, tuple(names), product, composite, None, rank)
    elif composite.is_zero():
        verdict = DegreeVerdict(ZERO, tuple(names), product, composite, None, rank)
    else:
        primes = [h - f for h, f in zip(path, fs)]
        found = find_nonzero_expansion(fs, primes)
        if found is None:
            raise AssertionError("nonzero composite without a nonzero expansion term")
        S, eps = found
        w = Witness(tuple(i + 1 for i in S), tuple(fs), tuple(eps))
        verdict = DegreeVerdict(IN_RAD_N_PLUS_1_NONZERO, tuple(names), product, composite, w, rank)
    if oracle:
        inside = R.power(names[0], names[-1], n + 1).contains(composite.vector())
        expected = ZERO if composite.is_zero() else (IN_RAD_N_PLUS_1_NONZERO if inside else NOT_IN_RAD_N_PLUS_1)
        if expected != verdict.kind:
            raise OracleMismatch(f"mesh category says {verdict.kind}, radical membership says {expected}")
    return verdict


def decompose_witness(F: WellBehavedFunctor, path: Sequence[ModuleMorphism]):
    """``(f_i, eps_i)`` with ``f_1...f_n = 0`` and ``eps_1...eps_n != 0``."""
    verdict = composite_degree(F, path)
    if verdict.kind != IN_RAD_N_PLUS_1_NONZERO:
        raise ValueError(f"composite is {verdict.kind}; no witness exists")
    w = verdict.witness
    assert compose_all(w.f).is_zero() and not compose_all(w.eps).is_zero()
    return list(w.f), list(w.eps)
