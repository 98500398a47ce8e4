"""Representations of finite acyclic quivers and their Auslander-Reiten components.

Representations use the covariant convention: a representation assigns a
space to every vertex and, to an arrow ``a: s -> t``, a matrix of shape
``dim(t) x dim(s)``.  The indecomposable projective ``P(i)`` has the paths
starting at ``i`` as basis, so that ``rad P(i)`` is the sum of the ``P(j)``
over arrows ``i -> j``.

Morphisms are given by one matrix per vertex.  ``g @ f`` is the usual
composite "first ``f`` then ``g``".
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import fields as la
from .fields import GroundField, QQ, Subspace
from .translation_quiver import TranslationQuiver, validate


class NotDynkin(ValueError):
    pass


class KnittingFailure(RuntimeError):
    pass


class ComponentIncomplete(ValueError):
    pass


class NotIrreducible(ValueError):
    pass


def _mm(K: GroundField, a, b, rows: int, cols: int):
    if rows == 0 or cols == 0:
        return la.zeros(K, rows, cols)
    if not b or not a or not a[0]:
        return la.zeros(K, rows, cols)
    return la.matmul(K, a, b)


@dataclass(frozen=True, eq=False)
class HereditaryAlgebra:
    """Path algebra of a finite, connected, acyclic quiver."""

    field: GroundField
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (name, source, target)

    def __post_init__(self):
        names = [a for a, _, _ in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        vs = set(self.vertices)
        for a, s, t in self.arrows:
            if s not in vs or t not in vs:
                raise ValueError(f"arrow {a} uses an unknown vertex")
        if self.topological_order() is None:
            raise NotDynkin("quiver has an oriented cycle")

    @classmethod
    def linear_A(cls, n: int, field: GroundField = QQ) -> "HereditaryAlgebra":
        vs = tuple(str(i) for i in range(1, n + 1))
        arrows = tuple((f"a{i}", str(i), str(i + 1)) for i in range(1, n))
        return cls(field, vs, arrows)

    @classmethod
    def subspace_D4(cls, field: GroundField = QQ) -> "HereditaryAlgebra":
        """``D_4`` with the three outer vertices mapping into the centre."""
        return cls(field, ("1", "2", "3", "4"), (("a", "1", "4"), ("b", "2", "4"), ("c", "3", "4")))

    def out_arrows(self, v: str):
        return [(a, s, t) for a, s, t in self.arrows if s == v]

    def in_arrows(self, v: str):
        return [(a, s, t) for a, s, t in self.arrows if t == v]

    def topological_order(self) -> list[str] | None:
        indeg = {v: 0 for v in self.vertices}
        for _, _, t in self.arrows:
            indeg[t] += 1
        order, q = [], deque(v for v in self.vertices if indeg[v] == 0)
        while q:
            v = q.popleft()
            order.append(v)
            for _, _, t in self.out_arrows(v):
                indeg[t] -= 1
                if indeg[t] == 0:
                    q.append(t)
        return order if len(order) == len(self.vertices) else None

    def paths_from(self, v: str) -> list[tuple[str, tuple[str, ...]]]:
        """All paths starting at ``v`` as ``(end vertex, arrow names)``, trivial path first."""
        out = [(v, ())]
        frontier = [(v, ())]
        while frontier:
            nxt = []
            for end, p in frontier:
                for a, _, t in self.out_arrows(end):
                    nxt.append((t, p + (a,)))
            out.extend(sorted(nxt, key=lambda e: e[1]))
            frontier = nxt
        return out

    def cartan_form(self) -> list[list[int]]:
        """Symmetric matrix of ``2 q`` for the Tits form ``q(x) = sum x_i^2 - sum_arrows x_s x_t``."""
        idx = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        C = [[2 * (i == j) for j in range(n)] for i in range(n)]
        for _, s, t in self.arrows:
            C[idx[s]][idx[t]] -= 1
            C[idx[t]][idx[s]] -= 1
        return C

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for _, s, t in self.arrows:
                for a, b in ((s, t), (t, s)):
                    if a == v and b not in seen:
                        seen.add(b)
                        stack.append(b)
        return len(seen) == len(self.vertices)


def is_dynkin(alg: HereditaryAlgebra) -> bool:
    """Connected and with positive definite Tits form (leading minors of the Cartan matrix)."""
    if not alg.is_connected():
        return False
    C = la.coerce(QQ, alg.cartan_form())
    n = len(C)
    for k in range(1, n + 1):
        minor = [row[:k] for row in C[:k]]
        r, piv = la.rref(QQ, minor)
        if len(piv) < k:
            return False
        if _det(minor) <= 0:
            return False
    return True


def _det(m) -> "Fraction":
    a = [list(r) for r in m]
    n = len(a)
    det = QQ.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return QQ.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


# representations -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Representation:
    alg: HereditaryAlgebra
    dims: Mapping[str, int]
    mats: Mapping[str, list]

    def __post_init__(self):
        for a, s, t in self.alg.arrows:
            m = self.mats.get(a)
            ds, dt = self.dims[s], self.dims[t]
            if m is None:
                raise ValueError(f"missing matrix for arrow {a}")
            if len(m) != dt or (dt and any(len(r) != ds for r in m)):
                raise ValueError(f"matrix for arrow {a} must be {dt}x{ds}")

    @property
    def K(self) -> GroundField:
        return self.alg.field

    @property
    def dimension_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.alg.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    @classmethod
    def zero(cls, alg: HereditaryAlgebra) -> "Representation":
        return cls(alg, {v: 0 for v in alg.vertices}, {a: [] for a, _, _ in alg.arrows})


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    source: Representation
    target: Representation
    comps: Mapping[str, list]

    @property
    def K(self) -> GroundField:
        return self.source.alg.field

    @property
    def alg(self) -> HereditaryAlgebra:
        return self.source.alg

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """``self`` after ``other``."""
        if other.target is not self.source:
            raise ValueError("morphisms are not composable")
        K = self.K
        comps = {
            v: _mm(K, self.comps[v], other.comps[v], self.target.dims[v], other.source.dims[v])
            for v in self.alg.vertices
        }
        return ModuleMorphism(other.source, self.target, comps)

    def then(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return other @ self

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        K = self.K
        return ModuleMorphism(self.source, self.target,
                              {v: la.madd(K, self.comps[v], other.comps[v]) for v in self.alg.vertices})

    def __sub__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return self + other.scale(-1)

    def scale(self, c) -> "ModuleMorphism":
        K = self.K
        return ModuleMorphism(self.source, self.target, {v: la.mscale(K, K(c), m) for v, m in self.comps.items()})

    def vector(self) -> list:
        return [x for v in self.alg.vertices for row in self.comps[v] for x in row]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.vector())

    def is_injective(self) -> bool:
        return all(la.rank(self.K, self.comps[v]) == self.source.dims[v] for v in self.alg.vertices)

    def is_surjective(self) -> bool:
        return all(la.rank(self.K, self.comps[v]) == self.target.dims[v] for v in self.alg.vertices)

    def is_iso(self) -> bool:
        return self.source.dimension_vector == self.target.dimension_vector and self.is_injective()

    def is_intertwiner(self) -> bool:
        K = self.K
        for a, s, t in self.alg.arrows:
            lhs = _mm(K, self.comps[t], self.source.mats[a], self.target.dims[t], self.source.dims[s])
            rhs = _mm(K, self.target.mats[a], self.comps[s], self.target.dims[t], self.source.dims[s])
            if lhs != rhs:
                return False
        return True

    def __eq__(self, other) -> bool:
        return (isinstance(other, ModuleMorphism) and other.source is self.source
                and other.target is self.target and other.vector() == self.vector())

    __hash__ = object.__hash__


def ambient_dim(M: Representation, N: Representation) -> int:
    return sum(N.dims[v] * M.dims[v] for v in M.alg.vertices)


def from_vector(M: Representation, N: Representation, vec: Sequence) -> ModuleMorphism:
    comps = {}
    pos = 0
    for v in M.alg.vertices:
        r, c = N.dims[v], M.dims[v]
        comps[v] = [list(vec[pos + i * c: pos + (i + 1) * c]) for i in range(r)]
        pos += r * c
    return ModuleMorphism(M, N, comps)


def identity_morphism(M: Representation) -> ModuleMorphism:
    return ModuleMorphism(M, M, {v: la.identity(M.K, M.dims[v]) for v in M.alg.vertices})


def zero_morphism(M: Representation, N: Representation) -> ModuleMorphism:
    return ModuleMorphism(M, N, {v: la.zeros(M.K, N.dims[v], M.dims[v]) for v in M.alg.vertices})


def hom(M: Representation, N: Representation) -> list[ModuleMorphism]:
    """Basis of ``Hom(M, N)`` from the nullspace of the intertwining equations."""
    K = M.K
    alg = M.alg
    offset = {}
    pos = 0
    for v in alg.vertices:
        offset[v] = pos
        pos += N.dims[v] * M.dims[v]
    n = pos
    if n == 0:
        return []

    def var(v, r, c):
        return offset[v] + r * M.dims[v] + c

    rows = []
    for a, s, t in alg.arrows:
        Ma, Na = M.mats[a], N.mats[a]
        for r in range(N.dims[t]):
            for c in range(M.dims[s]):
                row = [K.zero] * n
                # (X_t M(a))[r][c] - (N(a) X_s)[r][c]
                for k in range(M.dims[t]):
                    if Ma[k][c] != 0:
                        j = var(t, r, k)
                        row[j] = K.add(row[j], Ma[k][c])
                for k in range(N.dims[s]):
                    if Na[r][k] != 0:
                        j = var(s, k, c)
                        row[j] = K.sub(row[j], Na[r][k])
                rows.append(row)
    basis = la.nullspace(K, rows, ncols=n) if rows else la.identity(K, n)
    return [from_vector(M, N, b) for b in basis]


def hom_space(M: Representation, N: Representation) -> Subspace:
    return Subspace(M.K, ambient_dim(M, N), [h.vector() for h in hom(M, N)])


# endomorphism rings --------------------------------------------------------

def _nilpotent(K: GroundField, m, d: int) -> bool:
    if d == 0:
        return True
    p = m
    for _ in range(d - 1):
        p = la.matmul(K, p, m)
    return la.is_zero(p)


def _eigenvalue(phi: ModuleMorphism):
    """The unique ``c`` with ``phi - c`` nilpotent, or ``None``."""
    K = phi.K
    M = phi.source
    verts = [v for v in M.alg.vertices if M.dims[v]]

    def works(c):
        for v in verts:
            d = M.dims[v]
            m = [[K.sub(x, c) if i == j else x for j, x in enumerate(row)] for i, row in enumerate(phi.comps[v])]
            if not _nilpotent(K, m, d):
                return False
        return True

    v0 = verts[0]
    d0 = M.dims[v0]
    tr = K.zero
    for i in range(d0):
        tr = K.add(tr, phi.comps[v0][i][i])
    if K.p == 0 or d0 % K.p:
        c = K.div(tr, K(d0))
        return c if works(c) else None
    for c in K.elements():
        if works(c):
            return c
    return None


def end_radical(M: Representation):
    """``(local, radical basis vectors)`` for ``End(M)``.

    ``local`` is true iff ``End(M) = k.1 + J`` with ``J`` a nilpotent ideal;
    ``J`` is then returned as a list of morphism vectors.
    """
    if M.is_zero():
        raise ValueError("zero module")
    K = M.K
    basis = hom(M, M)
    ident = identity_morphism(M)
    J = []
    for b in basis:
        c = _eigenvalue(b)
        if c is None:
            return False, []
        J.append((b - ident.scale(c)).vector())
    Jsp = Subspace(K, ambient_dim(M, M), J)
    if Jsp.dim != len(basis) - 1:
        return False, []
    elems = [from_vector(M, M, v) for v in Jsp.basis]
    for a in elems:
        for b in elems:
            if not Jsp.contains((a @ b).vector()):
                return False, []
    power = list(elems)
    for _ in range(M.total_dim + 1):
        if not power:
            break
        nxt = Subspace(K, ambient_dim(M, M), [(a @ b).vector() for a in power for b in elems])
        power = [from_vector(M, M, v) for v in nxt.basis]
    if power:
        return False, []
    return True, Jsp.basis


def is_indecomposable(M: Representation) -> bool:
    local, _ = end_radical(M)
    return local


# constructions ---------------------------------------------------------------

def projective(alg: HereditaryAlgebra, i: str) -> Representation:
    paths = alg.paths_from(i)
    by_vertex = {v: [p for end, p in paths if end == v] for v in alg.vertices}
    index = {v: {p: k for k, p in enumerate(ps)} for v, ps in by_vertex.items()}
    K = alg.field
    mats = {}
    for a, s, t in alg.arrows:
        m = la.zeros(K, len(by_vertex[t]), len(by_vertex[s]))
        for p, k in index[s].items():
            m[index[t][p + (a,)]][k] = K.one
        mats[a] = m
    return Representation(alg, {v: len(ps) for v, ps in by_vertex.items()}, mats)


def projective_inclusion(alg: HereditaryAlgebra, arrow: str) -> ModuleMorphism:
    """``P(j) -> P(i)`` for ``arrow: i -> j``, sending a path ``q`` to ``arrow q``."""
    (_, i, j), = [x for x in alg.arrows if x[0] == arrow]
    Pi, Pj = projective(alg, i), projective(alg, j)
    return _projective_inclusion(alg, arrow, Pj, Pi)


def _projective_inclusion(alg, arrow, Pj: Representation, Pi: Representation) -> ModuleMorphism:
    (_, i, j), = [x for x in alg.arrows if x[0] == arrow]
    K = alg.field
    pi_idx = {}
    for end, p in alg.paths_from(i):
        pi_idx.setdefault(end, []).append(p)
    pj_idx = {}
    for end, p in alg.paths_from(j):
        pj_idx.setdefault(end, []).append(p)
    comps = {}
    for v in alg.vertices:
        src = pj_idx.get(v, [])
        tgt = pi_idx.get(v, [])
        m = la.zeros(K, len(tgt), len(src))
        for k, q in enumerate(src):
            m[tgt.index((arrow,) + q)][k] = K.one
        comps[v] = m
    return ModuleMorphism(Pj, Pi, comps)


def simple(alg: HereditaryAlgebra, i: str) -> Representation:
    dims = {v: int(v == i) for v in alg.vertices}
    return Representation(alg, dims, {a: la.zeros(alg.field, dims[t], dims[s]) for a, s, t in alg.arrows})


def injective_dimension_vector(alg: HereditaryAlgebra, i: str) -> tuple[int, ...]:
    counts = {v: 0 for v in alg.vertices}
    for v in alg.vertices:
        counts[v] = sum(1 for end, _ in alg.paths_from(v) if end == i)
    return tuple(counts[v] for v in alg.vertices)


def direct_sum(mods: Sequence[Representation]):
    """``(S, injections, projections)`` for the direct sum of ``mods``."""
    alg = mods[0].alg if mods else None
    if alg is None:
        raise ValueError("empty direct sum needs an algebra")
    K = alg.field
    dims = {v: sum(m.dims[v] for m in mods) for v in alg.vertices}
    mats = {}
    for a, s, t in alg.arrows:
        big = la.zeros(K, dims[t], dims[s])
        ro = co = 0
        for m in mods:
            for i in range(m.dims[t]):
                for j in range(m.dims[s]):
                    big[ro + i][co + j] = m.mats[a][i][j]
            ro += m.dims[t]
            co += m.dims[s]
        mats[a] = big
    S = Representation(alg, dims, mats)
    inj, proj = [], []
    offs = {v: 0 for v in alg.vertices}
    for m in mods:
        ic, pc = {}, {}
        for v in alg.vertices:
            e = la.zeros(K, dims[v], m.dims[v])
            p = la.zeros(K, m.dims[v], dims[v])
            for k in range(m.dims[v]):
                e[offs[v] + k][k] = K.one
                p[k][offs[v] + k] = K.one
            ic[v], pc[v] = e, p
            offs[v] += m.dims[v]
        inj.append(ModuleMorphism(m, S, ic))
        proj.append(ModuleMorphism(S, m, pc))
    return S, inj, proj


def into_sum(X: Representation, S: Representation, inj: Sequence[ModuleMorphism],
             comps: Sequence[ModuleMorphism]) -> ModuleMorphism:
    out = zero_morphism(X, S)
    for e, f in zip(inj, comps):
        out = out + (e @ f)
    return out


def out_of_sum(S: Representation, Y: Representation, proj: Sequence[ModuleMorphism],
               comps: Sequence[ModuleMorphism]) -> ModuleMorphism:
    out = zero_morphism(S, Y)
    for p, g in zip(proj, comps):
        out = out + (g @ p)
    return out


def cokernel(f: ModuleMorphism):
    """``(C, q)`` with ``q: target -> C`` a cokernel of ``f`` in row-echelon normal form."""
    K = f.K
    E = f.target
    alg = E.alg
    Q, rinv = {}, {}
    for v in alg.vertices:
        e = E.dims[v]
        left = la.left_nullspace(K, f.comps[v], e) if f.source.dims[v] else la.identity(K, e)
        q, piv = la.rref(K, left) if left else ([], [])
        Q[v] = q
        r = la.zeros(K, e, len(q))
        for j, pc in enumerate(piv):
            r[pc][j] = K.one
        rinv[v] = r
    dims = {v: len(Q[v]) for v in alg.vertices}
    mats = {}
    for a, s, t in alg.arrows:
        tmp = _mm(K, Q[t], E.mats[a], dims[t], E.dims[s])
        mats[a] = _mm(K, tmp, rinv[s], dims[t], dims[s])
    C = Representation(alg, dims, mats)
    qcomps = {v: Q[v] if Q[v] else [] for v in alg.vertices}
    return C, ModuleMorphism(E, C, qcomps)


def solve_combination(K: GroundField, vectors: Sequence[Sequence], target: Sequence, n: int):
    """Coefficients ``c`` with ``sum c_i vectors[i] = target`` or ``None``."""
    if not vectors:
        return [] if all(x == 0 for x in target) else None
    A = la.transpose([list(v) for v in vectors], n)
    return la.solve(K, A, list(target), ncols=len(vectors))


# knitting ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlmostSplitSequence:
    """``0 -> start --f--> sum of middles --g--> end -> 0`` stored componentwise.

    ``middles[k] = (Y, j)`` names the ``j``-th copy of ``Y``; ``f[k]: start -> Y``
    and ``g[k]: Y -> end`` are the matching components.
    """

    end: str
    start: str
    middles: tuple[tuple[str, int], ...]
    f: tuple[ModuleMorphism, ...]
    g: tuple[ModuleMorphism, ...]


@dataclass(eq=False)
class ARComponent:
    alg: HereditaryAlgebra
    quiver: TranslationQuiver
    module_of: dict[str, Representation]
    irr_reps: dict[tuple[str, str], list[ModuleMorphism]]
    ass: dict[str, AlmostSplitSequence]
    aliases: dict[str, str] = field(default_factory=dict)

    @property
    def field(self) -> GroundField:
        return self.alg.field

    @property
    def names(self) -> tuple[str, ...]:
        return self.quiver.vertices

    def resolve(self, name: str) -> str:
        """Accept a vertex name, an alias (``S<v>``, ``P<v>``, ``I<v>``) or a dimension vector."""
        if name in self.module_of:
            return name
        if name in self.aliases:
            return self.aliases[name]
        raise KeyError(f"no module named {name!r}")

    def module(self, name: str) -> Representation:
        return self.module_of[self.resolve(name)]

    def left_almost_split(self, X: str):
        """``[((Y, j), u_{Y,j})]``: components of the left minimal almost split map out of ``X``."""
        X = self.resolve(X)
        out = []
        for Y in self.quiver.succ[X]:
            for j, u in enumerate(self.irr_reps[(X, Y)]):
                out.append(((Y, j), u))
        return out

    def right_almost_split(self, X: str):
        X = self.resolve(X)
        out = []
        for Y in self.quiver.pred[X]:
            for j, u in enumerate(self.irr_reps[(Y, X)]):
                out.append(((Y, j), u))
        return out

    @cached_property
    def radical(self) -> "RadicalFiltration":
        return RadicalFiltration(self)


def _dimvec_name(dv: Sequence[int]) -> str:
    if all(d < 10 for d in dv):
        return "M" + "".join(map(str, dv))
    return "M" + "_".join(map(str, dv))


def knit(alg: HereditaryAlgebra) -> ARComponent:
    """Knit the whole Auslander-Reiten quiver of a Dynkin path algebra.

    Starting from the indecomposable projectives, every module whose
    predecessors are all processed gets its left minimal almost split map
    ``f: X -> E``; a nonzero cokernel is ``tau^-1 X``, a zero one marks ``X``
    as injective.
    """
    if not is_dynkin(alg):
        raise NotDynkin("underlying graph is not a Dynkin diagram")
    K = alg.field
    order = alg.topological_order()
    inj_dv = {injective_dimension_vector(alg, v): v for v in alg.vertices}

    modules: dict[str, Representation] = {}
    irr: dict[tuple[str, str], list[ModuleMorphism]] = {}
    preds: dict[str, list[str]] = {}
    tau: dict[str, str] = {}
    ass: dict[str, AlmostSplitSequence] = {}
    projectives, injectives = [], []
    by_dv: dict[tuple[int, ...], str] = {}

    # sinks first: rad P(i) only involves projectives of later vertices
    for v in reversed(order):
        name = f"P{v}"
        modules[name] = projective(alg, v)
        by_dv[modules[name].dimension_vector] = name
        projectives.append(name)
        preds[name] = []
    for a, i, j in alg.arrows:
        inc = _projective_inclusion(alg, a, modules[f"P{j}"], modules[f"P{i}"])
        irr.setdefault((f"P{j}", f"P{i}"), []).append(inc)
        if f"P{j}" not in preds[f"P{i}"]:
            preds[f"P{i}"].append(f"P{j}")

    created = list(projectives)
    processed: set[str] = set()
    limit = 4 * len(alg.vertices) ** 3 + 16
    while len(processed) < len(created):
        ready = [X for X in created if X not in processed and all(Y in processed for Y in preds[X])]
        if not ready:
            raise KnittingFailure("no module is ready to be processed")
        X = ready[0]
        processed.add(X)
        M = modules[X]
        succ = [Z for Z in created if (X, Z) in irr]
        middles = [(Z, j) for Z in succ for j in range(len(irr[(X, Z)]))]
        if not middles:
            injectives.append(X)
            continue
        E, inj, proj = direct_sum([modules[Z] for Z, _ in middles])
        f = into_sum(M, E, inj, [irr[(X, Z)][j] for Z, j in middles])
        C, q = cokernel(f)
        if C.is_zero():
            injectives.append(X)
            continue
        if not f.is_injective():
            raise KnittingFailure(f"left almost split map out of {X} is not injective")
        if not is_indecomposable(C):
            raise KnittingFailure(f"cokernel at the mesh starting in {X} is decomposable")
        dv = C.dimension_vector
        if dv in by_dv:
            raise KnittingFailure(f"cokernel at the mesh starting in {X} repeats {by_dv[dv]}")
        name = f"I{inj_dv[dv]}" if dv in inj_dv else _dimvec_name(dv)
        modules[name] = C
        by_dv[dv] = name
        created.append(name)
        tau[name] = X
        preds[name] = []
        gs = []
        for (Z, j), e in zip(middles, inj):
            gz = q @ e
            irr.setdefault((Z, name), []).append(gz)
            gs.append(gz)
            if Z not in preds[name]:
                preds[name].append(Z)
        ass[name] = AlmostSplitSequence(name, X, tuple(middles),
                                        tuple(irr[(X, Z)][j] for Z, j in middles), tuple(gs))
        if len(created) > limit:
            raise KnittingFailure("component does not close up")

    arrows = []
    for Y in created:
        for Z in created:
            if (Y, Z) in irr:
                arrows.append((Y, Z))
    tq = TranslationQuiver.build(created, arrows, projectives=projectives, injectives=injectives, tau=tau)
    problems = validate(tq)
    if problems:
        raise KnittingFailure("; ".join(problems))

    aliases = {}
    for name, M in modules.items():
        dv = M.dimension_vector
        aliases[_dimvec_name(dv)] = name
        aliases[",".join(map(str, dv))] = name
        if sum(dv) == 1:
            aliases[f"S{alg.vertices[dv.index(1)]}"] = name
        if dv in inj_dv:
            aliases[f"I{inj_dv[dv]}"] = name
    for v in alg.vertices:
        aliases[f"P{v}"] = f"P{v}"
    aliases = {k: v for k, v in aliases.items() if k not in modules or k == v}
    return ARComponent(alg, tq, modules, irr, ass, aliases)


# radical layers ------------------------------------------------------------------

class RadicalFiltration:
    """``rad^n(X, Y)`` between the modules of a knitted component.

    Subspaces live in the ambient space of all vertexwise matrices
    ``X_v -> Y_v`` (the coordinates of :meth:`ModuleMorphism.vector`), so
    membership of any morphism is a single reduction.
    """

    def __init__(self, comp: ARComponent):
        self.comp = comp
        self.K = comp.field
        names = comp.names
        mods = comp.module_of
        self.hom_basis = {(X, Y): hom(mods[X], mods[Y]) for X in names for Y in names}
        self.layers: list[dict[tuple[str, str], Subspace]] = []
        full, rad = {}, {}
        for (X, Y), basis in self.hom_basis.items():
            n = ambient_dim(mods[X], mods[Y])
            full[(X, Y)] = Subspace(self.K, n, [h.vector() for h in basis])
            if X == Y:
                local, J = end_radical(mods[X])
                if not local:
                    raise KnittingFailure(f"{X} is not indecomposable")
                rad[(X, Y)] = Subspace(self.K, n, J)
            else:
                rad[(X, Y)] = full[(X, Y)]
        self.layers = [full, rad]
        # For a genuine component the chain decreases and stops within sum(dim rad)
        # steps.  Corrupted input (isomorphisms inside "rad") may cycle instead.
        self._loop_start = None
        bound = sum(sp.dim for sp in rad.values()) + 2
        while len(self.layers) <= bound:
            nxt = self._next_layer(self.layers[-1], rad)
            seen = next((i for i, old in enumerate(self.layers) if i > 0 and old == nxt), None)
            if seen is not None:
                self._loop_start = seen
                break
            self.layers.append(nxt)
        if self._loop_start is None:
            raise ComponentIncomplete("radical powers do not stabilise")

    def _next_layer(self, cur, rad):
        comp, mods = self.comp, self.comp.module_of
        out = {}
        for X in comp.names:
            for Y in comp.names:
                vecs = []
                for Z in comp.names:
                    A, B = cur[(X, Z)], rad[(Z, Y)]
                    if not A.dim or not B.dim:
                        continue
                    for a in A.basis:
                        fa = from_vector(mods[X], mods[Z], a)
                        for b in B.basis:
                            vecs.append((from_vector(mods[Z], mods[Y], b) @ fa).vector())
                out[(X, Y)] = Subspace(self.K, ambient_dim(mods[X], mods[Y]), vecs)
        return out

    @property
    def nilpotency_index(self) -> int | None:
        """Least ``N`` with ``rad^N = 0`` on the component, ``None`` if it never vanishes."""
        for n, layer in enumerate(self.layers):
            if all(s.dim == 0 for s in layer.values()):
                return n
        return None

    def power(self, X: str, Y: str, n: int) -> Subspace:
        if n < 0:
            raise ValueError("negative radical power")
        if n >= len(self.layers):
            start = self._loop_start
            n = start + (n - start) % (len(self.layers) - start)
        return self.layers[n][(X, Y)]

    def contains(self, h: ModuleMorphism, X: str, Y: str, n: int) -> bool:
        return self.power(X, Y, n).contains(h.vector())

    def depth(self, h: ModuleMorphism, X: str, Y: str) -> int | None:
        """Largest ``n`` with ``h`` in ``rad^n``; ``None`` when ``h`` lies in every power."""
        if h.is_zero():
            return None
        n = 0
        while n + 1 < len(self.layers) and self.power(X, Y, n + 1).contains(h.vector()):
            n += 1
        return n if n + 1 < len(self.layers) else None


def _names(comp: ARComponent, *xs):
    return [comp.resolve(x) for x in xs]


def rad_hom(comp: ARComponent, X: str, Y: str) -> Subspace:
    X, Y = _names(comp, X, Y)
    return comp.radical.power(X, Y, 1)


def rad_power(comp: ARComponent, X: str, Y: str, n: int) -> Subspace:
    X, Y = _names(comp, X, Y)
    return comp.radical.power(X, Y, n)


def irr_space(comp: ARComponent, X: str, Y: str) -> list[ModuleMorphism]:
    """Representatives of a basis of ``rad(X, Y) / rad^2(X, Y)``."""
    X, Y = _names(comp, X, Y)
    R = comp.radical
    vecs = R.power(X, Y, 2).complement_in(R.power(X, Y, 1))
    M, N = comp.module_of[X], comp.module_of[Y]
    return [from_vector(M, N, v) for v in vecs]


def irr_coordinates(comp: ARComponent, X: str, Y: str, h: ModuleMorphism) -> list:
    """Coordinates of the class of ``h`` in ``irr(X, Y)`` w.r.t. the chosen ``irr_reps``."""
    X, Y = _names(comp, X, Y)
    K = comp.field
    R = comp.radical
    if not R.contains(h, X, Y, 1):
        raise NotIrreducible(f"morphism {X}->{Y} is not radical")
    reps = comp.irr_reps.get((X, Y), [])
    rad2 = R.power(X, Y, 2)
    n = rad2.n
    c = solve_combination(K, [r.vector() for r in reps] + rad2.basis, h.vector(), n)
    if c is None:
        raise NotIrreducible(f"class of the morphism is outside the span of irr({X},{Y})")
    return c[:len(reps)]


def strongly_irreducible_check(comp: ARComponent, X: str, parts: Sequence[tuple[str, ModuleMorphism]]) -> bool:
    """Split-case freeness: per target ``X_i`` the classes of its components are independent.

    ``parts`` lists ``(X_i, f_ij)`` pairs.  Raises :class:`NotIrreducible` when
    some ``f_ij`` lies in ``rad^2`` (or outside ``rad``).
    """
    X = comp.resolve(X)
    R = comp.radical
    grouped: dict[str, list[ModuleMorphism]] = {}
    for Y, f in parts:
        grouped.setdefault(comp.resolve(Y), []).append(f)
    for Y, fs in grouped.items():
        rad1, rad2 = R.power(X, Y, 1), R.power(X, Y, 2)
        for f in fs:
            if not rad1.contains(f.vector()) or rad2.contains(f.vector()):
                raise NotIrreducible(f"component {X}->{Y} is not irreducible")
        span = Subspace(comp.field, rad2.n, rad2.basis + [f.vector() for f in fs])
        if span.dim - rad2.dim != len(fs):
            return False
    return True


@dataclass(frozen=True)
class SequenceCertificate:
    exact: bool
    composite_zero: bool
    right_almost_split: bool
    left_almost_split: bool
    checked: int  # number of (Z, radical morphism) factorisation problems solved

    @property
    def ok(self) -> bool:
        return self.exact and self.composite_zero and self.right_almost_split and self.left_almost_split


def almost_split(comp: ARComponent, X: str):
    """The stored sequence ending in ``X`` with an exhaustive verification certificate."""
    X = comp.resolve(X)
    if X in comp.quiver.projectives:
        raise ValueError(f"{X} is projective")
    seq = comp.ass[X]
    K = comp.field
    mods = comp.module_of
    tX, M = mods[seq.start], mods[X]
    E, inj, proj = direct_sum([mods[Y] for Y, _ in seq.middles])
    f = into_sum(tX, E, inj, seq.f)
    g = out_of_sum(E, M, proj, seq.g)
    exact = (f.is_injective() and g.is_surjective() and all(
        E.dims[v] == tX.dims[v] + M.dims[v] for v in comp.alg.vertices))
    zero = (g @ f).is_zero()
    R = comp.radical
    checked = 0
    right = left = True
    for Z in comp.names:
        rad_in = R.power(Z, X, 1)
        if rad_in.dim:
            through = [g @ w for w in hom(mods[Z], E)]
            right &= Subspace(K, rad_in.n, [t.vector() for t in through]).contains_space(rad_in)
            checked += rad_in.dim
        rad_out = R.power(seq.start, Z, 1)
        if rad_out.dim:
            through = [w @ f for w in hom(E, mods[Z])]
            left &= Subspace(K, rad_out.n, [t.vector() for t in through]).contains_space(rad_out)
            checked += rad_out.dim
    return (f, g), SequenceCertificate(exact, zero, right, left, checked)


def factorization_lemma_holds(comp: ARComponent, X: str, Z: str, n: int = 1) -> bool:
    """``rad^(n+1)(X, Z)`` is contained in ``{u w : w in rad^n(E, Z)}`` for ``u: X -> E``
    the left minimal almost split map (``w`` applied after ``u``)."""
    X, Z = _names(comp, X, Z)
    K = comp.field
    mods = comp.module_of
    R = comp.radical
    parts = comp.left_almost_split(X)
    target = R.power(X, Z, n + 1)
    if target.dim == 0:
        return True
    vecs = []
    for (Y, _), u in parts:
        for w in R.power(Y, Z, n).basis:
            vecs.append((from_vector(mods[Y], mods[Z], w) @ u).vector())
    return Subspace(K, target.n, vecs).contains_space(target)


# independent oracles ---------------------------------------------------------------

def positive_roots(alg: HereditaryAlgebra, bound: int = 3) -> list[tuple[int, ...]]:
    """Nonzero ``x`` with entries ``<= bound`` and Tits form ``q(x) = 1``."""
    C = alg.cartan_form()
    n = len(C)
    out = []
    for x in itertools.product(range(bound + 1), repeat=n):
        if any(x) and sum(C[i][j] * x[i] * x[j] for i in range(n) for j in range(n)) == 2:
            out.append(x)
    return out


def brute_force_indecomposable_dimvecs(alg: HereditaryAlgebra, max_dim: int = 1) -> set[tuple[int, ...]]:
    """Dimension vectors of indecomposables found by enumerating every representation.

    Only feasible over small prime fields and tiny dimension bounds.
    """
    K = alg.field
    if K.p == 0:
        raise ValueError("exhaustive search needs a finite field")
    found = set()
    for dv in itertools.product(range(max_dim + 1), repeat=len(alg.vertices)):
        if not any(dv):
            continue
        dims = dict(zip(alg.vertices, dv))
        shapes = [(a, dims[t], dims[s]) for a, s, t in alg.arrows]
        spaces = [itertools.product(K.elements(), repeat=r * c) for _, r, c in shapes]
        for choice in itertools.product(*[list(sp) for sp in spaces]):
            mats = {a: [list(vals[i * c:(i + 1) * c]) for i in range(r)] for (a, r, c), vals in zip(shapes, choice)}
            if is_indecomposable(Representation(alg, dims, mats)):
                found.add(dv)
                break
    return found
