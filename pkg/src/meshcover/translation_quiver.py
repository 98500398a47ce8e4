"""Translation quivers: validation, meshes, lengths, coverings and universal covers.

Vertices are strings.  Arrows are ``(source, target)`` pairs; multiplicities
of irreducible maps live in the modulation, never in the quiver.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

Arrow = tuple[str, str]


class NotWithLength(ValueError):
    """Two walks between the same vertices disagree on length."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class LiftEscapesTruncation(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TranslationQuiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    projectives: frozenset = frozenset()
    injectives: frozenset = frozenset()
    tau: Mapping[str, str] = field(default_factory=dict)
    # vertices whose arrow stars or translation are cut off by a truncation
    incomplete: frozenset = frozenset()

    @classmethod
    def build(cls, vertices: Iterable[str], arrows: Iterable[Arrow], projectives=(), injectives=(),
              tau: Mapping[str, str] | None = None, incomplete=()) -> "TranslationQuiver":
        return cls(
            tuple(vertices),
            tuple((str(s), str(t)) for s, t in arrows),
            frozenset(projectives),
            frozenset(injectives),
            dict(tau or {}),
            frozenset(incomplete),
        )

    @cached_property
    def succ(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for s, t in self.arrows:
            if s in out and t not in out[s]:
                out[s].append(t)
        return {v: sorted(ts) for v, ts in out.items()}

    @cached_property
    def pred(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for s, t in self.arrows:
            if t in out and s not in out[t]:
                out[t].append(s)
        return {v: sorted(ss) for v, ss in out.items()}

    @cached_property
    def tau_inv(self) -> dict[str, str]:
        return {y: x for x, y in self.tau.items()}

    @cached_property
    def arrow_set(self) -> frozenset:
        return frozenset(self.arrows)

    def has_arrow(self, s: str, t: str) -> bool:
        return (s, t) in self.arrow_set

    def is_projective(self, x: str) -> bool:
        return x in self.projectives

    def is_injective(self, x: str) -> bool:
        return x in self.injectives

    def interior(self) -> list[str]:
        return [v for v in self.vertices if v not in self.incomplete]

    def full_subquiver(self, keep: Iterable[str]) -> "TranslationQuiver":
        """Restriction to ``keep``; vertices losing neighbours are marked incomplete."""
        keep = set(keep)
        verts = [v for v in self.vertices if v in keep]
        arrows = [(s, t) for s, t in self.arrows if s in keep and t in keep]
        tau = {x: y for x, y in self.tau.items() if x in keep and y in keep}
        cut = set(self.incomplete) & keep
        for v in verts:
            if any(w not in keep for w in self.succ[v] + self.pred[v]):
                cut.add(v)
            if (v in self.tau and self.tau[v] not in keep) or (v in self.tau_inv and self.tau_inv[v] not in keep):
                cut.add(v)
        return TranslationQuiver.build(verts, arrows, self.projectives & keep, self.injectives & keep, tau, cut)


@dataclass(frozen=True)
class Mesh:
    end: str
    start: str
    middles: tuple[str, ...]


def validate(tq: TranslationQuiver) -> list[str]:
    """Every violated translation-quiver axiom, as human readable lines.

    Axioms that involve an ``incomplete`` vertex are skipped.
    """
    report: list[str] = []
    vset = set(tq.vertices)
    if len(vset) != len(tq.vertices):
        report.append("duplicate vertex names")
    seen: set[Arrow] = set()
    for s, t in tq.arrows:
        if s not in vset or t not in vset:
            report.append(f"arrow {s}->{t} uses an unknown vertex")
        if s == t:
            report.append(f"loop at {s}")
        if (s, t) in seen:
            report.append(f"multiple arrows {s}->{t}")
        seen.add((s, t))
    for name, flags in (("projective", tq.projectives), ("injective", tq.injectives)):
        for v in sorted(set(flags) - vset):
            report.append(f"{name} flag on unknown vertex {v}")
    cut = tq.incomplete
    for x, y in sorted(tq.tau.items()):
        if x not in vset or y not in vset:
            report.append(f"tau {x} -> {y} uses an unknown vertex")
            continue
        if x in tq.projectives:
            report.append(f"tau defined on projective vertex {x}")
        if y in tq.injectives:
            report.append(f"tau value {y} of {x} is injective")
    images = list(tq.tau.values())
    for y in sorted({y for y in images if images.count(y) > 1}):
        report.append(f"tau is not injective: several vertices map to {y}")
    for x in sorted(vset):
        if x in cut:
            continue
        if x not in tq.projectives and x not in tq.tau:
            report.append(f"tau missing for non-projective vertex {x}")
        if x not in tq.injectives and x not in tq.tau_inv:
            report.append(f"non-injective vertex {x} is not a tau value")
    for x, tx in sorted(tq.tau.items()):
        if x in cut or tx in cut or x not in vset or tx not in vset:
            continue
        into_x = set(tq.pred[x])
        out_tx = set(tq.succ[tx])
        for y in sorted(into_x - out_tx):
            report.append(f"mesh axiom fails at ({x},{y}): arrow {y}->{x} but no arrow {tx}->{y}")
        for y in sorted(out_tx - into_x):
            report.append(f"mesh axiom fails at ({x},{y}): arrow {tx}->{y} but no arrow {y}->{x}")
        if not out_tx:
            report.append(f"degenerate mesh at {x}: {tx} has no outgoing arrows")
    return report


def _require_valid(tq: TranslationQuiver) -> None:
    problems = validate(tq)
    if problems:
        raise ValueError("invalid translation quiver: " + "; ".join(problems))


def mesh_at(tq: TranslationQuiver, x: str) -> Mesh | None:
    """The mesh ending in ``x``, or ``None`` when it is not fully present."""
    if x not in tq.tau:
        return None
    start = tq.tau[x]
    mids = tuple(y for y in tq.pred[x] if tq.has_arrow(start, y))
    # a truncated mesh is usable only if its start sees every middle
    if start in tq.incomplete:
        return None
    if x in tq.incomplete and set(mids) != set(tq.succ[start]):
        return None
    return Mesh(x, start, mids)


def meshes(tq: TranslationQuiver) -> list[Mesh]:
    _require_valid(tq)
    out = []
    for x in sorted(tq.tau):
        m = mesh_at(tq, x)
        if m is not None:
            out.append(m)
    return out


# lengths ---------------------------------------------------------------------

def _find_cycle(tq: TranslationQuiver) -> list[str] | None:
    color: dict[str, int] = {}
    stack_path: list[str] = []

    for root in sorted(tq.vertices):
        if root in color:
            continue
        todo = [(root, iter(tq.succ[root]))]
        color[root] = 1
        stack_path = [root]
        while todo:
            v, it = todo[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                todo.pop()
                stack_path.pop()
                continue
            if color.get(nxt) == 1:
                i = stack_path.index(nxt)
                return stack_path[i:] + [nxt]
            if nxt not in color:
                color[nxt] = 1
                stack_path.append(nxt)
                todo.append((nxt, iter(tq.succ[nxt])))
    return None


def _topological_order(tq: TranslationQuiver) -> list[str]:
    indeg = {v: len(tq.pred[v]) for v in tq.vertices}
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order = []
    q = deque(ready)
    while q:
        v = q.popleft()
        order.append(v)
        for w in tq.succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                q.append(w)
    return order


def is_with_length(tq: TranslationQuiver):
    """``(True, None)`` or ``(False, (path1, path2))`` with parallel paths of different lengths.

    Paths are vertex lists.
    """
    cyc = _find_cycle(tq)
    if cyc is not None:
        return False, ([cyc[0]], cyc)
    order = _topological_order(tq)
    pos = {v: i for i, v in enumerate(order)}
    for src in order:
        # one witness path per (vertex, length)
        found: dict[str, dict[int, list[str]]] = {src: {0: [src]}}
        for v in order[pos[src]:]:
            if v not in found:
                continue
            lengths = found[v]
            if len(lengths) > 1:
                a, b = sorted(lengths)[:2]
                return False, (lengths[a], lengths[b])
            for w in tq.succ[v]:
                slot = found.setdefault(w, {})
                for n, path in lengths.items():
                    slot.setdefault(n + 1, path + [w])
    return True, None


def walk_distances(tq: TranslationQuiver, base: str) -> dict[str, int]:
    dist = {base: 0}
    q = deque([base])
    while q:
        v = q.popleft()
        for w in tq.succ[v] + tq.pred[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def length_function(tq: TranslationQuiver, base: str) -> dict[str, int]:
    """Integer grading with ``l(base) = 0`` and ``l(t) = l(s) + 1`` on every arrow."""
    if base not in tq.succ:
        raise KeyError(base)
    ell = {base: 0}
    parent: dict[str, str | None] = {base: None}
    q = deque([base])
    while q:
        v = q.popleft()
        steps = [(w, ell[v] + 1) for w in tq.succ[v]] + [(w, ell[v] - 1) for w in tq.pred[v]]
        for w, val in steps:
            if w not in ell:
                ell[w] = val
                parent[w] = v
                q.append(w)
            elif ell[w] != val:
                def back(u):
                    out = []
                    while u is not None:
                        out.append(u)
                        u = parent[u]
                    return out[::-1]
                raise NotWithLength(
                    f"length conflict at {w}: {ell[w]} vs {val}",
                    witness=(back(v) + [w], back(w)),
                )
    if len(ell) != len(tq.vertices):
        raise ValueError("quiver is not connected")
    return ell


# morphisms and coverings -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuiverMorphism:
    source: TranslationQuiver
    target: TranslationQuiver
    vertex_map: Mapping[str, str]

    def __call__(self, v: str) -> str:
        return self.vertex_map[v]


def _connected(tq: TranslationQuiver) -> bool:
    if not tq.vertices:
        return True
    return len(walk_distances(tq, tq.vertices[0])) == len(tq.vertices)


def check_covering(p: QuiverMorphism) -> list[str]:
    """Failures of the four covering axioms; stars are only checked at complete vertices."""
    src, tgt, f = p.source, p.target, p.vertex_map
    report: list[str] = []
    for name, q in (("source", src), ("target", tgt)):
        for line in validate(q):
            report.append(f"(a) {name}: {line}")
    if not _connected(tgt):
        report.append("(a) target is not connected")
    for v in src.vertices:
        if v not in f or f[v] not in tgt.succ:
            report.append(f"vertex {v} has no image in the target")
    if report:
        return report
    for s, t in src.arrows:
        if not tgt.has_arrow(f[s], f[t]):
            report.append(f"arrow {s}->{t} is not sent to an arrow")
    for v in src.vertices:
        if (v in src.projectives) != (f[v] in tgt.projectives):
            report.append(f"(b) projectivity differs at {v}")
        if (v in src.injectives) != (f[v] in tgt.injectives):
            report.append(f"(b) injectivity differs at {v}")
    for x, tx in sorted(src.tau.items()):
        if tgt.tau.get(f[x]) != f[tx]:
            report.append(f"(c) translation not preserved at {x}")
    for v in src.vertices:
        if v in src.incomplete:
            continue
        for direction, star, base_star in (("starting", src.succ, tgt.succ), ("ending", src.pred, tgt.pred)):
            images = [f[w] for w in star[v]]
            if sorted(images) != base_star[f[v]]:
                report.append(f"(d) arrows {direction} at {v} do not biject onto those at {f[v]}")
    return report


@dataclass(frozen=True, eq=False)
class TruncatedCover:
    cover: TranslationQuiver
    pi: QuiverMorphism
    base_vertex: str
    radius: int
    length: Mapping[str, int]
    depth: Mapping[str, int]

    @property
    def base(self) -> TranslationQuiver:
        return self.pi.target

    def interior(self) -> list[str]:
        return [v for v in self.cover.vertices if self.depth[v] < self.radius and v not in self.cover.incomplete]

    def is_interior(self, v: str) -> bool:
        return self.depth[v] < self.radius and v not in self.cover.incomplete

    def fiber(self, X: str) -> list[str]:
        return [v for v in self.cover.vertices if self.pi(v) == X]

    def interior_quiver(self) -> TranslationQuiver:
        return self.cover.full_subquiver(self.interior())

    def interior_morphism(self) -> QuiverMorphism:
        sub = self.interior_quiver()
        return QuiverMorphism(sub, self.base, {v: self.pi(v) for v in sub.vertices})


def identity_cover(tq: TranslationQuiver, base: str | None = None) -> TruncatedCover:
    """The identity covering of a connected quiver with length, with no boundary."""
    _require_valid(tq)
    base = base if base is not None else sorted(tq.vertices)[0]
    dist = walk_distances(tq, base)
    if len(dist) != len(tq.vertices):
        raise ValueError("quiver is not connected")
    ell = length_function(tq, base)
    radius = max(dist.values()) + 1
    pi = QuiverMorphism(tq, tq, {v: v for v in tq.vertices})
    return TruncatedCover(tq, pi, base, radius, ell, dist)


class _Folding:
    """Union-find over cover nodes labelled by base vertices, folded so that each
    node has at most one neighbour per base arrow in each direction."""

    def __init__(self, base: TranslationQuiver):
        self.base = base
        self.parent: list[int] = []
        self.label: list[str] = []
        self.depth: list[int] = []
        self.walk: list[tuple] = []
        self.out: list[dict[str, int]] = []
        self.inn: list[dict[str, int]] = []
        self.pending: list[tuple[int, int]] = []

    def new(self, X: str, depth: int, walk: tuple) -> int:
        i = len(self.parent)
        self.parent.append(i)
        self.label.append(X)
        self.depth.append(depth)
        self.walk.append(walk)
        self.out.append({})
        self.inn.append({})
        return i

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> None:
        self.pending.append((a, b))
        while self.pending:
            a, b = self.pending.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if (self.depth[b], self.walk[b]) < (self.depth[a], self.walk[a]):
                a, b = b, a
            self.parent[b] = a
            for table in (self.out, self.inn):
                for key, nb in table[b].items():
                    if key in table[a]:
                        self.pending.append((table[a][key], nb))
                    else:
                        table[a][key] = nb
                table[b] = {}

    def step(self, i: int, Y: str, forward: bool, limit: int) -> int | None:
        i = self.find(i)
        table = self.out if forward else self.inn
        if Y in table[i]:
            return self.find(table[i][Y])
        if self.depth[i] >= limit:
            return None
        j = self.new(Y, self.depth[i] + 1, self.walk[i] + ((("+" if forward else "-"), Y),))
        table[i][Y] = j
        (self.inn if forward else self.out)[j][self.label[i]] = i
        return j


def universal_cover(tq: TranslationQuiver, base: str, radius: int, margin: int = 4) -> TruncatedCover:
    """Breadth-first universal cover of a connected translation quiver, truncated at ``radius``.

    Walks are folded (cancelling backtracks) and mesh crossings are glued
    (two-step walks across one mesh are identified).  The construction runs
    ``margin`` layers past ``radius`` so that gluings needed near the boundary
    are found, then keeps the ball of the requested radius.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    _require_valid(tq)
    if not _connected(tq):
        raise ValueError("base quiver is not connected")
    limit = radius + margin
    fold = _Folding(tq)
    root = fold.new(base, 0, ())
    while True:
        size, merges = len(fold.parent), sum(fold.find(i) != i for i in range(len(fold.parent)))
        live = sorted({fold.find(i) for i in range(len(fold.parent))},
                      key=lambda i: (fold.depth[i], fold.walk[i]))
        for i in live:
            if fold.find(i) != i or fold.depth[i] >= limit:
                continue
            X = fold.label[i]
            for Y in tq.succ[X]:
                fold.step(i, Y, True, limit)
            for Y in tq.pred[X]:
                fold.step(i, Y, False, limit)
            # glue the mesh ending at i and the mesh starting at i
            for middles, hop, far in ((tq.pred[X], False, tq.tau.get(X)), (tq.succ[X], True, tq.tau_inv.get(X))):
                if far is None:
                    continue
                ends = []
                for Y in middles:
                    m = fold.step(i, Y, hop, limit)
                    e = fold.step(m, far, hop, limit) if m is not None else None
                    if e is not None:
                        ends.append(e)
                for e in ends[1:]:
                    fold.union(ends[0], e)
        new_merges = sum(fold.find(i) != i for i in range(len(fold.parent)))
        if len(fold.parent) == size and new_merges == merges:
            break

    return _materialize(tq, fold, fold.find(root), base, radius)


def _materialize(tq: TranslationQuiver, fold: _Folding, root: int, base: str, radius: int) -> TruncatedCover:
    # deterministic BFS over the folded graph fixes names independent of creation order
    dist = {root: 0}
    order = [root]
    q = deque([root])
    while q:
        i = q.popleft()
        if dist[i] >= radius:
            continue
        nbrs = [(0, Y, fold.find(j)) for Y, j in fold.out[i].items()] + \
               [(1, Y, fold.find(j)) for Y, j in fold.inn[i].items()]
        for _, _, j in sorted(nbrs, key=lambda t: (t[0], t[1])):
            if j not in dist:
                dist[j] = dist[i] + 1
                order.append(j)
                q.append(j)
    counter: dict[str, int] = {}
    name: dict[int, str] = {}
    for i in order:
        X = fold.label[i]
        name[i] = f"{X}~{counter.get(X, 0)}"
        counter[X] = counter.get(X, 0) + 1
    arrows = []
    for i in order:
        for Y, j in sorted(fold.out[i].items()):
            j = fold.find(j)
            if j in name:
                arrows.append((name[i], name[j]))
    tau = {}
    for i in order:
        X = fold.label[i]
        if X not in tq.tau:
            continue
        starts = set()
        for Y in tq.pred[X]:
            m = fold.inn[i].get(Y)
            if m is None:
                continue
            s = fold.inn[fold.find(m)].get(tq.tau[X])
            if s is not None:
                starts.add(fold.find(s))
        if len(starts) == 1:
            (s,) = starts
            if s in name:
                tau[name[i]] = name[s]
    verts = [name[i] for i in order]
    proj = {name[i] for i in order if fold.label[i] in tq.projectives}
    inj = {name[i] for i in order if fold.label[i] in tq.injectives}
    depth = {name[i]: dist[i] for i in order}
    pre = TranslationQuiver.build(verts, arrows, proj, inj, tau)
    incomplete = set()
    for v in verts:
        X = v.rsplit("~", 1)[0]
        if len(pre.succ[v]) != len(tq.succ[X]) or len(pre.pred[v]) != len(tq.pred[X]):
            incomplete.add(v)
        if (X in tq.tau) != (v in tau) or (X in tq.tau_inv) != (v in pre.tau_inv):
            incomplete.add(v)
        if depth[v] >= radius:
            incomplete.add(v)
    cover = TranslationQuiver.build(verts, arrows, proj, inj, tau, incomplete)
    pi = QuiverMorphism(cover, tq, {name[i]: fold.label[i] for i in order})
    base_name = name[root]
    ell = length_function(cover, base_name)
    return TruncatedCover(cover, pi, base_name, radius, ell, depth)


def lift_path(tc: TruncatedCover, path: list[Arrow], start_lift: str) -> list[Arrow]:
    """The unique arrow-wise lift of ``path`` starting at ``start_lift``."""
    if tc.pi(start_lift) != (path[0][0] if path else tc.pi(start_lift)):
        raise ValueError("start_lift does not lie over the source of the path")
    out: list[Arrow] = []
    cur = start_lift
    for s, t in path:
        if tc.pi(cur) != s:
            raise ValueError(f"path is not composable at {s}")
        if not tc.is_interior(cur):
            raise LiftEscapesTruncation(f"lift reaches boundary vertex {cur}")
        nxt = [w for w in tc.cover.succ[cur] if tc.pi(w) == t]
        if len(nxt) != 1:
            raise ValueError(f"no unique lift of arrow {s}->{t} at {cur}")
        out.append((cur, nxt[0]))
        cur = nxt[0]
    if not tc.is_interior(cur):
        raise LiftEscapesTruncation(f"lift reaches boundary vertex {cur}")
    return out


def decidable(tc: TruncatedCover, x: str, y: str | None = None, backward: bool = False,
              level: int | None = None) -> bool:
    """True when every vertex strictly between ``x`` and the level of ``y`` that is
    reachable from ``x`` (forward, or backward) has its full star in the cover.

    ``level`` replaces the level of ``y``; without either, all reachable
    vertices are inspected.
    """
    ell = tc.length
    star = tc.cover.pred if backward else tc.cover.succ
    sign = -1 if backward else 1
    if level is None and y is not None:
        level = ell[y]
    stop = None if level is None else sign * level
    seen = {x}
    q = deque([x])
    while q:
        v = q.popleft()
        if stop is not None and sign * ell[v] >= stop:
            continue
        if not tc.is_interior(v):
            return False
        for w in star[v]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    return True
