"""Mesh categories of modulated translation quivers with length.

A morphism space ``k(G)(x, y)`` is computed as a quotient of the span of
"path elements" ``(path, indices)`` (a path of vertices together with one
basis index of ``M`` per arrow) by the slice of the mesh ideal spanned by all
``p * gamma_z * q``.  Classes are coordinate vectors on the non-pivot
columns of the reduced relation matrix.
"""
from __future__ import annotations

import itertools
import threading
import weakref
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import fields as la
from .fields import Subspace
from .modulation import ModulatedQuiver, mesh_element
from .translation_quiver import NotWithLength, mesh_at

PathElement = tuple[tuple[str, ...], tuple[int, ...]]

DEFAULT_PATH_CAP = 10**6


class PathExplosion(RuntimeError):
    pass


@dataclass(eq=False)
class MeshHomSpace:
    source: str
    target: str
    ambient: list[PathElement]
    index: dict[PathElement, int]
    relations: Subspace
    basis: list[int]  # ambient columns whose unit vectors represent a basis
    length: int | None  # common path length, None when there is no path

    @property
    def ambient_dim(self) -> int:
        return len(self.ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, vector: Sequence) -> list:
        w = self.relations.reduce(vector)
        return [w[c] for c in self.basis]

    def representative(self, coords: Sequence) -> list:
        K = self.relations.K
        v = [K.zero] * self.ambient_dim
        for c, a in zip(self.basis, coords):
            v[c] = a
        return v


@dataclass(eq=False)
class MeshClass:
    hom: MeshHomSpace
    coords: list

    @property
    def source(self) -> str:
        return self.hom.source

    @property
    def target(self) -> str:
        return self.hom.target

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def terms(self):
        """Nonzero ``(path element, coefficient)`` pairs of the representative."""
        for c, a in zip(self.hom.basis, self.coords):
            if a != 0:
                yield self.hom.ambient[c], a

    def __add__(self, other: "MeshClass") -> "MeshClass":
        K = self.hom.relations.K
        if other.hom is not self.hom:
            raise ValueError("classes live in different hom spaces")
        return MeshClass(self.hom, [K.add(a, b) for a, b in zip(self.coords, other.coords)])

    def scale(self, c) -> "MeshClass":
        K = self.hom.relations.K
        return MeshClass(self.hom, [K.mul(K(c), a) for a in self.coords])

    def __eq__(self, other) -> bool:
        return isinstance(other, MeshClass) and other.hom is self.hom and list(other.coords) == list(self.coords)


class MeshCategory:
    """Hom spaces, composition and radical layers of ``k(G)`` for one modulated quiver.

    Hom spaces are cached in a write-once map; concurrent fills compute the
    same value, so the first writer wins without changing results.
    """

    def __init__(self, mq: ModulatedQuiver, path_cap: int = DEFAULT_PATH_CAP,
                 basis_choice: Mapping[str, Mapping[str, list]] | None = None):
        self.mq = mq
        self.K = mq.field
        self.path_cap = path_cap
        self._lock = threading.Lock()
        self._homs: dict[tuple[str, str], MeshHomSpace] = {}
        self._gens: dict[tuple[str, str, int], Subspace] = {}
        self._gammas = {}
        self._path_cache: dict[tuple[str, str], list] = {}
        tq = mq.tq
        for x in sorted(tq.tau):
            if mesh_at(tq, x) is not None:
                choice = (basis_choice or {}).get(x)
                self._gammas[x] = mesh_element(mq, x, choice)

    # paths -----------------------------------------------------------------
    def _paths(self, x: str, y: str) -> list[tuple[str, ...]]:
        got = self._path_cache.get((x, y))
        if got is None:
            got = self._path_cache.setdefault((x, y), self._find_paths(x, y))
        return got

    def _find_paths(self, x: str, y: str) -> list[tuple[str, ...]]:
        tq = self.mq.tq
        reach = {y}
        stack = [y]
        while stack:
            v = stack.pop()
            for w in tq.pred[v]:
                if w not in reach:
                    reach.add(w)
                    stack.append(w)
        if x not in reach:
            return []
        out: list[tuple[str, ...]] = []
        stack2 = [(x,)]
        while stack2:
            p = stack2.pop()
            if p[-1] == y:
                out.append(p)
                if len(p) > 1 and x == y:
                    raise NotWithLength(f"oriented cycle through {x}", witness=((x,), p))
            if len(p) > len(tq.vertices) + 1:
                raise NotWithLength(f"oriented cycle between {x} and {y}")
            for w in tq.succ[p[-1]]:
                if w in reach:
                    stack2.append(p + (w,))
            if len(out) > self.path_cap:
                raise PathExplosion(f"more than {self.path_cap} paths from {x} to {y}")
        out.sort()
        lengths = {len(p) for p in out}
        if len(lengths) > 1:
            a, b = sorted(lengths)[:2]
            raise NotWithLength(
                f"paths of lengths {a - 1} and {b - 1} from {x} to {y}",
                witness=(next(p for p in out if len(p) == a), next(p for p in out if len(p) == b)),
            )
        return out

    def _elements(self, paths) -> list[PathElement]:
        dims = self.mq.dims
        out = []
        for p in paths:
            ranges = [range(dims[(s, t)]) for s, t in zip(p, p[1:])]
            for idx in itertools.product(*ranges):
                out.append((p, tuple(idx)))
                if len(out) > self.path_cap:
                    raise PathExplosion(f"ambient dimension exceeds {self.path_cap}")
        return out

    # hom spaces --------------------------------------------------------------
    def hom(self, x: str, y: str) -> MeshHomSpace:
        key = (x, y)
        got = self._homs.get(key)
        if got is not None:
            return got
        hs = self._build_hom(x, y)
        with self._lock:
            return self._homs.setdefault(key, hs)

    def _build_hom(self, x: str, y: str) -> MeshHomSpace:
        K = self.K
        paths = self._paths(x, y)
        ambient = self._elements(paths)
        index = {e: i for i, e in enumerate(ambient)}
        n = len(ambient)
        rows = []
        on_paths = {v for p in paths for v in p}
        for z, gamma in self._gammas.items():
            if z not in on_paths or gamma.start not in on_paths:
                continue
            for p in self._elements(self._paths(x, gamma.start)):
                for q in self._elements(self._paths(z, y)):
                    v = [K.zero] * n
                    for m, (k, i), c in gamma.entries():
                        e = (p[0] + (m,) + q[0], p[1] + (k, i) + q[1])
                        j = index[e]
                        v[j] = K.add(v[j], c)
                    rows.append(v)
        rel = Subspace(K, n, rows)
        piv = set(rel.pivots)
        basis = [c for c in range(n) if c not in piv]
        length = len(paths[0]) - 1 if paths else None
        return MeshHomSpace(x, y, ambient, index, rel, basis, length)

    def identity(self, x: str) -> MeshClass:
        h = self.hom(x, x)
        return MeshClass(h, [self.K.one])

    def arrow_class(self, arrow: tuple[str, str], i: int) -> MeshClass:
        x, y = arrow
        d = self.mq.dims[arrow]
        if not 0 <= i < d:
            raise IndexError(f"component {i} out of range for arrow {x}->{y} of dimension {d}")
        h = self.hom(x, y)
        v = [self.K.zero] * h.ambient_dim
        v[h.index[((x, y), (i,))]] = self.K.one
        return MeshClass(h, h.coords(v))

    def element_class(self, x: str, y: str, vector: Sequence) -> MeshClass:
        h = self.hom(x, y)
        return MeshClass(h, h.coords(vector))

    def compose(self, u: MeshClass, v: MeshClass) -> MeshClass:
        """``u`` followed by ``v``."""
        if u.target != v.source:
            raise ValueError(f"cannot compose {u.source}->{u.target} with {v.source}->{v.target}")
        K = self.K
        h = self.hom(u.source, v.target)
        out = [K.zero] * h.ambient_dim
        for (pa, ia), a in u.terms():
            for (pb, ib), b in v.terms():
                j = h.index[(pa + pb[1:], ia + ib)]
                out[j] = K.add(out[j], K.mul(a, b))
        return MeshClass(h, h.coords(out))

    # radical -----------------------------------------------------------------
    def radical_power(self, x: str, y: str, n: int, method: str = "length") -> Subspace:
        """``R^n(x, y)`` as a subspace of class coordinates.

        ``method="length"`` uses that on a quiver with length the whole space
        lies in ``R^l`` and ``R^(l+1)`` vanishes; ``method="generators"``
        builds ``R^n(x,y) = sum_w R^(n-1)(x,w) M(w,y)`` by composing classes.
        """
        h = self.hom(x, y)
        if method == "length":
            full = Subspace(self.K, h.dim, la.identity(self.K, h.dim))
            if h.length is None:
                return full  # zero-dimensional
            return full if n <= h.length else Subspace(self.K, h.dim)
        if method != "generators":
            raise ValueError(method)
        return self._gen_power(x, y, n)

    def _gen_power(self, x: str, y: str, n: int) -> Subspace:
        key = (x, y, n)
        got = self._gens.get(key)
        if got is not None:
            return got
        h = self.hom(x, y)
        K = self.K
        if n == 0:
            sub = Subspace(K, h.dim, la.identity(K, h.dim))
        else:
            vecs = []
            for w in self.mq.tq.pred[y]:
                hw = self.hom(x, w)
                if hw.dim == 0:
                    continue
                lower = self._gen_power(x, w, n - 1)
                for vec in lower.basis:
                    u = MeshClass(hw, vec)
                    for i in range(self.mq.dims[(w, y)]):
                        vecs.append(self.compose(u, self.arrow_class((w, y), i)).coords)
            sub = Subspace(K, h.dim, vecs)
        with self._lock:
            return self._gens.setdefault(key, sub)

    def graded_piece(self, x: str, y: str, n: int, method: str = "length"):
        """Dimension of ``R^n / R^(n+1)`` at ``(x, y)`` and coordinate vectors of a basis."""
        top = self.radical_power(x, y, n, method)
        below = self.radical_power(x, y, n + 1, method)
        basis = below.complement_in(top)
        return len(basis), basis


_CATEGORIES: "weakref.WeakKeyDictionary[ModulatedQuiver, MeshCategory]" = weakref.WeakKeyDictionary()


def category(mq: ModulatedQuiver | MeshCategory) -> MeshCategory:
    if isinstance(mq, MeshCategory):
        return mq
    cat = _CATEGORIES.get(mq)
    if cat is None:
        cat = _CATEGORIES.setdefault(mq, MeshCategory(mq))
    return cat


def hom_basis(mq, x: str, y: str) -> MeshHomSpace:
    return category(mq).hom(x, y)


def compose(mq, u: MeshClass, v: MeshClass) -> MeshClass:
    return category(mq).compose(u, v)


def arrow_class(mq, arrow, i: int) -> MeshClass:
    return category(mq).arrow_class(arrow, i)


def radical_power(mq, x: str, y: str, n: int, method: str = "length") -> Subspace:
    return category(mq).radical_power(x, y, n, method)


def graded_piece(mq, x: str, y: str, n: int, method: str = "length"):
    return category(mq).graded_piece(x, y, n, method)
