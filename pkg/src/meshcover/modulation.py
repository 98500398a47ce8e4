"""Split modulations: arrow multiplicities, mesh pairings and mesh elements.

Every vertex carries the ground field itself, so a modulation is the data of
``dims[(y, x)] = dim M(y, x)`` and, for each mesh ending in ``x`` with middle
``y``, an invertible pairing matrix ``P`` with
``P[i][j] = sigma(e_i (x) e'_j)`` where ``e_i`` runs over the standard basis
of ``M(y, x)`` and ``e'_j`` over that of ``M(tau x, y)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import fields as la
from .fields import GroundField, QQ
from .translation_quiver import Arrow, TranslationQuiver, TruncatedCover, mesh_at, validate


class DegeneratePairing(ValueError):
    def __init__(self, x, y, matrix):
        super().__init__(f"pairing at ({x},{y}) is singular: {matrix}")
        self.x, self.y, self.matrix = x, y, matrix


class DimMismatch(ValueError):
    def __init__(self, x, y, d_in, d_out):
        super().__init__(f"mesh at {x}, middle {y}: dim M({y},{x})={d_in} but dim M(tau {x},{y})={d_out}")
        self.x, self.y = x, y


@dataclass(frozen=True, eq=False)
class ModulatedQuiver:
    tq: TranslationQuiver
    field: GroundField
    dims: Mapping[Arrow, int]
    pairings: Mapping[tuple[str, str], list] = field(default_factory=dict)

    def dim(self, s: str, t: str) -> int:
        return self.dims[(s, t)]

    def pairing(self, x: str, y: str):
        return self.pairings[(x, y)]


def attach_split_modulation(tq: TranslationQuiver, dims: Mapping[Arrow, int] | None = None,
                            pairings: Mapping[tuple[str, str], list] | None = None,
                            field: GroundField = QQ) -> ModulatedQuiver:
    """Bundle ``tq`` with arrow dimensions (default 1) and mesh pairings (default identity)."""
    problems = validate(tq)
    if problems:
        raise ValueError("invalid translation quiver: " + "; ".join(problems))
    K = field
    dims = {a: int((dims or {}).get(a, 1)) for a in tq.arrows}
    for a, d in dims.items():
        if d < 1:
            raise ValueError(f"arrow {a} has non-positive dimension {d}")
    given = dict(pairings or {})
    out = {}
    for x in sorted(tq.tau):
        mesh = mesh_at(tq, x)
        if mesh is None:
            continue
        for y in mesh.middles:
            d_in, d_out = dims[(y, x)], dims[(mesh.start, y)]
            if d_in != d_out:
                raise DimMismatch(x, y, d_in, d_out)
            P = la.coerce(K, given.pop((x, y))) if (x, y) in given else la.identity(K, d_in)
            if la.shape(P) != (d_in, d_in) or la.rank(K, P) != d_in:
                raise DegeneratePairing(x, y, P)
            out[(x, y)] = P
    if given:
        raise ValueError(f"pairings given for non-mesh pairs {sorted(given)}")
    return ModulatedQuiver(tq, K, dims, out)


def pull_back_modulation(tc: TruncatedCover, mq: ModulatedQuiver) -> ModulatedQuiver:
    """Copy dimensions and pairings of ``mq`` onto the cover along ``tc.pi``."""
    cov, pi = tc.cover, tc.pi
    dims = {(s, t): mq.dims[(pi(s), pi(t))] for s, t in cov.arrows}
    pairings = {}
    for x in cov.tau:
        mesh = mesh_at(cov, x)
        if mesh is None:
            continue
        for y in mesh.middles:
            pairings[(x, y)] = [list(r) for r in mq.pairings[(pi(x), pi(y))]]
    return ModulatedQuiver(cov, mq.field, dims, pairings)


def dual_basis(K: GroundField, pairing, basis_change):
    """Matrix ``B*`` of the dual basis after the change ``u' = B u``.

    With ``P`` pairing the standard bases, ``B P B*^T = I``, i.e. ``B* = (B P)^{-T}``.
    """
    BP = la.matmul(K, la.coerce(K, basis_change), la.coerce(K, pairing))
    return la.transpose(la.inverse(K, BP))


@dataclass(frozen=True)
class MeshElement:
    """``gamma_end`` as one coefficient matrix per middle ``y``.

    ``terms[y][k][i]`` is the coefficient of ``e'_k (x) e_i`` with ``e'_k`` in
    ``M(start, y)`` and ``e_i`` in ``M(y, end)``.
    """

    end: str
    start: str
    terms: Mapping[str, list]

    def entries(self):
        for y in sorted(self.terms):
            for k, row in enumerate(self.terms[y]):
                for i, c in enumerate(row):
                    if c != 0:
                        yield y, (k, i), c

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MeshElement)
            and (self.end, self.start) == (other.end, other.start)
            and {y: [list(r) for r in m] for y, m in self.terms.items()}
            == {y: [list(r) for r in m] for y, m in other.terms.items()}
        )


def mesh_element(mq: ModulatedQuiver, x: str, basis_choice: Mapping[str, list] | None = None) -> MeshElement:
    """``gamma_x = sum_y sum_i u_i^* u_i`` for the chosen bases ``u = B_y e`` of each ``M(y, x)``."""
    K = mq.field
    mesh = mesh_at(mq.tq, x)
    if mesh is None:
        raise ValueError(f"{x} has no complete mesh")
    terms = {}
    for y in mesh.middles:
        P = mq.pairings[(x, y)]
        d = len(P)
        B = la.coerce(K, basis_choice[y]) if basis_choice and y in basis_choice else la.identity(K, d)
        if la.shape(B) != (d, d) or la.rank(K, B) != d:
            raise ValueError(f"basis choice for middle {y} is not invertible")
        Bstar = dual_basis(K, P, B)
        # sum_i u*_i (x) u_i  ->  coefficient of e'_k (x) e_j is (B*^T B)[k][j]
        terms[y] = la.matmul(K, la.transpose(Bstar), B)
    return MeshElement(x, mesh.start, terms)


def mesh_element_from_sequence(mq: ModulatedQuiver, x: str, f_bar: Mapping[str, list],
                               g_bar: Mapping[str, list], u_bar) -> MeshElement:
    """``sum_{i,j} u f_{i,j} (x) g_{i,j}`` from the classes of another almost split sequence.

    ``f_bar[y][j]`` holds the coordinates of ``f_{y,j}`` in ``M(tau x, y)`` and
    ``g_bar[y][j]`` those of ``g_{y,j}`` in ``M(y, x)``.
    """
    K = mq.field
    mesh = mesh_at(mq.tq, x)
    if mesh is None:
        raise ValueError(f"{x} has no complete mesh")
    if set(f_bar) != set(mesh.middles) or set(g_bar) != set(mesh.middles):
        raise ValueError("sequence middles do not match the mesh")
    u = K(u_bar)
    if u == 0:
        raise ValueError("comparison scalar must be invertible")
    terms = {}
    for y in mesh.middles:
        d = mq.dims[(y, x)]
        f, g = la.coerce(K, f_bar[y]), la.coerce(K, g_bar[y])
        if la.shape(f) != (d, mq.dims[(mesh.start, y)]) or la.shape(g) != (d, d):
            raise ValueError(f"shape mismatch at middle {y}")
        terms[y] = la.mscale(K, u, la.matmul(K, la.transpose(f), g))
    return MeshElement(x, mesh.start, terms)


def parse_pairings(text: str) -> dict[tuple[str, str], list]:
    """Read ``pairing <end> <middle> <row-major rationals>`` lines (square matrices)."""
    from fractions import Fraction

    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "pairing" or len(parts) < 4:
            raise ValueError(f"line {lineno}: expected 'pairing <end> <middle> <entries>'")
        vals = [Fraction(v) for v in parts[3:]]
        n = int(round(len(vals) ** 0.5))
        if n * n != len(vals):
            raise ValueError(f"line {lineno}: {len(vals)} entries do not form a square matrix")
        out[(parts[1], parts[2])] = [vals[i * n:(i + 1) * n] for i in range(n)]
    return out
