"""Small translation quivers shared by the tests."""
from meshcover.translation_quiver import TranslationQuiver


def a2():
    """AR quiver of k(1 -> 2): S2 -> P1 -> S1 with tau S1 = S2."""
    return TranslationQuiver.build(
        ["S2", "P1", "S1"], [("S2", "P1"), ("P1", "S1")], {"S2", "P1"}, {"P1", "S1"}, {"S1": "S2"}
    )


def oriented_triangle():
    """Oriented 3-cycle, every vertex projective-injective: no meshes at all."""
    return TranslationQuiver.build("abc", [("a", "b"), ("b", "c"), ("c", "a")], "abc", "abc", {})


def square():
    """Unoriented 4-cycle a->b->d, a->c->d without meshes (all projective-injective)."""
    return TranslationQuiver.build(
        "abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")], "abcd", "abcd", {}
    )


def tube2():
    """Rank-2 tube shaped quiver: a1 -> b1 -> a2 -> b2 -> a1, tau swaps a1 and a2."""
    return TranslationQuiver.build(
        ["a1", "b1", "a2", "b2"],
        [("a1", "b1"), ("b1", "a2"), ("a2", "b2"), ("b2", "a1")],
        {"b1", "b2"},
        {"b1", "b2"},
        {"a1": "a2", "a2": "a1"},
    )


def za3_quotient(m):
    """ZA_3 modulo tau^m; its universal cover is ZA_3."""
    V = [f"v{i}_{j}" for i in range(m) for j in (1, 2, 3)]
    A = []
    for i in range(m):
        k = (i + 1) % m
        A += [(f"v{i}_1", f"v{i}_2"), (f"v{i}_2", f"v{i}_3"), (f"v{i}_2", f"v{k}_1"), (f"v{i}_3", f"v{k}_2")]
    tau = {f"v{(i + 1) % m}_{j}": f"v{i}_{j}" for i in range(m) for j in (1, 2, 3)}
    return TranslationQuiver.build(V, A, (), (), tau)


def za2_quotient(m):
    """ZA_2 modulo tau^m (a cyclic zigzag with every mesh having one middle)."""
    V = [f"u{i}_{j}" for i in range(m) for j in (1, 2)]
    A = []
    for i in range(m):
        k = (i + 1) % m
        A += [(f"u{i}_1", f"u{i}_2"), (f"u{i}_2", f"u{k}_1")]
    tau = {f"u{(i + 1) % m}_{j}": f"u{i}_{j}" for i in range(m) for j in (1, 2)}
    return TranslationQuiver.build(V, A, (), (), tau)


def two_middle_mesh():
    """Single mesh s -> {y1, y2} -> x; used with dims 1 and 2 on the two middles."""
    return TranslationQuiver.build(
        ["s", "y1", "y2", "x"],
        [("s", "y1"), ("s", "y2"), ("y1", "x"), ("y2", "x")],
        {"s", "y1", "y2"},
        {"y1", "y2", "x"},
        {"x": "s"},
    )


def brute_za3(radius_steps):
    """Vertices (i, j) of ZA_3 reachable within the given number of walk steps from (0, 1)."""
    def nbrs(v):
        i, j = v
        out = []
        if j < 3:
            out.append((i, j + 1))
        if j > 1:
            out.append((i + 1, j - 1))
        if j > 1:
            out.append((i, j - 1))
        if j < 3:
            out.append((i - 1, j + 1))
        return out

    seen = {(0, 1)}
    frontier = [(0, 1)]
    for _ in range(radius_steps):
        nxt = []
        for v in frontier:
            for w in nbrs(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen
