"""Line-oriented text formats: ``.tq`` quivers, ``.alg`` algebras, matrix dumps, verdicts."""
from __future__ import annotations

from fractions import Fraction

from .fields import GroundField, QQ
from .translation_quiver import TranslationQuiver


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_tq(text: str):
    """``(TranslationQuiver, arrow dims)`` from a ``.tq`` document.

    Duplicate arrows are kept so that validation can report them.
    """
    vertices, arrows, proj, inj, tau, dims = [], [], [], [], {}, {}
    used: list[tuple[int, str]] = []
    for lineno, parts in _lines(text):
        key = parts[0]
        if key == "vertex":
            if len(parts) < 2:
                raise ParseError(lineno, "vertex needs a name")
            name, flags = parts[1], parts[2:]
            for f in flags:
                if f not in ("proj", "inj"):
                    raise ParseError(lineno, f"unknown vertex flag {f!r}")
            if name in vertices:
                raise ParseError(lineno, f"vertex {name} declared twice")
            vertices.append(name)
            if "proj" in flags:
                proj.append(name)
            if "inj" in flags:
                inj.append(name)
        elif key == "arrow":
            if len(parts) not in (3, 4):
                raise ParseError(lineno, "expected 'arrow <src> <tgt> [dim=<n>]'")
            s, t = parts[1], parts[2]
            if len(parts) == 4:
                opt = parts[3]
                if not opt.startswith("dim="):
                    raise ParseError(lineno, f"unknown arrow option {opt!r}")
                try:
                    d = int(opt[4:])
                except ValueError:
                    raise ParseError(lineno, f"bad dimension {opt[4:]!r}") from None
                if d < 1:
                    raise ParseError(lineno, "arrow dimension must be positive")
                dims[(s, t)] = d
            arrows.append((s, t))
            used += [(lineno, s), (lineno, t)]
        elif key == "tau":
            if len(parts) != 4 or parts[2] != "->":
                raise ParseError(lineno, "expected 'tau <x> -> <y>'")
            if parts[1] in tau:
                raise ParseError(lineno, f"tau of {parts[1]} given twice")
            tau[parts[1]] = parts[3]
            used += [(lineno, parts[1]), (lineno, parts[3])]
        else:
            raise ParseError(lineno, f"unknown key {key!r}")
    known = set(vertices)
    for lineno, v in used:
        if v not in known:
            raise ParseError(lineno, f"undeclared vertex {v}")
    return TranslationQuiver.build(vertices, arrows, proj, inj, tau), dims


def format_tq(tq: TranslationQuiver, dims=None) -> str:
    lines = []
    for v in tq.vertices:
        flags = [f for f, on in (("proj", v in tq.projectives), ("inj", v in tq.injectives)) if on]
        lines.append(" ".join(["vertex", v] + flags))
    for s, t in tq.arrows:
        d = (dims or {}).get((s, t), 1)
        lines.append(f"arrow {s} {t}" + (f" dim={d}" if d != 1 else ""))
    for x in tq.vertices:
        if x in tq.tau:
            lines.append(f"tau {x} -> {tq.tau[x]}")
    return "\n".join(lines) + "\n"


def parse_field(spec: str) -> GroundField:
    """``q``/``Q`` for the rationals, ``f<p>``/``F<p>`` for a prime field."""
    s = spec.strip()
    if s.lower() == "q":
        return QQ
    if s[:1].lower() == "f" and s[1:].isdigit():
        return GroundField(int(s[1:]))
    raise ValueError(f"unknown field {spec!r}")


def parse_alg(text: str):
    from .rep_engine import HereditaryAlgebra

    field, vertices, arrows = QQ, [], []
    seen_field = False
    for lineno, parts in _lines(text):
        key = parts[0]
        if key == "field":
            if seen_field:
                raise ParseError(lineno, "field given twice")
            seen_field = True
            if parts[1:] == ["Q"]:
                field = QQ
            elif len(parts) == 3 and parts[1] == "F" and parts[2].isdigit():
                try:
                    field = GroundField(int(parts[2]))
                except ValueError as exc:
                    raise ParseError(lineno, str(exc)) from None
            else:
                raise ParseError(lineno, "expected 'field Q' or 'field F <p>'")
        elif key == "vertex":
            if len(parts) != 2:
                raise ParseError(lineno, "expected 'vertex <name>'")
            if parts[1] in vertices:
                raise ParseError(lineno, f"vertex {parts[1]} declared twice")
            vertices.append(parts[1])
        elif key == "arrow":
            if len(parts) != 6 or parts[2] != ":" or parts[4] != "->":
                raise ParseError(lineno, "expected 'arrow <name> : <src> -> <tgt>'")
            for v in (parts[3], parts[5]):
                if v not in vertices:
                    raise ParseError(lineno, f"undeclared vertex {v}")
            arrows.append((parts[1], parts[3], parts[5]))
        else:
            raise ParseError(lineno, f"unknown key {key!r}")
    if not vertices:
        raise ParseError(0, "no vertices")
    return HereditaryAlgebra(field, tuple(vertices), tuple(arrows))


def with_field(alg, field: GroundField):
    from .rep_engine import HereditaryAlgebra

    return HereditaryAlgebra(field, alg.vertices, alg.arrows)


# matrices ---------------------------------------------------------------------

def dump_matrix(label: str, m, cols: int) -> str:
    rows = len(m)
    entries = " ".join(str(x) for row in m for x in row)
    return f"{label}: {rows} x {cols};" + (f" {entries}" if entries else "")


def parse_matrix(line: str):
    """``(label, rows, cols, entries as Fractions)`` from one dump line."""
    label, rest = line.rsplit(":", 1) if line.count(":") else (None, None)
    if label is None:
        raise ValueError(f"not a matrix line: {line!r}")
    shape, _, body = rest.partition(";")
    r, _, c = shape.partition("x")
    rows, cols = int(r), int(c)
    vals = [Fraction(v) for v in body.split()]
    if len(vals) != rows * cols:
        raise ValueError(f"{label}: expected {rows * cols} entries, found {len(vals)}")
    return label.strip(), rows, cols, [vals[i * cols:(i + 1) * cols] for i in range(rows)]


def dump_morphism(label: str, f) -> list[str]:
    return [dump_matrix(f"{label}@{v}", f.comps[v], f.source.dims[v]) for v in f.alg.vertices]


def export_component(comp) -> tuple[str, str]:
    """``(.tq text, matrix dump)`` for a knitted component."""
    dims = {a: len(comp.irr_reps[a]) for a in comp.quiver.arrows}
    tq = format_tq(comp.quiver, dims)
    lines = [f"# field {comp.field}"]
    for name in comp.names:
        M = comp.module_of[name]
        lines.append(f"# module {name} dimvec {' '.join(map(str, M.dimension_vector))}")
        for a, s, t in comp.alg.arrows:
            lines.append(dump_matrix(f"{name}.{a}", M.mats[a], M.dims[s]))
    for (s, t) in comp.quiver.arrows:
        for i, f in enumerate(comp.irr_reps[(s, t)]):
            lines.extend(dump_morphism(f"irr[{s}->{t}#{i}]", f))
    return tq, "\n".join(lines) + "\n"


def format_verdict(verdict) -> str:
    lines = [f"verdict {verdict.kind}", "path " + " > ".join(verdict.path)]
    if verdict.mesh_product is not None:
        terms = sorted((" ".join(p), " ".join(map(str, i)), str(c)) for (p, i), c in verdict.mesh_product.terms())
        lines.append(f"mesh-product terms {len(terms)}")
        for p, i, c in terms:
            lines.append(f"  {c} * [{p}] [{i}]")
    if verdict.composite is not None:
        lines.append(f"composite-rank {verdict.composite_rank}")
    if verdict.witness is not None:
        w = verdict.witness
        lines.append("witness indices " + " ".join(map(str, w.indices)))
        for i, (f, e) in enumerate(zip(w.f, w.eps), 1):
            lines.extend(dump_morphism(f"f{i}", f))
            lines.extend(dump_morphism(f"eps{i}", e))
    return "\n".join(lines) + "\n"
