"""Command-line front end.

Every command prints a deterministic text report.  Exit status is 0 on
success, 1 when the input is well formed but fails a check, 2 on parse or
configuration errors.
"""
from __future__ import annotations

import argparse
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .mesh_category import DEFAULT_PATH_CAP, MeshCategory, PathExplosion
from .modulation import attach_split_modulation
from .rep_engine import NotDynkin, NotIrreducible, KnittingFailure, knit
from .textio import ParseError, export_component, format_tq, format_verdict, parse_alg, parse_field, parse_tq, with_field
from .translation_quiver import (
    LiftEscapesTruncation,
    NotWithLength,
    TranslationQuiver,
    is_with_length,
    universal_cover,
    validate,
)
from .wellbehaved import (
    UndecidableTruncation,
    build_well_behaved,
    check_generalized_standard,
    composite_degree,
    verify_graded_covering,
    verify_injectivity,
)

PERTURB_SEED = 20240601


class ConfigError(ValueError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None


def _load_alg(args):
    alg = parse_alg(_read(args.algfile))
    if args.field is not None:
        alg = with_field(alg, args.field)
    return alg


def _emit(out, text: str) -> None:
    out.write(text)
    if text and not text.endswith("\n"):
        out.write("\n")


# commands ---------------------------------------------------------------------

def cmd_check_quiver(args, out) -> int:
    tq, dims = parse_tq(_read(args.file))
    problems = validate(tq)
    for p in problems:
        out.write(f"error {p}\n")
    if problems:
        out.write("result invalid\n")
        return 1
    ok, witness = is_with_length(tq)
    out.write(f"vertices {len(tq.vertices)}\narrows {len(tq.arrows)}\nmeshes {len(tq.tau)}\n")
    if ok:
        out.write("with-length yes\n")
    else:
        a, b = witness
        out.write(f"with-length no {' '.join(a)} | {' '.join(b)}\n")
    out.write("result valid\n")
    return 0


def cmd_knit(args, out) -> int:
    comp = knit(_load_alg(args))
    tq_text, dump = export_component(comp)
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "component.tq").write_text(tq_text)
        (d / "component.mat").write_text(dump)
    out.write(f"field {comp.field}\nmodules {len(comp.names)}\n")
    for name in comp.names:
        dv = " ".join(map(str, comp.module_of[name].dimension_vector))
        kind = "proj" if name in comp.quiver.projectives else ("inj" if name in comp.quiver.injectives else "-")
        out.write(f"module {name} {dv} {kind}\n")
    out.write(f"arrows {len(comp.quiver.arrows)}\nmeshes {len(comp.ass)}\n")
    if not args.out:
        out.write(tq_text)
        out.write(dump)
    return 0


def _write_cover(tc, dims, path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)
    cdims = {(s, t): dims.get((tc.pi(s), tc.pi(t)), 1) for s, t in tc.cover.arrows}
    (path / "cover.tq").write_text(format_tq(tc.cover, cdims))
    lines = [f"over {v} {tc.pi(v)}" for v in tc.cover.vertices]
    lines += [f"boundary {v}" for v in tc.cover.vertices if v in tc.cover.incomplete]
    (path / "cover.map").write_text("\n".join(lines) + "\n")


def cmd_cover(args, out) -> int:
    tq, dims = parse_tq(_read(args.tqfile))
    problems = validate(tq)
    if problems:
        for p in problems:
            out.write(f"error {p}\n")
        return 1
    if args.base not in tq.vertices:
        raise ConfigError(f"unknown base vertex {args.base}")
    tc = universal_cover(tq, args.base, args.radius)
    if args.out:
        _write_cover(tc, dims, Path(args.out))
    interior = tc.interior()
    out.write(f"radius {tc.radius}\nvertices {len(tc.cover.vertices)}\ninterior {len(interior)}\n")
    for v in tc.cover.vertices:
        tag = "interior" if tc.is_interior(v) else "boundary"
        out.write(f"over {v} {tc.pi(v)} depth {tc.depth[v]} length {tc.length[v]} {tag}\n")
    return 0


def _load_cover_quiver(path: Path) -> tuple[TranslationQuiver, dict]:
    if path.is_dir():
        tq, dims = parse_tq(_read(str(path / "cover.tq")))
        boundary = set()
        mp = path / "cover.map"
        if mp.exists():
            for line in mp.read_text().splitlines():
                parts = line.split()
                if parts[:1] == ["boundary"]:
                    boundary.add(parts[1])
        tq = TranslationQuiver.build(tq.vertices, tq.arrows, tq.projectives, tq.injectives, tq.tau, boundary)
        return tq, dims
    return parse_tq(_read(str(path)))


def cmd_mesh_hom(args, out) -> int:
    tq, dims = _load_cover_quiver(Path(args.cover))
    for v in (args.x, args.y):
        if v not in tq.vertices:
            raise ConfigError(f"unknown vertex {v}")
    problems = validate(tq)
    if problems:
        for p in problems:
            out.write(f"error {p}\n")
        return 1
    mq = attach_split_modulation(tq, dims, field=args.field or parse_field("q"))
    cat = MeshCategory(mq, path_cap=args.path_cap)
    h = cat.hom(args.x, args.y)
    out.write(f"hom {args.x} {args.y} dim {h.dim}\n")
    out.write(f"paths-ambient {h.ambient_dim}\n")
    out.write(f"length {'-' if h.length is None else h.length}\n")
    top = (h.length or 0) + 1
    for n in range(top + 1):
        d, _ = cat.graded_piece(args.x, args.y, n)
        g = cat.radical_power(args.x, args.y, n, method="generators").dim
        out.write(f"graded {n} {d} rad {cat.radical_power(args.x, args.y, n).dim} generators {g}\n")
    return 0


def _pipeline(args):
    comp = knit(_load_alg(args))
    base = sorted(comp.quiver.projectives)[0]
    tc = universal_cover(comp.quiver, base, args.radius)
    F = build_well_behaved(tc, comp)
    return comp, tc, F


def _map_jobs(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def cmd_verify_covering(args, out) -> int:
    comp, tc, F = _pipeline(args)
    R = comp.radical  # fill shared caches before any worker starts
    N = R.nilpotency_index
    problems = F.problems()
    interior = sorted(tc.interior())
    top = N if N is not None else len(comp.names)
    triples = [(x, y, n) for x in interior for y in interior for n in range(top + 1)]

    def graded(t):
        try:
            r = verify_graded_covering(F, *t)
        except UndecidableTruncation as exc:
            return f"graded {t[0]} {t[1]} {t[2]} undecidable {exc.min_radius}", None
        a, b = r.covariant, r.contravariant
        line = (f"graded {t[0]} {t[1]} {t[2]} cov {a.domain_dim} {a.target_dim} {a.rank} "
                f"contra {b.domain_dim} {b.target_dim} {b.rank} {'ok' if r.bijective else 'FAIL'}")
        return line, r.bijective

    def injective(pair):
        try:
            r = verify_injectivity(F, *pair)
        except UndecidableTruncation as exc:
            return f"hom {pair[0]} {pair[1]} undecidable {exc.min_radius}", None, None
        a, b = r.covariant, r.contravariant
        line = (f"hom {pair[0]} {pair[1]} cov {a.domain_dim} {a.target_dim} {a.rank} "
                f"contra {b.domain_dim} {b.target_dim} {b.rank} "
                f"{'injective' if r.injective else 'FAIL'} {'surjective' if r.bijective else 'not-surjective'}")
        return line, r.injective, r.bijective

    g_results = _map_jobs(graded, triples, args.jobs)
    h_results = _map_jobs(injective, [(x, y) for x in interior for y in interior], args.jobs)
    standard = check_generalized_standard(comp)
    out.write(f"field {comp.field}\nmodules {len(comp.names)}\ncover-vertices {len(tc.cover.vertices)}\n")
    out.write(f"interior {len(interior)}\nnilpotency {N if N is not None else '-'}\n")
    for p in problems:
        out.write(f"functor-error {p}\n")
    for line, _ in g_results:
        out.write(line + "\n")
    for line, *_ in h_results:
        out.write(line + "\n")
    decided_g = [ok for _, ok in g_results if ok is not None]
    decided_h = [r for r in h_results if r[1] is not None]
    covering = all(b for _, _, b in decided_h)
    out.write(f"graded-decided {len(decided_g)} of {len(g_results)}\n")
    out.write(f"hom-decided {len(decided_h)} of {len(h_results)}\n")
    out.write(f"generalized-standard {'yes' if standard else 'no'}\n")
    out.write(f"covering-functor {'yes' if covering else 'no'}\n")
    ok = not problems and all(decided_g) and all(i for _, i, _ in decided_h) and standard == covering
    out.write(f"result {'verified' if ok else 'failed'}\n")
    return 0 if ok else 1


def parse_path_spec(spec: str):
    """``X1 > X2 > ... > Xm [perturb i]`` into names and the perturbed index (1-based)."""
    text = spec.strip()
    perturb = None
    if "perturb" in text:
        text, _, rest = text.partition("perturb")
        try:
            perturb = int(rest.strip())
        except ValueError:
            raise ConfigError(f"bad perturb index {rest.strip()!r}") from None
    names = [p.strip() for p in text.split(">")]
    if len(names) < 2 or any(not n for n in names):
        raise ConfigError("path needs at least two vertices separated by '>'")
    if perturb is not None and not 1 <= perturb < len(names):
        raise ConfigError(f"perturb index {perturb} outside 1..{len(names) - 1}")
    return names, perturb


def path_morphisms(comp, names, perturb=None):
    """Knitted representatives along ``names`` and, optionally, a rad^2 perturbation of one of them.

    Returns ``(morphisms, note)``; the perturbation is the first ``rad^2``
    basis element scaled by a coefficient drawn from a fixed-seed generator.
    """
    names = [comp.resolve(n) for n in names]
    hs = []
    for s, t in zip(names, names[1:]):
        reps = comp.irr_reps.get((s, t))
        if not reps:
            raise NotIrreducible(f"no arrow {s} -> {t} in the component")
        hs.append(reps[0])
    note = None
    if perturb is not None:
        rng = random.Random(PERTURB_SEED)
        coeff = rng.randint(1, 9)
        s, t = names[perturb - 1], names[perturb]
        rad2 = comp.radical.power(s, t, 2)
        if rad2.dim == 0:
            note = f"perturbation of h{perturb} is zero: rad^2({s},{t}) = 0"
        else:
            from .rep_engine import from_vector

            h = hs[perturb - 1]
            hs[perturb - 1] = h + from_vector(h.source, h.target, rad2.basis[0]).scale(coeff)
            note = f"perturbation of h{perturb} by {coeff} times the first rad^2 basis element"
    return hs, note


def cmd_compose_degree(args, out) -> int:
    names, perturb = parse_path_spec(args.path)
    comp, tc, F = _pipeline(args)
    hs, note = path_morphisms(comp, names, perturb)
    verdict = composite_degree(F, hs, oracle=args.oracle)
    if note:
        out.write(f"# {note}\n")
    out.write(format_verdict(verdict))
    return 0


# entry point ---------------------------------------------------------------------

def _field_arg(s: str):
    try:
        return parse_field(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field_arg, default=None, help="q or f<p> (overrides the input file)")
    common.add_argument("--radius", type=_nonneg, default=6)
    common.add_argument("--path-cap", type=_positive, default=DEFAULT_PATH_CAP)
    common.add_argument("--no-oracle", dest="oracle", action="store_false")
    common.add_argument("--jobs", type=_positive, default=1, help="worker threads for verification")

    p = argparse.ArgumentParser(prog="meshcover", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("check-quiver", parents=[common])
    s.add_argument("file")
    s.set_defaults(func=cmd_check_quiver)
    s = sub.add_parser("knit", parents=[common])
    s.add_argument("algfile")
    s.add_argument("out", nargs="?")
    s.set_defaults(func=cmd_knit)
    s = sub.add_parser("cover", parents=[common])
    s.add_argument("tqfile")
    s.add_argument("base")
    s.add_argument("out", nargs="?")
    s.set_defaults(func=cmd_cover)
    s = sub.add_parser("mesh-hom", parents=[common])
    s.add_argument("cover", help="directory written by 'cover' or a .tq file")
    s.add_argument("x")
    s.add_argument("y")
    s.set_defaults(func=cmd_mesh_hom)
    s = sub.add_parser("verify-covering", parents=[common])
    s.add_argument("algfile")
    s.set_defaults(func=cmd_verify_covering)
    s = sub.add_parser("compose-degree", parents=[common])
    s.add_argument("algfile")
    s.add_argument("path", help="'X1 > X2 > ... > Xm [perturb i]'")
    s.set_defaults(func=cmd_compose_degree)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args, _ = parser.parse_known_args(argv)
    # allow options between positionals, e.g. ``cover a.tq X --radius 3 out``
    sub = parser._subparsers._group_actions[0].choices[args.command]
    args = sub.parse_intermixed_args(argv[argv.index(args.command) + 1:], namespace=args)
    try:
        return args.func(args, out)
    except (ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotDynkin, KnittingFailure, NotIrreducible, LiftEscapesTruncation, NotWithLength,
            PathExplosion, UndecidableTruncation, KeyError, ValueError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
