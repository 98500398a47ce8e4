import io

import pytest

from meshcover.cli import main, parse_path_spec
from meshcover.textio import ParseError, dump_matrix, parse_alg, parse_matrix, parse_tq, format_tq

A2_TQ = """# AR quiver of A_2
vertex S2 proj
vertex P1 proj inj
vertex S1 inj
arrow S2 P1
arrow P1 S1
tau S1 -> S2
"""

A3_ALG = "field Q\nvertex 1\nvertex 2\nvertex 3\narrow a : 1 -> 2\narrow b : 2 -> 3\n"
A2_ALG = "field Q\nvertex 1\nvertex 2\narrow a : 1 -> 2\n"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "a2.tq": A2_TQ,
        "a2.alg": A2_ALG,
        "a3.alg": A3_ALG,
        "loop.tq": "vertex x proj inj\narrow x x\n",
        "notau.tq": "vertex a proj\nvertex b inj\narrow a b\nvertex c inj\narrow b c\n",
        "bad.tq": "vertex a\nedge a b\n",
        "cycle.alg": "vertex 1\nvertex 2\narrow a : 1 -> 2\narrow b : 2 -> 1\n",
    }.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def test_tq_roundtrip():
    tq, dims = parse_tq(A2_TQ + "arrow S2 S1 dim=2\n")
    again, dims2 = parse_tq(format_tq(tq, dims))
    assert again.vertices == tq.vertices and again.arrows == tq.arrows and dims2 == dims


def test_tq_errors_have_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_tq("vertex a\nvertex b\nfoo a b\n")
    assert err.value.lineno == 3
    with pytest.raises(ParseError):
        parse_tq("vertex a\narrow a b dim=0\n")
    with pytest.raises(ParseError) as err:
        parse_tq("vertex a\n\narrow a z\n")
    assert err.value.lineno == 3


def test_alg_parsing():
    alg = parse_alg("field F 7\nvertex 1\nvertex 2\narrow a : 1 -> 2\n")
    assert alg.field.p == 7 and alg.arrows == (("a", "1", "2"),)
    with pytest.raises(ParseError):
        parse_alg("field F 8\nvertex 1\n")
    with pytest.raises(ParseError):
        parse_alg("vertex 1\narrow a 1 -> 2\n")


def test_matrix_dump_roundtrip():
    line = dump_matrix("M.a", [[1, 2], [3, 4]], 2)
    assert line == "M.a: 2 x 2; 1 2 3 4"
    assert parse_matrix(line) == ("M.a", 2, 2, [[1, 2], [3, 4]])
    assert parse_matrix(dump_matrix("Z", [], 3)) == ("Z", 0, 3, [])


def test_check_quiver(files):
    assert run("check-quiver", files["a2.tq"])[0] == 0
    code, out = run("check-quiver", files["loop.tq"])
    assert code == 1 and "loop at x" in out
    code, out = run("check-quiver", files["notau.tq"])
    assert code == 1 and "tau missing" in out
    assert run("check-quiver", files["bad.tq"])[0] == 2


def test_knit(files, tmp_path):
    code, out = run("knit", files["a2.alg"])
    assert code == 0 and "modules 3" in out
    assert run("knit", files["cycle.alg"])[0] == 1
    d1, d2 = tmp_path / "o1", tmp_path / "o2"
    run("knit", files["a3.alg"], str(d1))
    run("knit", files["a3.alg"], str(d2))
    for name in ("component.tq", "component.mat"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()
    assert run("check-quiver", str(d1 / "component.tq"))[0] == 0


def test_cover_and_mesh_hom(files, tmp_path):
    code, out = run("cover", files["a2.tq"], "S2", str(tmp_path / "cov"), "--radius", "4")
    assert code == 0 and "vertices 3" in out
    code, out = run("mesh-hom", str(tmp_path / "cov"), "S2~0", "S1~0")
    assert code == 0 and "dim 0" in out
    code, out = run("mesh-hom", files["a2.tq"], "S2", "P1")
    assert "dim 1" in out
    assert run("cover", files["a2.tq"], "nope")[0] == 2


def test_options_between_positionals(files, tmp_path):
    code, _ = run("cover", files["a2.tq"], "S2", "--radius", "3", str(tmp_path / "c2"))
    assert code == 0 and (tmp_path / "c2" / "cover.tq").exists()


def test_verify_covering(files):
    code, out = run("verify-covering", files["a3.alg"])
    assert code == 0 and out.endswith("result verified\n")
    assert run("verify-covering", files["a3.alg"], "--jobs", "3")[1] == out


def test_compose_degree(files):
    code, out = run("compose-degree", files["a3.alg"], "P3 > P2 > P1")
    assert code == 0 and out.startswith("verdict NotInRadNPlus1")
    code, out = run("compose-degree", files["a3.alg"], "S3 > P2 > S2 perturb 1")
    assert code == 0 and "verdict Zero" in out and "perturbation of h1 is zero" in out
    code, _ = run("compose-degree", files["a3.alg"], "P3 > P1")
    assert code == 1
    assert run("compose-degree", files["a3.alg"], "P3 > P2 perturb 5")[0] == 2


def test_field_override(files):
    code, out = run("knit", files["a2.alg"], "--field", "f5")
    assert code == 0 and "field F5" in out
    with pytest.raises(SystemExit) as err:
        run("knit", files["a2.alg"], "--field", "f6")
    assert err.value.code == 2


def test_path_spec():
    assert parse_path_spec("A > B > C perturb 2") == (["A", "B", "C"], 2)
    assert parse_path_spec("A>B") == (["A", "B"], None)
