import json
from fractions import Fraction

import pytest

from mubkit.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunConfig, dumps, main
from mubkit.constructions import TorusFunction
from mubkit.errors import DomainError
from mubkit.group import AbelianGroup

PRIME_POWERS_27 = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27]


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def z4_rds(tmp_path):
    p = tmp_path / "z4.json"
    p.write_text(json.dumps({"K": {"moduli": [4]}, "N": [[0], [2]], "R": [[0], [1]], "params": [2, 2, 2, 1]}))
    return p


@pytest.mark.parametrize("n", PRIME_POWERS_27)
def test_gen_verify_round_trip(tmp_path, capsys, n):
    path = tmp_path / "sys.json"
    code, _, _ = run(capsys, "gen", "--dim", n, "--out", path)
    assert code == EXIT_OK
    assert len(json.loads(path.read_text())["bases"]) == n + 1
    code, out, _ = run(capsys, "verify", path)
    assert code == EXIT_OK and json.loads(out)["is_complete"]


def test_gen_rejects_non_prime_power(capsys):
    code, _, err = run(capsys, "gen", "--dim", 6)
    assert code == EXIT_USAGE and "not a prime power" in err


def test_gen_rejects_odd_family_in_characteristic_two(capsys):
    code, _, _ = run(capsys, "gen", "--dim", 4, "--family", "dembowski-ostrom", "--alpha", 1)
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--dim", "9", "--family", "coulter-matthews", "--alpha", "1"],
        ["gen", "--dim", "27", "--family", "ding-yuan", "--u", "1"],
        ["gen", "--dim", "8", "--even-halfsquare"],
        ["gen", "--dim", "7", "--odd-square", "--scramble", "--seed", "3"],
    ],
)
def test_gen_variants_verify(tmp_path, capsys, argv):
    path = tmp_path / "s.json"
    assert run(capsys, *argv, "--out", path)[0] == EXIT_OK
    assert run(capsys, "verify", path)[0] == EXIT_OK
    assert run(capsys, "verify", path, "--backend", "float")[0] == EXIT_OK


def test_gen_bad_flag_combinations(capsys):
    assert run(capsys, "gen", "--dim", 8, "--odd-square")[0] == EXIT_USAGE
    assert run(capsys, "gen", "--dim", 9, "--even-halfsquare")[0] == EXIT_USAGE
    assert run(capsys, "gen", "--dim", 1)[0] == EXIT_USAGE
    assert run(capsys, "gen")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE


def test_verify_failure_and_malformed(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(capsys, "gen", "--dim", 3, "--out", path)
    obj = json.loads(path.read_text())
    obj["bases"] = obj["bases"][:2]
    path.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify", path)
    assert code == EXIT_FAIL and json.loads(out)["is_mub"]
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", bad)[0] == EXIT_USAGE
    assert run(capsys, "verify", tmp_path / "missing.json")[0] == EXIT_USAGE


def test_welch_single_basis(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(capsys, "gen", "--dim", 4, "--out", path)
    obj = json.loads(path.read_text())
    obj["bases"] = obj["bases"][:1]
    path.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "welch", path, "--k", 2)
    rep = json.loads(out)
    n = 4
    assert code == EXIT_FAIL
    assert Fraction(rep["margin"]) == n * (n + 1) * n // 2 - n * n > 0
    assert rep["witness"] is not None
    code, out, _ = run(capsys, "welch", path, "--k", 1)
    assert code == EXIT_OK and json.loads(out)["lhs"] == n * n


def test_welch_complete_system(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(capsys, "gen", "--dim", 3, "--out", path)
    code, out, _ = run(capsys, "welch", path, "--k", 2)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["lhs"] == rep["rhs"] == 9 * 16
    assert run(capsys, "welch", path, "--k", 0)[0] == EXIT_USAGE


def test_rds_check_z4(capsys, z4_rds):
    code, out, _ = run(capsys, "rds", "check", z4_rds)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["valid"] and rep["splitting"] is False


def test_rds_to_planar_and_back(tmp_path, capsys, z4_rds):
    code, out, _ = run(capsys, "rds", "to-planar", z4_rds)
    assert code == EXIT_OK
    fn = tmp_path / "f.json"
    fn.write_text(out)
    assert run(capsys, "planar", "check", fn, "--condition", "general")[0] == EXIT_OK
    code, out, _ = run(capsys, "rds", "from-planar", fn)
    assert code == EXIT_OK
    back = tmp_path / "d.json"
    back.write_text(out)
    assert run(capsys, "rds", "check", back)[0] == EXIT_OK


def test_rds_check_failure(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"K": {"moduli": [4]}, "N": [[0], [2]], "R": [[0], [2]], "params": [2, 2, 2, 1]}))
    code, out, _ = run(capsys, "rds", "check", p)
    assert code == EXIT_FAIL and json.loads(out)["witness"]["kind"] == "forbidden"
    assert run(capsys, "rds", "to-planar", p)[0] == EXIT_FAIL
    p.write_text(json.dumps({"K": {"moduli": [4]}, "N": [[0], [1]], "R": [[0]], "params": [2, 2, 1, 0]}))
    assert run(capsys, "rds", "check", p)[0] == EXIT_USAGE


def test_planar_make_and_check(tmp_path, capsys):
    fn = tmp_path / "f.json"
    assert run(capsys, "planar", "make", "square", "--p", 5, "--out", fn)[0] == EXIT_OK
    assert run(capsys, "planar", "check", fn)[0] == EXIT_OK
    assert run(capsys, "planar", "make", "half-square", "--p", 2, "--k", 2, "--out", fn)[0] == EXIT_OK
    assert run(capsys, "planar", "check", fn, "--condition", "uslovie")[0] == EXIT_USAGE  # not integer-valued
    assert run(capsys, "planar", "check", fn, "--condition", "general")[0] == EXIT_OK
    G = AbelianGroup((5,))
    lin = TorusFunction(G, G, {(x,): (Fraction(2 * x % 5),) for x in range(5)})
    fn.write_text(json.dumps(lin.to_json()))
    code, out, _ = run(capsys, "planar", "check", fn)
    assert code == EXIT_FAIL and json.loads(out)["witness"] is not None


def test_lgraph_dot_and_numbers(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(capsys, "gen", "--dim", 3, "--out", path)
    H = json.loads(path.read_text())["bases"][1]
    mfile = tmp_path / "h.json"
    mfile.write_text(json.dumps(H))
    dot = tmp_path / "l.dot"
    code, out, _ = run(capsys, "lgraph", mfile, "--dot", dot, "--numbers")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["vertices"] == 6 and rep["clique_number"] == 3 and rep["chromatic_number"] == 3
    text = dot.read_text()
    assert text.startswith("graph L {") and '"0,1"' in text and text.count("--") == rep["edges"]
    code, _, _ = run(capsys, "lgraph", mfile, "--dot", dot, "--weighted")
    assert code == EXIT_OK and "label=" in dot.read_text()
    assert run(capsys, "lgraph", path)[0] == EXIT_USAGE


def test_lgraph_against(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(capsys, "gen", "--dim", 5, "--out", path)
    bases = json.loads(path.read_text())["bases"]
    a, h = tmp_path / "a.json", tmp_path / "h.json"
    a.write_text(json.dumps(bases[1]))
    h.write_text(json.dumps(bases[2]))
    code, out, _ = run(capsys, "lgraph", a, "--against", h)
    assert code in (EXIT_OK, EXIT_FAIL)
    assert json.loads(out)["covers_complete"] == (code == EXIT_OK)


def test_reports_are_byte_stable(tmp_path, capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "gen", "--dim", 9, "--scramble", "--seed", 11)
        assert code == EXIT_OK
        outs.append(out)
    assert outs[0] == outs[1]
    code, other, _ = run(capsys, "gen", "--dim", 9, "--scramble", "--seed", 12)
    assert other != outs[0]
    path = tmp_path / "s.json"
    path.write_text(outs[0])
    a = run(capsys, "verify", path)[1]
    b = run(capsys, "verify", path)[1]
    assert a == b
    assert dumps({"b": 1, "a": [Fraction(1, 2)]}) == dumps({"a": [Fraction(1, 2)], "b": 1})


def test_run_config_invariants():
    with pytest.raises(DomainError):
        RunConfig(tol=0)
    with pytest.raises(DomainError):
        RunConfig(backend="quantum")
