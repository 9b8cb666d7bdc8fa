import json
import random
import subprocess
import sys

import pytest

from jordan2local import cli, suites
from jordan2local.mapalg import OmegaMap
from jordan2local.matrix import commutator, hermitian_spanning_set, matrix_unit, sym_unit, zeros
from jordan2local.reconstruct import chain_element, test_family as family
from jordan2local.derivation import JordanPairDerivation, pairs_from_skew
from jordan2local.ring import RATIONAL
from jordan2local.sampling import random_hermitian, random_skew
from jordan2local.serialize import dumps, matrix_to_json, omega_to_json, table_to_json

Q = RATIONAL
K12 = matrix_unit(Q, 2, 1, 2) - matrix_unit(Q, 2, 2, 1)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_timing(text):
    obj = json.loads(text)
    obj.pop("timing", None)
    return dumps(obj)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(dumps(obj))
    return str(p)


def test_verify_thm_3_11(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "thm-3.11", "--ring", "rational", "--n", "3",
                       "--trials", "200", "--seed", "42")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert rep["summary"] == {"trials": 200, "passed": 200, "failed": 0}


def test_verify_lemma_3_6_gaussian(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemma-3.6", "--ring", "gaussian-rational",
                       "--n", "4", "--trials", "100", "--seed", "7")
    assert code == 0 and json.loads(out)["status"] == "pass"


@pytest.mark.parametrize("argv, msg", [
    (["--suite", "thm-3.11", "--ring", "polynomial(rational,-1)"], "solver requires a field"),
    (["--suite", "thm-3.3", "--n", "4"], "n = 2"),
    (["--suite", "lemma-3.41", "--n", "2"], "n >= 3"),
    (["--suite", "thm-3.11", "--trials", "0"], "trials"),
    (["--suite", "thm-3.11", "--ring", "prime-field(2)"], "bad ring"),
    (["--suite", "thm-3.11", "--n", "x"], "bad size"),
])
def test_verify_usage_errors(capsys, argv, msg):
    code, out, err = run(capsys, "verify", *argv)
    assert code == 2 and msg in err and out == ""


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--suite", "lemma-9"])
    assert exc.value.code == 2


def test_range_skips_vacuous_sizes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemma-3.41", "--n", "2..4", "--trials", "2")
    rep = json.loads(out)
    assert code == 0 and rep["skipped_n"] == [2] and rep["config"]["n"] == [3, 4]


def test_csv_has_counts_only(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "thm-5.1", "--omega", "1,2", "--n", "2",
                       "--trials", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines() == [
        "suite,ring,n,omega,trials,passed,failed,status",
        "thm-5.1,rational,2,1,2,2,0,pass",
        "thm-5.1,rational,2,2,2,2,0,pass",
    ]


@pytest.mark.parametrize("suite", sorted(suites.SUITES))
def test_verify_is_deterministic(capsys, suite):
    argv = ["verify", "--suite", suite, "--ring", "gaussian-rational", "--trials", "3", "--seed", "9"]
    if suites.SUITES[suite].fixed_n is None:
        argv += ["--n", "3"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == second[0] == 0
    assert strip_timing(first[1]) == strip_timing(second[1])


def test_output_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "thm-1.1", "--trials", "2", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["status"] == "pass"


def _faulty(ring, n, m, rng):
    z = random_skew(rng, ring, n)
    x = random_hermitian(rng, ring, n)
    if rng.random() < 0.5:
        suites._expect(False, "injected", {"z": z, "x": x}, commutator(z, x), x)


@pytest.fixture
def faulty_suite(monkeypatch):
    monkeypatch.setitem(suites.SUITES, "thm-3.11", suites.Suite("thm-3.11", _faulty))


def test_failures_exit_1_and_replay(capsys, faulty_suite):
    code, out, _ = run(capsys, "verify", "--suite", "thm-3.11", "--n", "3", "--trials", "10", "--seed", "3")
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "fail"
    assert rep["failures"] and rep["summary"]["failed"] == len(rep["failures"])
    first = rep["failures"][0]
    assert first["check"] == "injected" and set(first["instance"]) == {"z", "x"}
    code2, out2, _ = run(capsys, *first["replay"])
    (again,) = json.loads(out2)["failures"]
    assert code2 == 1
    assert {k: again[k] for k in ("check", "instance", "lhs", "rhs")} == \
        {k: first[k] for k in ("check", "instance", "lhs", "rhs")}


def test_reconstruct_matrix(tmp_path, capsys):
    code, out, _ = run(capsys, "reconstruct", write(tmp_path, "z.json", matrix_to_json(K12)), "--mode", "matrix")
    rep = json.loads(out)
    assert code == 0 and rep["central_discrepancy"] and rep["abar"] == matrix_to_json(K12)


def test_reconstruct_zero(tmp_path, capsys):
    code, out, _ = run(capsys, "reconstruct", write(tmp_path, "z.json", matrix_to_json(zeros(Q, 3))))
    assert code == 0 and json.loads(out)["abar"] == matrix_to_json(zeros(Q, 3))


def _table(z, corrupt=False):
    ring, n = z.ring, z.n
    values = [(x, commutator(z, x)) for x in dict.fromkeys(family(ring, n))]
    w = pairs_from_skew(z)
    e11 = matrix_unit(ring, n, 1, 1)
    first = JordanPairDerivation(((e11, e11),)) if corrupt else w
    wits = [(sym_unit(ring, n, 1, 2), chain_element(ring, n), first)]
    wits += [(matrix_unit(ring, n, i, i), sym_unit(ring, n, i, j), w)
             for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return table_to_json(values, wits)


def test_reconstruct_table(tmp_path, capsys):
    code, out, _ = run(capsys, "reconstruct", write(tmp_path, "t.json", _table(K12)))
    assert code == 0 and json.loads(out)["abar"] == matrix_to_json(K12)


def test_reconstruct_corrupted_table_replays(tmp_path, capsys):
    code, out, _ = run(capsys, "reconstruct", write(tmp_path, "t.json", _table(K12, corrupt=True)))
    rep = json.loads(out)
    assert code == 1 and rep["error"]["type"] == "InconsistentOracle"
    code2, out2, _ = run(capsys, "reconstruct", write(tmp_path, "again.json", rep["input"]))
    assert code2 == 1 and strip_timing(out2) == strip_timing(out)


def test_reconstruct_unrealizable_table(tmp_path, capsys):
    obj = _table(K12)
    obj["values"][0]["dx"] = matrix_to_json(sym_unit(Q, 2, 1, 2))
    code, out, _ = run(capsys, "reconstruct", write(tmp_path, "t.json", obj))
    rep = json.loads(out)
    assert code == 1 and rep["error"]["type"] in ("InconsistentOracle", "VerificationFailed")


def test_reconstruct_non_skew_is_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "reconstruct", write(tmp_path, "z.json", matrix_to_json(sym_unit(Q, 2, 1, 2))))
    assert code == 2 and "skew" in err


def test_reconstruct_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "reconstruct", str(p))[0] == 2


@pytest.mark.parametrize("mode", ["omega-2local", "omega-local"])
def test_reconstruct_omega(tmp_path, capsys, mode):
    z = OmegaMap((K12, zeros(Q, 2)))
    code, out, _ = run(capsys, "reconstruct", write(tmp_path, "m.json", omega_to_json(z)), "--mode", mode)
    rep = json.loads(out)
    assert code == 0 and rep["central_discrepancy"] and rep["omega"] == 2


def test_check_inner_table(tmp_path, capsys):
    z = random_skew(random.Random(0), Q, 3)
    table = table_to_json([(b, commutator(z, b)) for b in hermitian_spanning_set(Q, 3)])
    code, out, _ = run(capsys, "check", write(tmp_path, "t.json", table))
    rep = json.loads(out)
    assert code == 0 and rep["witnessed"] == 15 and rep["failed"] == 0


def test_check_counterexample(tmp_path, capsys):
    s12, e11 = sym_unit(Q, 2, 1, 2), matrix_unit(Q, 2, 1, 1)
    table = table_to_json([(s12, zeros(Q, 2)), (e11, s12)])
    code, out, _ = run(capsys, "check", write(tmp_path, "t.json", table), "--kind", "2local")
    rep = json.loads(out)
    assert code == 1 and rep["pairs"][0]["witnessed"] is False


def test_check_local_kind(tmp_path, capsys):
    e11 = matrix_unit(Q, 2, 1, 1)
    code, out, _ = run(capsys, "check", write(tmp_path, "t.json", table_to_json([(e11, e11)])), "--kind", "local")
    assert code == 1 and json.loads(out)["points"][0]["witnessed"] is False


def test_check_empty_table(tmp_path, capsys):
    code, _, err = run(capsys, "check", write(tmp_path, "t.json", {"values": [], "witnesses": []}))
    assert code == 2 and "empty" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jordan2local.cli", "verify", "--suite", "thm-3.3",
                           "--trials", "2", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "thm-3.3,rational,2,,2,2,0,pass"
