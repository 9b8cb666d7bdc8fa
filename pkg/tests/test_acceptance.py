"""Acceptance criteria at full size.

Each test prints one ``PASS``/``FAIL`` line.  Run alone with
``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""
import json
import sys
import time

import pytest

from jordan2local import cli, suites
from jordan2local.derivation import (
    JordanPairDerivation, apply_inner, apply_jordan_pairs, check_derivation, reduce_to_commutator,
)
from jordan2local.matrix import (
    commutator, hermitian_spanning_set, identity, is_skew_adjoint, matrix_unit,
    skew_spanning_set, sym_unit, zeros,
)
from jordan2local.reconstruct import (
    NotJointlyInner, TwoLocalOracle, VerificationFailed, oracle_from_inner, reconstruct_local,
    reconstruct_two_local,
)
from jordan2local.ring import GAUSSIAN, RATIONAL, make_ring, prime_field
from jordan2local.sampling import random_hermitian, random_skew, trial_rng
from jordan2local.serialize import dumps
from jordan2local.solver import NoSolution, check_two_local, find_witness, witness_matrix

pytestmark = pytest.mark.acceptance

RINGS = [RATIONAL, GAUSSIAN, prime_field(101)]
SIZES = [2, 3, 4, 5]
SEED = 20240601


@pytest.fixture
def report(acceptance_report):
    def emit(number, title, ok, elapsed, detail=""):
        tail = f" {detail}" if detail else ""
        acceptance_report(f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({elapsed:.1f}s){tail}")
    return emit


class Tally:
    def __init__(self):
        self.runs = 0
        self.failures = []

    def trial(self, suite_name, ring, n, m, trial):
        self.runs += 1
        rng = trial_rng(SEED, trial, suite_name, ring, n, m)
        fail = suites.run_trial(suites.SUITES[suite_name], ring, n, m, rng)
        if fail:
            self.failures.append((suite_name, str(ring), n, m, trial, fail["check"]))

    def check(self, ok, what):
        self.runs += 1
        if not ok:
            self.failures.append(what)

    @property
    def ok(self):
        return not self.failures

    def summary(self):
        return f"{self.runs - len(self.failures)}/{self.runs}" + (f" first failure {self.failures[0]}" if self.failures else "")


def test_criterion_01_reduction_identity(report):
    start, tally = time.perf_counter(), Tally()
    for k in range(500):
        ring, n = RINGS[k % 3], SIZES[(k // 3) % 4]
        rng = trial_rng(SEED, k, "reduction", ring, n)
        pairs = tuple((random_hermitian(rng, ring, n), random_hermitian(rng, ring, n))
                      for _ in range(rng.randint(1, 4)))
        d = JordanPairDerivation(pairs)
        c = reduce_to_commutator(d)
        tally.check(is_skew_adjoint(c.c), ("skew", k))
        for _ in range(20):
            x = random_hermitian(rng, ring, n)
            tally.check(apply_jordan_pairs(d, x) == apply_inner(c, x), ("identity", k))
    elapsed = time.perf_counter() - start
    ok = tally.ok and elapsed < 30
    report(1, "reduction identity, 500 pair lists x 20 probes", ok, elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]
    assert elapsed < 30


def test_criterion_02_main_reconstruction(report):
    start, tally = time.perf_counter(), Tally()
    for ring in RINGS:
        for n in SIZES:
            for t in range(200):
                tally.trial("thm-3.11", ring, n, 1, t)
    elapsed = time.perf_counter() - start
    report(2, "2-local reconstruction, 200 trials per (ring, n), 50 probes", tally.ok and elapsed < 120,
           elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]
    assert elapsed < 120


def test_criterion_03_witness_independence(report):
    start, tally = time.perf_counter(), Tally()
    for ring in RINGS:
        for t in range(100):
            tally.trial("lemma-3.1", ring, 2, 1, t)
        for n in SIZES:
            for t in range(100):
                tally.trial("lemma-3.4", ring, n, 1, t)
                tally.trial("lemma-3.6", ring, n, 1, t)
                if n >= 3:
                    tally.trial("lemma-3.41", ring, n, 1, t)
    elapsed = time.perf_counter() - start
    report(3, "off-diagonal and diagonal-difference witness independence", tally.ok, elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]


def test_criterion_04_expansion_identity(report):
    start, tally = time.perf_counter(), Tally()
    for n in SIZES:
        for t in range(200):
            tally.trial("lemma-3.5", RINGS[t % 3], n, 1, t)
    elapsed = time.perf_counter() - start
    report(4, "symmetric-unit expansion identity, 200 per n", tally.ok, elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]


def test_criterion_05_solver(report):
    start, tally = time.perf_counter(), Tally()
    solved, k = 0, 0
    while solved < 500:
        ring, n = RINGS[k % 3], SIZES[(k // 3) % 4]
        rng = trial_rng(SEED, k, "solver", ring, n)
        k += 1
        xs = [random_hermitian(rng, ring, n) for _ in range(rng.randint(1, 3))]
        if rng.random() < 0.5:
            z = random_skew(rng, ring, n)
            cons = [(x, commutator(z, x)) for x in xs]
        else:
            cons = [(x, random_hermitian(rng, ring, n)) for x in xs]
        try:
            space = find_witness(cons, n, ring)
        except NoSolution:
            continue
        solved += 1
        fld = make_ring(ring).fixed_field()
        c = witness_matrix(space, n, [fld.from_int(rng.randint(-5, 5)) for _ in space.kernel_basis])
        tally.check(is_skew_adjoint(c) and all(commutator(c, x) == y for x, y in cons), ("sound", k))
    s12, e11 = sym_unit(RATIONAL, 2, 1, 2), matrix_unit(RATIONAL, 2, 1, 1)
    (pair,) = check_two_local([(s12, zeros(RATIONAL, 2)), (e11, s12)])
    tally.check(not pair.witnessed, "counterexample")
    for t in range(100):
        ring, n = RINGS[t % 3], 2 + t % 3
        rng = trial_rng(SEED, t, "tables", ring, n)
        z = random_skew(rng, ring, n)
        table = [(x, commutator(z, x)) for x in (random_hermitian(rng, ring, n) for _ in range(4))]
        tally.check(all(r.witnessed for r in check_two_local(table)), ("table", t))
    elapsed = time.perf_counter() - start
    report(5, "solver soundness, counterexample, inner tables", tally.ok, elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]


def test_criterion_06_local_joint_solve(report):
    start, tally = time.perf_counter(), Tally()
    for ring in RINGS:
        for t in range(100):
            tally.trial("thm-1.1", ring, SIZES[t % 4], 1, t)
    table = {b: zeros(RATIONAL, 2) for b in hermitian_spanning_set(RATIONAL, 2)}
    table[matrix_unit(RATIONAL, 2, 1, 1)] = sym_unit(RATIONAL, 2, 1, 2)
    try:
        reconstruct_local(table, RATIONAL, 2)
        tally.check(False, "non-inner table accepted")
    except NotJointlyInner:
        tally.check(True, "non-inner")
    elapsed = time.perf_counter() - start
    report(6, "local derivations: joint implementer and non-inner table", tally.ok, elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]


MAP_CONFIGS = [(m, n) for m in (1, 2, 4, 8) for n in (2, 3, 4)]


def test_criterion_07_spatial_two_local(report):
    start, tally = time.perf_counter(), Tally()
    for m, n in MAP_CONFIGS:
        for t in range(100):
            tally.trial("thm-4.51", RATIONAL, n, m, t)
    elapsed = time.perf_counter() - start
    report(7, "2-local spatial reconstruction, m in 1,2,4,8 x n in 2,3,4", tally.ok and elapsed < 120,
           elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]
    assert elapsed < 120


def test_criterion_07_supplement_perturbed_witnesses():
    """Perturbed witnesses, weighted chains, all three rings (beyond the stated size)."""
    tally = Tally()
    for ring in RINGS:
        for m, n in MAP_CONFIGS:
            for t in range(10):
                tally.trial("thm-4.4", ring, n, m, t)
    assert tally.ok, tally.failures[:3]


def test_criterion_08_spatial_local(report):
    start, tally = time.perf_counter(), Tally()
    for m, n in MAP_CONFIGS:
        for t in range(100):
            tally.trial("thm-5.1", RATIONAL, n, m, t)
    elapsed = time.perf_counter() - start
    report(8, "local spatial reconstruction with 20 non-constant probes", tally.ok, elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]


def test_criterion_09_corner_compression(report):
    start, tally = time.perf_counter(), Tally()
    for t in range(100):
        tally.trial("lemma-3.4111", RINGS[t % 3], SIZES[t % 4], (1, 2, 4)[t % 3], t)
    elapsed = time.perf_counter() - start
    report(9, "nested corner component agreements", tally.ok, elapsed, tally.summary())
    assert tally.ok, tally.failures[:3]


def test_criterion_10_degenerate_cases(report):
    start, tally = time.perf_counter(), Tally()
    for ring in RINGS:
        # every inner derivation of H_1 vanishes
        for c in skew_spanning_set(ring, 1) or [zeros(ring, 1)]:
            for x in hermitian_spanning_set(ring, 1):
                tally.check(commutator(c, x).is_zero(), ("n=1 inner", str(ring)))
        zero1 = TwoLocalOracle(1, ring, lambda x, r=ring: zeros(r, 1), lambda x, y, r=ring: zeros(r, 1))
        tally.check(reconstruct_two_local(zero1).abar.is_zero(), ("n=1 zero", str(ring)))
        ident1 = TwoLocalOracle(1, ring, lambda x: x, lambda x, y, r=ring: zeros(r, 1))
        try:
            reconstruct_two_local(ident1)
            tally.check(False, ("n=1 identity accepted", str(ring)))
        except VerificationFailed:
            tally.check(True, "")
        for n in SIZES:
            tally.check(reconstruct_two_local(oracle_from_inner(zeros(ring, n))).abar.is_zero(), ("zero", str(ring), n))
        for n in range(1, 6):
            rep = check_derivation(lambda x: x, [identity(ring, n)])
            tally.check(not rep.leibniz_ok, ("identity map", str(ring), n))
    elapsed = time.perf_counter() - start
    report(10, "degenerate cases", tally.ok, elapsed, tally.summary())
    assert tally.ok, tally.failures


def _run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    obj = json.loads(out)
    obj.pop("timing", None)
    return code, dumps(obj)


def test_criterion_11_cli_determinism(report, capsys, monkeypatch):
    start, tally = time.perf_counter(), Tally()
    for name, suite in sorted(suites.SUITES.items()):
        argv = ["verify", "--suite", name, "--ring", "gaussian-rational", "--trials", "5", "--seed", "11"]
        if suite.fixed_n is None:
            argv += ["--n", "2..4"]
        if suite.uses_omega:
            argv += ["--omega", "1,3"]
        first, second = _run_cli(argv, capsys), _run_cli(argv, capsys)
        tally.check(first == second and first[0] == 0, ("determinism", name))

    def flaky(ring, n, m, rng):
        z = random_skew(rng, ring, n)
        if rng.random() < 0.5:
            suites._expect(False, "injected", {"z": z})

    monkeypatch.setitem(suites.SUITES, "thm-3.11", suites.Suite("thm-3.11", flaky))
    code, text = _run_cli(["verify", "--suite", "thm-3.11", "--trials", "8", "--seed", "5"], capsys)
    failures = json.loads(text)["failures"]
    tally.check(code == 1 and failures, "failing run exits 1")
    for f in failures:
        code, text = _run_cli(f["replay"], capsys)
        (again,) = json.loads(text)["failures"]
        tally.check(code == 1 and again["instance"] == f["instance"] and again["check"] == f["check"],
                    ("replay", f["trial"]))
    elapsed = time.perf_counter() - start
    report(11, "CLI determinism and failure replay", tally.ok, elapsed, tally.summary())
    assert tally.ok, tally.failures


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
