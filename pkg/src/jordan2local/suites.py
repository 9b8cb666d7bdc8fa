"""Randomized verification suites.

Every suite is a trial function ``(ring, n, m, rng) -> None`` that raises
:class:`CheckFailed` with the exact instance and both sides of the first
equality that fails.  Trials draw all randomness from ``rng``, so a trial is
replayed by rebuilding ``trial_rng(seed, trial, ...)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable

from .derivation import pairs_from_skew
from .mapalg import (
    OmegaMap, SpatialDerivation, WeightedChain, check_nested_corners,
    corner_compress_derivation, is_pointwise_central,
    omega_commutator, oracle_from_spatial, perturbed_spatial_witness,
    reconstruct_local_spatial, reconstruct_two_local_spatial,
)
from .matrix import (
    SquareMatrix, commutator, corner_compress, corner_embed, hermitian_spanning_set,
    matrix_unit, sym_unit,
)
from .reconstruct import (
    VerificationFailed, chain_element, check_antisym_difference, check_diag_difference,
    check_offdiag_welldefined, expand_sym_unit_image, is_central_discrepancy,
    offdiag_part, oracle_from_inner, perturbed_witness, reconstruct_local,
    reconstruct_two_local,
)
from .ring import RingId, RingValue, make_ring
from .sampling import random_hermitian, random_scalar, random_skew
from .serialize import matrix_to_json, omega_to_json
from .solver import find_witness, witness_matrix

__all__ = ["CheckFailed", "Suite", "SUITES", "run_trial"]


class CheckFailed(AssertionError):
    def __init__(self, check: str, instance: dict, lhs: Any = None, rhs: Any = None):
        super().__init__(f"{check} failed")
        self.check = check
        self.instance = instance
        self.lhs = lhs
        self.rhs = rhs

    def to_json(self) -> dict:
        return {"check": self.check, "instance": self.instance, "lhs": self.lhs, "rhs": self.rhs}


def _js(x):
    if isinstance(x, OmegaMap):
        return omega_to_json(x)
    if isinstance(x, SquareMatrix):
        return matrix_to_json(x)
    if isinstance(x, RingValue):
        return str(x)
    return x


def _expect(ok: bool, check: str, instance: dict, lhs=None, rhs=None) -> None:
    if not ok:
        raise CheckFailed(check, {k: _js(v) for k, v in instance.items()}, _js(lhs), _js(rhs))


def _kernel_shift(z: SquareMatrix, anchors, rng: random.Random, spread: int = 5) -> SquareMatrix:
    """``z`` plus a random element commuting with every anchor."""
    ring, n = z.ring, z.n
    fld = make_ring(ring).fixed_field()
    space = find_witness([(a, commutator(z, a)) for a in anchors], n, ring)
    coeffs = [fld.from_int(rng.randint(-spread, spread)) for _ in space.kernel_basis]
    return witness_matrix(space, n, coeffs)


def _entry(a: SquareMatrix, i: int, j: int):
    return RingValue(a.ring, a.entries[i - 1][j - 1])


def _distinct(rng: random.Random, n: int, k: int) -> list[int]:
    return rng.sample(range(1, n + 1), k)


# single-matrix suites

def lemma_3_1(ring: RingId, n: int, m: int, rng: random.Random) -> None:
    """Two witnesses agreeing at ``s_12`` on H_2.  With the trivial involution
    the (1,2), (2,1) components agree; in general their difference
    ``c^12 - c^21`` does.  Diagonal differences agree in both cases."""
    z = random_skew(rng, ring, 2)
    s = sym_unit(ring, 2, 1, 2)
    c1, c2 = _kernel_shift(z, [s], rng), _kernel_shift(z, [s], rng)
    inst = {"z": z, "c1": c1, "c2": c2}
    w1, w2 = pairs_from_skew(c1), pairs_from_skew(c2)
    if make_ring(ring).trivial_involution:
        _expect(check_offdiag_welldefined(w1, w2, 1, 2), "offdiag-components", inst)
    else:
        _expect(check_antisym_difference(w1, w2, 1, 2), "antisymmetric-difference", inst)
    d1 = _entry(c1, 1, 1) - _entry(c1, 2, 2)
    d2 = _entry(c2, 1, 1) - _entry(c2, 2, 2)
    _expect(d1 == d2, "diagonal-difference", inst, d1, d2)


def lemma_3_4(ring: RingId, n: int, m: int, rng: random.Random) -> None:
    z = random_skew(rng, ring, n)
    i, j, *rest = _distinct(rng, n, min(n, 3))
    s_ij = sym_unit(ring, n, i, j)
    c1, c2 = _kernel_shift(z, [s_ij], rng), _kernel_shift(z, [s_ij], rng)
    inst = {"z": z, "c1": c1, "c2": c2, "i": i, "j": j}
    _expect(check_antisym_difference(c1, c2, i, j), "same-anchor antisymmetric difference", inst)
    d1 = _entry(c1, i, i) - _entry(c1, j, j)
    d2 = _entry(c2, i, i) - _entry(c2, j, j)
    _expect(d1 == d2, "same-anchor diagonal difference", inst, d1, d2)
    if rest:
        p = rest[0]
        c3 = _kernel_shift(z, [sym_unit(ring, n, i, p)], rng)
        inst.update(c3=_js(c3), p=p)
        _expect(check_antisym_difference(c1, c3, i, j), "cross-anchor antisymmetric difference", inst)


def lemma_3_41(ring: RingId, n: int, m: int, rng: random.Random) -> None:
    """Witnesses at ``s_ip`` and ``s_pj`` share the ``(i,j)``, ``(j,i)``
    components; so do any two witnesses at ``(e_ii, s_ij)``."""
    z = random_skew(rng, ring, n)
    i, j, p = _distinct(rng, n, 3)
    c1 = _kernel_shift(z, [sym_unit(ring, n, i, p)], rng)
    c2 = _kernel_shift(z, [sym_unit(ring, n, p, j)], rng)
    inst = {"z": z, "c1": c1, "c2": c2, "i": i, "j": j, "p": p}
    _expect(check_offdiag_welldefined(c1, c2, i, j), "offdiag-components", inst)
    anchors = [matrix_unit(ring, n, i, i), sym_unit(ring, n, i, j)]
    a1, a2 = _kernel_shift(z, anchors, rng), _kernel_shift(z, anchors, rng)
    inst = {"z": z, "c1": a1, "c2": a2, "i": i, "j": j}
    _expect(check_offdiag_welldefined(a1, a2, i, j), "reconstruction-anchor components", inst)


def lemma_3_5(ring: RingId, n: int, m: int, rng: random.Random) -> None:
    z = random_skew(rng, ring, n)
    i, j = sorted(_distinct(rng, n, 2))
    oracle = oracle_from_inner(z, witness=perturbed_witness(z, rng))
    abar = reconstruct_two_local(oracle, check_axioms=False).abar
    x_o = chain_element(ring, n)
    w = oracle.witness(sym_unit(ring, n, i, j), x_o)
    inst = {"z": z, "i": i, "j": j, "abar": abar}
    _expect(expand_sym_unit_image(w, i, j, offdiag_part(abar)), "expansion", inst)


def lemma_3_6(ring: RingId, n: int, m: int, rng: random.Random) -> None:
    z = random_skew(rng, ring, n)
    k, l = _distinct(rng, n, 2)
    anchors = [sym_unit(ring, n, k, l), chain_element(ring, n)]
    c1, c2 = _kernel_shift(z, anchors, rng), _kernel_shift(z, anchors, rng)
    inst = {"z": z, "c1": c1, "c2": c2, "k": k, "l": l}
    _expect(check_diag_difference(c1, c2, k, l), "diagonal-difference", inst)


def thm_3_11(ring: RingId, n: int, m: int, rng: random.Random, probes: int = 50) -> None:
    z = random_skew(rng, ring, n)
    xs = [random_hermitian(rng, ring, n) for _ in range(probes)]
    oracle = oracle_from_inner(z, witness=perturbed_witness(z, rng))
    try:
        res = reconstruct_two_local(oracle, xs)
    except VerificationFailed as exc:
        _expect(False, "verification", {"z": z, "probe": exc.probe}, exc.expected, exc.actual)
    inst = {"z": z, "abar": res.abar}
    _expect(res.verification.ok, "derivation axioms on the test family", inst)
    _expect(is_central_discrepancy(res.abar, z), "central discrepancy", inst)


def thm_1_1(ring: RingId, n: int, m: int, rng: random.Random) -> None:
    z = random_skew(rng, ring, n)
    table = {b: commutator(z, b) for b in hermitian_spanning_set(ring, n)}
    c = reconstruct_local(table, ring, n)
    _expect(is_central_discrepancy(c, z), "central discrepancy", {"z": z, "c": c})


# map-algebra suites

def _random_map(rng, ring, n, m, gen=random_skew) -> OmegaMap:
    return OmegaMap(tuple(gen(rng, ring, n) for _ in range(m)))


def _random_chain(rng, ring, n) -> WeightedChain:
    ops = make_ring(ring)
    lams = []
    for _ in range(n - 1):
        r = ops.zero
        while ops.is_zero(r):
            r = random_scalar(rng, ring)
            r = ops.add(r, ops.star(r))
        lams.append(RingValue(ring, r))
    return WeightedChain(tuple(lams))


def _spatial_check(name, z, abar):
    _expect(is_pointwise_central(abar, z), f"{name}: pointwise central discrepancy", {"z": z, "abar": abar})


def thm_4_4(ring: RingId, n: int, m: int, rng: random.Random, probes: int = 20) -> None:
    """Perturbed witnesses and a random weighted chain."""
    z = _random_map(rng, ring, n, m)
    chain = _random_chain(rng, ring, n)
    xs = [_random_map(rng, ring, n, m, random_hermitian) for _ in range(probes)]
    oracle = oracle_from_spatial(z, perturbed_spatial_witness(z, rng))
    try:
        res = reconstruct_two_local_spatial(oracle, chain, xs)
    except VerificationFailed as exc:
        _expect(False, f"verification at point {exc.point}", {"z": z, "probe": exc.probe}, exc.expected, exc.actual)
    _spatial_check("thm-4.4", z, res.abar)


def thm_4_51(ring: RingId, n: int, m: int, rng: random.Random, probes: int = 20) -> None:
    z = _random_map(rng, ring, n, m)
    xs = [_random_map(rng, ring, n, m, random_hermitian) for _ in range(probes)]
    try:
        res = reconstruct_two_local_spatial(oracle_from_spatial(z), None, xs)
    except VerificationFailed as exc:
        _expect(False, f"verification at point {exc.point}", {"z": z, "probe": exc.probe}, exc.expected, exc.actual)
    _spatial_check("thm-4.51", z, res.abar)


def thm_5_1(ring: RingId, n: int, m: int, rng: random.Random, probes: int = 20) -> None:
    z = _random_map(rng, ring, n, m)
    xs = [_random_map(rng, ring, n, m, random_hermitian) for _ in range(probes)]
    try:
        res = reconstruct_local_spatial(SpatialDerivation(z), m, n, ring, xs)
    except VerificationFailed as exc:
        _expect(False, f"verification at point {exc.point}", {"z": z, "probe": exc.probe}, exc.expected, exc.actual)
    _spatial_check("thm-5.1", z, res.abar)


def lemma_3_4111(ring: RingId, n: int, m: int, rng: random.Random) -> None:
    z = _random_map(rng, ring, n, m)
    e = sorted(rng.sample(range(1, n + 1), rng.randint(2, n)))
    f = sorted(rng.sample(e, rng.randint(2, len(e))))
    der = SpatialDerivation(z)
    inst = {"z": z, "e": e, "f": f}
    _expect(check_nested_corners(der, e, f, n, m, ring), "nested-corner components", inst)
    x = OmegaMap(tuple(corner_embed(random_hermitian(rng, ring, len(e)), e, n) for _ in range(m)))
    got = corner_compress_derivation(der, e)(x)
    ze = OmegaMap(tuple(corner_compress(p, e) for p in z.points))
    xe = OmegaMap(tuple(corner_compress(p, e) for p in x.points))
    want = omega_commutator(ze, xe)
    inst["x"] = _js(x)
    _expect(got == want, "compressed derivation is inner by the compressed implementer", inst, got, want)


@dataclass(frozen=True)
class Suite:
    name: str
    run: Callable[[RingId, int, int, random.Random], None]
    min_n: int = 2
    fixed_n: int | None = None
    uses_omega: bool = False


SUITES: dict[str, Suite] = {s.name: s for s in [
    Suite("lemma-3.1", lemma_3_1, fixed_n=2),
    Suite("lemma-3.4", lemma_3_4),
    Suite("lemma-3.41", lemma_3_41, min_n=3),
    Suite("lemma-3.5", lemma_3_5),
    Suite("lemma-3.6", lemma_3_6),
    Suite("thm-3.3", thm_3_11, fixed_n=2),
    Suite("thm-3.11", thm_3_11),
    Suite("thm-1.1", thm_1_1),
    Suite("lemma-3.4111", lemma_3_4111, uses_omega=True),
    Suite("thm-4.4", thm_4_4, uses_omega=True),
    Suite("thm-4.51", thm_4_51, uses_omega=True),
    Suite("thm-5.1", thm_5_1, uses_omega=True),
]}


def run_trial(suite: Suite, ring: RingId, n: int, m: int, rng: random.Random) -> dict | None:
    """``None`` on success, else the failure report of the first failed check."""
    try:
        suite.run(ring, n, m, rng)
    except CheckFailed as exc:
        return exc.to_json()
    return None
