"""Recovering the implementing element of a 2-local inner derivation on H_n.

A 2-local inner derivation is given as a :class:`TwoLocalOracle`: its values,
plus for any two points a Jordan inner derivation agreeing with it at both.
:func:`reconstruct_two_local` queries a fixed set of anchor pairs, reads off
the matrix components that those witnesses determine independently of the
witness chosen, assembles ``abar`` and verifies ``Delta(x) = abar x - x abar``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

from .derivation import (
    DerivationReport, InnerDerivation, JordanPairDerivation, check_derivation,
    pairs_from_skew, reduce_to_commutator,
)
from .matrix import (
    HermitianMatrix, NotSkew, ShapeMismatch, SquareMatrix, as_hermitian,
    commutator, hermitian_spanning_set, identity, is_skew_adjoint, matrix_unit,
    sym_unit, zeros,
)
from .ring import RingId, RingValue, make_ring
from .solver import NoSolution, find_witness, witness_matrix

__all__ = [
    "SizeTooSmall", "InconsistentOracle", "VerificationFailed", "AnchorMismatch",
    "NotJointlyInner", "TwoLocalOracle", "ReconstructionResult",
    "test_family", "chain_element", "oracle_from_inner", "oracle_from_table",
    "reconstruct_two_local", "reconstruct_local", "implementer_of",
    "check_offdiag_welldefined", "check_antisym_difference", "check_diag_difference",
    "expand_sym_unit_image", "offdiag_part", "is_central_discrepancy",
    "perturbed_witness",
]


class SizeTooSmall(ValueError):
    pass


class InconsistentOracle(Exception):
    """A witness does not agree with the oracle at its own anchor points."""


class VerificationFailed(Exception):
    def __init__(self, probe: SquareMatrix, expected: SquareMatrix, actual: SquareMatrix, point: int | None = None):
        where = f" at point {point}" if point is not None else ""
        super().__init__(f"Delta(x) != abar x - x abar{where} for x = {probe!r}")
        self.probe = probe
        self.expected = expected
        self.actual = actual
        self.point = point


class AnchorMismatch(Exception):
    pass


class NotJointlyInner(Exception):
    pass


Witness = JordanPairDerivation | InnerDerivation | SquareMatrix


def implementer_of(w: Witness) -> SquareMatrix:
    """The associative implementer of a witness."""
    if isinstance(w, JordanPairDerivation):
        return reduce_to_commutator(w).c
    if isinstance(w, InnerDerivation):
        return w.c
    if isinstance(w, SquareMatrix):
        return w
    raise TypeError(f"not a witness: {type(w).__name__}")


@dataclass
class TwoLocalOracle:
    """A 2-local inner derivation on ``H_n`` given by values and witnesses."""

    n: int
    ring: RingId
    value: Callable[[SquareMatrix], SquareMatrix]
    witness: Callable[[SquareMatrix, SquareMatrix], Witness]
    queries: int = 0

    def query(self, x: SquareMatrix, y: SquareMatrix) -> SquareMatrix:
        """Implementer of ``witness(x, y)``, checked against ``value`` at x and y."""
        self.queries += 1
        c = implementer_of(self.witness(x, y))
        for p in (x, y):
            if commutator(c, p) != self.value(p):
                raise InconsistentOracle(f"witness for the pair ({x!r}, {y!r}) disagrees at {p!r}")
        return c


def oracle_from_inner(z: SquareMatrix, witness: Callable | None = None) -> TwoLocalOracle:
    """The inner derivation by skew ``z`` viewed as a 2-local map.

    Every witness is ``z`` rewritten as Jordan pairs unless ``witness`` is
    given (e.g. :func:`perturbed_witness`).
    """
    if not is_skew_adjoint(z):
        raise NotSkew("oracle_from_inner needs a skew-adjoint implementer")
    pairs = pairs_from_skew(z)

    def value(x: SquareMatrix) -> SquareMatrix:
        return commutator(z, x)

    return TwoLocalOracle(z.n, z.ring, value, witness or (lambda x, y: pairs))


def oracle_from_table(
    values: Mapping[SquareMatrix, SquareMatrix] | Iterable[tuple[SquareMatrix, SquareMatrix]],
    witnesses: Mapping[tuple[SquareMatrix, SquareMatrix], Witness] | Iterable[tuple[SquareMatrix, SquareMatrix, Witness]],
) -> TwoLocalOracle:
    """Replay a finite table; witnesses are looked up by unordered pair."""
    vals = dict(values.items() if isinstance(values, Mapping) else values)
    if not vals:
        raise ValueError("empty value table")
    wit: dict = {}
    items = witnesses.items() if isinstance(witnesses, Mapping) else (((x, y), w) for x, y, w in witnesses)
    for (x, y), w in items:
        wit[(x, y)] = w
        wit.setdefault((y, x), w)
    x0 = next(iter(vals))

    def value(x):
        try:
            return vals[x]
        except KeyError:
            raise KeyError(f"table has no value for {x!r}") from None

    def witness(x, y):
        try:
            return wit[(x, y)]
        except KeyError:
            raise KeyError(f"table has no witness for ({x!r}, {y!r})") from None

    return TwoLocalOracle(x0.n, x0.ring, value, witness)


def chain_element(ring: RingId, n: int, weights: Sequence[Any] | None = None) -> HermitianMatrix:
    """``sum_k w_k (e_{k,k+1} + e_{k+1,k})``; all weights 1 by default."""
    acc = zeros(ring, n)
    for k in range(1, n):
        term = sym_unit(ring, n, k, k + 1)
        if weights is not None:
            w = weights[k - 1]
            term = term.scale(w.payload if isinstance(w, RingValue) else w)
        acc = acc + term
    return as_hermitian(acc)


def test_family(ring: RingId, n: int, x_o: SquareMatrix | None = None) -> list[HermitianMatrix]:
    """``e_ii``, then ``e_ij + e_ji`` (i < j), then the chain element."""
    if n < 2:
        raise SizeTooSmall("the test family needs n >= 2")
    out = [matrix_unit(ring, n, i, i) for i in range(1, n + 1)]
    out += [sym_unit(ring, n, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    out.append(as_hermitian(x_o) if x_o is not None else chain_element(ring, n))
    return out


@dataclass
class ReconstructionResult:
    abar: SquareMatrix
    anchor: tuple[int, int]
    gauge_offset: RingValue
    verification: DerivationReport
    probes_checked: int = 0
    queries: int = 0


def assemble_implementer(
    query: Callable[[SquareMatrix, SquareMatrix], SquareMatrix],
    ring: RingId,
    n: int,
    x_o: SquareMatrix,
    anchor: tuple[int, int] = (1, 2),
) -> tuple[SquareMatrix, Any]:
    """Build the gauge-fixed ``abar`` from anchor-pair witnesses.

    Diagonal: one witness at ``(e_{i0 j0} + e_{j0 i0}, x_o)``.  Cell ``(i, j)``
    and ``(j, i)``: a witness at ``(e_ii, e_ij + e_ji)``; anything commuting
    with ``e_ii`` vanishes off the diagonal in row and column ``i``, so these
    entries do not depend on the witness.  Returns ``(abar, gauge_offset)``.
    """
    ops = make_ring(ring)
    i0, j0 = anchor
    c = query(sym_unit(ring, n, i0, j0), x_o)
    rows = [[ops.zero] * n for _ in range(n)]
    for k in range(n):
        rows[k][k] = c.entries[k][k]
    for i in range(1, n + 1):
        e_ii = matrix_unit(ring, n, i, i)
        for j in range(i + 1, n + 1):
            d = query(e_ii, sym_unit(ring, n, i, j))
            rows[i - 1][j - 1] = d.entries[i - 1][j - 1]
            rows[j - 1][i - 1] = d.entries[j - 1][i - 1]
    offset = rows[n - 1][n - 1]
    for k in range(n):
        rows[k][k] = ops.sub(rows[k][k], offset)
    return SquareMatrix._raw(ring, n, tuple(tuple(r) for r in rows)), offset


def reconstruct_two_local(
    oracle: TwoLocalOracle,
    probes: Iterable[SquareMatrix] = (),
    x_o: SquareMatrix | None = None,
    check_axioms: bool = True,
) -> ReconstructionResult:
    """Recover ``abar`` with ``Delta(x) = abar x - x abar``.

    Raises :class:`InconsistentOracle` when a witness contradicts the oracle
    and :class:`VerificationFailed` at the first probe where the assembled
    ``abar`` does not reproduce ``Delta``.  With ``check_axioms`` the
    additivity and Jordan-Leibniz rules of ``Delta`` are also checked on the
    test family and recorded in ``verification``.
    """
    ring, n = oracle.ring, oracle.n
    ops = make_ring(ring)
    probes = list(probes)
    if n == 1:
        abar = zeros(ring, 1)
        family = [identity(ring, 1)]
        offset = ops.zero
    else:
        x_o = chain_element(ring, n) if x_o is None else x_o
        family = test_family(ring, n, x_o)
        abar, offset = assemble_implementer(oracle.query, ring, n, x_o)
    checked = 0
    for x in family + probes:
        expected = oracle.value(x)
        actual = commutator(abar, x)
        if expected != actual:
            raise VerificationFailed(x, expected, actual)
        checked += 1
    report = check_derivation(oracle.value, family) if check_axioms else DerivationReport()
    return ReconstructionResult(abar, (1, 2), RingValue(ring, offset), report, checked, oracle.queries)


def is_central_discrepancy(a: SquareMatrix, b: SquareMatrix) -> bool:
    """True iff ``a - b`` commutes with every element of the H_n spanning set."""
    d = a - b
    return all(commutator(d, s).is_zero() for s in hermitian_spanning_set(a.ring, a.n))


def perturbed_witness(z: SquareMatrix, rng: random.Random, spread: int = 5) -> Callable:
    """Witness factory returning ``z`` plus a random element of the kernel of
    the two anchor constraints, rewritten as Jordan pairs."""
    ring, n = z.ring, z.n
    fld = make_ring(ring).fixed_field()

    def witness(x, y):
        space = find_witness([(x, commutator(z, x)), (y, commutator(z, y))], n, ring)
        coeffs = [fld.from_int(rng.randint(-spread, spread)) for _ in space.kernel_basis]
        c = witness_matrix(space, n, coeffs)
        return pairs_from_skew(c)

    return witness


def _pair_equal(a: SquareMatrix, b: SquareMatrix, cells) -> bool:
    return all(a.entries[i - 1][j - 1] == b.entries[i - 1][j - 1] for i, j in cells)


def check_offdiag_welldefined(w1: Witness, w2: Witness, i: int, j: int) -> bool:
    """Do the two implementers share their ``(i, j)`` and ``(j, i)`` components?"""
    c1, c2 = implementer_of(w1), implementer_of(w2)
    if c1.n != c2.n or c1.ring != c2.ring:
        raise ShapeMismatch("witnesses act on different spaces")
    return _pair_equal(c1, c2, [(i, j), (j, i)])


def check_antisym_difference(w1: Witness, w2: Witness, i: int, j: int) -> bool:
    """Compare ``c^{ij} - c^{ji}`` of the two implementers."""
    c1, c2 = implementer_of(w1), implementer_of(w2)
    if c1.n != c2.n or c1.ring != c2.ring:
        raise ShapeMismatch("witnesses act on different spaces")
    ops = make_ring(c1.ring)
    d1 = ops.sub(c1.entries[i - 1][j - 1], c1.entries[j - 1][i - 1])
    d2 = ops.sub(c2.entries[i - 1][j - 1], c2.entries[j - 1][i - 1])
    return d1 == d2


def check_diag_difference(w1: Witness, w2: Witness, k: int, l: int, x_o: SquareMatrix | None = None) -> bool:
    """Compare ``c^{kk} - c^{ll}`` of two witnesses agreeing at ``e_kl + e_lk`` and ``x_o``."""
    c1, c2 = implementer_of(w1), implementer_of(w2)
    if c1.n != c2.n or c1.ring != c2.ring:
        raise ShapeMismatch("witnesses act on different spaces")
    ring, n = c1.ring, c1.n
    x_o = chain_element(ring, n) if x_o is None else x_o
    for p in (sym_unit(ring, n, k, l), x_o):
        if commutator(c1, p) != commutator(c2, p):
            raise AnchorMismatch(f"witnesses disagree at {p!r}")
    ops = make_ring(ring)
    d1 = ops.sub(c1.entries[k - 1][k - 1], c1.entries[l - 1][l - 1])
    d2 = ops.sub(c2.entries[k - 1][k - 1], c2.entries[l - 1][l - 1])
    return d1 == d2


def offdiag_part(a: SquareMatrix) -> SquareMatrix:
    z = make_ring(a.ring).zero
    return SquareMatrix._raw(a.ring, a.n, tuple(
        tuple(z if p == q else x for q, x in enumerate(row)) for p, row in enumerate(a.entries)))


def expand_sym_unit_image(w: Witness, i: int, j: int, offdiag: SquareMatrix) -> bool:
    """Check ``[c, s] = [offdiag, s] + (c^ii - c^jj)(e_ij - e_ji)`` for ``s = e_ij + e_ji``."""
    c = implementer_of(w)
    if c.n != offdiag.n or c.ring != offdiag.ring:
        raise ShapeMismatch("witness and off-diagonal part differ in shape")
    ring, n = c.ring, c.n
    ops = make_ring(ring)
    s = sym_unit(ring, n, i, j)
    delta = ops.sub(c.entries[i - 1][i - 1], c.entries[j - 1][j - 1])
    diag_term = (matrix_unit(ring, n, i, j) - matrix_unit(ring, n, j, i)).scale(delta)
    return commutator(c, s) == commutator(offdiag, s) + diag_term


def reconstruct_local(
    values: Mapping[SquareMatrix, SquareMatrix] | Callable[[SquareMatrix], SquareMatrix],
    ring: RingId,
    n: int,
) -> SquareMatrix:
    """Joint implementer of a local inner derivation given on the spanning set.

    Returns the skew ``c`` (gauge-fixed so that ``c^{nn} = 0``) with
    ``Delta(b) = c b - b c`` on every spanning-set element ``b``; raises
    :class:`NotJointlyInner` when no single implementer exists.
    """
    basis = hermitian_spanning_set(ring, n)
    get = values if callable(values) and not isinstance(values, Mapping) else values.__getitem__
    constraints = [(b, get(b)) for b in basis]
    for b, db in constraints:
        try:
            find_witness([(b, db)], n, ring)
        except NoSolution:
            raise NotJointlyInner(f"no inner witness at the single point {b!r}") from None
    try:
        space = find_witness(constraints, n, ring)
    except NoSolution:
        raise NotJointlyInner("pointwise witnesses exist but no single implementer does") from None
    c = witness_matrix(space, n)
    ops = make_ring(ring)
    return c - identity(ring, n).scale(c.entries[n - 1][n - 1]) if not ops.is_zero(c.entries[n - 1][n - 1]) else c
