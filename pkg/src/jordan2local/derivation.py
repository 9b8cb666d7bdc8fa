"""Inner derivations in associative and Jordan-pair form.

A Jordan inner derivation ``x -> sum_k a_k.(b_k.x) - b_k.(a_k.x)`` acts on
self-adjoint matrices exactly as the associative inner derivation by
``c = (1/4) sum_k [a_k, b_k]``; :func:`reduce_to_commutator` computes ``c``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .matrix import (
    HermitianMatrix, NotSkew, ShapeMismatch, SquareMatrix, as_hermitian,
    commutator, is_skew_adjoint, jordan_product, matrix_unit, sym_unit, zeros,
)
from .ring import RingMismatch, make_ring

__all__ = [
    "InnerDerivation", "JordanPairDerivation", "DerivationReport", "MissingValue",
    "apply_inner", "apply_jordan_pairs", "reduce_to_commutator", "pairs_from_skew",
    "check_derivation",
]


class MissingValue(KeyError):
    """A value table could not supply a point requested by the checker."""


@dataclass(frozen=True)
class InnerDerivation:
    """``x -> c x - x c``."""

    c: SquareMatrix

    @property
    def preserves_hermitian(self) -> bool:
        return is_skew_adjoint(self.c)

    def __call__(self, x: SquareMatrix) -> SquareMatrix:
        return apply_inner(self, x)


@dataclass(frozen=True)
class JordanPairDerivation:
    """``x -> sum_k a_k.(b_k.x) - b_k.(a_k.x)`` with self-adjoint ``a_k``, ``b_k``."""

    pairs: tuple[tuple[HermitianMatrix, HermitianMatrix], ...]

    def __post_init__(self):
        pairs = tuple((as_hermitian(a), as_hermitian(b)) for a, b in self.pairs)
        if not pairs:
            raise ValueError("a Jordan pair derivation needs at least one pair")
        a0 = pairs[0][0]
        for a, b in pairs:
            for m in (a, b):
                if m.ring != a0.ring:
                    raise RingMismatch(f"{m.ring} vs {a0.ring}")
                if m.n != a0.n:
                    raise ShapeMismatch(f"pair sizes differ: {m.n} vs {a0.n}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def ring(self):
        return self.pairs[0][0].ring

    @property
    def n(self) -> int:
        return self.pairs[0][0].n

    def __call__(self, x: SquareMatrix) -> HermitianMatrix:
        return apply_jordan_pairs(self, x)


def apply_inner(d: InnerDerivation | SquareMatrix, x: SquareMatrix) -> SquareMatrix:
    c = d.c if isinstance(d, InnerDerivation) else d
    return commutator(c, x)


def apply_jordan_pairs(d: JordanPairDerivation, x: SquareMatrix) -> HermitianMatrix:
    x = as_hermitian(x)
    if x.n != d.n:
        raise ShapeMismatch(f"derivation on size {d.n}, argument size {x.n}")
    acc = zeros(d.ring, d.n)
    for a, b in d.pairs:
        acc = acc + jordan_product(a, jordan_product(b, x)) - jordan_product(b, jordan_product(a, x))
    return as_hermitian(acc)


def reduce_to_commutator(d: JordanPairDerivation) -> InnerDerivation:
    """The associative implementer ``(1/4) sum_k [a_k, b_k]`` (always skew)."""
    ops = make_ring(d.ring)
    acc = zeros(d.ring, d.n)
    for a, b in d.pairs:
        acc = acc + commutator(a, b)
    return InnerDerivation(acc.scale(ops.mul(ops.half, ops.half)))


def pairs_from_skew(z: SquareMatrix) -> JordanPairDerivation:
    """Express the inner derivation by a skew ``z`` as a Jordan pair list.

    The result reduces to ``z - (tr z / n) 1``, which implements the same
    derivation; ``n`` must be invertible in the ring.
    """
    if not is_skew_adjoint(z):
        raise NotSkew("implementer must be skew-adjoint")
    ring, n = z.ring, z.n
    ops = make_ring(ring)
    four = ops.from_int(4)
    two = ops.from_int(2)
    tr = z.trace().payload
    mean = ops.mul(tr, ops.inv(ops.from_int(n))) if not ops.is_zero(tr) else ops.zero
    e = z.entries
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            w = e[i][j]
            if ops.is_zero(w):
                continue
            # [e_ii, h] = w e_ij - w* e_ji  for  h = w e_ij + w* e_ji
            h = _cells(ring, n, {(i, j): ops.mul(four, w), (j, i): ops.mul(four, ops.star(w))})
            pairs.append((matrix_unit(ring, n, i + 1, i + 1), h))
    # telescoping: diag(s) - mean = sum_k S_k (e_kk - e_{k+1,k+1}), S_k partial sums
    partial = ops.zero
    for k in range(n - 1):
        partial = ops.add(partial, ops.sub(e[k][k], mean))
        if ops.is_zero(partial):
            continue
        # [e_{k,k+1}+e_{k+1,k}, u e_{k,k+1} - u e_{k+1,k}] = -2u (e_kk - e_{k+1,k+1})
        u = ops.neg(ops.mul(two, partial))
        h = _cells(ring, n, {(k, k + 1): u, (k + 1, k): ops.neg(u)})
        pairs.append((sym_unit(ring, n, k + 1, k + 2), h))
    if not pairs:
        pairs.append((matrix_unit(ring, n, 1, 1), matrix_unit(ring, n, 1, 1)))
    return JordanPairDerivation(tuple(pairs))


def _cells(ring, n, cells) -> HermitianMatrix:
    z = make_ring(ring).zero
    return as_hermitian(SquareMatrix._raw(
        ring, n, tuple(tuple(cells.get((i, j), z) for j in range(n)) for i in range(n))))


@dataclass
class DerivationReport:
    additive_ok: bool = True
    leibniz_ok: bool = True
    failures: list[tuple[Any, SquareMatrix, SquareMatrix]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.additive_ok and self.leibniz_ok


def _lookup(f: Mapping | Callable, x: SquareMatrix) -> SquareMatrix:
    if callable(f) and not isinstance(f, Mapping):
        return f(x)
    try:
        return f[x]
    except KeyError:
        raise MissingValue(f"no value for {x!r}") from None


def check_derivation(
    f: Mapping[SquareMatrix, SquareMatrix] | Callable[[SquareMatrix], SquareMatrix],
    probes: Sequence[SquareMatrix],
    product: str = "jordan",
) -> DerivationReport:
    """Check additivity and the Leibniz rule of ``f`` on all probe pairs.

    ``f`` is a callable or a mapping; a mapping must also hold every sum and
    product of probes, otherwise :class:`MissingValue` is raised.
    """
    if product == "jordan":
        mul = jordan_product
    elif product == "associative":
        mul = SquareMatrix.__matmul__
    else:
        raise ValueError(f"unknown product {product!r}")
    report = DerivationReport()
    values = [_lookup(f, p) for p in probes]
    for a in range(len(probes)):
        for b in range(a, len(probes)):
            x, y = probes[a], probes[b]
            fx, fy = values[a], values[b]
            lhs = _lookup(f, x + y)
            rhs = fx + fy
            if lhs != rhs:
                report.additive_ok = False
                report.failures.append((("add", x, y), lhs, rhs))
            pairs = [(x, y, fx, fy)] if a == b or product == "jordan" else [(x, y, fx, fy), (y, x, fy, fx)]
            for u, v, fu, fv in pairs:
                lhs = _lookup(f, mul(u, v))
                rhs = mul(fu, v) + mul(u, fv)
                if lhs != rhs:
                    report.leibniz_ok = False
                    report.failures.append((("leibniz", u, v), lhs, rhs))
    return report
