"""Dense square matrices over a built-in ring.

Indices on the public surface are 1-based, matching the usual ``e_{i,j}``
notation for matrix units.  Entries are stored as ring payloads; use
:func:`component` to get a :class:`~jordan2local.ring.RingValue`.
"""
from __future__ import annotations

from typing import Any, Iterable, Sequence

from .ring import Ring, RingId, RingMismatch, RingValue, make_ring

__all__ = [
    "MatrixError", "IndexOutOfRange", "EqualIndices", "ShapeMismatch",
    "EmptySubset", "NotSelfAdjoint", "NotSkew", "SkewGeneratorUnavailable",
    "SquareMatrix", "HermitianMatrix", "as_hermitian",
    "zeros", "identity", "matrix_unit", "sym_unit", "from_rows",
    "adjoint", "jordan_product", "commutator", "peirce", "component",
    "is_self_adjoint", "is_skew_adjoint", "hermitian_spanning_set",
    "skew_spanning_set", "corner_compress", "corner_embed",
]


class MatrixError(Exception):
    pass


class IndexOutOfRange(MatrixError, IndexError):
    pass


class EqualIndices(MatrixError, ValueError):
    pass


class ShapeMismatch(MatrixError, ValueError):
    pass


class EmptySubset(MatrixError, ValueError):
    pass


class NotSelfAdjoint(MatrixError, ValueError):
    pass


class NotSkew(MatrixError, ValueError):
    pass


class SkewGeneratorUnavailable(MatrixError):
    pass


class SquareMatrix:
    """Immutable ``n x n`` matrix; ``entries`` is a tuple of row tuples of payloads."""

    __slots__ = ("ring", "n", "entries", "_hash")

    def __init__(self, ring: RingId, n: int, entries: Sequence[Sequence[Any]]):
        if n < 1:
            raise ShapeMismatch("matrix size must be positive")
        rows = tuple(tuple(r) for r in entries)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ShapeMismatch(f"entries are not {n}x{n}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, ring: RingId, n: int, rows: tuple) -> SquareMatrix:
        m = object.__new__(cls)
        object.__setattr__(m, "ring", ring)
        object.__setattr__(m, "n", n)
        object.__setattr__(m, "entries", rows)
        object.__setattr__(m, "_hash", None)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("SquareMatrix is immutable")

    @property
    def ops(self) -> Ring:
        return make_ring(self.ring)

    def _check(self, other: SquareMatrix) -> None:
        if not isinstance(other, SquareMatrix):
            raise TypeError(f"expected SquareMatrix, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.n != self.n:
            raise ShapeMismatch(f"{self.n}x{self.n} vs {other.n}x{other.n}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.ring == other.ring and self.n == other.n and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.ring, self.n, self.entries)))
        return self._hash

    def __add__(self, other: SquareMatrix) -> SquareMatrix:
        self._check(other)
        add = self.ops.add
        return SquareMatrix._raw(self.ring, self.n, tuple(
            tuple(add(x, y) for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: SquareMatrix) -> SquareMatrix:
        self._check(other)
        sub = self.ops.sub
        return SquareMatrix._raw(self.ring, self.n, tuple(
            tuple(sub(x, y) for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> SquareMatrix:
        neg = self.ops.neg
        return SquareMatrix._raw(self.ring, self.n, tuple(tuple(neg(x) for x in r) for r in self.entries))

    def __matmul__(self, other: SquareMatrix) -> SquareMatrix:
        self._check(other)
        ops, n = self.ops, self.n
        nz = ops.is_zero
        left = [[(k, x) for k, x in enumerate(r) if not nz(x)] for r in self.entries]
        right = [[(j, y) for j, y in enumerate(r) if not nz(y)] for r in other.entries]
        work = sum(len(right[k]) for r in left for k, _ in r)
        if work * 2 > n ** 3:
            dot = ops.dot
            cols = tuple(zip(*other.entries))
            return SquareMatrix._raw(self.ring, n, tuple(
                tuple(dot(r, c) for c in cols) for r in self.entries))
        # sparse path: accumulate only the nonzero products
        mul, add, zero = ops.mul, ops.add, ops.zero
        rows = []
        for r in left:
            acc = [zero] * n
            for k, x in r:
                for j, y in right[k]:
                    acc[j] = add(acc[j], mul(x, y))
            rows.append(tuple(acc))
        return SquareMatrix._raw(self.ring, n, tuple(rows))

    def scale(self, r: RingValue | Any) -> SquareMatrix:
        """Multiply every entry by the scalar ``r`` (RingValue or payload)."""
        if isinstance(r, RingValue):
            if r.ring != self.ring:
                raise RingMismatch(f"{r.ring} vs {self.ring}")
            r = r.payload
        mul = self.ops.mul
        return SquareMatrix._raw(self.ring, self.n, tuple(tuple(mul(r, x) for x in row) for row in self.entries))

    def is_zero(self) -> bool:
        z = self.ops.is_zero
        return all(z(x) for r in self.entries for x in r)

    def trace(self) -> RingValue:
        ops = self.ops
        acc = ops.zero
        for k in range(self.n):
            acc = ops.add(acc, self.entries[k][k])
        return RingValue(self.ring, acc)

    def plain(self) -> SquareMatrix:
        if type(self) is SquareMatrix:
            return self
        return SquareMatrix._raw(self.ring, self.n, self.entries)

    def __repr__(self) -> str:
        fmt = self.ops.format
        body = "; ".join(", ".join(fmt(x) for x in r) for r in self.entries)
        return f"{type(self).__name__}({self.ring}, [{body}])"


class HermitianMatrix(SquareMatrix):
    """A :class:`SquareMatrix` checked at construction to be self-adjoint.

    Arithmetic on it returns plain :class:`SquareMatrix` values.
    """

    __slots__ = ()

    def __init__(self, ring: RingId, n: int, entries: Sequence[Sequence[Any]]):
        super().__init__(ring, n, entries)
        if not is_self_adjoint(self):
            raise NotSelfAdjoint(f"matrix is not self-adjoint: {self!r}")


def as_hermitian(a: SquareMatrix) -> HermitianMatrix:
    if isinstance(a, HermitianMatrix):
        return a
    if not is_self_adjoint(a):
        raise NotSelfAdjoint(f"matrix is not self-adjoint: {a!r}")
    return HermitianMatrix._raw(a.ring, a.n, a.entries)


def _check_index(n: int, *idx: int) -> None:
    for i in idx:
        if not (isinstance(i, int) and 1 <= i <= n):
            raise IndexOutOfRange(f"index {i} outside 1..{n}")


def zeros(ring: RingId, n: int) -> SquareMatrix:
    if n < 1:
        raise ShapeMismatch("matrix size must be positive")
    z = make_ring(ring).zero
    return SquareMatrix._raw(ring, n, tuple((z,) * n for _ in range(n)))


def _from_cells(ring: RingId, n: int, cells: dict[tuple[int, int], Any], cls=SquareMatrix) -> SquareMatrix:
    z = make_ring(ring).zero
    return cls._raw(ring, n, tuple(tuple(cells.get((i, j), z) for j in range(n)) for i in range(n)))


def identity(ring: RingId, n: int) -> HermitianMatrix:
    one = make_ring(ring).one
    return _from_cells(ring, n, {(k, k): one for k in range(n)}, HermitianMatrix)


def matrix_unit(ring: RingId, n: int, i: int, j: int) -> SquareMatrix:
    """``e_{i,j}``: a single 1 at row ``i``, column ``j``."""
    _check_index(n, i, j)
    one = make_ring(ring).one
    if i == j:
        return _from_cells(ring, n, {(i - 1, j - 1): one}, HermitianMatrix)
    return _from_cells(ring, n, {(i - 1, j - 1): one})


def sym_unit(ring: RingId, n: int, i: int, j: int) -> HermitianMatrix:
    """``e_{i,j} + e_{j,i}`` for ``i != j``."""
    _check_index(n, i, j)
    if i == j:
        raise EqualIndices(f"sym_unit needs distinct indices, got {i}, {j}")
    one = make_ring(ring).one
    return _from_cells(ring, n, {(i - 1, j - 1): one, (j - 1, i - 1): one}, HermitianMatrix)


def from_rows(ring: RingId, rows: Sequence[Sequence[Any]]) -> SquareMatrix:
    """Build a matrix from ints, strings or RingValues (parsed per ring)."""
    ops = make_ring(ring)
    n = len(rows)

    def conv(x):
        if isinstance(x, RingValue):
            if x.ring != ring:
                raise RingMismatch(f"{x.ring} vs {ring}")
            return x.payload
        if isinstance(x, int) and not isinstance(x, bool):
            return ops.from_int(x)
        return ops.parse(x)

    return SquareMatrix(ring, n, [[conv(x) for x in r] for r in rows])


def adjoint(a: SquareMatrix) -> SquareMatrix:
    st = a.ops.star
    rows = tuple(tuple(st(x) for x in col) for col in zip(*a.entries))
    return SquareMatrix._raw(a.ring, a.n, rows)


def _parity(a: SquareMatrix) -> int:
    # 1 self-adjoint, -1 skew, 0 neither
    if isinstance(a, HermitianMatrix) or is_self_adjoint(a):
        return 1
    return -1 if is_skew_adjoint(a) else 0


def jordan_product(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    """``(ab + ba) / 2``; self-adjoint inputs give a HermitianMatrix."""
    a._check(b)
    if _parity(a) == 1 and _parity(b) == 1:
        p = a @ b
        out = (p + adjoint(p)).scale(a.ops.half)  # ba = (ab)*
        return HermitianMatrix._raw(out.ring, out.n, out.entries)
    return (a @ b + b @ a).scale(a.ops.half)


def commutator(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    a._check(b)
    pa = _parity(a)
    pb = _parity(b) if pa else 0
    if pb:
        # for a, b each self-adjoint or skew, ba = pa*pb (ab)*
        p = a @ b
        return p - adjoint(p) if pa == pb else p + adjoint(p)
    return a @ b - b @ a


def component(a: SquareMatrix, i: int, j: int) -> RingValue:
    _check_index(a.n, i, j)
    return RingValue(a.ring, a.entries[i - 1][j - 1])


def peirce(a: SquareMatrix, i: int, j: int) -> SquareMatrix:
    """``e_{i,i} a e_{j,j}``: keep only entry ``(i, j)``."""
    _check_index(a.n, i, j)
    return _from_cells(a.ring, a.n, {(i - 1, j - 1): a.entries[i - 1][j - 1]})


def is_self_adjoint(a: SquareMatrix) -> bool:
    st = a.ops.star
    e = a.entries
    return all(st(e[j][i]) == e[i][j] for i in range(a.n) for j in range(i, a.n))


def is_skew_adjoint(a: SquareMatrix) -> bool:
    ops = a.ops
    e = a.entries
    return all(ops.neg(ops.star(e[j][i])) == e[i][j] for i in range(a.n) for j in range(i, a.n))


def hermitian_spanning_set(ring: RingId, n: int) -> list[HermitianMatrix]:
    """Spanning set of ``H_n`` over the fixed subring.

    ``e_{ii}``, then ``e_{ij} + e_{ji}`` for ``i < j``, then (nontrivial
    involution only) ``g(e_{ij} - e_{ji})`` with ``g`` the ring's skew generator.
    """
    ops = make_ring(ring)
    out: list[HermitianMatrix] = [matrix_unit(ring, n, i, i) for i in range(1, n + 1)]
    out += [sym_unit(ring, n, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    g = ops.skew_generator
    if g is not None:
        for i in range(n):
            for j in range(i + 1, n):
                out.append(_from_cells(ring, n, {(i, j): g, (j, i): ops.neg(g)}, HermitianMatrix))
    return out


def skew_spanning_set(ring: RingId, n: int) -> list[SquareMatrix]:
    """Spanning set of skew-adjoint matrices over the fixed subring.

    ``e_{ij} - e_{ji}`` for ``i < j``; then for a nontrivial involution
    ``g(e_{ij} + e_{ji})`` for ``i < j`` and ``g e_{ii}``.  This order fixes
    the coordinates used by the solver.
    """
    ops = make_ring(ring)
    one, mone = ops.one, ops.neg(ops.one)
    out = [_from_cells(ring, n, {(i, j): one, (j, i): mone})
           for i in range(n) for j in range(i + 1, n)]
    g = ops.skew_generator
    if g is not None:
        out += [_from_cells(ring, n, {(i, j): g, (j, i): g}) for i in range(n) for j in range(i + 1, n)]
        out += [_from_cells(ring, n, {(i, i): g}) for i in range(n)]
    return out


def _check_subset(n: int, idx: Sequence[int]) -> tuple[int, ...]:
    idx = tuple(idx)
    if not idx:
        raise EmptySubset("index subset is empty")
    _check_index(n, *idx)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"indices must be strictly increasing: {idx}")
    return idx


def corner_compress(a: SquareMatrix, idx: Iterable[int]) -> SquareMatrix:
    """The block of ``a`` on rows and columns ``idx`` (1-based, increasing)."""
    idx = _check_subset(a.n, list(idx))
    rows = tuple(tuple(a.entries[i - 1][j - 1] for j in idx) for i in idx)
    cls = HermitianMatrix if isinstance(a, HermitianMatrix) else SquareMatrix
    return cls._raw(a.ring, len(idx), rows)


def corner_embed(block: SquareMatrix, idx: Iterable[int], n: int) -> SquareMatrix:
    """Inverse of :func:`corner_compress` on corner-supported matrices."""
    idx = _check_subset(n, list(idx))
    if len(idx) != block.n:
        raise ShapeMismatch(f"block size {block.n} does not match {len(idx)} indices")
    cells = {(i - 1, j - 1): block.entries[a][b] for a, i in enumerate(idx) for b, j in enumerate(idx)}
    cls = HermitianMatrix if isinstance(block, HermitianMatrix) else SquareMatrix
    return _from_cells(block.ring, n, cells, cls)
