"""Exact linear solving over the fixed subfield and witness search.

Skew-adjoint matrices form a vector space over the field of involution-fixed
scalars (not over the full ring when the involution is nontrivial), so every
unknown here is a fixed-field coordinate with respect to
:func:`~jordan2local.matrix.skew_spanning_set`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Mapping, Sequence

from .matrix import (
    NotSkew, ShapeMismatch, SquareMatrix, is_self_adjoint, is_skew_adjoint,
    skew_spanning_set,
)
from .ring import GaussianRing, Ring, RingId, make_ring

__all__ = [
    "UnsupportedRing", "NoSolution", "FixedFieldVector", "SolutionSpace",
    "flatten_skew", "unflatten_skew", "fixed_coords", "solve", "find_witness", "witness_matrix",
    "check_two_local", "check_local", "PairResult", "PointResult", "LocalReport",
]


class UnsupportedRing(Exception):
    """Linear solving needs a field (rational, Gaussian rational, prime field)."""


class NoSolution(Exception):
    pass


def _field_ops(ring: RingId) -> tuple[Ring, Ring]:
    if not ring.is_field:
        raise UnsupportedRing(f"solver requires a field, got {ring}")
    ops = make_ring(ring)
    return ops, ops.fixed_field()


@dataclass(frozen=True)
class FixedFieldVector:
    """Coordinates over the fixed subfield of ``ring``.

    ``coords`` are payloads of ``make_ring(ring).fixed_field()``.
    """

    ring: RingId
    coords: tuple

    def __len__(self) -> int:
        return len(self.coords)

    def __str__(self) -> str:
        fmt = make_ring(self.ring).fixed_field().format
        return "(" + ", ".join(fmt(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class SolutionSpace:
    particular: FixedFieldVector
    kernel_basis: tuple[FixedFieldVector, ...] = ()

    def point(self, coeffs: Sequence[Any] = ()) -> FixedFieldVector:
        """``particular + sum coeffs[k] * kernel_basis[k]`` (missing coeffs are 0)."""
        fld = make_ring(self.particular.ring).fixed_field()
        out = list(self.particular.coords)
        for c, v in zip(coeffs, self.kernel_basis):
            if fld.is_zero(c):
                continue
            out = [fld.add(a, fld.mul(c, b)) for a, b in zip(out, v.coords)]
        return FixedFieldVector(self.particular.ring, tuple(out))


def fixed_coords(ops: Ring, r) -> tuple:
    """Fixed-field coordinates of a ring element: ``(r,)`` for a trivial
    involution, ``(f, s)`` with ``r = f + g s`` otherwise."""
    g = ops.skew_generator
    if g is None:
        return (r,)
    if isinstance(ops, GaussianRing):
        # payload (re, im) is already re + i*im
        return r
    s = ops.star(r)
    f = ops.mul(ops.half, ops.add(r, s))
    k = ops.mul(ops.half, ops.sub(r, s))
    return (ops.fixed_coord(f), ops.fixed_coord(ops.mul(k, ops.inv(g))))


def flatten_skew(c: SquareMatrix) -> FixedFieldVector:
    ops, _ = _field_ops(c.ring)
    if not is_skew_adjoint(c):
        raise NotSkew("flatten_skew needs a skew-adjoint matrix")
    n, e = c.n, c.entries
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    g = ops.skew_generator
    if g is None:
        return FixedFieldVector(c.ring, tuple(e[i][j] for i, j in upper))
    pairs = [fixed_coords(ops, e[i][j]) for i, j in upper]
    diag = [fixed_coords(ops, e[i][i])[1] for i in range(n)]
    return FixedFieldVector(c.ring, tuple(p[0] for p in pairs) + tuple(p[1] for p in pairs) + tuple(diag))


def unflatten_skew(v: FixedFieldVector | Sequence, n: int, ring: RingId) -> SquareMatrix:
    ops, _ = _field_ops(ring)
    coords = v.coords if isinstance(v, FixedFieldVector) else tuple(v)
    basis = _skew_basis(ring, n)
    if len(coords) != len(basis):
        raise ShapeMismatch(f"expected {len(basis)} coordinates, got {len(coords)}")
    rows = [[ops.zero] * n for _ in range(n)]
    for s, cells in zip(coords, basis):
        if ops.is_zero(ops.embed_fixed(s)):
            continue
        es = ops.embed_fixed(s)
        for i, j, val in cells:
            rows[i][j] = ops.add(rows[i][j], ops.mul(es, val))
    return SquareMatrix._raw(ring, n, tuple(tuple(r) for r in rows))


_BASIS_CACHE: dict[tuple[RingId, int], list[list[tuple[int, int, Any]]]] = {}


def _skew_basis(ring: RingId, n: int):
    key = (ring, n)
    if key not in _BASIS_CACHE:
        ops = make_ring(ring)
        basis = []
        for m in skew_spanning_set(ring, n):
            basis.append([(i, j, m.entries[i][j]) for i in range(n) for j in range(n)
                          if not ops.is_zero(m.entries[i][j])])
        _BASIS_CACHE[key] = basis
    return _BASIS_CACHE[key]


class _Echelon:
    """Incremental Gauss-Jordan elimination with sparse rows over a field."""

    def __init__(self, fld: Ring, ncols: int):
        self.fld = fld
        self.ncols = ncols
        self.rows: dict[int, tuple[dict[int, Any], Any]] = {}  # pivot -> (row, rhs)

    def add(self, row: dict[int, Any], rhs) -> None:
        fld = self.fld
        row = {k: v for k, v in row.items() if not fld.is_zero(v)}
        for p, (prow, prhs) in self.rows.items():
            f = row.get(p)
            if f is None:
                continue
            for k, v in prow.items():
                nv = fld.sub(row.get(k, fld.zero), fld.mul(f, v))
                if fld.is_zero(nv):
                    row.pop(k, None)
                else:
                    row[k] = nv
            rhs = fld.sub(rhs, fld.mul(f, prhs))
        if not row:
            if not fld.is_zero(rhs):
                raise NoSolution("inconsistent linear system")
            return
        p = min(row)
        inv = fld.inv(row[p])
        row = {k: fld.mul(inv, v) for k, v in row.items()}
        rhs = fld.mul(inv, rhs)
        # keep the echelon fully reduced
        for q, (qrow, qrhs) in list(self.rows.items()):
            f = qrow.get(p)
            if f is None:
                continue
            for k, v in row.items():
                nv = fld.sub(qrow.get(k, fld.zero), fld.mul(f, v))
                if fld.is_zero(nv):
                    qrow.pop(k, None)
                else:
                    qrow[k] = nv
            self.rows[q] = (qrow, fld.sub(qrhs, fld.mul(f, rhs)))
        self.rows[p] = (row, rhs)

    def solution(self) -> tuple[list, list[list]]:
        fld = self.fld
        x = [fld.zero] * self.ncols
        for p, (_, rhs) in self.rows.items():
            x[p] = rhs
        kernel = []
        for f in range(self.ncols):
            if f in self.rows:
                continue
            v = [fld.zero] * self.ncols
            v[f] = fld.one
            for p, (prow, _) in self.rows.items():
                c = prow.get(f)
                if c is not None:
                    v[p] = fld.neg(c)
            kernel.append(v)
        return x, kernel


def solve(A: Sequence[Sequence[Any]], b: FixedFieldVector | Sequence[Any], ring: RingId | None = None) -> SolutionSpace:
    """Solve ``A u = b`` exactly over the fixed field of ``ring``.

    Free variables are set to zero in the particular solution; the kernel
    basis has one vector per free variable.  Raises :class:`NoSolution`.
    """
    if isinstance(b, FixedFieldVector):
        ring = b.ring if ring is None else ring
        b = b.coords
    if ring is None:
        raise ValueError("ring is required when b is a plain sequence")
    _, fld = _field_ops(ring)
    ncols = len(A[0]) if A else 0
    if len(A) != len(b):
        raise ShapeMismatch(f"{len(A)} rows but {len(b)} right-hand sides")
    ech = _Echelon(fld, ncols)
    for row, rhs in zip(A, b):
        if len(row) != ncols:
            raise ShapeMismatch("ragged coefficient matrix")
        ech.add({k: fld.canon(v) for k, v in enumerate(row)}, fld.canon(rhs))
    x, kernel = ech.solution()
    return SolutionSpace(FixedFieldVector(ring, tuple(x)),
                         tuple(FixedFieldVector(ring, tuple(v)) for v in kernel))


def _sparse_commutator(cells, x: SquareMatrix, ops: Ring) -> list[list]:
    """``s x - x s`` for ``s`` given by its nonzero cells."""
    n, e = x.n, x.entries
    out = [[ops.zero] * n for _ in range(n)]
    for i, j, v in cells:
        rj = e[j]
        oi = out[i]
        for q in range(n):
            if not ops.is_zero(rj[q]):
                oi[q] = ops.add(oi[q], ops.mul(v, rj[q]))
        for p in range(n):
            xp = e[p][i]
            if not ops.is_zero(xp):
                out[p][j] = ops.sub(out[p][j], ops.mul(xp, v))
    return out


def find_witness(constraints: Iterable[tuple[SquareMatrix, SquareMatrix]], n: int, ring: RingId) -> SolutionSpace:
    """All skew ``c`` with ``c x - x c = y`` for every ``(x, y)``.

    The solution is expressed in :func:`flatten_skew` coordinates; raises
    :class:`NoSolution` when no inner witness exists.
    """
    ops, fld = _field_ops(ring)
    basis = _skew_basis(ring, n)
    ech = _Echelon(fld, len(basis))
    for x, y in constraints:
        for m in (x, y):
            if m.ring != ring or m.n != n:
                raise ShapeMismatch(f"constraint matrix {m.ring} {m.n}x{m.n}, expected {ring} {n}x{n}")
        images = [_sparse_commutator(cells, x, ops) for cells in basis]
        for p in range(n):
            for q in range(n):
                coords = [fixed_coords(ops, img[p][q]) for img in images]
                target = fixed_coords(ops, y.entries[p][q])
                for t in range(len(target)):
                    ech.add({k: c[t] for k, c in enumerate(coords)}, target[t])
    x, kernel = ech.solution()
    return SolutionSpace(FixedFieldVector(ring, tuple(x)),
                         tuple(FixedFieldVector(ring, tuple(v)) for v in kernel))


def witness_matrix(space: SolutionSpace, n: int, coeffs: Sequence[Any] = ()) -> SquareMatrix:
    """The skew matrix at ``particular + coeffs . kernel_basis``."""
    v = space.point(coeffs)
    return unflatten_skew(v, n, v.ring)


@dataclass
class PairResult:
    x: SquareMatrix
    y: SquareMatrix
    witnessed: bool
    witness: SquareMatrix | None = None


@dataclass
class PointResult:
    x: SquareMatrix
    witnessed: bool
    witness: SquareMatrix | None = None


@dataclass
class LocalReport:
    points: list[PointResult] = field(default_factory=list)
    linear_ok: bool | None = None
    linearity_failures: list[tuple[SquareMatrix, SquareMatrix]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p.witnessed for p in self.points) and self.linear_ok is not False


def _table_items(table) -> list[tuple[SquareMatrix, SquareMatrix]]:
    items = list(table.items()) if isinstance(table, Mapping) else [tuple(t) for t in table]
    if not items:
        raise ValueError("empty value table")
    x0 = items[0][0]
    for x, y in items:
        if x.ring != x0.ring or y.ring != x0.ring or x.n != x0.n or y.n != x0.n:
            raise ShapeMismatch("value table mixes rings or sizes")
        if not (is_self_adjoint(x) and is_self_adjoint(y)):
            raise ValueError("value table entries must be self-adjoint")
    return items


def check_two_local(table) -> list[PairResult]:
    """Look for an inner witness on every unordered pair of table points."""
    items = _table_items(table)
    ring, n = items[0][0].ring, items[0][0].n
    _field_ops(ring)
    pairs = list(combinations(items, 2)) if len(items) > 1 else [(items[0], items[0])]
    out = []
    for (x, dx), (y, dy) in pairs:
        try:
            space = find_witness([(x, dx), (y, dy)], n, ring)
        except NoSolution:
            out.append(PairResult(x, y, False))
        else:
            out.append(PairResult(x, y, True, witness_matrix(space, n)))
    return out


def check_local(table) -> LocalReport:
    """Pointwise witness search plus additivity on sums present in the table."""
    items = _table_items(table)
    ring, n = items[0][0].ring, items[0][0].n
    _field_ops(ring)
    report = LocalReport()
    for x, dx in items:
        try:
            space = find_witness([(x, dx)], n, ring)
        except NoSolution:
            report.points.append(PointResult(x, False))
        else:
            report.points.append(PointResult(x, True, witness_matrix(space, n)))
    lookup = dict(items)
    checked = False
    for (x, dx), (y, dy) in combinations(items, 2):
        s = x + y
        if s in lookup:
            checked = True
            if lookup[s] != dx + dy:
                report.linearity_failures.append((x, y))
    if checked:
        report.linear_ok = not report.linearity_failures
    return report
