"""Matrix-valued maps on a finite set.

``OmegaMap`` is an element of ``M(Omega, M_n(F))`` for ``Omega = {1..m}``;
algebra operations act pointwise.  The 2-local spatial and local spatial
reconstructions run the single-matrix procedures with every scalar replaced
by a function on ``Omega``, i.e. point by point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

from .derivation import JordanPairDerivation, pairs_from_skew
from .matrix import (
    NotSelfAdjoint, ShapeMismatch, SquareMatrix, adjoint,
    commutator, corner_compress, corner_embed,
    hermitian_spanning_set, identity, is_self_adjoint, is_skew_adjoint,
    jordan_product, matrix_unit,
)
from .reconstruct import (
    InconsistentOracle, VerificationFailed, assemble_implementer, chain_element,
    implementer_of, test_family,
)
from .ring import RingId, RingMismatch, RingValue, make_ring
from .solver import NoSolution, find_witness, witness_matrix

__all__ = [
    "PointOutOfRange", "ZeroWeight", "NotCornerSupported", "PointwiseMismatch",
    "PointNotInner", "OmegaMap", "SpatialDerivation", "WeightedChain", "OmegaOracle",
    "eval_at", "constant_embed", "weighted_xo", "omega_commutator", "omega_jordan",
    "corner_compress_derivation", "corner_implementer", "check_nested_corners",
    "oracle_from_spatial", "perturbed_spatial_witness", "reconstruct_two_local_spatial", "reconstruct_local_spatial",
    "is_pointwise_central",
]


class PointOutOfRange(IndexError):
    pass


class ZeroWeight(ValueError):
    pass


class NotCornerSupported(ValueError):
    pass


class PointwiseMismatch(VerificationFailed):
    pass


class PointNotInner(Exception):
    def __init__(self, t: int, msg: str = ""):
        super().__init__(f"point {t}: {msg or 'the evaluated derivation is not inner'}")
        self.t = t


@dataclass(frozen=True)
class OmegaMap:
    """A map ``{1..m} -> M_n(R)`` stored as its list of values."""

    points: tuple[SquareMatrix, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise ValueError("an OmegaMap needs at least one point")
        p0 = pts[0]
        for p in pts:
            if p.ring != p0.ring:
                raise RingMismatch(f"{p.ring} vs {p0.ring}")
            if p.n != p0.n:
                raise ShapeMismatch(f"point sizes differ: {p.n} vs {p0.n}")
        object.__setattr__(self, "points", pts)

    @property
    def omega_size(self) -> int:
        return len(self.points)

    @property
    def ring(self) -> RingId:
        return self.points[0].ring

    @property
    def n(self) -> int:
        return self.points[0].n

    @property
    def hermitian(self) -> bool:
        return all(is_self_adjoint(p) for p in self.points)

    def _zip(self, other: OmegaMap):
        if not isinstance(other, OmegaMap):
            raise TypeError(f"expected OmegaMap, got {type(other).__name__}")
        if other.omega_size != self.omega_size:
            raise ShapeMismatch(f"|Omega| {self.omega_size} vs {other.omega_size}")
        return zip(self.points, other.points)

    def __add__(self, other: OmegaMap) -> OmegaMap:
        return OmegaMap(tuple(a + b for a, b in self._zip(other)))

    def __sub__(self, other: OmegaMap) -> OmegaMap:
        return OmegaMap(tuple(a - b for a, b in self._zip(other)))

    def __neg__(self) -> OmegaMap:
        return OmegaMap(tuple(-a for a in self.points))

    def __matmul__(self, other: OmegaMap) -> OmegaMap:
        return OmegaMap(tuple(a @ b for a, b in self._zip(other)))

    def star(self) -> OmegaMap:
        return OmegaMap(tuple(adjoint(a) for a in self.points))

    def scale(self, r) -> OmegaMap:
        return OmegaMap(tuple(a.scale(r) for a in self.points))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.points)


def omega_jordan(x: OmegaMap, y: OmegaMap) -> OmegaMap:
    return OmegaMap(tuple(jordan_product(a, b) for a, b in x._zip(y)))


def omega_commutator(x: OmegaMap, y: OmegaMap) -> OmegaMap:
    return OmegaMap(tuple(commutator(a, b) for a, b in x._zip(y)))


def eval_at(x: OmegaMap, t: int) -> SquareMatrix:
    """Value at the point ``t`` (1-based)."""
    if not (isinstance(t, int) and 1 <= t <= x.omega_size):
        raise PointOutOfRange(f"point {t} outside 1..{x.omega_size}")
    return x.points[t - 1]


def constant_embed(a: SquareMatrix, omega_size: int) -> OmegaMap:
    if omega_size < 1:
        raise ValueError("omega_size must be positive")
    return OmegaMap((a,) * omega_size)


@dataclass(frozen=True)
class SpatialDerivation:
    """Pointwise inner derivation by a pointwise skew implementer."""

    implementer: OmegaMap

    def __post_init__(self):
        if not all(is_skew_adjoint(p) for p in self.implementer.points):
            raise NotSelfAdjoint("spatial implementer must be skew-adjoint at every point")

    def __call__(self, x: OmegaMap) -> OmegaMap:
        return omega_commutator(self.implementer, x)


@dataclass(frozen=True)
class WeightedChain:
    """Nonzero self-adjoint weights of the chain element ``sum_k w_k s_{k,k+1}``."""

    lambdas: tuple[RingValue, ...]

    def __post_init__(self):
        lams = tuple(self.lambdas)
        for lam in lams:
            if lam.is_zero():
                raise ZeroWeight("chain weights must be nonzero")
            if lam.star() != lam:
                raise NotSelfAdjoint(f"chain weight {lam} is not self-adjoint")
        object.__setattr__(self, "lambdas", lams)

    @classmethod
    def ones(cls, ring: RingId, n: int) -> WeightedChain:
        return cls(tuple(RingValue.of(ring, 1) for _ in range(n - 1)))


def weighted_xo(chain: WeightedChain, omega_size: int, n: int) -> OmegaMap:
    if len(chain.lambdas) != n - 1:
        raise ShapeMismatch(f"a chain on {n} indices needs {n - 1} weights, got {len(chain.lambdas)}")
    if n < 2:
        raise ShapeMismatch("chain element needs n >= 2")
    ring = chain.lambdas[0].ring
    return constant_embed(chain_element(ring, n, chain.lambdas), omega_size)


def is_pointwise_central(a: OmegaMap, b: OmegaMap) -> bool:
    basis = hermitian_spanning_set(a.ring, a.n)
    return all(commutator(p - q, s).is_zero() for p, q in a._zip(b) for s in basis)


# corners

def _check_corner(x: OmegaMap, idx: Sequence[int]) -> None:
    keep = {i - 1 for i in idx}
    ops = make_ring(x.ring)
    for t, p in enumerate(x.points, 1):
        for i, row in enumerate(p.entries):
            for j, v in enumerate(row):
                if (i not in keep or j not in keep) and not ops.is_zero(v):
                    raise NotCornerSupported(f"point {t} has entry ({i + 1},{j + 1}) outside the corner")


def corner_compress_derivation(
    delta: Callable[[OmegaMap], OmegaMap] | Mapping[OmegaMap, OmegaMap],
    idx: Sequence[int],
) -> Callable[[OmegaMap], OmegaMap]:
    """``x -> e Delta(x) e`` on corner-supported ``x``, as a map of
    ``|idx| x |idx|`` matrix-valued maps (input given at full size)."""
    idx = tuple(idx)
    get = delta if callable(delta) and not isinstance(delta, Mapping) else delta.__getitem__

    def compressed(x: OmegaMap) -> OmegaMap:
        _check_corner(x, idx)
        return OmegaMap(tuple(corner_compress(p, idx) for p in get(x).points))

    return compressed


def corner_implementer(
    delta: Callable[[OmegaMap], OmegaMap], idx: Sequence[int], n: int, omega_size: int, ring: RingId
) -> OmegaMap:
    """Pointwise skew ``d`` (on the corner) with ``e Delta(x) e = d x - x d``
    for corner-supported ``x``, found by a joint solve on the corner's
    spanning set.  Gauge: last diagonal entry zero."""
    idx = tuple(idx)
    k = len(idx)
    comp = corner_compress_derivation(delta, idx)
    basis = hermitian_spanning_set(ring, k)
    images = [comp(constant_embed(corner_embed(b, idx, n), omega_size)) for b in basis]
    ops = make_ring(ring)
    pts = []
    for t in range(omega_size):
        try:
            space = find_witness([(b, img.points[t]) for b, img in zip(basis, images)], k, ring)
        except NoSolution:
            raise PointNotInner(t + 1, "compressed derivation has no implementer") from None
        d = witness_matrix(space, k)
        off = d.entries[k - 1][k - 1]
        if not ops.is_zero(off):
            d = d - identity(ring, k).scale(off)
        pts.append(d)
    return OmegaMap(tuple(pts))


def check_nested_corners(
    delta: Callable[[OmegaMap], OmegaMap],
    e_idx: Sequence[int],
    f_idx: Sequence[int],
    n: int,
    omega_size: int,
    ring: RingId,
) -> bool:
    """For corners ``f`` inside ``e``: the implementers ``d`` (on e) and ``c``
    (on f) share off-diagonal components and diagonal differences on f."""
    e_idx, f_idx = tuple(e_idx), tuple(f_idx)
    if not set(f_idx) <= set(e_idx):
        raise ValueError("f must be a sub-corner of e")
    d = corner_implementer(delta, e_idx, n, omega_size, ring)
    c = corner_implementer(delta, f_idx, n, omega_size, ring)
    ops = make_ring(ring)
    pos_e = {i: a for a, i in enumerate(e_idx)}
    pos_f = {i: a for a, i in enumerate(f_idx)}
    for dp, cp in zip(d.points, c.points):
        for i in f_idx:
            for j in f_idx:
                if i == j:
                    continue
                de, ce = dp.entries, cp.entries
                if de[pos_e[i]][pos_e[j]] != ce[pos_f[i]][pos_f[j]]:
                    return False
                dd = ops.sub(de[pos_e[i]][pos_e[i]], de[pos_e[j]][pos_e[j]])
                cd = ops.sub(ce[pos_f[i]][pos_f[i]], ce[pos_f[j]][pos_f[j]])
                if dd != cd:
                    return False
    return True


# 2-local spatial derivations

OmegaWitness = Any  # SpatialDerivation | OmegaMap | sequence of (OmegaMap, OmegaMap)


def _omega_implementer(w: OmegaWitness, m: int) -> OmegaMap:
    if isinstance(w, SpatialDerivation):
        return w.implementer
    if isinstance(w, OmegaMap):
        return w
    pairs = list(w)
    pts = []
    for t in range(m):
        jp = JordanPairDerivation(tuple((a.points[t], b.points[t]) for a, b in pairs))
        pts.append(implementer_of(jp))
    return OmegaMap(tuple(pts))


@dataclass
class OmegaOracle:
    """A 2-local spatial derivation on maps ``{1..m} -> H_n``."""

    omega_size: int
    n: int
    ring: RingId
    value: Callable[[OmegaMap], OmegaMap]
    witness: Callable[[OmegaMap, OmegaMap], OmegaWitness]
    queries: int = 0

    def query(self, x: OmegaMap, y: OmegaMap) -> OmegaMap:
        self.queries += 1
        c = _omega_implementer(self.witness(x, y), self.omega_size)
        for p in (x, y):
            got, want = omega_commutator(c, p), self.value(p)
            for t, (a, b) in enumerate(zip(got.points, want.points), 1):
                if a != b:
                    raise InconsistentOracle(f"witness disagrees with the oracle at point {t}")
        return c


def _pairs_as_omega(z: OmegaMap) -> list[tuple[OmegaMap, OmegaMap]]:
    per_point = [list(pairs_from_skew(p).pairs) for p in z.points]
    width = max(len(p) for p in per_point)
    e11 = matrix_unit(z.ring, z.n, 1, 1)
    for p in per_point:
        p.extend([(e11, e11)] * (width - len(p)))
    return [(OmegaMap(tuple(p[k][0] for p in per_point)), OmegaMap(tuple(p[k][1] for p in per_point)))
            for k in range(width)]


def perturbed_spatial_witness(z: OmegaMap, rng, spread: int = 5) -> Callable:
    """Witness factory: at each point, ``z(t)`` plus a random kernel element
    of the two anchor constraints at that point, as pointwise Jordan pairs."""
    ring, n = z.ring, z.n
    fld = make_ring(ring).fixed_field()

    def witness(x: OmegaMap, y: OmegaMap):
        pts = []
        for zt, xt, yt in zip(z.points, x.points, y.points):
            space = find_witness([(xt, commutator(zt, xt)), (yt, commutator(zt, yt))], n, ring)
            coeffs = [fld.from_int(rng.randint(-spread, spread)) for _ in space.kernel_basis]
            pts.append(witness_matrix(space, n, coeffs))
        return _pairs_as_omega(OmegaMap(tuple(pts)))

    return witness


def oracle_from_spatial(z: OmegaMap, witness: Callable | None = None) -> OmegaOracle:
    """The spatial derivation by pointwise-skew ``z`` as a 2-local oracle;
    witnesses are ``z`` written pointwise as Jordan pairs."""
    der = SpatialDerivation(z)
    pairs = _pairs_as_omega(z)
    return OmegaOracle(z.omega_size, z.n, z.ring, der, witness or (lambda x, y: pairs))


@dataclass
class SpatialResult:
    abar: OmegaMap
    gauge_offsets: tuple[RingValue, ...]
    probes_checked: int = 0
    queries: int = 0


def _verify(delta, abar: OmegaMap, probes: Iterable[OmegaMap]) -> int:
    checked = 0
    for x in probes:
        want = delta(x)
        got = omega_commutator(abar, x)
        for t, (a, b) in enumerate(zip(want.points, got.points), 1):
            if a != b:
                raise PointwiseMismatch(x.points[t - 1], a, b, point=t)
        checked += 1
    return checked


def reconstruct_two_local_spatial(
    oracle: OmegaOracle, chain: WeightedChain | None = None, probes: Iterable[OmegaMap] = ()
) -> SpatialResult:
    """Pointwise version of :func:`~jordan2local.reconstruct.reconstruct_two_local`.

    Anchor witnesses are requested once on constant maps; their implementers
    are read point by point.  ``abar(t)`` has a zero last diagonal entry.
    """
    m, n, ring = oracle.omega_size, oracle.n, oracle.ring
    if n < 2:
        raise ShapeMismatch("the spatial reconstruction needs n >= 2")
    chain = WeightedChain.ones(ring, n) if chain is None else chain
    xo_map = weighted_xo(chain, m, n)
    x_o = xo_map.points[0]
    cache: dict[tuple[SquareMatrix, SquareMatrix], OmegaMap] = {}

    def omega_query(x: SquareMatrix, y: SquareMatrix) -> OmegaMap:
        key = (x, y)
        if key not in cache:
            cache[key] = oracle.query(constant_embed(x, m), constant_embed(y, m))
        return cache[key]

    pts, offsets = [], []
    for t in range(m):
        a, off = assemble_implementer(lambda x, y: omega_query(x, y).points[t], ring, n, x_o)
        pts.append(a)
        offsets.append(RingValue(ring, off))
    abar = OmegaMap(tuple(pts))
    family = [constant_embed(b, m) for b in test_family(ring, n, x_o)]
    checked = _verify(oracle.value, abar, family + list(probes))
    return SpatialResult(abar, tuple(offsets), checked, oracle.queries)


def reconstruct_local_spatial(
    nabla: Callable[[OmegaMap], OmegaMap],
    omega_size: int,
    n: int,
    ring: RingId,
    probes: Iterable[OmegaMap] = (),
) -> SpatialResult:
    """Recover ``abar`` from a local spatial derivation.

    For each point ``t`` the map ``b -> nabla(const b)(t)`` is solved jointly
    on the spanning set of ``H_n`` for a skew ``a_t``; ``abar(t) = a_t``.
    ``nabla`` is then checked against ``abar`` on ``probes`` (which may be
    non-constant maps).
    """
    basis = hermitian_spanning_set(ring, n)
    images = [nabla(constant_embed(b, omega_size)) for b in basis]
    ops = make_ring(ring)
    pts, offsets = [], []
    for t in range(omega_size):
        try:
            space = find_witness([(b, img.points[t]) for b, img in zip(basis, images)], n, ring)
        except NoSolution:
            raise PointNotInner(t + 1) from None
        a = witness_matrix(space, n)
        off = a.entries[n - 1][n - 1]
        if not ops.is_zero(off):
            a = a - identity(ring, n).scale(off)
        pts.append(a)
        offsets.append(RingValue(ring, off))
    abar = OmegaMap(tuple(pts))
    checked = _verify(nabla, abar, [constant_embed(b, omega_size) for b in basis] + list(probes))
    return SpatialResult(abar, tuple(offsets), checked)
