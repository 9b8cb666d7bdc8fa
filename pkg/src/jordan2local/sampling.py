"""Random exact elements for property suites.

Rationals have numerators in [-9, 9] and denominators in [1, 9]; Gaussian
rationals draw both parts that way; prime-field residues are uniform.
"""
from __future__ import annotations

import random
from typing import Any

from gmpy2 import mpq

from .matrix import HermitianMatrix, SquareMatrix
from .ring import RingId, make_ring

BOUND = 9


def trial_rng(seed: int, trial: int, *salt: Any) -> random.Random:
    """Independent deterministic stream for ``(seed, trial, *salt)``."""
    return random.Random(":".join(map(str, (seed, trial) + salt)))


def random_scalar(rng: random.Random, ring: RingId):
    ops = make_ring(ring)
    kind = ring.kind
    if kind == "rational":
        return mpq(rng.randint(-BOUND, BOUND), rng.randint(1, BOUND))
    if kind == "gaussian-rational":
        return (mpq(rng.randint(-BOUND, BOUND), rng.randint(1, BOUND)),
                mpq(rng.randint(-BOUND, BOUND), rng.randint(1, BOUND)))
    if kind == "prime-field":
        return rng.randrange(ring.p)
    if kind == "polynomial":
        deg = rng.randint(0, 2)
        return ops.canon([random_scalar(rng, ring.base) for _ in range(deg + 1)])
    raise ValueError(kind)


def random_fixed_scalar(rng: random.Random, ring: RingId):
    """A random involution-fixed scalar (payload of ``ring``)."""
    ops = make_ring(ring)
    r = random_scalar(rng, ring)
    return ops.mul(ops.half, ops.add(r, ops.star(r)))


def random_matrix(rng: random.Random, ring: RingId, n: int) -> SquareMatrix:
    return SquareMatrix._raw(ring, n, tuple(tuple(random_scalar(rng, ring) for _ in range(n)) for _ in range(n)))


def random_hermitian(rng: random.Random, ring: RingId, n: int) -> HermitianMatrix:
    ops = make_ring(ring)
    rows = [[ops.zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = random_fixed_scalar(rng, ring)
        for j in range(i + 1, n):
            r = random_scalar(rng, ring)
            rows[i][j], rows[j][i] = r, ops.star(r)
    return HermitianMatrix._raw(ring, n, tuple(tuple(r) for r in rows))


def random_skew(rng: random.Random, ring: RingId, n: int) -> SquareMatrix:
    ops = make_ring(ring)
    rows = [[ops.zero] * n for _ in range(n)]
    for i in range(n):
        r = random_scalar(rng, ring)
        rows[i][i] = ops.mul(ops.half, ops.sub(r, ops.star(r)))
        for j in range(i + 1, n):
            r = random_scalar(rng, ring)
            rows[i][j], rows[j][i] = r, ops.neg(ops.star(r))
    return SquareMatrix._raw(ring, n, tuple(tuple(r) for r in rows))
