"""Commutative involutive unital rings with 2 invertible.

Values are stored as raw payloads (``gmpy2.mpq`` for rationals, pairs of
``mpq`` for Gaussian rationals, ``int`` residues for prime fields, tuples of
base payloads for polynomials).  A :class:`Ring` is the operation table acting
on payloads; :class:`RingValue` pairs a payload with its :class:`RingId` for the
public, type-checked surface.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Sequence

from gmpy2 import mpq

__all__ = [
    "RingError", "TwoNotInvertible", "RingMismatch", "NotInvertible",
    "RingId", "Ring", "RingValue",
    "RATIONAL", "GAUSSIAN", "prime_field", "polynomial", "parse_ring_id",
    "make_ring", "star", "fixed_decompose",
]


class RingError(Exception):
    pass


class TwoNotInvertible(RingError):
    pass


class RingMismatch(RingError):
    pass


class NotInvertible(RingError, ZeroDivisionError):
    pass


@dataclass(frozen=True)
class RingId:
    """Identifier of a built-in ring.

    ``kind`` is one of ``rational``, ``gaussian-rational``, ``prime-field`` and
    ``polynomial``.  ``p`` is the modulus of a prime field; ``base`` and ``sign``
    describe a polynomial ring ``base[t]`` whose involution maps ``t`` to
    ``sign * t``.
    """

    kind: str
    p: int | None = None
    base: RingId | None = None
    sign: int = 1

    def __str__(self) -> str:
        if self.kind == "prime-field":
            return f"prime-field({self.p})"
        if self.kind == "polynomial":
            return f"polynomial({self.base},{'+1' if self.sign > 0 else '-1'})"
        return self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != "polynomial"


RATIONAL = RingId("rational")
GAUSSIAN = RingId("gaussian-rational")


def prime_field(p: int) -> RingId:
    return RingId("prime-field", p=p)


def polynomial(base: RingId, sign: int = 1) -> RingId:
    return RingId("polynomial", base=base, sign=sign)


_ALIASES = {"q": RATIONAL, "rational": RATIONAL, "gaussian": GAUSSIAN,
            "gaussian-rational": GAUSSIAN, "qi": GAUSSIAN}


def parse_ring_id(text: str) -> RingId:
    """Parse ``rational``, ``gaussian-rational``, ``prime-field(101)``,
    ``polynomial(rational,-1)`` (nesting allowed)."""
    s = text.strip().replace(" ", "")
    if s.lower() in _ALIASES:
        return _ALIASES[s.lower()]
    m = re.fullmatch(r"(?:prime-field|gf|fp)\((\d+)\)", s, re.IGNORECASE)
    if m:
        return prime_field(int(m.group(1)))
    m = re.fullmatch(r"polynomial\((.*)\)", s, re.IGNORECASE)
    if m:
        inner = m.group(1)
        base_text, sign = inner, 1
        # last top-level comma separates the sign
        depth = 0
        for k in range(len(inner) - 1, -1, -1):
            ch = inner[k]
            if ch == ")":
                depth += 1
            elif ch == "(":
                depth -= 1
            elif ch == "," and depth == 0:
                base_text, sign_text = inner[:k], inner[k + 1:]
                if sign_text not in ("1", "+1", "-1"):
                    raise ValueError(f"bad involution sign {sign_text!r}")
                sign = -1 if sign_text == "-1" else 1
                break
        return polynomial(parse_ring_id(base_text), sign)
    raise ValueError(f"unknown ring {text!r}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class Ring:
    """Operation table of a commutative involutive unital ring.

    Every method acts on payloads of this ring.  ``half`` is the inverse of
    ``1 + 1``; construction fails with :class:`TwoNotInvertible` otherwise.
    """

    id: RingId
    zero: Any
    one: Any
    half: Any

    def add(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def star(self, a): raise NotImplementedError
    def canon(self, a): raise NotImplementedError
    def format(self, a) -> str: raise NotImplementedError
    def parse(self, obj): raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return a == self.zero

    def inv(self, a):
        raise NotInvertible(f"{self.id} is not a field")

    def from_int(self, k: int):
        raise NotImplementedError

    def dot(self, xs: Iterable, ys: Iterable):
        acc = self.zero
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y))
        return acc

    # involution structure
    @property
    def trivial_involution(self) -> bool:
        return self.skew_generator is None

    skew_generator: Any = None

    def fixed_field(self) -> Ring:
        """The field of involution-fixed scalars (field kinds only)."""
        raise NotImplementedError

    def fixed_coord(self, a):
        """Payload of ``fixed_field()`` for a fixed element ``a``."""
        raise NotImplementedError

    def embed_fixed(self, s):
        raise NotImplementedError

    def value(self, a) -> RingValue:
        return RingValue(self.id, a)

    def __repr__(self) -> str:
        return f"<Ring {self.id}>"


class RationalRing(Ring):
    def __init__(self) -> None:
        self.id = RATIONAL
        self.zero, self.one, self.half = mpq(0), mpq(1), mpq(1, 2)

    def add(self, a, b): return a + b
    def sub(self, a, b): return a - b
    def neg(self, a): return -a
    def mul(self, a, b): return a * b
    def star(self, a): return a
    def canon(self, a): return mpq(a)
    def from_int(self, k): return mpq(k)

    def inv(self, a):
        if a == 0:
            raise NotInvertible("division by zero")
        return 1 / a

    def dot(self, xs, ys):
        acc = mpq(0)
        for x, y in zip(xs, ys):
            if x and y:
                acc += x * y
        return acc

    def format(self, a) -> str:
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def parse(self, obj):
        if isinstance(obj, int):
            return mpq(obj)
        s = str(obj).strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise ValueError(f"bad rational {obj!r}")
        num, _, den = s.partition("/")
        if den and int(den) == 0:
            raise ValueError(f"zero denominator in {obj!r}")
        return mpq(int(num), int(den or 1))

    def fixed_field(self): return self
    def fixed_coord(self, a): return a
    def embed_fixed(self, s): return s


_GAUSS_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?i)?")


class GaussianRing(Ring):
    """Q(i) with complex conjugation; payloads are ``(re, im)`` pairs of mpq."""

    def __init__(self) -> None:
        self.id = GAUSSIAN
        z = mpq(0)
        self.zero, self.one, self.half = (z, z), (mpq(1), z), (mpq(1, 2), z)
        self.skew_generator = (z, mpq(1))
        self._q = RationalRing()

    def add(self, a, b): return (a[0] + b[0], a[1] + b[1])
    def sub(self, a, b): return (a[0] - b[0], a[1] - b[1])
    def neg(self, a): return (-a[0], -a[1])

    def mul(self, a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def star(self, a): return (a[0], -a[1])
    def canon(self, a): return (mpq(a[0]), mpq(a[1]))
    def from_int(self, k): return (mpq(k), mpq(0))
    def is_zero(self, a): return not a[0] and not a[1]

    def inv(self, a):
        d = a[0] * a[0] + a[1] * a[1]
        if d == 0:
            raise NotInvertible("division by zero")
        return (a[0] / d, -a[1] / d)

    def dot(self, xs, ys):
        re_, im = mpq(0), mpq(0)
        for (a, b), (c, d) in zip(xs, ys):
            if c or d:
                if a:
                    re_ += a * c
                    im += a * d
                if b:
                    re_ -= b * d
                    im += b * c
        return (re_, im)

    def format(self, a) -> str:
        fmt = self._q.format
        re_, im = a
        if not im:
            return fmt(re_)
        if im == 1:
            imag = "i"
        elif im == -1:
            imag = "-i"
        else:
            imag = f"{fmt(im)}*i"
        if not re_:
            return imag
        return f"{fmt(re_)}{imag if imag.startswith('-') else '+' + imag}"

    def parse(self, obj):
        if isinstance(obj, int):
            return (mpq(obj), mpq(0))
        if isinstance(obj, (list, tuple)) and len(obj) == 2:
            return (self._q.parse(obj[0]), self._q.parse(obj[1]))
        s = str(obj).replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational")
        re_, im, pos = mpq(0), mpq(0), 0
        while pos < len(s):
            m = _GAUSS_TERM.match(s, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"bad Gaussian rational {obj!r}")
            sign = -1 if m.group(1) == "-" else 1
            mag = self._q.parse(m.group(2)) if m.group(2) else mpq(1)
            if m.group(3):
                if m.group(3) == "*i" and not m.group(2):
                    raise ValueError(f"bad Gaussian rational {obj!r}")
                im += sign * mag
            else:
                re_ += sign * mag
            pos = m.end()
        return (re_, im)

    def fixed_field(self): return self._q
    def fixed_coord(self, a): return a[0]
    def embed_fixed(self, s): return (s, mpq(0))


class PrimeField(Ring):
    def __init__(self, rid: RingId) -> None:
        p = rid.p
        if p is None or p < 2:
            raise ValueError(f"bad modulus {p!r}")
        if p == 2:
            raise TwoNotInvertible("2 = 0 in prime-field(2)")
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.id = rid
        self.p = p
        self.zero, self.one, self.half = 0, 1, pow(2, -1, p)

    def add(self, a, b): return (a + b) % self.p
    def sub(self, a, b): return (a - b) % self.p
    def neg(self, a): return (-a) % self.p
    def mul(self, a, b): return (a * b) % self.p
    def star(self, a): return a
    def canon(self, a): return int(a) % self.p
    def from_int(self, k): return k % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise NotInvertible("division by zero")
        return pow(a, -1, self.p)

    def dot(self, xs, ys):
        return sum(x * y for x, y in zip(xs, ys)) % self.p

    def format(self, a) -> str:
        return str(a)

    def parse(self, obj):
        s = str(obj).strip()
        if not re.fullmatch(r"[+-]?\d+", s):
            raise ValueError(f"bad residue {obj!r}")
        return int(s) % self.p

    def fixed_field(self): return self
    def fixed_coord(self, a): return a
    def embed_fixed(self, s): return s


class PolynomialRing(Ring):
    """``base[t]`` with involution acting coefficient-wise and ``t -> sign*t``.

    Payloads are tuples of base payloads, lowest degree first, no trailing
    zeros (the zero polynomial is the empty tuple).
    """

    def __init__(self, rid: RingId) -> None:
        if rid.base is None or rid.sign not in (1, -1):
            raise ValueError(f"malformed polynomial ring id {rid}")
        self.id = rid
        self.base = make_ring(rid.base)
        self.sign = rid.sign
        b = self.base
        self.zero, self.one, self.half = (), (b.one,), (b.half,)
        if b.skew_generator is not None:
            self.skew_generator = (b.skew_generator,)
        elif self.sign == -1:
            self.skew_generator = (b.zero, b.one)

    def _trim(self, cs: list) -> tuple:
        b = self.base
        while cs and b.is_zero(cs[-1]):
            cs.pop()
        return tuple(cs)

    def add(self, a, b):
        r = self.base
        if len(a) < len(b):
            a, b = b, a
        cs = [r.add(x, y) for x, y in zip(a, b)] + list(a[len(b):])
        return self._trim(cs)

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        r = self.base
        cs = [r.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if r.is_zero(x):
                continue
            for j, y in enumerate(b):
                cs[i + j] = r.add(cs[i + j], r.mul(x, y))
        return self._trim(cs)

    def star(self, a):
        r = self.base
        return tuple(r.star(x) if (k % 2 == 0 or self.sign > 0) else r.neg(r.star(x))
                     for k, x in enumerate(a))

    def canon(self, a):
        return self._trim([self.base.canon(x) for x in a])

    def is_zero(self, a): return not a

    def from_int(self, k):
        return self._trim([self.base.from_int(k)])

    def inv(self, a):
        # the units are the nonzero constants
        if len(a) != 1:
            raise NotInvertible(f"{self.format(a)} is not a unit of {self.id}")
        return (self.base.inv(a[0]),)

    def format(self, a) -> str:
        # used for diagnostics only; serialization uses coefficient arrays
        return "[" + ",".join(self.base.format(x) for x in a) + "]"

    def parse(self, obj):
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except ValueError:
                # a bare constant such as "3/4"
                return self._trim([self.base.parse(obj)])
        if isinstance(obj, int):
            obj = [obj]
        if not isinstance(obj, (list, tuple)):
            raise ValueError(f"bad polynomial {obj!r}")
        return self._trim([self.base.parse(x) for x in obj])

    def to_json(self, a):
        return [self.base.format(x) if not isinstance(self.base, PolynomialRing)
                else self.base.to_json(x) for x in a]


@lru_cache(maxsize=None)
def make_ring(rid: RingId) -> Ring:
    """Return the (cached) operation table for ``rid``."""
    if isinstance(rid, str):
        rid = parse_ring_id(rid)
    if rid.kind == "rational":
        ring: Ring = RationalRing()
    elif rid.kind == "gaussian-rational":
        ring = GaussianRing()
    elif rid.kind == "prime-field":
        ring = PrimeField(rid)
    elif rid.kind == "polynomial":
        ring = PolynomialRing(rid)
    else:
        raise ValueError(f"unknown ring kind {rid.kind!r}")
    two = ring.add(ring.one, ring.one)
    if not ring.eq(ring.mul(two, ring.half), ring.one):
        raise TwoNotInvertible(f"2 is not invertible in {rid}")
    return ring


@dataclass(frozen=True)
class RingValue:
    """An element of a built-in ring; ``payload`` is always canonical."""

    ring: RingId
    payload: Any

    @classmethod
    def of(cls, ring: RingId | str, obj) -> RingValue:
        rid = parse_ring_id(ring) if isinstance(ring, str) else ring
        r = make_ring(rid)
        if isinstance(obj, int) and not isinstance(obj, bool):
            return cls(rid, r.from_int(obj))
        return cls(rid, r.parse(obj))

    @property
    def ops(self) -> Ring:
        return make_ring(self.ring)

    def _check(self, other: RingValue) -> None:
        if not isinstance(other, RingValue):
            raise TypeError(f"expected RingValue, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: RingValue) -> RingValue:
        self._check(other)
        return RingValue(self.ring, self.ops.add(self.payload, other.payload))

    def __sub__(self, other: RingValue) -> RingValue:
        self._check(other)
        return RingValue(self.ring, self.ops.sub(self.payload, other.payload))

    def __mul__(self, other: RingValue) -> RingValue:
        self._check(other)
        return RingValue(self.ring, self.ops.mul(self.payload, other.payload))

    def __neg__(self) -> RingValue:
        return RingValue(self.ring, self.ops.neg(self.payload))

    def star(self) -> RingValue:
        return RingValue(self.ring, self.ops.star(self.payload))

    def inverse(self) -> RingValue:
        return RingValue(self.ring, self.ops.inv(self.payload))

    def is_zero(self) -> bool:
        return self.ops.is_zero(self.payload)

    def __str__(self) -> str:
        return self.ops.format(self.payload)

    def __repr__(self) -> str:
        return f"RingValue({self.ring}, {self})"


def star(r: RingValue) -> RingValue:
    return r.star()


def fixed_decompose(r: RingValue) -> tuple[RingValue, RingValue]:
    """Split ``r`` into its self-adjoint and skew-adjoint halves."""
    ops = r.ops
    s = ops.star(r.payload)
    fixed = ops.mul(ops.half, ops.add(r.payload, s))
    skew = ops.mul(ops.half, ops.sub(r.payload, s))
    return RingValue(r.ring, fixed), RingValue(r.ring, skew)


def check_same_ring(values: Sequence[RingValue]) -> RingId:
    rids = {v.ring for v in values}
    if len(rids) > 1:
        raise RingMismatch(f"mixed rings {sorted(map(str, rids))}")
    return rids.pop()
