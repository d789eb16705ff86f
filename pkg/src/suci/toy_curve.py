"""Short-Weierstrass curves y^2 = x^3 + ax + b over a small prime field.

Teaching-sized arithmetic: affine chord-and-tangent addition, double-and-add
scalar multiplication and an exhaustive discrete-log search, enough to show
that k -> k*G is cheap while P -> k is a linear scan over the group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import TooLarge

MAX_ENUMERABLE_P = 10_000


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


@dataclass(frozen=True, order=True)
class Affine:
    x: int
    y: int


ToyPoint = Union[_Infinity, Affine]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class ToyCurve:
    p: int
    a: int
    b: int

    def __post_init__(self):
        if self.p <= 3 or not _is_prime(self.p):
            raise ValueError(f"modulus must be a prime > 3, got {self.p}")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)
        if (4 * self.a ** 3 + 27 * self.b ** 2) % self.p == 0:
            raise ValueError("singular curve: 4a^3 + 27b^2 = 0 (mod p)")

    def __str__(self):
        return f"y^2 = x^3 + {self.a}x + {self.b} over F_{self.p}"

    # -- membership -----------------------------------------------------

    def contains(self, x: int, y: int) -> bool:
        p = self.p
        return (y * y - (x * x * x + self.a * x + self.b)) % p == 0

    def on_curve(self, point: ToyPoint) -> bool:
        return point is INFINITY or self.contains(point.x, point.y)

    def point(self, x: int, y: int) -> Affine:
        if not (0 <= x < self.p and 0 <= y < self.p) or not self.contains(x, y):
            raise ValueError(f"({x}, {y}) is not on {self}")
        return Affine(x, y)

    def enumerate_points(self) -> set:
        """All affine solutions plus INFINITY, by scanning the p x p grid."""
        if self.p > MAX_ENUMERABLE_P:
            raise TooLarge(f"p = {self.p} exceeds the enumeration guard {MAX_ENUMERABLE_P}")
        points = {INFINITY}
        p = self.p
        squares: dict[int, list[int]] = {}
        for y in range(p):
            squares.setdefault(y * y % p, []).append(y)
        for x in range(p):
            rhs = (x * x * x + self.a * x + self.b) % p
            for y in squares.get(rhs, ()):
                points.add(Affine(x, y))
        return points

    def affine_points(self) -> list[Affine]:
        return sorted(pt for pt in self.enumerate_points() if pt is not INFINITY)

    # -- group law ------------------------------------------------------

    def negate(self, point: ToyPoint) -> ToyPoint:
        if point is INFINITY:
            return INFINITY
        return Affine(point.x, (-point.y) % self.p)

    def add(self, P: ToyPoint, Q: ToyPoint) -> ToyPoint:
        if P is INFINITY:
            return Q
        if Q is INFINITY:
            return P
        p = self.p
        if P.x == Q.x:
            if (P.y + Q.y) % p == 0:
                # vertical line, covers doubling a 2-torsion point too
                return INFINITY
            slope = (3 * P.x * P.x + self.a) * pow(2 * P.y, p - 2, p)
        else:
            slope = (Q.y - P.y) * pow(Q.x - P.x, p - 2, p)
        slope %= p
        x = (slope * slope - P.x - Q.x) % p
        return Affine(x, (slope * (P.x - x) - P.y) % p)

    def scalar_mul(self, k: int, G: ToyPoint) -> ToyPoint:
        if k < 0:
            raise ValueError("scalar must be non-negative")
        acc: ToyPoint = INFINITY
        addend = G
        while k:
            if k & 1:
                acc = self.add(acc, addend)
            addend = self.add(addend, addend)
            k >>= 1
        return acc

    def multiples(self, G: ToyPoint) -> Iterator[ToyPoint]:
        """Yield 0*G, 1*G, 2*G, ... indefinitely."""
        acc: ToyPoint = INFINITY
        while True:
            yield acc
            acc = self.add(acc, G)

    def order(self, G: ToyPoint) -> int:
        """Smallest n >= 1 with n*G = INFINITY, by repeated addition."""
        acc = G
        n = 1
        while acc is not INFINITY:
            acc = self.add(acc, G)
            n += 1
        return n

    def ecdlp_brute_force(self, G: ToyPoint, P: ToyPoint, bound: int) -> Optional[int]:
        """Smallest k in [0, bound] with k*G == P, or None."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        for k, kG in enumerate(self.multiples(G)):
            if kG == P:
                return k
            if k >= bound or (k > 0 and kG is INFINITY):
                return None
        return None  # pragma: no cover


EXAMPLE_CURVE = ToyCurve(p=89, a=-1, b=0)


def points_csv(curve: ToyCurve) -> str:
    lines = ["x,y"]
    lines += [f"{pt.x},{pt.y}" for pt in curve.affine_points()]
    return "\n".join(lines) + "\n"
