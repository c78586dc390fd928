"""Exact coefficient fields: the rationals and prime fields F_p.

Scalars are plain Python objects (`fractions.Fraction` for Q, ints in
[0, p) for F_p) so that equality, hashing and serialization stay trivial.
A `Field` object bundles the arithmetic and the canonical string form used
by the interchange format.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    """Invalid field description or scalar."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Base interface; use the `QQ` singleton or `GF(p)`."""

    spec: str

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def of(self, n: int):
        """Canonical scalar for the integer n."""
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def parse(self, s: str):
        raise NotImplementedError

    def fmt(self, a) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"Field({self.spec})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)


class RationalField(Field):
    spec = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def of(self, n: int):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def parse(self, s: str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational scalar {s!r}") from exc

    def fmt(self, a) -> str:
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        self.p = p
        self.spec = f"Fp:{p}"

    def zero(self):
        return 0

    def one(self):
        return 1

    def of(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def parse(self, s: str):
        try:
            return int(s) % self.p
        except ValueError as exc:
            raise FieldError(f"bad F_{self.p} scalar {s!r}") from exc

    def fmt(self, a) -> str:
        return str(a % self.p)


QQ = RationalField()

_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = PrimeField(p)
    return _GF_CACHE[p]


def field_from_spec(spec: str) -> Field:
    """Parse a field descriptor: "Q" or "Fp:<prime>"."""
    if spec == "Q":
        return QQ
    if spec.startswith("Fp:"):
        try:
            p = int(spec[3:])
        except ValueError as exc:
            raise FieldError(f"bad field spec {spec!r}") from exc
        return GF(p)
    raise FieldError(f"bad field spec {spec!r}")
