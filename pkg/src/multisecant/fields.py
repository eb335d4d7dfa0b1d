"""Exact coefficient fields: arbitrary-precision rationals and prime fields.

Field objects are lightweight contexts. Rational values are stdlib
``fractions.Fraction`` (which already enforces gcd-reduced form and a
positive denominator); prime-field values are plain ints in ``[0, p)``.
Keeping elements unboxed makes the polynomial layers fast; all
interpretation lives in the field object.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(Exception):
    """A value is not representable in the requested field."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all word-size inputs."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # this witness set is exact below 3.3 * 10^24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The field of rationals; elements are ``fractions.Fraction``."""

    characteristic = 0
    tag = "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise FieldError(f"cannot coerce {x!r} into QQ")

    def from_quotient(self, num: int, den: int):
        if den == 0:
            raise FieldError("zero denominator")
        return Fraction(num, den)

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
        return 1 / a

    def div(self, a, b):
        return a / self.coerce(b) if b else self.inv(0)

    def is_zero(self, a):
        return a == 0

    def random(self, rng):
        """A small random rational, nonzero-biased for generic probing."""
        return Fraction(rng.randint(-20, 20), rng.randint(1, 12))

    def random_nonzero(self, rng):
        while True:
            a = self.random(rng)
            if a:
                return a

    def to_str(self, a) -> str:
        return str(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """GF(p) for a word-size prime p; elements are ints in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.tag = f"GF {p}"

    def zero(self):
        return 0

    def one(self):
        return 1

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return self.from_quotient(x.numerator, x.denominator)
        raise FieldError(f"cannot coerce {x!r} into GF({self.p})")

    def from_quotient(self, num: int, den: int):
        den %= self.p
        if den == 0:
            raise FieldError(f"denominator divisible by {self.p}")
        return num * pow(den, self.p - 2, self.p) % self.p

    def add(self, a, b):
        c = a + b
        return c - self.p if c >= self.p else c

    def sub(self, a, b):
        c = a - b
        return c + self.p if c < 0 else c

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return self.p - a if a else 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b % self.p) % self.p

    def is_zero(self, a):
        return a == 0

    def random(self, rng):
        return rng.randrange(self.p)

    def random_nonzero(self, rng):
        return rng.randrange(1, self.p)

    def sqrt(self, a):
        """A square root of a mod p, or None if a is a non-residue."""
        p = self.p
        a %= p
        if a == 0:
            return 0
        if p == 2:
            return a
        if pow(a, (p - 1) // 2, p) != 1:
            return None
        if p % 4 == 3:
            return pow(a, (p + 1) // 4, p)
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            t2, i = t * t % p, 1
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return r

    def to_str(self, a) -> str:
        # balanced representatives read better in printed polynomials
        return str(a - self.p) if a > self.p // 2 else str(a)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()

# classical default probing prime
DEFAULT_PRIME = 32003

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    """Cached prime-field constructor."""
    f = _gf_cache.get(p)
    if f is None:
        f = _gf_cache[p] = PrimeField(p)
    return f


def field_from_tag(tag: str):
    """Resolve a field tag: ``QQ`` or ``GF <p>``."""
    tag = tag.strip()
    if tag == "QQ":
        return QQ
    parts = tag.split()
    if len(parts) == 2 and parts[0] == "GF" and parts[1].isdigit():
        return GF(int(parts[1]))
    raise ValueError(f"unknown field tag {tag!r}")
