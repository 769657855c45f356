"""The three coefficient rings: the integers, the rationals and prime fields."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class RingError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    kind: str  # "Z", "Q" or "F"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "F" and not _is_prime(self.p):
            raise RingError(f"F_{self.p}: {self.p} is not prime")

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.kind == "F" else self.kind

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Ring({self.name})"

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def __call__(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingError(f"{x} is not an integer")
                return int(x.numerator)
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def reduce(self, x):
        return x % self.p if self.kind == "F" else x

    def size(self, a) -> int:
        """Euclidean size; fields treat every nonzero element alike."""
        if self.kind == "Z":
            return abs(a)
        return 0 if a == 0 else 1

    def quo(self, a, b):
        """Quotient q with a - q*b of smaller size than b."""
        if self.kind == "Z":
            # round towards zero so remainders keep the sign of a
            q = abs(a) // abs(b)
            return q if (a >= 0) == (b >= 0) else -q
        return self.div(a, b)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in " + self.name)
        if self.kind == "Z":
            q, r = divmod(a, b)
            if r:
                raise RingError(f"{b} does not divide {a}")
            return q
        if self.kind == "Q":
            return Fraction(a) / b
        return (a * pow(b, -1, self.p)) % self.p

    def inv(self, a):
        return self.div(self.one, a)

    def is_unit(self, a) -> bool:
        if self.kind == "Z":
            return a in (1, -1)
        return a != 0

    def divides(self, a, b) -> bool:
        """Whether a divides b."""
        if a == 0:
            return b == 0
        if self.kind == "Z":
            return b % a == 0
        return True

    def canonical_unit(self, a):
        """A unit u such that u*a is the preferred associate of a."""
        if self.kind == "Z":
            return -1 if a < 0 else 1
        return self.inv(a) if a != 0 else self.one


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("F", p)


_FP = re.compile(r"^(?:F|GF|Fp|F_)\(?(\d+)\)?$", re.IGNORECASE)


def parse_ring(text) -> Ring:
    """Accept 'Z', 'Q', 'F2', 'F_3', 'Fp(5)', 'GF(7)' (and Ring instances)."""
    if isinstance(text, Ring):
        return text
    t = str(text).strip()
    if t.upper() in ("Z", "ZZ", "INTEGERS"):
        return ZZ
    if t.upper() in ("Q", "QQ", "RATIONALS"):
        return QQ
    m = _FP.match(t)
    if m:
        return GF(int(m.group(1)))
    raise RingError(f"cannot parse ring {text!r}; use Z, Q or Fp(p)")
