"""Coefficient rings: the integers, the rationals and Z/p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class CoeffRing:
    kind: str  # "Z", "Q" or "Zp"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zp"):
            raise InputError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "Zp":
            if self.p is None or not is_prime(self.p):
                raise InputError(f"Z/p coefficients need a prime p, got {self.p!r}")
        elif self.p is not None:
            raise InputError(f"ring {self.kind} takes no modulus")

    @classmethod
    def integers(cls) -> CoeffRing:
        return cls("Z")

    @classmethod
    def rationals(cls) -> CoeffRing:
        return cls("Q")

    @classmethod
    def mod(cls, p: int) -> CoeffRing:
        return cls("Zp", p)

    @classmethod
    def parse(cls, text: str) -> CoeffRing:
        """Parse the shell-safe syntax ``z``, ``q`` or ``z:p``."""
        t = text.strip().lower()
        if t == "z":
            return ZZ
        if t == "q":
            return QQ
        if t.startswith("z:"):
            try:
                p = int(t[2:])
            except ValueError:
                raise InputError(f"bad modulus in coefficient spec {text!r}") from None
            return cls.mod(p)
        raise InputError(f"coefficient spec must be z, q or z:p, got {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def coerce(self, x):
        """Bring an integer or rational into canonical form for this ring."""
        if self.kind == "Zp":
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return x % self.p
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return x

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x in (1, -1)
        return self.coerce(x) != 0

    def __str__(self) -> str:
        if self.kind == "Zp":
            return f"Z/{self.p}"
        return self.kind

    @property
    def tag(self) -> str:
        """Shell syntax, inverse of :meth:`parse`."""
        return {"Z": "z", "Q": "q"}.get(self.kind) or f"z:{self.p}"


ZZ = CoeffRing("Z")
QQ = CoeffRing("Q")
