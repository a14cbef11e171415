"""Exact arithmetic in the Gaussian rationals Q(i).

Scalars of the form a + b*i with a, b rational are the value type of
every evaluation in this package: sector splitting introduces powers
of i and purely imaginary exponents, and all identities are checked
by exact equality.
"""

from __future__ import annotations

from fractions import Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class GaussianRational:
    """An immutable complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def i_power(cls, k: int) -> "GaussianRational":
        """i**k for any integer k (k may be negative)."""
        return ((cls(1), cls(0, 1), cls(-1), cls(0, -1))[k % 4])

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return cls(_as_fraction(x))

    # -- predicates ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def rational(self) -> Fraction:
        """The value as a Fraction; raises if it has a nonzero imaginary part."""
        if self.im != 0:
            raise ValueError(f"{self} is not real")
        return self.re

    # -- arithmetic --------------------------------------------------------------

    def _other(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        return None

    def __add__(self, x):
        o = self._other(x)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, x):
        o = self._other(x)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, x):
        o = self._other(x)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, x):
        o = self._other(x)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, x):
        o = self._other(x)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, x):
        o = self._other(x)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (GaussianRational(1) / self) ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison / hashing ------------------------------------------------------

    def __eq__(self, x):
        o = self._other(x)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        """Total order on Q(i), lexicographic on (real, imaginary)."""
        return (self.re, self.im)

    # -- formatting -----------------------------------------------------------------

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return self.to_token()

    def to_token(self) -> str:
        """Serialize as 'p/q', 'r/s i' or 'p/q+r/s i' with exact parts."""
        if self.im == 0:
            return frac_token(self.re)
        if self.re == 0:
            return frac_token(self.im) + " i"
        sign = "+" if self.im > 0 else "-"
        return f"{frac_token(self.re)}{sign}{frac_token(abs(self.im))} i"

    @classmethod
    def from_token(cls, s: str) -> "GaussianRational":
        t = s.replace(" ", "")
        if not t:
            raise ValueError("empty Gaussian rational token")
        if not t.endswith("i"):
            return cls(Fraction(t))
        body = t[:-1]
        # split real and imaginary on the last sign that is not a leading sign
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "+-/":
                re_part, im_part = body[:pos], body[pos:]
                if im_part in ("+", "-"):
                    im_part += "1"
                return cls(Fraction(re_part), Fraction(im_part))
        if body in ("", "+", "-"):
            body += "1"
        return cls(0, Fraction(body))


def frac_token(f: Fraction) -> str:
    """Exact token for a rational: 'p' or 'p/q'."""
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
