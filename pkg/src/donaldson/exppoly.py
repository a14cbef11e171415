"""Finite exponential sums  sum_k c_k e^{lam_k t}  with exact scalars.

Every evaluation in this package lands here: coefficients and exponents are
Gaussian rationals, and a symbolic marker records an undeveloped Gaussian
prefactor e^{+Q(tD)/2} or e^{-Q(tD)/2}.  The markers are never expanded when
identities are compared (all identities in the theory compare like-marked
parts); a truncated power-series expansion exists for display only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gaussian import GaussianRational

MARKERS = ("+Q/2", "-Q/2", "none")

_DIVISION_STEP_CAP = 10_000


class ExpPolynomialError(ValueError):
    pass


class InexactDivision(ExpPolynomialError):
    """Division in the exponential-polynomial ring left a remainder."""


def _g(x) -> GaussianRational:
    return GaussianRational.coerce(x)


@dataclass(frozen=True)
class ExpPolynomial:
    """Canonical form: terms sorted by exponent, like exponents merged, zeros pruned.

    ``q_square`` carries D.D for a marked prefactor when it is known; it rides
    along through sums and products and is only consumed by ``expand``.
    """

    marker: str = "none"
    terms: tuple[tuple[GaussianRational, GaussianRational], ...] = ()
    q_square: Fraction | None = None

    def __post_init__(self):
        if self.marker not in MARKERS:
            raise ExpPolynomialError(f"unknown marker {self.marker!r}")
        merged: dict[tuple, list] = {}
        for lam, c in self.terms:
            lam = _g(lam)
            c = _g(c)
            key = lam.sort_key()
            if key in merged:
                merged[key][1] = merged[key][1] + c
            else:
                merged[key] = [lam, c]
        canon = tuple(
            (lam, c)
            for _, (lam, c) in sorted(merged.items())
            if not c.is_zero
        )
        object.__setattr__(self, "terms", canon)
        if self.q_square is not None:
            object.__setattr__(self, "q_square", Fraction(self.q_square))

    # -- queries -----------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, lam) -> GaussianRational:
        lam = _g(lam)
        for l, c in self.terms:
            if l == lam:
                return c
        return GaussianRational(0)

    def exponents(self) -> tuple[GaussianRational, ...]:
        return tuple(l for l, _ in self.terms)

    # -- ring operations ------------------------------------------------------------

    def _join_marker(self, other: "ExpPolynomial") -> tuple[str, Fraction | None]:
        if self.marker == other.marker:
            if self.q_square is not None and other.q_square is not None:
                if self.q_square != other.q_square:
                    raise ExpPolynomialError(
                        "cannot combine like-marked parts over different D^2"
                    )
            q = self.q_square if self.q_square is not None else other.q_square
            return self.marker, q
        raise ExpPolynomialError(
            f"cannot combine parts marked {self.marker!r} and {other.marker!r}"
        )

    def __add__(self, other: "ExpPolynomial") -> "ExpPolynomial":
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        if self.is_zero and self.q_square is None and self.marker == other.marker:
            return other
        if other.is_zero and other.q_square is None and other.marker == self.marker:
            return self
        marker, q = self._join_marker(other)
        return ExpPolynomial(marker, self.terms + other.terms, q)

    def __sub__(self, other: "ExpPolynomial") -> "ExpPolynomial":
        return self + (-other)

    def __neg__(self) -> "ExpPolynomial":
        return self.scale(-1)

    def scale(self, scalar) -> "ExpPolynomial":
        s = _g(scalar)
        return ExpPolynomial(
            self.marker, tuple((l, c * s) for l, c in self.terms), self.q_square
        )

    def __mul__(self, other: "ExpPolynomial") -> "ExpPolynomial":
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        marker, q = _mul_marker(self, other)
        terms = [
            (l1 + l2, c1 * c2)
            for l1, c1 in self.terms
            for l2, c2 in other.terms
        ]
        return ExpPolynomial(marker, tuple(terms), q)

    def scale_exponents(self, factor) -> "ExpPolynomial":
        """Substitute t -> factor * t in the exponentials.

        A marked prefactor scales by factor^2 and therefore requires a real
        factor; unmarked polynomials accept any Gaussian rational factor.
        """
        f = _g(factor)
        q = self.q_square
        if self.marker != "none":
            if not f.is_real:
                raise ExpPolynomialError("marked polynomial needs a real scaling factor")
            if q is not None:
                q = q * f.re * f.re
        return ExpPolynomial(
            self.marker, tuple((l * f, c) for l, c in self.terms), q
        )

    def divide_exact(self, divisor: "ExpPolynomial") -> "ExpPolynomial":
        """Exact division; raises InexactDivision if no finite quotient exists.

        Works by leading-exponent elimination under the lexicographic order on
        (real, imaginary) parts of the exponents; since that order respects
        addition, an exact quotient has all its exponents between
        min(self)-min(divisor) and max(self)-max(divisor), which bounds the run.
        """
        if not isinstance(divisor, ExpPolynomial):
            raise TypeError("divisor must be an ExpPolynomial")
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero exponential polynomial")
        if self.marker != "none" or divisor.marker != "none":
            raise ExpPolynomialError("exact division is defined for unmarked parts")
        if self.is_zero:
            return ExpPolynomial()
        lead_l, lead_c = divisor.terms[-1]
        low_bound = (self.terms[0][0] - divisor.terms[0][0]).sort_key()
        rem = {l.sort_key(): (l, c) for l, c in self.terms}
        out = []
        for _ in range(_DIVISION_STEP_CAP):
            if not rem:
                return ExpPolynomial("none", tuple(out))
            r_l, r_c = rem[max(rem)]
            q_l = r_l - lead_l
            if q_l.sort_key() < low_bound:
                raise InexactDivision("no exact quotient in the exponential ring")
            q_c = r_c / lead_c
            out.append((q_l, q_c))
            for l, c in divisor.terms:
                key = (l + q_l).sort_key()
                cur = rem.get(key)
                new = (cur[1] if cur else GaussianRational(0)) - c * q_c
                if new.is_zero:
                    rem.pop(key, None)
                else:
                    rem[key] = (l + q_l, new)
        raise InexactDivision("division did not terminate")

    # -- display expansion ---------------------------------------------------------

    def expand(self, order: int) -> tuple[GaussianRational, ...]:
        """Taylor coefficients in t up to the given order, marker included.

        The marked prefactor contributes e^{s q t^2 / 2} with s = +-1; this is
        the only place the marker is ever developed, and it needs q_square.
        """
        if order < 0:
            raise ExpPolynomialError("expansion order must be >= 0")
        body = [GaussianRational(0)] * (order + 1)
        for lam, c in self.terms:
            power = GaussianRational(1)
            fact = 1
            for n in range(order + 1):
                body[n] = body[n] + c * power * Fraction(1, fact)
                power = power * lam
                fact *= n + 1
        if self.marker == "none":
            return tuple(body)
        if self.q_square is None:
            raise ExpPolynomialError("cannot expand a marked polynomial without D^2")
        s = 1 if self.marker == "+Q/2" else -1
        half_q = Fraction(s) * self.q_square / 2
        pref = [GaussianRational(0)] * (order + 1)
        power = GaussianRational(1)
        fact = 1
        for m in range(order // 2 + 1):
            pref[2 * m] = power * Fraction(1, fact)
            power = power * half_q
            fact *= m + 1
        return tuple(
            sum(
                (pref[k] * body[n - k] for k in range(n + 1)),
                GaussianRational(0),
            )
            for n in range(order + 1)
        )

    # -- serialization --------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "marker": self.marker,
            "terms": [
                {"lambda": l.to_token(), "c": c.to_token()} for l, c in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExpPolynomial":
        terms = tuple(
            (GaussianRational.from_token(t["lambda"]), GaussianRational.from_token(t["c"]))
            for t in data["terms"]
        )
        return cls(data["marker"], terms)

    def __str__(self):
        if self.is_zero:
            body = "0"
        else:
            body = " + ".join(f"({c})e^({l})t" for l, c in self.terms)
        if self.marker == "none":
            return body
        return f"e^{{{self.marker[0]}Q(tD)/2}} * [{body}]"


def _mul_marker(a: ExpPolynomial, b: ExpPolynomial) -> tuple[str, Fraction | None]:
    if a.marker == "none":
        return b.marker, b.q_square
    if b.marker == "none":
        return a.marker, a.q_square
    if a.marker != b.marker:
        raise ExpPolynomialError("cannot multiply oppositely marked parts")
    if a.q_square is None or b.q_square is None:
        return a.marker, None
    # e^{sQ1/2} e^{sQ2/2} = e^{sQ/2} with D^2 = D1^2 + D2^2
    return a.marker, a.q_square + b.q_square


def zero_poly(marker: str = "none", q_square=None) -> ExpPolynomial:
    return ExpPolynomial(marker, (), q_square)
