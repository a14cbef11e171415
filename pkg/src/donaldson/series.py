"""Donaldson series of simple-type manifolds and the two-sector surface calculus.

A series is the finite datum  D_X(e^a) = e^{Q(a)/2} sum_j c_j e^{K_j . a}
of basic classes K_j with rational coefficients.  Against an allowable pair
(w, S) it splits into two sectors by K_j . S mod 4: the P-sector keeps the
e^{+Q/2} prefactor, the N-sector acquires e^{-Q/2}, a global i^{-d0} and
imaginary exponents.  Point-class and surface-class insertions act on the
sectors by the scalars 2 / -2 and by the polynomial weights ((D+K).S)^b and
((-D + iK).S)^b respectively, which is everything the finite-type and
relation-polynomial machinery needs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .exppoly import ExpPolynomial
from .gaussian import GaussianRational
from .lattice import (
    HClass,
    Lattice,
    MarkedSurface,
    LatticeMismatch,
    ParityError,
    d_zero,
    d_zero_value,
    is_allowable,
    is_characteristic,
)


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class DonaldsonSeries:
    """Finite list of (basic class, rational coefficient) on a lattice.

    Entries are kept sorted by class coordinates, classes are pairwise
    distinct, integral, and characteristic on the modeled lattice.
    """

    lattice: Lattice
    b_plus: int
    b_one: int
    entries: tuple[tuple[HClass, Fraction], ...]
    simple_type: bool = True

    def __post_init__(self):
        if self.b_plus != self.lattice.b_plus or self.b_one != self.lattice.b_one:
            raise SeriesError("series Betti data must copy the lattice's")
        entries = tuple(
            sorted(((k, Fraction(c)) for k, c in self.entries), key=lambda e: e[0].coords)
        )
        object.__setattr__(self, "entries", entries)
        seen = set()
        for k, c in entries:
            if k.lattice != self.lattice:
                raise LatticeMismatch("entry class on a foreign lattice")
            if not k.is_integral:
                raise SeriesError(f"basic class {k} is not integral")
            if k.coords in seen:
                raise SeriesError(f"duplicate basic class {k}")
            seen.add(k.coords)
            if not is_characteristic(k):
                raise SeriesError(f"basic class {k} is not characteristic")

    @classmethod
    def on(cls, lattice: Lattice, pairs, simple_type: bool = True) -> "DonaldsonSeries":
        return cls(
            lattice,
            lattice.b_plus,
            lattice.b_one,
            tuple((k, Fraction(c)) for k, c in pairs),
            simple_type,
        )

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def coefficient(self, k: HClass) -> Fraction:
        for kk, c in self.entries:
            if kk.coords == k.coords:
                return c
        return Fraction(0)

    def classes(self) -> tuple[HClass, ...]:
        return tuple(k for k, _ in self.entries)

    def d0(self, w: HClass | None = None) -> int:
        """d0(X, w); w = None means the untwisted value (w^2 = 0)."""
        if w is None:
            return d_zero_value(0, self.b_one, self.b_plus)
        return d_zero(w, self.b_one, self.b_plus)


def twist(series: DonaldsonSeries, w: HClass) -> list[tuple[HClass, Fraction]]:
    """Coefficients for the w-twisted series: c -> (-1)^{(K.w + w^2)/2} c."""
    if w.lattice != series.lattice:
        raise LatticeMismatch("twist class on a foreign lattice")
    if not w.is_integral:
        raise SeriesError("twist class must be integral")
    w_sq = w.square
    out = []
    for k, c in series.entries:
        m = k.dot(w) + w_sq
        if m % 2 != 0:
            raise ParityError(
                f"K.w + w^2 = {m} is odd for {k}; class is not characteristic "
                "against this w"
            )
        sign = -1 if (m // 2) % 2 else 1
        out.append((k, sign * c))
    return out


def twisted(series: DonaldsonSeries, w: HClass) -> DonaldsonSeries:
    return DonaldsonSeries.on(series.lattice, twist(series, w), series.simple_type)


@dataclass(frozen=True)
class SplitSeries:
    """The two-sector form of a series against an allowable pair (w, S).

    P-sector entries (K.S == 2 mod 4) carry the twisted coefficients and the
    e^{+Q/2} marker; N-sector entries (K.S == 0 mod 4) absorb the i^{-d0}
    factor and are evaluated with exponents rotated by i.
    """

    p_entries: tuple[tuple[HClass, GaussianRational], ...]
    n_entries: tuple[tuple[HClass, GaussianRational], ...]
    w: HClass
    surface: MarkedSurface
    d0: int

    def __post_init__(self):
        sigma = self.surface.cls
        for k, _ in self.p_entries:
            if k.dot(sigma) % 4 != 2:
                raise SeriesError(f"{k} does not belong to the P-sector")
        for k, _ in self.n_entries:
            if k.dot(sigma) % 4 != 0:
                raise SeriesError(f"{k} does not belong to the N-sector")


def _check_split_preconditions(series: DonaldsonSeries, w: HClass, s: MarkedSurface):
    if s.lattice != series.lattice:
        raise LatticeMismatch("surface on a foreign lattice")
    if not is_allowable(w, s):
        raise SeriesError("(w, S) is not an allowable pair: need w.S odd, S^2 = 0")
    if not series.simple_type:
        raise SeriesError("two-sector split needs a simple-type series")
    if series.b_one != 0 or series.b_plus <= 1 or series.b_plus % 2 == 0:
        raise SeriesError("two-sector split needs b1 = 0 and b+ > 1 odd")


def split_series(series: DonaldsonSeries, w: HClass, s: MarkedSurface) -> SplitSeries:
    """Split the w-twisted series into its two sectors against (w, S)."""
    _check_split_preconditions(series, w, s)
    d0 = series.d0(w)
    i_pow = GaussianRational.i_power(-d0)
    p_entries, n_entries = [], []
    for k, c in twist(series, w):
        r = k.dot(s.cls) % 4
        if r == 2:
            p_entries.append((k, GaussianRational(c)))
        elif r == 0:
            n_entries.append((k, i_pow * c))
        else:
            # impossible for a characteristic class against an even surface
            raise SeriesError(f"K.S = {k.dot(s.cls)} is odd for {k}")
    return SplitSeries(tuple(p_entries), tuple(n_entries), w, s, d0)


def unsplit_series(ss: SplitSeries) -> DonaldsonSeries:
    """Invert the split; recovers the w-twisted series exactly."""
    i_pow = GaussianRational.i_power(ss.d0)
    pairs = []
    for k, c in ss.p_entries:
        if not c.is_real:
            raise SeriesError(f"malformed P-sector coefficient {c}")
        pairs.append((k, c.rational()))
    for k, c in ss.n_entries:
        restored = c * i_pow
        if not restored.is_real:
            raise SeriesError(f"malformed N-sector coefficient {c}")
        pairs.append((k, restored.rational()))
    lattice = ss.surface.lattice
    return DonaldsonSeries.on(lattice, pairs)


def eval_insertion(
    series: DonaldsonSeries,
    w: HClass,
    s: MarkedSurface,
    d: HClass,
    x_power: int = 0,
    sigma_power: int = 0,
) -> tuple[ExpPolynomial, ExpPolynomial]:
    """Evaluate the split series on S^b x^a e^{tD}, sector by sector.

    Returns (P, N):
      P = e^{+Q/2} sum_{K.S==2(4)} c_{K,w} 2^a ((D+K).S)^b e^{(K.D)t}
      N = e^{-Q/2} sum_{K.S==0(4)} i^{-d0} c_{K,w} (-2)^a ((-D+iK).S)^b e^{i(K.D)t}
    """
    if x_power < 0 or sigma_power < 0:
        raise SeriesError("insertion powers must be >= 0")
    if d.lattice != series.lattice:
        raise LatticeMismatch("evaluation class on a foreign lattice")
    _check_split_preconditions(series, w, s)
    ss = split_series(series, w, s)
    sigma = s.cls
    d_sigma = d.dot(sigma)
    q = d.square
    x_p = Fraction(2) ** x_power
    x_n = Fraction(-2) ** x_power
    p_terms = []
    for k, c in ss.p_entries:
        weight = (d_sigma + k.dot(sigma)) ** sigma_power
        p_terms.append((GaussianRational(k.dot(d)), c * (x_p * weight)))
    n_terms = []
    for k, c in ss.n_entries:
        weight = GaussianRational(-d_sigma, k.dot(sigma)) ** sigma_power
        n_terms.append((GaussianRational(0, k.dot(d)), c * x_n * weight))
    return (
        ExpPolynomial("+Q/2", tuple(p_terms), q),
        ExpPolynomial("-Q/2", tuple(n_terms), q),
    )


# -- relation polynomials -----------------------------------------------------------


@dataclass(frozen=True)
class RelationPoly:
    """An element of the polynomial algebra in the surface class S and x.

    Stored as (S-power, x-power, coefficient) triples.
    """

    terms: tuple[tuple[int, int, Fraction], ...]

    def __post_init__(self):
        merged: dict[tuple[int, int], Fraction] = {}
        for sp, xp, c in self.terms:
            merged[(sp, xp)] = merged.get((sp, xp), Fraction(0)) + Fraction(c)
        canon = tuple(
            (sp, xp, c) for (sp, xp), c in sorted(merged.items()) if c != 0
        )
        object.__setattr__(self, "terms", canon)

    @classmethod
    def of(cls, pairs) -> "RelationPoly":
        return cls(tuple(pairs))

    @property
    def sigma_degree(self) -> int:
        return max((sp for sp, _, _ in self.terms), default=0)

    def __mul__(self, other: "RelationPoly") -> "RelationPoly":
        return RelationPoly(
            tuple(
                (s1 + s2, x1 + x2, c1 * c2)
                for s1, x1, c1 in self.terms
                for s2, x2, c2 in other.terms
            )
        )

    def __add__(self, other: "RelationPoly") -> "RelationPoly":
        return RelationPoly(self.terms + other.terms)


def relation_poly(g: int) -> RelationPoly:
    """The degree-(g-1) relation annihilated by every genus-g split series.

    Shape (1 -+ x/2) p(S): for g even the x-factor is (1 - x/2) and p has
    roots -1, -1 +- 4i, ..., -1 +- (2g-4)i; for g odd it is (1 + x/2) and p
    has the real roots (-1)^k (2k-1) for k = 1..g-1, i.e. -1, 3, -5, ...
    """
    if g < 2:
        raise SeriesError("relation polynomial needs genus >= 2")
    one = RelationPoly.of([(0, 0, Fraction(1))])
    sigma = RelationPoly.of([(1, 0, Fraction(1))])
    if g % 2 == 0:
        x_part = RelationPoly.of([(0, 0, Fraction(1)), (0, 1, Fraction(-1, 2))])
        p = sigma + one
        shifted_sq = (sigma + one) * (sigma + one)
        for k in range(1, (g - 2) // 2 + 1):
            p = p * (shifted_sq + RelationPoly.of([(0, 0, Fraction((4 * k) ** 2))]))
    else:
        x_part = RelationPoly.of([(0, 0, Fraction(1)), (0, 1, Fraction(1, 2))])
        p = one
        for k in range(1, g):
            root = (-1) ** k * (2 * k - 1)
            p = p * (sigma + RelationPoly.of([(0, 0, Fraction(-root))]))
    z = x_part * p
    if z.sigma_degree != g - 1:
        raise SeriesError("relation polynomial has wrong surface degree")
    return z


def apply_relation(
    series: DonaldsonSeries,
    w: HClass,
    s: MarkedSurface,
    z: RelationPoly,
    d: HClass,
) -> tuple[ExpPolynomial, ExpPolynomial]:
    """Evaluate the split series on z e^{tD} as a combination of insertions."""
    if d.dot(s.cls) != 1:
        warnings.warn(
            "relation evaluated at D with D.S != 1; the vanishing guarantee "
            "is withdrawn",
            stacklevel=2,
        )
    q = d.square
    p_total = ExpPolynomial("+Q/2", (), q)
    n_total = ExpPolynomial("-Q/2", (), q)
    for sp, xp, c in z.terms:
        p_part, n_part = eval_insertion(series, w, s, d, x_power=xp, sigma_power=sp)
        p_total = p_total + p_part.scale(c)
        n_total = n_total + n_part.scale(c)
    return p_total, n_total


# -- finite type, adjunction, involution ---------------------------------------------


def default_probes(lattice: Lattice, s: MarkedSurface) -> list[HClass]:
    """All named classes D with D.S = 1, plus their S-shifts."""
    probes = [
        lattice.cls(label)
        for label in lattice.labels()
        if lattice.cls(label).dot(s.cls) == 1
    ]
    return probes + [d + s.cls for d in probes]


def finite_type_order(
    series: DonaldsonSeries,
    w: HClass,
    s: MarkedSurface,
    probes=None,
) -> int:
    """Smallest n >= 0 such that the (x^2-4)^n insertion kills all probes.

    The point class acts by 2 on the P-sector and -2 on the N-sector, so
    (x^2-4) annihilates sector-wise and every nonzero series has order 1.
    """
    if series.is_zero:
        return 0
    if probes is None:
        probes = default_probes(series.lattice, s)
    if not probes:
        raise SeriesError("no probe classes with D.S = 1 are available")
    some_nonzero = False
    for d in probes:
        p0, n0 = eval_insertion(series, w, s, d)
        if not (p0.is_zero and n0.is_zero):
            some_nonzero = True
        p2, n2 = eval_insertion(series, w, s, d, x_power=2)
        if not (p2 - p0.scale(4)).is_zero or not (n2 - n0.scale(4)).is_zero:
            raise SeriesError("(x^2 - 4) insertion failed to annihilate")
    return 1 if some_nonzero else 0


def check_adjunction(
    series: DonaldsonSeries, s: MarkedSurface
) -> tuple[bool, list[tuple[HClass, Fraction]]]:
    """2g - 2 >= S^2 + |K.S| for every entry; returns all violators."""
    bound = 2 * s.genus - 2 - s.cls.square
    violators = [(k, c) for k, c in series.entries if abs(k.dot(s.cls)) > bound]
    return (not violators, violators)


def check_involution(series: DonaldsonSeries) -> tuple[bool, list[HClass]]:
    """The map K -> -K carries coefficients by the sign (-1)^{d0(X, w=0)}."""
    d0 = series.d0()
    sign = -1 if d0 % 2 else 1
    table = {k.coords: c for k, c in series.entries}
    bad = []
    for k, c in series.entries:
        mirror = table.get((-k).coords)
        if mirror is None or mirror != sign * c:
            bad.append(k)
    return (not bad, bad)


# -- JSON descriptor -----------------------------------------------------------------


def series_to_json(series: DonaldsonSeries) -> dict:
    from .gaussian import frac_token
    from .lattice import _coord_out

    return {
        "lattice": series.lattice.name,
        "entries": [
            {"k": [_coord_out(c) for c in k.coords], "a": frac_token(c)}
            for k, c in series.entries
        ],
        "simple_type": series.simple_type,
    }


def series_from_json(data: dict, lattice: Lattice) -> DonaldsonSeries:
    if data["lattice"] != lattice.name:
        raise SeriesError(
            f"series references lattice {data['lattice']!r}, got {lattice.name!r}"
        )
    pairs = [
        (HClass(lattice, tuple(Fraction(x) for x in e["k"])), Fraction(e["a"]))
        for e in data["entries"]
    ]
    return DonaldsonSeries.on(lattice, pairs, data.get("simple_type", True))
