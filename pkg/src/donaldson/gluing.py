"""Gluing of Donaldson series along a common surface.

For two simple-type manifolds carrying compatible genus-g square-zero odd
surfaces, the series of the connected sum along the surface (on the subspace
of classes restricting to multiples of the circle on the neck) is assembled
pairwise from the inputs: only pairs of basic classes with K.S = L.S = 2g-2
or = -(2g-2) contribute, with universal coefficients

    +sector:  -2^{7g-9} a_j b_k        -sector:  (-1)^g 2^{7g-9} a_j b_k

on the twisted coefficients, times epsilon = (-1)^{(g-1)(w^2-w1^2-w2^2)/2}
when the glued w is not normalized mod 4.  Glued basic classes are never
materialized as lattice vectors: an output entry is a parent pair plus a
sector sign, and evaluation against a split class (D1, D2) uses the exponent
K.D1 + L.D2 +- 2 (S.D) t.

The genus-1 variant produces three sectors per pair with coefficients
-1/4, -1/4, -1/2, and the experimental stabilized variant applies the same
pairing shape with coefficients -+2^{-3g+5} and no surface shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .constructions import CatalogEntry
from .exppoly import ExpPolynomial
from .gaussian import GaussianRational, frac_token
from .lattice import HClass, LatticeMismatch, ParityError, d_zero_value, is_allowable
from .series import twist


class GluingError(ValueError):
    pass


@dataclass(frozen=True)
class GluingSpec:
    """The two sides of a gluing: entries, chosen surfaces and w-classes.

    ``w_square`` is the self-intersection of the glued w; it enters only
    through w^2 - w1^2 - w2^2, which must be even and contributes the
    epsilon sign when it is 2 mod 4.  Default: the normalized value
    w1^2 + w2^2.
    """

    left: CatalogEntry
    right: CatalogEntry
    left_surface: str | None = None
    right_surface: str | None = None
    left_w: str | None = None
    right_w: str | None = None
    w_square: int | None = None

    def __post_init__(self):
        s1, s2 = self.surface1, self.surface2
        if s1.genus != s2.genus:
            raise GluingError(
                f"genus mismatch: {s1.genus} on {self.left.name}, "
                f"{s2.genus} on {self.right.name}"
            )
        for entry, s, w in (
            (self.left, s1, self.w1),
            (self.right, s2, self.w2),
        ):
            if not entry.series.simple_type:
                raise GluingError(f"{entry.name}: gluing needs simple-type input")
            if entry.series.b_one != 0 or entry.series.b_plus <= 1:
                raise GluingError(f"{entry.name}: gluing needs b1 = 0 and b+ > 1")
            if not is_allowable(w, s):
                raise GluingError(f"{entry.name}: (w, S) is not allowable")
        if (self.glued_w_square - self.w1.square - self.w2.square) % 2 != 0:
            raise GluingError("w^2 - w1^2 - w2^2 must be even")

    @property
    def surface1(self):
        return self.left.surface(self.left_surface)

    @property
    def surface2(self):
        return self.right.surface(self.right_surface)

    @property
    def w1(self) -> HClass:
        return self.left.w_class(self.left_w)

    @property
    def w2(self) -> HClass:
        return self.right.w_class(self.right_w)

    @property
    def genus(self) -> int:
        return self.surface1.genus

    @property
    def glued_w_square(self) -> Fraction:
        if self.w_square is not None:
            return Fraction(self.w_square)
        return self.w1.square + self.w2.square

    @property
    def epsilon(self) -> int:
        delta = self.glued_w_square - self.w1.square - self.w2.square
        return -1 if ((self.genus - 1) * (int(delta) // 2)) % 2 else 1

    @property
    def glued_b_plus(self) -> int:
        return self.left.series.b_plus + self.right.series.b_plus + 2 * self.genus - 1

    def glued_d_zero(self) -> int:
        return d_zero_value(self.glued_w_square, 0, self.glued_b_plus)

    def twisted_left(self) -> list[tuple[HClass, Fraction]]:
        cached = self.__dict__.get("_twisted_left")
        if cached is None:
            cached = twist(self.left.series, self.w1)
            object.__setattr__(self, "_twisted_left", cached)
        return cached

    def twisted_right(self) -> list[tuple[HClass, Fraction]]:
        cached = self.__dict__.get("_twisted_right")
        if cached is None:
            cached = twist(self.right.series, self.w2)
            object.__setattr__(self, "_twisted_right", cached)
        return cached

    def split_class(self, d1: HClass, d2: HClass) -> "SplitClass":
        return SplitClass(d1, d2, d1.dot(self.surface1.cls))

    def swapped(self) -> "GluingSpec":
        return GluingSpec(
            self.right,
            self.left,
            self.right_surface,
            self.left_surface,
            self.right_w,
            self.left_w,
            self.w_square,
        )


@dataclass(frozen=True)
class SplitClass:
    """A class D on the glued manifold, given by its two agreeing halves.

    Both halves pair with their surface as S.D; D^2 is D1^2 + D2^2 by the
    choice of agreeing caps.  Rational coordinates are allowed.
    """

    d1: HClass
    d2: HClass
    sigma_pairing: Fraction

    def __post_init__(self):
        object.__setattr__(self, "sigma_pairing", Fraction(self.sigma_pairing))

    @property
    def square(self) -> Fraction:
        return self.d1.square + self.d2.square


def _validate_split_class(spec: GluingSpec, d: SplitClass) -> None:
    if d.d1.lattice != spec.left.lattice or d.d2.lattice != spec.right.lattice:
        raise LatticeMismatch("split class halves on the wrong lattices")
    if d.d1.dot(spec.surface1.cls) != d.sigma_pairing:
        raise GluingError(
            f"D1.S = {d.d1.dot(spec.surface1.cls)} disagrees with the declared "
            f"S.D = {d.sigma_pairing}"
        )
    if d.d2.dot(spec.surface2.cls) != d.sigma_pairing:
        raise GluingError(
            f"D2.S = {d.d2.dot(spec.surface2.cls)} disagrees with the declared "
            f"S.D = {d.sigma_pairing}"
        )


@dataclass(frozen=True)
class GluedSeries:
    """Output of a gluing: (left index, right index, sector, coefficient).

    Sectors are +1 / -1 (exponent shift +-2 S.D) and 0 for the torus rule's
    unshifted sector.  ``simple_type`` records the standing hypothesis on
    the glued manifold; it is an input assumption, never inferred.
    """

    spec: GluingSpec
    kind: str  # "standard" | "torus" | "stabilized"
    entries: tuple[tuple[int, int, int, Fraction], ...]
    simple_type: bool = True

    def __post_init__(self):
        if self.kind not in ("standard", "torus", "stabilized"):
            raise GluingError(f"unknown gluing kind {self.kind!r}")
        entries = tuple(
            sorted(self.entries, key=lambda e: (-e[2], e[0], e[1]))
        )
        object.__setattr__(self, "entries", entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def left_class(self, j: int) -> HClass:
        return self.spec.left.series.entries[j][0]

    def right_class(self, k: int) -> HClass:
        return self.spec.right.series.entries[k][0]


def _top_level_pairs(spec: GluingSpec, plus: Fraction, minus: Fraction):
    """Entries (j, k, sector, c) over pairs at the extreme levels +-(2g-2)."""
    top = 2 * spec.genus - 2
    s1, s2 = spec.surface1.cls, spec.surface2.cls
    entries = []
    for j, (k_cls, a) in enumerate(spec.twisted_left()):
        lvl = k_cls.dot(s1)
        if lvl != top and lvl != -top:
            continue
        for k, (l_cls, b) in enumerate(spec.twisted_right()):
            if l_cls.dot(s2) != lvl:
                continue
            if lvl == top:
                entries.append((j, k, +1, plus * a * b))
            else:
                entries.append((j, k, -1, minus * a * b))
    return tuple(entries)


def glue(spec: GluingSpec) -> GluedSeries:
    """Pairwise gluing for genus >= 2; only the +-(2g-2) levels survive."""
    g = spec.genus
    if g == 1:
        raise GluingError("genus-1 gluing uses the torus rule: call glue_torus")
    eps = spec.epsilon
    scale = Fraction(2 ** (7 * g - 9))
    entries = _top_level_pairs(spec, -eps * scale, eps * Fraction((-1) ** g) * scale)
    return GluedSeries(spec, "standard", entries)


def glue_torus(spec: GluingSpec) -> GluedSeries:
    """Genus-1 gluing: every pair contributes three sectors.

    Coefficients -1/4, -1/4, -1/2 on the +, -, 0 sectors; requires all
    basic classes to pair to zero with the tori.
    """
    if spec.genus != 1:
        raise GluingError("torus rule needs genus-1 surfaces")
    eps = spec.epsilon
    s1, s2 = spec.surface1.cls, spec.surface2.cls
    for side, s in ((spec.twisted_left(), s1), (spec.twisted_right(), s2)):
        for k_cls, _ in side:
            if k_cls.dot(s) != 0:
                raise GluingError(
                    f"torus rule needs K.S = 0 for all classes, got {k_cls.dot(s)}"
                )
    quarter = Fraction(-1, 4) * eps
    half = Fraction(-1, 2) * eps
    entries = []
    for j, (_, a) in enumerate(spec.twisted_left()):
        for k, (_, b) in enumerate(spec.twisted_right()):
            entries.append((j, k, +1, quarter * a * b))
            entries.append((j, k, -1, quarter * a * b))
            entries.append((j, k, 0, half * a * b))
    return GluedSeries(spec, "torus", tuple(entries))


def glue_conjectural(spec: GluingSpec) -> GluedSeries:
    """EXPERIMENTAL: pairing rule for stabilized inputs.

    Takes series of manifolds already summed with the genus-g reference
    B(g) along the surface, filters by K.S = +-(2g-2), and applies the
    conjectural coefficients -+2^{-3g+5} with no surface shift in the
    evaluation exponents.  The validity of this rule is a conjecture; the
    output is flagged and must not be mixed with proven identities.
    """
    g = spec.genus
    if g < 2:
        raise GluingError("stabilized gluing needs genus >= 2")
    eps = spec.epsilon
    scale = Fraction(1, 2 ** (3 * g - 5))
    entries = _top_level_pairs(spec, -eps * scale, eps * Fraction((-1) ** g) * scale)
    return GluedSeries(spec, "stabilized", entries)


def eval_glued(gs: GluedSeries, d: SplitClass) -> ExpPolynomial:
    """Evaluate a glued series on e^{tD} for a split class D.

    One term per entry, exponent K.D1 + L.D2 plus the sector shift
    +-2 S.D (no shift for the torus 0-sector and for stabilized output).
    """
    _validate_split_class(gs.spec, d)
    lefts = gs.spec.twisted_left()
    rights = gs.spec.twisted_right()
    shift_scale = Fraction(0) if gs.kind == "stabilized" else 2 * d.sigma_pairing
    terms = []
    for j, k, sector, coeff in gs.entries:
        lam = lefts[j][0].dot(d.d1) + rights[k][0].dot(d.d2) + sector * shift_scale
        terms.append((GaussianRational(lam), GaussianRational(coeff)))
    return ExpPolynomial("+Q/2", tuple(terms), d.square)


def rshift(spec: GluingSpec, d: SplitClass, r) -> SplitClass:
    """Move the split by (D1 + rS, D2 - rS); evaluation is invariant."""
    r = Fraction(r)
    return SplitClass(
        d.d1 + r * spec.surface1.cls,
        d.d2 - r * spec.surface2.cls,
        d.sigma_pairing,
    )


def coefficient_match(
    gs: GluedSeries, k_restrict: HClass, l_restrict: HClass
) -> tuple[Fraction, Fraction]:
    """Grouped glued coefficient against its product form, per restriction pair.

    For a pair (K, L) of parent classes attaining K.S = L.S = +-(2g-2), the
    untwisted sum of glued coefficients over parents restricting to (K, L)
    must equal -eps (+-1)^{g-1} 2^{7g-9} (sum of a_j over K_j = K) (sum of
    b_k over L_k = L); everything else gives (0, 0).  Both values are
    returned so callers can assert the equality independently.
    """
    if gs.kind != "standard":
        raise GluingError("coefficient matching is defined for standard gluings")
    spec = gs.spec
    g = spec.genus
    left_table, right_table = _restriction_tables(gs)
    k_info = left_table.get(_ikey(k_restrict))
    l_info = right_table.get(_ikey(l_restrict))
    if k_info is None or l_info is None:
        # no parent classes restrict there: both sums are empty
        return Fraction(0), Fraction(0)
    (j_idx, lvl_k, sign_k, sum_a) = k_info
    (k_idx, lvl_l, sign_l, sum_b) = l_info
    grouped = sum(
        (
            sign_k * sign_l * coeff
            for j, k, _, coeff in gs.entries
            if j == j_idx and k == k_idx
        ),
        Fraction(0),
    )
    top = 2 * g - 2
    if not (lvl_k == lvl_l and abs(lvl_k) == top):
        return grouped, Fraction(0)
    sector_sign = 1 if lvl_k == top else (-1) ** (g - 1)
    predicted = (
        -spec.epsilon * sector_sign * Fraction(2 ** (7 * g - 9)) * sum_a * sum_b
    )
    return grouped, predicted


def _ikey(cls: HClass) -> tuple:
    return tuple(int(c) if c.denominator == 1 else c for c in cls.coords)


def _restriction_tables(gs: GluedSeries):
    """Per-side lookup: class coords -> (index, level, untwist sign, coefficient)."""
    cached = gs.__dict__.get("_restriction_tables")
    if cached is not None:
        return cached
    spec = gs.spec
    tables = []
    for entry, s, w in (
        (spec.left, spec.surface1, spec.w1),
        (spec.right, spec.surface2, spec.w2),
    ):
        w_sq = w.square
        table = {}
        for idx, (k, c) in enumerate(entry.series.entries):
            m = k.dot(w) + w_sq
            if m % 2 != 0:
                raise ParityError("restriction class is not characteristic against w")
            sign = -1 if (int(m) // 2) % 2 else 1
            table[_ikey(k)] = (idx, k.dot(s.cls), sign, c)
        tables.append(table)
    cached = (tables[0], tables[1])
    object.__setattr__(gs, "_restriction_tables", cached)
    return cached


# -- JSON -----------------------------------------------------------------------------


def glued_to_json(gs: GluedSeries) -> dict:
    spec = gs.spec
    return {
        "left": spec.left.name,
        "right": spec.right.name,
        "g": spec.genus,
        "kind": gs.kind,
        "w1_sq": int(spec.w1.square),
        "w2_sq": int(spec.w2.square),
        "w_sq": int(spec.glued_w_square),
        "pairs": [
            [j, k, {1: "+", -1: "-", 0: "0"}[sector], frac_token(c)]
            for j, k, sector, c in gs.entries
        ],
    }


def glued_from_json(data: dict) -> GluedSeries:
    from .constructions import catalog

    spec = GluingSpec(
        left=catalog(data["left"]),
        right=catalog(data["right"]),
        w_square=data["w_sq"],
    )
    sector_in = {"+": 1, "-": -1, "0": 0}
    entries = tuple(
        (j, k, sector_in[s], Fraction(c)) for j, k, s, c in data["pairs"]
    )
    return GluedSeries(spec, data.get("kind", "standard"), entries)
