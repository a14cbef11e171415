"""Integral lattices with intersection forms, homology classes and surfaces.

A ``Lattice`` models the piece of H^2 of a 4-manifold that the calculator
actually consumes: a symmetric integer Gram matrix for the intersection
form together with b^+ / b_1 metadata.  Catalog manifolds are "partial"
models spanned only by the classes the formulas touch (fibers, sections,
exceptional classes, surfaces); the declared b^+ then exceeds the rank of
the modeled block and only sign-count consistency is enforced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class LatticeError(ValueError):
    """A lattice or class fails one of its structural invariants."""


class LatticeMismatch(LatticeError):
    """Classes from two different lattices were combined."""


class ParityError(LatticeError):
    """An integer quantity required by the theory fails a parity condition."""


def _fractions(coords) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in coords)


@dataclass(frozen=True)
class Lattice:
    """A symmetric integer bilinear form plus 4-manifold metadata.

    ``model`` is "full" when the Gram matrix is the whole of H^2 (then the
    signature must reproduce ``b_plus`` exactly) and "partial" when it is a
    modeled sublattice (then positives of the block may not exceed it).
    ``carries_series`` marks lattices of manifolds carrying a Donaldson
    series, which forces b^+ - b_1 odd.
    """

    name: str
    gram: tuple[tuple[int, ...], ...]
    b_plus: int
    b_one: int = 0
    named: tuple[tuple[str, tuple[Fraction, ...]], ...] = ()
    model: str = "partial"
    carries_series: bool = True

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise LatticeError(f"{self.name}: Gram matrix is not square")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(f"{self.name}: Gram matrix is not symmetric")
        if self.model not in ("full", "partial"):
            raise LatticeError(f"{self.name}: unknown model {self.model!r}")
        if self.b_plus < 0 or self.b_one < 0:
            raise LatticeError(f"{self.name}: negative Betti data")
        if self.carries_series and (self.b_plus - self.b_one) % 2 == 0:
            raise ParityError(
                f"{self.name}: a series-carrying manifold needs b+ - b1 odd, "
                f"got b+={self.b_plus}, b1={self.b_one}"
            )
        named = tuple((label, _fractions(coords)) for label, coords in self.named)
        object.__setattr__(self, "named", named)
        for label, coords in named:
            if len(coords) != n:
                raise LatticeError(f"{self.name}: class {label!r} has wrong length")
        pos, neg, zero = signature(gram)
        if self.model == "full":
            if pos != self.b_plus or zero != 0:
                raise LatticeError(
                    f"{self.name}: full-rank model signature ({pos},{neg},{zero}) "
                    f"does not reproduce b+={self.b_plus}"
                )
        elif pos > self.b_plus:
            raise LatticeError(
                f"{self.name}: modeled block has {pos} positive directions, "
                f"more than the declared b+={self.b_plus}"
            )

    @property
    def rank(self) -> int:
        return len(self.gram)

    def cls(self, label: str) -> "HClass":
        for lab, coords in self.named:
            if lab == label:
                return HClass(self, coords)
        raise KeyError(f"{self.name}: no named class {label!r}")

    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.named)

    def zero(self) -> "HClass":
        return HClass(self, (Fraction(0),) * self.rank)

    def basis_vector(self, i: int) -> "HClass":
        coords = [Fraction(0)] * self.rank
        coords[i] = Fraction(1)
        return HClass(self, tuple(coords))


@dataclass(frozen=True)
class HClass:
    """A (co)homology class on a lattice, given by coordinates in the basis.

    Basic classes and w-classes are integral; probe classes D may be rational
    (the theory rescales D freely).
    """

    lattice: Lattice
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = _fractions(self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.lattice.rank:
            raise LatticeError("coordinate length does not match lattice rank")

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def dot(self, other: "HClass") -> Fraction:
        return pairing(self, other)

    @property
    def square(self) -> Fraction:
        cached = self.__dict__.get("_square")
        if cached is None:
            cached = pairing(self, self)
            object.__setattr__(self, "_square", cached)
        return cached

    def is_odd(self) -> bool:
        """Nonzero reduction mod 2 (meaningful for integral classes)."""
        if not self.is_integral:
            raise LatticeError("mod-2 reduction needs an integral class")
        return any(c % 2 for c in self.coords)

    def __add__(self, other: "HClass") -> "HClass":
        if self.lattice != other.lattice:
            raise LatticeMismatch("cannot add classes on different lattices")
        return HClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "HClass") -> "HClass":
        return self + (-other)

    def __neg__(self) -> "HClass":
        return HClass(self.lattice, tuple(-c for c in self.coords))

    def __rmul__(self, scalar) -> "HClass":
        s = Fraction(scalar)
        return HClass(self.lattice, tuple(s * c for c in self.coords))

    def __repr__(self):
        body = ",".join(str(c) for c in self.coords)
        return f"<{body}>@{self.lattice.name}"


@dataclass(frozen=True)
class MarkedSurface:
    """An embedded surface of square zero and odd class, with its genus.

    Genus 1 surfaces are accepted here but only the torus gluing rule will
    consume them; every other gluing operation requires genus >= 2.
    """

    cls: HClass
    genus: int

    def __post_init__(self):
        if self.genus < 1:
            raise LatticeError("surface genus must be >= 1")
        if not self.cls.is_integral:
            raise LatticeError("surface class must be integral")
        if self.cls.square != 0:
            raise LatticeError(
                f"surface class has self-intersection {self.cls.square}, expected 0"
            )
        if not self.cls.is_odd():
            raise LatticeError("surface class must be odd (nonzero mod 2)")

    @property
    def lattice(self) -> Lattice:
        return self.cls.lattice


# -- bilinear form and predicates ---------------------------------------------


def pairing(u: HClass, v: HClass) -> Fraction:
    """Evaluate the intersection form: u^T . gram . v."""
    if u.lattice is not v.lattice and u.lattice != v.lattice:
        raise LatticeMismatch(
            f"pairing of classes on {u.lattice.name} and {v.lattice.name}"
        )
    gram = u.lattice.gram
    if u.is_integral and v.is_integral:
        # integer fast path: the bulk of all pairings in catalog sweeps
        uc = [int(c) for c in u.coords]
        vc = [int(c) for c in v.coords]
        total = 0
        for i, a in enumerate(uc):
            if a:
                row = gram[i]
                total += a * sum(row[j] * b for j, b in enumerate(vc) if b)
        return Fraction(total)
    total = Fraction(0)
    for i, a in enumerate(u.coords):
        if a == 0:
            continue
        row = gram[i]
        total += a * sum(row[j] * b for j, b in enumerate(v.coords) if b != 0)
    return total


def is_characteristic(k: HClass) -> bool:
    """k . v == v . v (mod 2) for every basis vector of the modeled lattice."""
    if not k.is_integral:
        raise LatticeError("characteristic test needs an integral class")
    gram = k.lattice.gram
    n = k.lattice.rank
    for i in range(n):
        kv = sum(k.coords[j] * gram[j][i] for j in range(n))
        if (kv - gram[i][i]) % 2 != 0:
            return False
    return True


def is_allowable(w: HClass, s: MarkedSurface) -> bool:
    """w . [S] odd and [S]^2 = 0: the pair (w, S) admits the two-sector split."""
    if not w.is_integral:
        raise LatticeError("w must be integral")
    if w.lattice != s.lattice:
        raise LatticeMismatch("w and surface live on different lattices")
    return s.cls.square == 0 and pairing(w, s.cls) % 2 == 1


def d_zero_value(w_square, b_one: int, b_plus: int) -> int:
    """d0 = -w^2 - (3/2)(1 - b1 + b+); requires 1 - b1 + b+ even."""
    m = 1 - b_one + b_plus
    if m % 2 != 0:
        raise ParityError(
            f"1 - b1 + b+ = {m} is odd; d0 is not an integer "
            "(manifold outside the simple-type structure hypotheses)"
        )
    w_sq = Fraction(w_square)
    if w_sq.denominator != 1:
        raise ParityError("w^2 must be an integer")
    return -int(w_sq) - 3 * (m // 2)


def d_zero(w: HClass, b_one: int, b_plus: int) -> int:
    """d0 of (X, w) computed from the class w on its lattice."""
    if not w.is_integral:
        raise LatticeError("w must be integral")
    return d_zero_value(w.square, b_one, b_plus)


def signature(gram) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric integer matrix.

    Exact rational congruence diagonalization; no floating point.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = zero = 0
    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if j is not None:
                _swap_basis(a, i, j)
            else:
                j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if j is None:
                    zero += 1
                    continue
                _add_basis(a, i, j)
        d = a[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for r in range(i + 1, n):
            f = a[r][i] / d
            if f == 0:
                continue
            for c in range(n):
                a[r][c] -= f * a[i][c]
            for c in range(n):
                a[c][r] -= f * a[c][i]
    return pos, neg, zero


def _swap_basis(a, i, j):
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_basis(a, i, j):
    # basis change e_i <- e_i + e_j, making a[i][i] = 2 a[i][j] + a[j][j] != 0
    for c in range(len(a)):
        a[i][c] += a[j][c]
    for r in range(len(a)):
        a[r][i] += a[r][j]


# -- JSON descriptors -------------------------------------------------------------


def _coord_out(c: Fraction):
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _coord_in(x) -> Fraction:
    return Fraction(x)


def lattice_to_json(lat: Lattice) -> dict:
    return {
        "name": lat.name,
        "rank": lat.rank,
        "gram": [list(row) for row in lat.gram],
        "b_plus": lat.b_plus,
        "b_one": lat.b_one,
        "classes": {label: [_coord_out(c) for c in coords] for label, coords in lat.named},
        "model": lat.model,
    }


def lattice_from_json(data: dict) -> Lattice:
    gram = tuple(tuple(row) for row in data["gram"])
    if len(gram) != data["rank"]:
        raise LatticeError("rank field does not match Gram matrix size")
    named = tuple(
        (label, tuple(_coord_in(x) for x in coords))
        for label, coords in data["classes"].items()
    )
    return Lattice(
        name=data["name"],
        gram=gram,
        b_plus=data["b_plus"],
        b_one=data["b_one"],
        named=named,
        model=data["model"],
    )
