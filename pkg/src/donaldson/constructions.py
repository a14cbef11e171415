"""Catalog of reference manifolds with known series.

The builders here produce value-level catalog entries:

* ``elliptic_surface(n)`` -- the minimal elliptic surface E(n) without
  multiple fibers, series e^{Q/2} (sinh F)^{n-2} on the {fiber, section}
  block;
* ``blow_up(entry)`` -- adds an exceptional (-1)-class E and doubles the
  entry list by K -> K +- E with half the coefficient (even in t, matching
  the unchanged parity data of the manifold);
* ``build_bg(g)`` -- E(g) blown up g times, carrying the genus-g square-zero
  surface S_g = section + g*fiber - sum E_i, which meets the fiber torus once;
* ``build_dia2(g', g)`` -- K3 blown up 2g'-2 times with a genus-g square-zero
  surface pairing at most 2g'-2 with every basic class: the vanishing
  reference for doubles;
* ``closed_form_cg(g)`` -- the two-class closed form for the double of B_g
  along its genus-g surface, used as the comparison target by the
  pairing-fit module.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .lattice import (
    HClass,
    Lattice,
    MarkedSurface,
    lattice_from_json,
    lattice_to_json,
)
from .series import (
    DonaldsonSeries,
    check_adjunction,
    check_involution,
    series_from_json,
    series_to_json,
)


class ConstructionError(ValueError):
    pass


class CatalogMismatch(ConstructionError):
    """A stored catalog file does not byte-match its re-derived entry."""


@dataclass(frozen=True)
class CatalogEntry:
    """A lattice, its series, marked surfaces, and distinguished w choices."""

    name: str
    lattice: Lattice
    series: DonaldsonSeries
    surfaces: tuple[tuple[str, MarkedSurface], ...]
    w_labels: tuple[str, ...]
    glue_surface: str
    note: str = ""

    def surface(self, label: str | None = None) -> MarkedSurface:
        label = label or self.glue_surface
        for lab, s in self.surfaces:
            if lab == label:
                return s
        raise KeyError(f"{self.name}: no marked surface {label!r}")

    def w_class(self, label: str | None = None) -> HClass:
        label = label or self.w_labels[0]
        return self.lattice.cls(label)

    def validate(self) -> None:
        ok, bad = check_involution(self.series)
        if not ok:
            raise ConstructionError(
                f"{self.name}: involution symmetry K -> -K broken at {bad}"
            )
        for label, s in self.surfaces:
            ok, violators = check_adjunction(self.series, s)
            if not ok:
                raise ConstructionError(
                    f"{self.name}: adjunction bound violated against {label} "
                    f"by {violators}"
                )


# -- elliptic surfaces and blow-ups ------------------------------------------------


def elliptic_surface(n: int) -> CatalogEntry:
    """Minimal elliptic surface with p_g = n - 1; requires n >= 2.

    n = 1 has b+ = 1, where invariants depend on a chamber structure this
    calculator does not model.
    """
    if n < 2:
        raise ConstructionError(
            "n = 1 has b+ = 1 and chamber-dependent invariants; need n >= 2"
        )
    name = "K3" if n == 2 else f"S{n}"
    lattice = Lattice(
        name=name,
        gram=((0, 1), (1, -n)),
        b_plus=2 * n - 1,
        b_one=0,
        named=(
            ("F", (Fraction(1), Fraction(0))),
            ("sigma", (Fraction(0), Fraction(1))),
        ),
    )
    f = lattice.cls("F")
    pairs = []
    for k in range(-(n - 2), n - 1, 2):
        j = (n - 2 - k) // 2
        coeff = Fraction((-1) ** j * comb(n - 2, j), 2 ** (n - 2))
        pairs.append((Fraction(k) * f, coeff))
    series = DonaldsonSeries.on(lattice, pairs)
    entry = CatalogEntry(
        name=name,
        lattice=lattice,
        series=series,
        surfaces=(("F", MarkedSurface(f, genus=1)),),
        w_labels=("sigma",),
        glue_surface="F",
        note=f"minimal elliptic surface, geometric genus {n - 1}; "
        "series is the (n-2)-th power of sinh of the fiber",
    )
    entry.validate()
    return entry


def blow_up(entry: CatalogEntry, name: str | None = None) -> CatalogEntry:
    """Add an exceptional (-1)-class E; entries become (K+E, c/2), (K-E, c/2).

    Both signs keep the coefficient: the blow-up changes neither b+ nor b1,
    so the parity of the series in t must be preserved, which forces the
    even combination of e^{+-E}.
    """
    old = entry.lattice
    n = old.rank
    e_count = sum(1 for lab in old.labels() if lab.startswith("E"))
    e_label = f"E{e_count + 1}"
    gram = tuple(tuple(row) + (0,) for row in old.gram) + (
        tuple([0] * n) + (-1,),
    )
    named = tuple((lab, coords + (Fraction(0),)) for lab, coords in old.named) + (
        (e_label, tuple([Fraction(0)] * n + [Fraction(1)])),
    )
    new_name = name or f"{entry.name}.bl{e_count + 1}"
    lattice = Lattice(
        name=new_name,
        gram=gram,
        b_plus=old.b_plus,
        b_one=old.b_one,
        named=named,
    )
    e = lattice.cls(e_label)
    pairs = []
    for k, c in entry.series.entries:
        lifted = HClass(lattice, k.coords + (Fraction(0),))
        pairs.append((lifted + e, c / 2))
        pairs.append((lifted - e, c / 2))
    series = DonaldsonSeries.on(lattice, pairs, entry.series.simple_type)
    surfaces = tuple(
        (lab, MarkedSurface(HClass(lattice, s.cls.coords + (Fraction(0),)), s.genus))
        for lab, s in entry.surfaces
    )
    return CatalogEntry(
        name=new_name,
        lattice=lattice,
        series=series,
        surfaces=surfaces,
        w_labels=entry.w_labels,
        glue_surface=entry.glue_surface,
        note=entry.note + f"; blown up at {e_label}",
    )


def build_bg(g: int) -> CatalogEntry:
    """E(g) blown up g times with its genus-g square-zero surface S_g."""
    if g < 2:
        raise ConstructionError("B(g) needs g >= 2")
    entry = elliptic_surface(g)
    for _ in range(g):
        entry = blow_up(entry)
    old = entry.lattice
    sigma_coords = list(old.cls("sigma").coords)
    f_coords = list(old.cls("F").coords)
    e_sum = [Fraction(0)] * old.rank
    for i in range(g):
        for j, x in enumerate(old.cls(f"E{i + 1}").coords):
            e_sum[j] += x
    surf_coords = tuple(
        s + g * f - e for s, f, e in zip(sigma_coords, f_coords, e_sum)
    )
    canonical = tuple(
        (g - 2) * f + e for f, e in zip(f_coords, e_sum)
    )
    named = old.named + (
        ("T1", tuple(f_coords)),
        ("Sigma_g", surf_coords),
        ("K", canonical),
    )
    lattice = Lattice(
        name=f"B{g}",
        gram=old.gram,
        b_plus=old.b_plus,
        b_one=old.b_one,
        named=named,
    )
    series = DonaldsonSeries.on(
        lattice,
        [(HClass(lattice, k.coords), c) for k, c in entry.series.entries],
    )
    surface = MarkedSurface(lattice.cls("Sigma_g"), genus=g)
    torus = MarkedSurface(lattice.cls("T1"), genus=1)
    out = CatalogEntry(
        name=f"B{g}",
        lattice=lattice,
        series=series,
        surfaces=(("Sigma_g", surface), ("T1", torus)),
        w_labels=("T1", "sigma"),
        glue_surface="Sigma_g",
        note=f"elliptic surface E({g}) blown up {g} times, carrying the "
        "square-zero genus-g surface section + g*fiber - sum of exceptionals",
    )
    _check_bg(out, g)
    out.validate()
    return out


def _check_bg(entry: CatalogEntry, g: int) -> None:
    lat = entry.lattice
    sigma_g = lat.cls("Sigma_g")
    t1 = lat.cls("T1")
    k_top = lat.cls("K")
    if sigma_g.square != 0:
        raise ConstructionError(f"B{g}: surface square {sigma_g.square} != 0")
    if t1.dot(sigma_g) != 1:
        raise ConstructionError(f"B{g}: fiber pairs {t1.dot(sigma_g)} with surface")
    top = [(k, c) for k, c in entry.series.entries if k.dot(sigma_g) == 2 * g - 2]
    if len(top) != 1 or top[0][0].coords != k_top.coords:
        raise ConstructionError(f"B{g}: top class against the surface is not unique")
    if top[0][1] != Fraction(1, 2 ** (2 * g - 2)):
        raise ConstructionError(f"B{g}: top coefficient {top[0][1]} is wrong")
    if len(entry.series.entries) != 2**g * (g - 1):
        raise ConstructionError(f"B{g}: expected {2**g * (g - 1)} basic classes")


def build_dia2(g_prime: int, g: int) -> CatalogEntry:
    """K3 blown up 2g'-2 times with a genus-g surface; g' = 1 is K3 itself.

    The surface class is section + g'*fiber + sum of exceptionals; every
    basic class pairs with it in [-(2g'-2), 2g'-2], strictly below the
    adjunction bound 2g-2, so doubles along it have vanishing invariants.
    """
    if g_prime < 1 or g <= g_prime:
        raise ConstructionError("need 1 <= g' < g")
    blowups = 2 * g_prime - 2
    n = 2 + blowups
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = -2
    gram[0][1] = gram[1][0] = 1
    for i in range(blowups):
        gram[2 + i][2 + i] = -1
    named = [
        ("S", tuple([Fraction(1), Fraction(0)] + [Fraction(0)] * blowups)),
        ("T", tuple([Fraction(0), Fraction(1)] + [Fraction(0)] * blowups)),
    ]
    for i in range(blowups):
        coords = [Fraction(0)] * n
        coords[2 + i] = Fraction(1)
        named.append((f"E{i + 1}", tuple(coords)))
    surf = [Fraction(1), Fraction(g_prime)] + [Fraction(1)] * blowups
    named.append(("Sigma1", tuple(surf)))
    name = f"dia2:{g_prime}:{g}"
    lattice = Lattice(
        name=name,
        gram=tuple(tuple(r) for r in gram),
        b_plus=3,
        b_one=0,
        named=tuple(named),
    )
    pairs = []
    for signs in _sign_patterns(blowups):
        coords = [Fraction(0), Fraction(0)] + [Fraction(s) for s in signs]
        pairs.append((HClass(lattice, tuple(coords)), Fraction(1, 2**blowups)))
    series = DonaldsonSeries.on(lattice, pairs)
    surface = MarkedSurface(lattice.cls("Sigma1"), genus=g)
    if surface.cls.square != 0:
        raise ConstructionError(f"{name}: surface square is not zero")
    max_pair = max(
        (abs(k.dot(surface.cls)) for k, _ in series.entries), default=Fraction(0)
    )
    if max_pair != 2 * g_prime - 2:
        raise ConstructionError(f"{name}: max |K.S| = {max_pair} != {2 * g_prime - 2}")
    attaining = [
        k for k, _ in series.entries if k.dot(surface.cls) == 2 * g_prime - 2
    ]
    if len(attaining) != 1:
        raise ConstructionError(f"{name}: equality class is not unique")
    out = CatalogEntry(
        name=name,
        lattice=lattice,
        series=series,
        surfaces=(("Sigma1", surface),),
        w_labels=("T",),
        glue_surface="Sigma1",
        note=f"K3 blown up {blowups} times; genus-{g} square-zero surface "
        f"pairing at most {2 * g_prime - 2} with every basic class",
    )
    out.validate()
    return out


def _sign_patterns(m: int):
    if m == 0:
        yield ()
        return
    for rest in _sign_patterns(m - 1):
        yield (1,) + rest
        yield (-1,) + rest


def closed_form_cg(g: int) -> CatalogEntry:
    """The closed-form series of the double of B(g) along its genus-g surface.

    Two classes +-K with K . Shat2 = 2 and K . Sigma_g = 2g - 2.  Stored, like
    every catalog series, as the untwisted baseline; its twist by w = Shat2
    has the coefficients -2^{3g-5} and (-1)^g 2^{3g-5}.  Used as the
    comparison target when re-deriving the universal pairing matrix, never
    as a gluing input.
    """
    if g < 2:
        raise ConstructionError("C(g) needs g >= 2")
    name = f"C{g}"
    # modeled block spanned by (K, Shat2, Sigma_g); K^2 is not constrained by
    # any declared pairing and is set to 0
    lattice = Lattice(
        name=name,
        gram=(
            (0, 2, 2 * g - 2),
            (2, 0, 1),
            (2 * g - 2, 1, 0),
        ),
        b_plus=6 * g - 3,
        b_one=0,
        named=(
            ("K", (Fraction(1), Fraction(0), Fraction(0))),
            ("Shat2", (Fraction(0), Fraction(1), Fraction(0))),
            ("Sigma_g", (Fraction(0), Fraction(0), Fraction(1))),
        ),
    )
    k = lattice.cls("K")
    top = Fraction(2 ** (3 * g - 5))
    # untwisting the Shat2-twist flips both signs: K.Shat2 = +-2, Shat2^2 = 0
    series = DonaldsonSeries.on(
        lattice,
        [(k, top), (-k, -Fraction((-1) ** g) * top)],
    )
    out = CatalogEntry(
        name=name,
        lattice=lattice,
        series=series,
        surfaces=(
            ("Sigma_g", MarkedSurface(lattice.cls("Sigma_g"), genus=g)),
            ("Shat2", MarkedSurface(lattice.cls("Shat2"), genus=2)),
        ),
        w_labels=("Shat2",),
        glue_surface="Sigma_g",
        note="closed form for the double of B(g) along its genus-g surface; "
        "the twist by the genus-2 surface class gives -2^(3g-5), (-1)^g 2^(3g-5)",
    )
    out.validate()
    return out


# -- catalog lookup and persistence ---------------------------------------------------


def parse_recipe(ref: str) -> CatalogEntry:
    """Resolve a recipe string: elliptic:n | bg:g | dia2:g':g | cg:g | name.

    Entries are immutable, so repeated lookups share one derivation.
    """
    cached = _RECIPE_CACHE.get(ref)
    if cached is not None:
        return cached
    entry = _parse_recipe(ref)
    _RECIPE_CACHE[ref] = entry
    return entry


_RECIPE_CACHE: dict[str, CatalogEntry] = {}


def _parse_recipe(ref: str) -> CatalogEntry:
    parts = ref.split(":")
    head = parts[0].lower()
    try:
        if head == "elliptic" and len(parts) == 2:
            return elliptic_surface(int(parts[1]))
        if head == "bg" and len(parts) == 2:
            return build_bg(int(parts[1]))
        if head == "dia2" and len(parts) == 3:
            return build_dia2(int(parts[1]), int(parts[2]))
        if head == "cg" and len(parts) == 2:
            return closed_form_cg(int(parts[1]))
    except ValueError as exc:
        raise ConstructionError(f"bad recipe {ref!r}: {exc}") from exc
    raise KeyError(f"unknown catalog name or recipe {ref!r}")


_NAMED = {
    "K3": "elliptic:2",
    **{f"S{n}": f"elliptic:{n}" for n in range(3, 9)},
    **{f"B{g}": f"bg:{g}" for g in range(2, 9)},
    **{f"C{g}": f"cg:{g}" for g in range(2, 7)},
}


def catalog_names() -> list[str]:
    return sorted(_NAMED)


def catalog(ref: str) -> CatalogEntry:
    """Name-keyed retrieval; re-derives from the recipe and, when a stored
    JSON exists in the catalog directory, requires a byte-for-byte match."""
    recipe = _NAMED.get(ref, ref)
    entry = parse_recipe(recipe)
    path = _stored_path(ref)
    if path is not None and os.path.exists(path):
        with open(path, "rb") as fh:
            stored = fh.read()
        if stored != entry_json_bytes(entry):
            raise CatalogMismatch(
                f"stored catalog file {path} does not match the re-derived "
                f"entry for {ref!r}"
            )
    return entry


def catalog_dir() -> str | None:
    return os.environ.get("DONALDSON_CATALOG_DIR")


def _stored_path(ref: str) -> str | None:
    base = catalog_dir()
    if base is None:
        return None
    return os.path.join(base, ref.replace(":", "_") + ".json")


def entry_to_json(entry: CatalogEntry) -> dict:
    return {
        "name": entry.name,
        "lattice": lattice_to_json(entry.lattice),
        "series": series_to_json(entry.series),
        "surfaces": [
            {"label": lab, "class": [str(c) for c in s.cls.coords], "genus": s.genus}
            for lab, s in entry.surfaces
        ],
        "w_labels": list(entry.w_labels),
        "glue_surface": entry.glue_surface,
        "note": entry.note,
    }


def entry_from_json(data: dict) -> CatalogEntry:
    lattice = lattice_from_json(data["lattice"])
    series = series_from_json(data["series"], lattice)
    surfaces = tuple(
        (
            s["label"],
            MarkedSurface(
                HClass(lattice, tuple(Fraction(x) for x in s["class"])), s["genus"]
            ),
        )
        for s in data["surfaces"]
    )
    return CatalogEntry(
        name=data["name"],
        lattice=lattice,
        series=series,
        surfaces=surfaces,
        w_labels=tuple(data["w_labels"]),
        glue_surface=data["glue_surface"],
        note=data.get("note", ""),
    )


def entry_json_bytes(entry: CatalogEntry) -> bytes:
    # construction order is deterministic; sorting keys would scramble the
    # class table
    return (json.dumps(entry_to_json(entry), indent=2) + "\n").encode()


def export_catalog(directory: str, names=None) -> list[str]:
    """Write catalog entries as JSON files; returns the paths written."""
    os.makedirs(directory, exist_ok=True)
    written = []
    for ref in names or catalog_names():
        entry = parse_recipe(_NAMED.get(ref, ref))
        path = os.path.join(directory, ref.replace(":", "_") + ".json")
        with open(path, "wb") as fh:
            fh.write(entry_json_bytes(entry))
        written.append(path)
    return written
