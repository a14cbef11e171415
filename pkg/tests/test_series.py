import warnings
from fractions import Fraction

import pytest

from donaldson.constructions import catalog
from donaldson.exppoly import ExpPolynomial
from donaldson.gaussian import GaussianRational
from donaldson.lattice import Lattice
from donaldson.series import (
    DonaldsonSeries,
    RelationPoly,
    SeriesError,
    apply_relation,
    check_adjunction,
    check_involution,
    default_probes,
    eval_insertion,
    finite_type_order,
    relation_poly,
    series_from_json,
    series_to_json,
    split_series,
    twist,
    twisted,
    unsplit_series,
)


def gr(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


@pytest.fixture(scope="module")
def k3():
    return catalog("K3")


@pytest.fixture(scope="module")
def b2():
    return catalog("B2")


def shifted_w(entry):
    """w + S for the entry's default pair: the second allowable twist."""
    w = entry.w_class()
    s = entry.surface()
    return w + s.cls


# -- construction invariants -----------------------------------------------------


def test_entries_sorted_distinct_characteristic(b2):
    series = b2.series
    coords = [k.coords for k, _ in series.entries]
    assert coords == sorted(coords)
    with pytest.raises(SeriesError):
        DonaldsonSeries.on(b2.lattice, list(series.entries) + [series.entries[0]])
    # a non-characteristic class is rejected
    with pytest.raises(SeriesError):
        DonaldsonSeries.on(b2.lattice, [(b2.lattice.cls("F"), Fraction(1))])


def test_zero_series(b2):
    zero = DonaldsonSeries.on(b2.lattice, [])
    assert zero.is_zero
    assert check_involution(zero)[0]


# -- twisting ---------------------------------------------------------------------


def test_twist_by_zero_is_identity(b2):
    assert twist(b2.series, b2.lattice.zero()) == list(b2.series.entries)


def test_twist_by_fiber_is_identity_on_bg():
    for g in (2, 3, 4):
        entry = catalog(f"B{g}")
        w = entry.w_class("T1")
        assert twist(entry.series, w) == list(entry.series.entries)


def test_twist_single_exceptional_entry():
    block = Lattice("one_blowup", ((-1,),), b_plus=3, carries_series=True)
    e = block.basis_vector(0)
    series = DonaldsonSeries.on(block, [(e, Fraction(1))])
    assert twist(series, e) == [(e, Fraction(-1))]


def test_twist_involutive(b2):
    w = b2.lattice.cls("sigma")
    assert twist(twisted(b2.series, w), w) == list(b2.series.entries)


def test_twist_needs_integral_w(b2):
    with pytest.raises(SeriesError):
        twist(b2.series, Fraction(1, 2) * b2.lattice.cls("F"))


# -- splitting ----------------------------------------------------------------------


def test_split_k3_single_class(k3):
    w = k3.lattice.cls("sigma")
    s = k3.surface("F")
    ss = split_series(k3.series, w, s)
    assert ss.p_entries == ()
    # d0(K3, sigma) = -4, i^4 = 1; the sigma-twist of the coefficient is -1
    assert ss.d0 == -4
    [(k, c)] = ss.n_entries
    assert k.is_zero and c == gr(-1)


def test_split_b2_sectors(b2):
    w = b2.lattice.cls("T1")
    s = b2.surface("Sigma_g")
    ss = split_series(b2.series, w, s)
    p_levels = {int(k.dot(s.cls)) for k, _ in ss.p_entries}
    n_levels = {int(k.dot(s.cls)) for k, _ in ss.n_entries}
    assert p_levels == {2, -2}
    assert n_levels == {0}
    assert len(ss.p_entries) == 2 and len(ss.n_entries) == 2


def test_split_requires_allowable_pair(b2):
    s = b2.surface("Sigma_g")
    with pytest.raises(SeriesError):
        split_series(b2.series, b2.lattice.zero(), s)


def test_split_unsplit_round_trip(b2, k3):
    for entry, w_label in ((b2, "T1"), (b2, "E1"), (k3, "sigma")):
        w = entry.lattice.cls(w_label)
        s = entry.surface()
        ss = split_series(entry.series, w, s)
        recovered = unsplit_series(ss)
        assert recovered == twisted(entry.series, w)
        # twisting once more recovers the stored series
        assert twisted(recovered, w) == entry.series


# -- insertion evaluation ------------------------------------------------------------


def test_eval_insertion_frozen_b2_case(b2):
    # B2, w dual to the fiber, D = E1 (D.S = 1), one surface insertion.
    # Classes +-(E1+E2) sit at levels +-2 and contribute (1/4)(1 +- 2) at
    # exponents -+1; classes +-(E1-E2) sit at level 0 with i^6 = -1 and
    # weight (-1 + 0i), contributing +1/4 at exponents -+i.
    w = b2.lattice.cls("T1")
    s = b2.surface("Sigma_g")
    d = b2.lattice.cls("E1")
    p, n = eval_insertion(b2.series, w, s, d, x_power=0, sigma_power=1)
    assert p == ExpPolynomial(
        "+Q/2", ((gr(-1), gr(Fraction(3, 4))), (gr(1), gr(Fraction(-1, 4)))), Fraction(-1)
    )
    assert n == ExpPolynomial(
        "-Q/2",
        ((gr(0, -1), gr(Fraction(1, 4))), (gr(0, 1), gr(Fraction(1, 4)))),
        Fraction(-1),
    )


def test_top_insertion_weight_matches_adjunction_level():
    for g in (2, 3, 4):
        entry = catalog(f"B{g}")
        w = entry.w_class("T1")
        s = entry.surface("Sigma_g")
        d = entry.lattice.cls("T1")
        p, _ = eval_insertion(entry.series, w, s, d, sigma_power=1)
        # the top class contributes (1 + (2g-2)) * 2^{-(2g-2)} at exponent 0
        top_weight = Fraction(2 * g - 1, 2 ** (2 * g - 2))
        levels = {}
        for k, c in entry.series.entries:
            levels.setdefault(int(k.dot(s.cls)), []).append((k, c))
        expected = sum(
            (
                Fraction(1 + lvl) * c
                for lvl, entries in levels.items()
                if lvl % 4 == 2
                for _, c in entries
            ),
            Fraction(0),
        )
        assert p.coefficient(gr(0)) == gr(expected)
        assert sum(
            (Fraction(1 + 2 * g - 2) * c for k, c in levels[2 * g - 2]), Fraction(0)
        ) == top_weight


def test_x_squared_minus_four_annihilates(b2):
    w = b2.lattice.cls("T1")
    s = b2.surface("Sigma_g")
    for d in default_probes(b2.lattice, s):
        p0, n0 = eval_insertion(b2.series, w, s, d)
        p2, n2 = eval_insertion(b2.series, w, s, d, x_power=2)
        assert (p2 - p0.scale(4)).is_zero
        assert (n2 - n0.scale(4)).is_zero


def test_eval_insertion_parity(b2, k3):
    # a = b = 0 output is even/odd in t per d0(X, w), sector by sector
    for entry, w_label, s_label in ((b2, "T1", "Sigma_g"), (k3, "sigma", "F")):
        w = entry.lattice.cls(w_label)
        s = entry.surface(s_label)
        d = next(d for d in default_probes(entry.lattice, s))
        d0w = entry.series.d0(w)
        sign = gr(-1) if d0w % 2 else gr(1)
        for poly in eval_insertion(entry.series, w, s, d):
            for lam, c in poly.terms:
                assert poly.coefficient(-lam) == sign * c


# -- relation polynomials --------------------------------------------------------------


def test_relation_poly_frozen_g2():
    z = relation_poly(2)
    assert z.terms == RelationPoly.of(
        [(0, 0, Fraction(1)), (0, 1, Fraction(-1, 2)),
         (1, 0, Fraction(1)), (1, 1, Fraction(-1, 2))]
    ).terms


def test_relation_poly_frozen_g3():
    z = relation_poly(3)
    expected = RelationPoly.of(
        [
            (0, 0, Fraction(-3)), (0, 1, Fraction(-3, 2)),
            (1, 0, Fraction(-2)), (1, 1, Fraction(-1)),
            (2, 0, Fraction(1)), (2, 1, Fraction(1, 2)),
        ]
    )
    assert z.terms == expected.terms


def test_relation_poly_g4_against_sympy():
    sympy = pytest.importorskip("sympy")
    s, x = sympy.symbols("s x")
    ref = sympy.expand((1 - x / 2) * (s + 1) * ((s + 1) ** 2 + 16))
    z = relation_poly(4)
    built = sum(
        sympy.Rational(c.numerator, c.denominator) * s**sp * x**xp
        for sp, xp, c in z.terms
    )
    assert sympy.simplify(ref - built) == 0


@pytest.mark.parametrize("g", range(2, 9))
def test_relation_poly_degree(g):
    assert relation_poly(g).sigma_degree == g - 1


def test_relation_poly_rejects_small_genus():
    with pytest.raises(SeriesError):
        relation_poly(1)


@pytest.mark.parametrize("g", range(2, 7))
def test_relation_annihilates_bg_for_both_twists(g):
    entry = catalog(f"B{g}")
    s = entry.surface("Sigma_g")
    z = relation_poly(g)
    for w in (entry.w_class("T1"), shifted_w(entry)):
        for d in (entry.lattice.cls("T1"), entry.lattice.cls("E1")):
            p, n = apply_relation(entry.series, w, s, z, d)
            assert p.is_zero and n.is_zero


def test_apply_relation_identity_and_x2(b2):
    w = b2.lattice.cls("T1")
    s = b2.surface("Sigma_g")
    d = b2.lattice.cls("T1")
    one = RelationPoly.of([(0, 0, Fraction(1))])
    assert apply_relation(b2.series, w, s, one, d) == eval_insertion(b2.series, w, s, d)
    x2m4 = RelationPoly.of([(0, 2, Fraction(1)), (0, 0, Fraction(-4))])
    p, n = apply_relation(b2.series, w, s, x2m4, d)
    assert p.is_zero and n.is_zero


def test_apply_relation_warns_off_probe(b2):
    w = b2.lattice.cls("T1")
    s = b2.surface("Sigma_g")
    z = relation_poly(2)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        apply_relation(b2.series, w, s, z, b2.lattice.cls("Sigma_g"))
    assert any("vanishing guarantee" in str(w_.message) for w_ in caught)


# -- finite type, adjunction, involution -------------------------------------------------


def test_finite_type_orders(b2, k3):
    zero = DonaldsonSeries.on(b2.lattice, [])
    s = b2.surface("Sigma_g")
    w = b2.lattice.cls("T1")
    assert finite_type_order(zero, w, s) == 0
    assert finite_type_order(b2.series, w, s) == 1
    assert finite_type_order(k3.series, k3.lattice.cls("sigma"), k3.surface("F")) == 1


def test_finite_type_order_needs_probes(b2):
    w = b2.lattice.cls("T1")
    s = b2.surface("Sigma_g")
    with pytest.raises(SeriesError):
        finite_type_order(b2.series, w, s, probes=[])


def test_adjunction_examples(b2):
    s = b2.surface("Sigma_g")
    ok, violators = check_adjunction(b2.series, s)
    assert ok and not violators
    # an artificial characteristic class pairing 6 with the genus-2 surface
    bad_class = 3 * (b2.lattice.cls("E1") + b2.lattice.cls("E2"))
    bad = DonaldsonSeries.on(b2.lattice, [(bad_class, Fraction(1))])
    ok, violators = check_adjunction(bad, s)
    assert not ok and violators[0][0].coords == bad_class.coords
    assert check_adjunction(DonaldsonSeries.on(b2.lattice, []), s)[0]


def test_involution_on_catalog_series():
    for name in ("K3", "S3", "S4", "B2", "B3", "B4", "C2", "C3"):
        ok, bad = check_involution(catalog(name).series)
        assert ok, (name, bad)


def test_involution_detects_violation(b2):
    e1e2 = b2.lattice.cls("E1") + b2.lattice.cls("E2")
    lopsided = DonaldsonSeries.on(b2.lattice, [(e1e2, Fraction(1))])
    ok, bad = check_involution(lopsided)
    assert not ok and bad


# -- JSON --------------------------------------------------------------------------------


def test_series_json_round_trip(b2):
    data = series_to_json(b2.series)
    assert series_from_json(data, b2.lattice) == b2.series
    assert all(isinstance(e["a"], str) for e in data["entries"])
