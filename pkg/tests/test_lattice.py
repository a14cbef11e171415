from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from donaldson.constructions import build_bg, catalog
from donaldson.lattice import (
    HClass,
    Lattice,
    LatticeError,
    LatticeMismatch,
    MarkedSurface,
    ParityError,
    d_zero,
    d_zero_value,
    is_allowable,
    is_characteristic,
    lattice_from_json,
    lattice_to_json,
    pairing,
    signature,
)


@pytest.fixture(scope="module")
def b2():
    return catalog("B2")


@pytest.fixture(scope="module")
def k3():
    return catalog("K3")


def test_pairing_frozen_values_on_b2(b2):
    lat = b2.lattice
    f, sigma, e1 = lat.cls("F"), lat.cls("sigma"), lat.cls("E1")
    assert pairing(f, sigma) == 1
    assert pairing(sigma, sigma) == -2
    assert pairing(e1, e1) == -1
    assert pairing(f, e1) == 0


def test_pairing_zero_class(b2):
    lat = b2.lattice
    assert pairing(lat.zero(), lat.cls("sigma")) == 0


@pytest.mark.parametrize("g", range(2, 9))
def test_surface_class_square_zero_for_all_g(g):
    entry = build_bg(g)
    sigma_g = entry.lattice.cls("Sigma_g")
    assert sigma_g.square == 0
    assert entry.lattice.cls("T1").dot(sigma_g) == 1
    assert entry.lattice.cls("K").dot(sigma_g) == 2 * g - 2


def test_pairing_lattice_mismatch(b2, k3):
    with pytest.raises(LatticeMismatch):
        pairing(b2.lattice.cls("F"), k3.lattice.cls("F"))


def test_characteristic_examples(b2, k3):
    # the even K3 block makes 0 characteristic
    assert is_characteristic(k3.lattice.zero())
    # a single (-1)-generator is characteristic
    block = Lattice("minus_one", ((-1,),), b_plus=0, carries_series=False)
    assert is_characteristic(block.basis_vector(0))
    # the fiber is not: F.sigma = 1 but sigma^2 = -2
    assert not is_characteristic(b2.lattice.cls("F"))


def test_allowable_examples(b2):
    surface = b2.surface("Sigma_g")
    assert is_allowable(b2.lattice.cls("T1"), surface)
    assert not is_allowable(b2.lattice.zero(), surface)
    # the surface class itself pairs evenly with itself
    assert not is_allowable(surface.cls, surface)


def test_d_zero_examples():
    assert d_zero_value(0, 0, 3) == -6
    assert d_zero_value(-2, 0, 3) == -4
    with pytest.raises(ParityError):
        d_zero_value(0, 0, 2)


def test_d_zero_from_class(k3):
    sigma = k3.lattice.cls("sigma")
    assert d_zero(sigma, 0, 3) == -4  # sigma^2 = -2 on K3


def test_marked_surface_invariants(b2):
    lat = b2.lattice
    with pytest.raises(LatticeError):
        MarkedSurface(lat.cls("sigma"), genus=2)  # sigma^2 = -2
    with pytest.raises(LatticeError):
        MarkedSurface(2 * lat.cls("F"), genus=1)  # even class
    with pytest.raises(LatticeError):
        MarkedSurface(lat.cls("F"), genus=0)


def test_signature_examples():
    assert signature(((1, 0), (0, -1))) == (1, 1, 0)
    assert signature(((0, 1), (1, 0))) == (1, 1, 0)
    assert signature(((0, 0), (0, 0))) == (0, 0, 2)
    assert signature(((0, 1, 0), (1, -2, 0), (0, 0, -1))) == (1, 2, 0)


def test_signature_bounds_enforced():
    with pytest.raises(LatticeError):
        Lattice("too_positive", ((1, 0), (0, 1)), b_plus=1, carries_series=True)


def test_full_rank_model_checks_signature():
    Lattice("full_ok", ((1, 0), (0, -1)), b_plus=1, model="full")
    with pytest.raises(LatticeError):
        Lattice("full_bad", ((1, 0), (0, 1)), b_plus=1, model="full",
                carries_series=False)
    with pytest.raises(LatticeError):
        # degenerate form cannot be a full-rank model
        Lattice("full_degenerate", ((0, 0), (0, 1)), b_plus=1, model="full",
                carries_series=False)


def test_series_carrier_needs_odd_b_plus_minus_b_one():
    with pytest.raises(ParityError):
        Lattice("even_carrier", ((-1,),), b_plus=2, b_one=0, carries_series=True)


def test_gram_must_be_symmetric():
    with pytest.raises(LatticeError):
        Lattice("asym", ((0, 1), (2, 0)), b_plus=1)


def test_lattice_json_round_trip(b2):
    data = lattice_to_json(b2.lattice)
    assert lattice_from_json(data) == b2.lattice


def test_rational_coords_serialize(k3):
    lat = Lattice(
        "with_rational",
        k3.lattice.gram,
        b_plus=3,
        named=(("half", (Fraction(1, 2), Fraction(0))),),
    )
    data = lattice_to_json(lat)
    assert data["classes"]["half"] == ["1/2", 0]
    assert lattice_from_json(data) == lat


def test_hclass_arithmetic(b2):
    lat = b2.lattice
    f, sigma = lat.cls("F"), lat.cls("sigma")
    assert (f + sigma).dot(f) == 1
    assert (-f).coords == tuple(-c for c in f.coords)
    assert (Fraction(1, 2) * f).is_integral is False
    with pytest.raises(LatticeError):
        HClass(lat, (Fraction(1),))  # wrong length


coords3 = st.tuples(*[st.integers(-4, 4)] * 3)


@given(u=coords3, v=coords3, w=coords3, a=st.integers(-3, 3))
def test_pairing_bilinear_symmetric(u, v, w, a):
    lat = Lattice(
        "hyp_plus_minus", ((0, 1, 0), (1, -2, 0), (0, 0, -1)),
        b_plus=3, carries_series=True,
    )
    cu = HClass(lat, tuple(map(Fraction, u)))
    cv = HClass(lat, tuple(map(Fraction, v)))
    cw = HClass(lat, tuple(map(Fraction, w)))
    assert pairing(cu, cv) == pairing(cv, cu)
    assert pairing(cu + cv, cw) == pairing(cu, cw) + pairing(cv, cw)
    assert pairing(a * cu, cw) == a * pairing(cu, cw)
