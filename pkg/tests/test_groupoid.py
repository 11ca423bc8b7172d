"""Groupoid axioms, isotropy, transversals."""

import pytest

from zsalg.errors import UnknownUnitError
from zsalg.fixtures import (
    broken_pair_groupoid,
    pair_groupoid_2,
    two_orbit_groupoid,
    z2_groupoid,
)
from zsalg.groupoid import (
    GroupoidPresentation,
    check_transversal,
    validate_groupoid,
)


def test_pair_groupoid_validates():
    gpd = pair_groupoid_2()
    assert sorted(gpd.names) == ["m_uw", "m_wu", "u", "w"]


def test_z2_validates():
    gpd = z2_groupoid()
    assert gpd.compose("g", "g") == "v"


def test_broken_inverse_witness():
    gpd, rep = validate_groupoid(broken_pair_groupoid())
    assert not rep.passed
    assert rep.witness[0] == "inverse_endpoints"


def test_isotropy():
    gpd = pair_groupoid_2()
    iso = gpd.isotropy("u")
    assert iso.names == ("u",)
    z2 = z2_groupoid()
    assert sorted(z2.isotropy("v").names) == ["g", "v"]
    both = two_orbit_groupoid()
    assert sorted(both.isotropy("z").names) == ["g", "z"]
    assert both.isotropy("u").names == ("u",)
    with pytest.raises(UnknownUnitError):
        gpd.isotropy("nope")


def test_isotropy_closed_under_ops():
    gpd = two_orbit_groupoid()
    for x in gpd.units:
        iso = gpd.isotropy(x)
        for g in iso.names:
            assert gpd.inverse(g) in iso.names
            for h in iso.names:
                assert gpd.compose(g, h) in iso.names


def test_transversal_pair_groupoid():
    gpd = pair_groupoid_2()
    X, orbit_of, connector = gpd.transversal()
    assert X == ("u",)
    assert connector["w"] == "m_wu"  # r = w, s = u
    assert check_transversal(gpd)


def test_transversal_units_only():
    pres = GroupoidPresentation(units=["x", "y", "z"], morphisms=["x", "y", "z"])
    gpd, rep = validate_groupoid(pres)
    assert rep.passed
    assert gpd.transversal()[0] == ("x", "y", "z")
    assert check_transversal(gpd)


def test_transversal_two_orbits():
    gpd = two_orbit_groupoid()
    X, orbit_of, _ = gpd.transversal()
    assert X == ("u", "z")
    for orbit in gpd.orbits():
        assert sum(1 for u in orbit if u in X) == 1
    assert check_transversal(gpd)
