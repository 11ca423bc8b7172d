"""Matched pairs, action extension, and the product category."""

import pytest

from zsalg.categories import principal_ideal, validate_category
from zsalg.errors import NotApplicableError, NotComposableError
from zsalg.fixtures import (
    badswap_pair,
    kgraph_e2,
    klein_unfaithful_pair,
    swap2_pair,
    swap_pair,
    trivial_pair,
    x_elem,
    x_monoid,
    zs_of,
)
from zsalg.kgraph import deg_add
from zsalg.selfsim import (
    ZSMorphism,
    check_jointly_faithful,
    check_self_similar,
    extend_action,
    verify_matched_pair,
    zs_compose,
)


def test_extend_flip_on_word():
    pair = swap_pair()
    ab = pair.acted.nf(("a", "b"))
    moved, res = extend_action(pair, "g", ab)
    assert (str(moved), res) == ("ba", "g")


def test_extend_units():
    pair = swap_pair()
    d = pair.acted.nf(("a",))
    assert extend_action(pair, "v", d) == (d, "v")
    v = pair.acted.identity("v")
    assert extend_action(pair, "g", v) == (v, "g")


def test_extend_respects_every_split():
    pair = swap_pair()
    graph = pair.acted
    for word in ("ab", "ba", "aab", "bab", "abab"):
        d = graph.nf(tuple(word))
        full = pair.extend("g", d)
        for cut in range(1, len(word)):
            d1 = graph.nf(tuple(word[:cut]))
            d2 = graph.nf(tuple(word[cut:]))
            moved1, res1 = pair.extend("g", d1)
            moved2, res2 = pair.extend(res1, d2)
            assert full == (graph.compose(moved1, moved2), res2)


def test_verify_matched_pair_swap():
    assert verify_matched_pair(swap_pair(), (3,))


def test_verify_matched_pair_badswap_witness():
    rep = verify_matched_pair(badswap_pair(), (2,))
    assert not rep
    label, c1, c2, d = rep.witness
    assert (c1, c2, str(d)) == ("g", "g", "a")


def test_verify_trivial_action():
    pair = trivial_pair(kgraph_e2((3,)))
    assert verify_matched_pair(pair, (2,))


def test_zs_compose_examples():
    zs = zs_of(swap_pair())
    a = zs.D.nf(("a",))
    b = zs.D.nf(("b",))
    out = zs_compose(zs, ZSMorphism(a, "g"), ZSMorphism(b, "v"))
    assert (str(out.path), out.tail) == ("aa", "g")
    unit = zs.identity("v")
    x = ZSMorphism(a, "g")
    assert zs_compose(zs, unit, x) == x
    with pytest.raises(NotComposableError):
        bad = ZSMorphism(a, "g")
        zs_compose(zs, bad, ZSMorphism(zs.D.identity("nowhere_expected"), "v"))


def test_x_monoid_composition():
    X = x_monoid()
    out = zs_compose(X, x_elem(X, 0, "a"), x_elem(X, 1, ""))
    assert out == x_elem(X, 1, "a")
    # b.1 = 1a = a.1 is the collision the concordance failure rides on
    assert zs_compose(X, x_elem(X, 0, "b"), x_elem(X, 1, "")) == x_elem(X, 1, "a")
    # restriction closed form: w <| n = a^{|w|} for n >= 1
    for w in ("a", "b", "ab", "ba", "bb"):
        for n in (1, 2, 3):
            d = X.D.nf(("1",) * n)
            assert X.pair.extend(w, d) == (d, "a" * len(w))
        assert X.pair.extend(w, X.D.identity("*")) == (X.D.identity("*"), w)


def test_zs_associativity_window():
    for pair, bound in ((swap_pair(), (2,)), (swap2_pair(), (1, 1))):
        zs = zs_of(pair)
        window = zs.morphisms(bound)
        for x in window:
            for y in window:
                if zs.s(x) != zs.r(y):
                    continue
                xy = zs.compose(x, y)
                for z in window:
                    if zs.s(y) != zs.r(z):
                        continue
                    assert zs.compose(xy, z) == zs.compose(x, zs.compose(y, z))


def test_zs_degree_additivity():
    zs = zs_of(swap2_pair())
    window = zs.morphisms((1, 1))
    for x in window:
        for y in window:
            if zs.s(x) == zs.r(y):
                xy = zs.compose(x, y)
                assert xy.path.degree == deg_add(x.path.degree, y.path.degree)


def test_zs_unit_and_inverse_ideal_law():
    zs = zs_of(swap_pair())
    validate_category(zs, (2,))
    window = zs.morphisms((2,))
    for x in window:
        unit = zs.identity(zs.s(x))
        assert zs.compose(x, unit) == x
        ginv = zs.tail_inverse(x)
        inv_mor = zs.from_tail(ginv)
        collapsed = zs.compose(x, inv_mor)
        assert collapsed == zs.from_path(x.path)
        assert principal_ideal(x, zs, (2,)) == principal_ideal(collapsed, zs, (2,))


def test_check_self_similar():
    assert check_self_similar(swap_pair(), (2,))
    assert check_self_similar(swap2_pair(), (1, 1))
    with pytest.raises(NotApplicableError):
        check_self_similar(x_monoid().pair, 2)


def test_degree_breaking_table_detected():
    from zsalg.fixtures import kgraph_e2, z2_groupoid
    from zsalg.selfsim import ActionTable, MatchedPair

    graph = kgraph_e2((3,))
    gpd = z2_groupoid("v")
    table = ActionTable(
        left={("g", "a"): graph.nf(("a", "a")), ("g", "b"): graph.nf(("a",))},
        right={("g", "a"): "g", ("g", "b"): "g"},
    )
    pair = MatchedPair(gpd, graph, table)
    rep = check_self_similar(pair, (1,))
    assert not rep
    g, lam = rep.witness
    assert g == "g" and str(lam) == "a"


def test_jointly_faithful_swap():
    rep = check_jointly_faithful(swap_pair(), "v", (1,))
    assert rep
    assert str(rep.details["witness_path"]) == "a"


def test_jointly_faithful_trivial_action():
    pair = trivial_pair(kgraph_e2((2,)))
    rep = check_jointly_faithful(pair, "v", (1,))
    assert rep and str(rep.details["witness_path"]) == "a"


def test_jointly_faithful_klein_failure():
    pair = klein_unfaithful_pair()
    assert verify_matched_pair(pair, (2,))
    assert check_self_similar(pair, (2,))
    rep = check_jointly_faithful(pair, "v", (1,))
    assert not rep
    for lam, (g1, g2) in rep.witness:
        assert {g1, g2} == {"p", "q"}


def test_undefined_generator_raises():
    from zsalg.errors import UndefinedGeneratorError
    from zsalg.fixtures import kgraph_e2, z2_groupoid
    from zsalg.selfsim import ActionTable, MatchedPair

    graph = kgraph_e2((2,))
    pair = MatchedPair(z2_groupoid("v"), graph, ActionTable(left={}, right={}))
    with pytest.raises(UndefinedGeneratorError):
        extend_action(pair, "g", graph.nf(("a",)))
