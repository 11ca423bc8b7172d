"""Alignment engine: independence, meets, exhaustive sets, concordance."""

import pytest

from zsalg.alignment import (
    builtin_counterexample,
    check_concordant,
    check_exhaustive,
    check_exhaustive_lifting,
    divides,
    equivalent_sets,
    independent,
    meet_ideal,
    minimal_exhaustive_sets,
    path_inclusion,
    zs_inclusion,
)
from zsalg.categories import validate_category
from zsalg.errors import NotIndependentError
from zsalg.fixtures import (
    kgraph_e2,
    kgraph_k1,
    pair_groupoid_2,
    swap2_pair,
    swap_pair,
    x_elem,
    x_monoid,
    zs_of,
)
from zsalg.kgraph import sub_kgraph, validate_kgraph
from zsalg.selfsim import ZSCategory, restrict_pair


def test_independent_examples():
    k1 = kgraph_k1((2, 2))
    e = k1.paths("v", (1, 0))[0]
    f = k1.paths("v", (0, 1))[0]
    assert independent([e, f], k1, (2, 2))
    e2 = kgraph_e2((3,))
    a = e2.paths("v", (1,))[0]
    aa = e2.compose(a, a)
    rep = independent([a, aa], e2, (3,))
    assert not rep and rep.witness == (aa, a)
    assert independent([], e2, (3,))


def test_equivalent_sets():
    k1 = kgraph_k1((2, 2))
    e = k1.paths("v", (1, 0))[0]
    assert equivalent_sets([e], [e], k1, (2, 2))
    e2 = kgraph_e2((3,))
    a, b = e2.paths("v", (1,))
    assert not equivalent_sets([a], [b], e2, (3,))
    gpd = pair_groupoid_2()
    gpd.mark_validated(0)
    assert equivalent_sets(["m_uw"], ["u"], gpd, 0)
    with pytest.raises(NotIndependentError):
        equivalent_sets([a, e2.compose(a, a)], [b], e2, (3,))


def test_meet_ideal_methods():
    k1 = kgraph_k1((2, 2))
    e = k1.paths("v", (1, 0))[0]
    f = k1.paths("v", (0, 1))[0]
    got = meet_ideal(e, f, k1, (2, 2))
    assert got.method == "MCE" and [str(p) for p in got.generators] == ["ef"]
    assert meet_ideal(e, e, k1, (2, 2)).generators == (e,)

    zs = zs_of(swap_pair())
    x = zs.from_path(zs.D.nf(("a",)))
    got = meet_ideal(x, x, zs, (2,))
    assert got.method == "ZS-path-lift" and got.generators == (x,)

    X = x_monoid()
    validate_category(X, 4)
    got = meet_ideal(x_elem(X, 0, "a"), x_elem(X, 0, "b"), X, 4)
    assert got.method == "brute"
    assert [str(g) for g in got.generators] == ["(1|'a')"]


def test_meet_ideal_matches_brute_oracle_and_symmetry():
    zs = zs_of(swap_pair())
    validate_category(zs, (3,))
    window = zs.morphisms((2,))
    for c1 in window[:8]:
        for c2 in window[:8]:
            fast = meet_ideal(c1, c2, zs, (3,))
            assert independent(fast.generators, zs, (3,))
            slow = _brute_meet(c1, c2, zs, (3,))
            if fast.generators or slow:
                assert equivalent_sets(list(fast.generators), slow, zs, (3,))
            sym = meet_ideal(c2, c1, zs, (3,))
            if fast.generators or sym.generators:
                assert equivalent_sets(
                    list(fast.generators), list(sym.generators), zs, (3,)
                )


def _brute_meet(c1, c2, cat, bound):
    from zsalg.categories import principal_ideal

    ideal = set(principal_ideal(c1, cat, bound)) & set(principal_ideal(c2, cat, bound))
    minimal = [
        m
        for m in ideal
        if not any(
            divides(m2, m, cat, bound) and not divides(m, m2, cat, bound)
            for m2 in ideal
            if m2 != m
        )
    ]
    chosen = []
    for m in sorted(minimal, key=cat.sort_key):
        if not any(divides(c, m, cat, bound) for c in chosen):
            chosen.append(m)
    return chosen


def test_tail_invariance_of_meets():
    zs = zs_of(swap_pair())
    validate_category(zs, (3,))
    a = zs.D.nf(("a",))
    b = zs.D.nf(("b",))
    for tail1 in ("v", "g"):
        for tail2 in ("v", "g"):
            from zsalg.selfsim import ZSMorphism

            got = meet_ideal(ZSMorphism(a, tail1), ZSMorphism(b, tail2), zs, (3,))
            plain = meet_ideal(zs.from_path(a), zs.from_path(b), zs, (3,))
            if got.generators or plain.generators:
                assert equivalent_sets(
                    list(got.generators), list(plain.generators), zs, (3,)
                )


def test_check_exhaustive():
    e2 = kgraph_e2((3,))
    a, b = e2.paths("v", (1,))
    assert check_exhaustive([a, b], "v", e2, (3,))
    rep = check_exhaustive([a], "v", e2, (3,))
    assert not rep and str(rep.witness) == "b"
    k1 = kgraph_k1((2, 2))
    e = k1.paths("v", (1, 0))[0]
    assert check_exhaustive([e], "v", k1, (2, 2))


def test_minimal_exhaustive_sets_free_monoid():
    e2 = kgraph_e2((2,))
    sets = {frozenset(map(str, F)) for F in minimal_exhaustive_sets("v", e2, (2,))}
    assert frozenset(["a", "b"]) in sets
    assert frozenset(["<v>"]) in sets
    for F in sets:
        assert len(F) <= 6


def test_concordant_self_inclusion():
    e2 = kgraph_e2((3,))
    validate_category(e2, (2,))
    inc = path_inclusion(e2, e2)
    assert check_concordant(inc, (2,), (2,))


def test_concordant_subgraph_of_one_square():
    k1 = kgraph_k1((2, 2))
    validate_category(k1, (2, 2))
    gamma, rep = validate_kgraph(sub_kgraph(k1, [1]), (2,))
    validate_category(gamma, (2,))
    inc = path_inclusion(gamma, k1)
    assert check_concordant(inc, (2,), (2, 2))
    assert check_exhaustive_lifting(inc, (2,), (2, 2))


def test_concordant_zs_inclusion():
    swap2 = swap2_pair()
    amb = zs_of(swap2)
    validate_category(amb, (2, 2))
    gamma, _ = validate_kgraph(sub_kgraph(swap2.acted, [1]), (2,))
    sub = ZSCategory(restrict_pair(swap2, gamma))
    validate_category(sub, (2,))
    inc = zs_inclusion(sub, amb)
    assert check_concordant(inc, (2,), (2, 2))
    assert check_exhaustive_lifting(inc, (2,), (2, 2))


def test_counterexample_transcript():
    tr = builtin_counterexample()
    assert tr["left_cancellative"]["passed"]
    assert tr["ideal_formula"]["all_match"]
    assert tr["ideal_formula"]["branches_seen"] == ["disjoint", "join"]
    assert not tr["concordant"]["passed"]
    assert tr["concordant"]["witness"] == ["a", "b", "(1|'')", "(1|'')"]
    # both branches genuinely exercised
    cases = tr["ideal_formula"]["cases"]
    joins = [c for c in cases if c["branch"] == "join"]
    disjoints = [c for c in cases if c["branch"] == "disjoint"]
    assert joins and disjoints
    # spot-check both branches: disjoint words leave only the collapsed
    # generator; comparable words absorb it into their join
    lookup = {tuple(c["pair"]): c for c in cases}
    assert lookup[("0.a", "0.b")]["formula"] == ["(1|'a')"]
    join_case = lookup[("0.a", "0.ab")]
    assert join_case["branch"] == "join"
    assert join_case["formula"] == ["(<*>|'ab')"]
    assert join_case["brute"] == ["(<*>|'ab')"]


def test_counterexample_transcript_deterministic():
    assert builtin_counterexample() == builtin_counterexample()


def test_combinatorial_blowup_budget():
    from zsalg.errors import CombinatorialBlowupError

    e2 = kgraph_e2((3,))
    with pytest.raises(CombinatorialBlowupError):
        minimal_exhaustive_sets("v", e2, (3,), window_cap=3)
