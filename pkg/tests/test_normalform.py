"""The exact algebra model: products, involution, levels, fibers, modules."""

import random
from fractions import Fraction

import pytest

from zsalg.cocycle import (
    ConstantHomotopy,
    GridFunction,
    LinearHomotopy,
    Phase,
    PhaseSum,
    RotationForm,
    trivial_cocycle,
)
from zsalg.errors import (
    DegreeMismatchError,
    NoSourcesRequiredError,
    NotApplicableError,
    NotInModuleFormError,
    OffGridError,
    WindowExceededError,
)
from zsalg.fixtures import (
    kgraph_k1,
    kgraph_source_1graph,
    pair_groupoid_2,
    swap2_pair,
    swap_pair,
    trivial_pair,
    two_orbit_groupoid,
    zs_of,
)
from zsalg.kgraph import KGraphPresentation, validate_kgraph
from zsalg.normalform import (
    AlgebraModel,
    ModuleVector,
    corner_decomposition,
    correspondence_pair,
    random_element,
)
from zsalg.selfsim import ActionTable, MatchedPair, ZSCategory


def swap_model(m=1):
    zs = zs_of(swap_pair())
    return AlgebraModel(zs, ConstantHomotopy(trivial_cocycle(), m=m), (8,))


def rot_model(m=11, theta=Fraction(1, 4)):
    zs = zs_of(trivial_pair(kgraph_k1((3, 3))))
    fam = LinearHomotopy(RotationForm([[0, 0], [theta, 0]]), m=m)
    return AlgebraModel(zs, fam, (8, 8))


def swap2_model(m=5, theta=Fraction(1, 3)):
    zs = zs_of(swap2_pair())
    fam = LinearHomotopy(RotationForm([[0, 0], [theta, 0]]), m=m)
    return AlgebraModel(zs, fam, (8, 8))


def test_term_product_flip_example():
    model = swap_model()
    D = model.D
    a, b = D.paths("v", (1,))
    v = D.identity("v")
    t1 = model.term(model.one_fn(), a, "g", b)
    t2 = model.term(model.one_fn(), b, "v", v)
    out = t1 * t2
    assert list(out.terms) == [(a, "g", v)]
    assert out.terms[(a, "g", v)].same_as(model.one_fn())


def test_term_product_involution_square():
    model = swap_model()
    tg = model.tail_gen("g")
    assert (tg * tg).same_as(model.vertex("v"))


def test_term_product_rotation_degenerate_phase():
    model = rot_model()
    D = model.D
    e = D.paths("v", (1, 0))[0]
    f = D.paths("v", (0, 1))[0]
    v = D.identity("v")
    se = model.term(model.one_fn(), e, "v", v)
    sf = model.term(model.one_fn(), f, "v", v)
    out = se * sf
    ef = D.compose(e, f)
    assert list(out.terms) == [(ef, "v", v)]
    assert out.terms[(ef, "v", v)].same_as(model.one_fn())
    # the reversed product carries the climbing phase t/4
    out = sf * se
    coeff = out.terms[(ef, "v", v)]
    assert coeff.at(10).same_as(PhaseSum.from_phase(Phase(Fraction(1, 4))))
    assert coeff.at(0).same_as(PhaseSum.one())


def test_product_range_mismatch_is_zero():
    model = swap_model()
    D = model.D
    a, b = D.paths("v", (1,))
    x = model.term(model.one_fn(), a, "g", b)
    y = model.path_gen(a)
    # (.. S_b*)(S_a ..) has MCE(b, a) empty
    assert (x * y).is_zero()


def test_window_exceeded():
    zs = zs_of(swap_pair())
    model = AlgebraModel(zs, ConstantHomotopy(trivial_cocycle(), m=1), (1,))
    D = model.D
    aa = D.nf(("a", "a"))
    x = model.term(model.one_fn(), aa, "v", D.identity("v"))
    with pytest.raises(WindowExceededError):
        x.star() * x


def test_involution_examples():
    model = swap_model()
    D = model.D
    a, b = D.paths("v", (1,))
    sv = model.vertex("v")
    assert sv.star().same_as(sv)
    t = model.term(model.one_fn(), a, "g", b)
    flipped = t.star()
    assert list(flipped.terms) == [(b, "g", a)]
    rng = random.Random(7)
    for _ in range(200):
        x = random_element(model, rng)
        assert x.star().star().same_as(x)


def test_associativity_and_antimultiplicativity_fuzz():
    rng = random.Random(11)
    for model in (swap_model(), rot_model(m=5), swap2_model(m=3)):
        for _ in range(150):
            x = random_element(model, rng)
            y = random_element(model, rng)
            z = random_element(model, rng)
            assert ((x * y) * z).same_as(x * (y * z))
            assert (x * y).star().same_as(y.star() * x.star())


def test_level_raise_vertex():
    model = swap_model()
    sv = model.vertex("v")
    raised = model.level_raise(sv, (1,))
    D = model.D
    a, b = D.paths("v", (1,))
    assert set(raised.terms) == {(a, "v", a), (b, "v", b)}


def test_level_raise_examples():
    model = swap_model()
    D = model.D
    a, b = D.paths("v", (1,))
    pa = model.range_projection(a)
    raised = model.level_raise(pa, (2,))
    aa, ab = D.compose(a, a), D.compose(a, b)
    assert set(raised.terms) == {(aa, "v", aa), (ab, "v", ab)}
    assert model.level_raise(pa, (1,)).same_as(pa)
    with pytest.raises(DegreeMismatchError):
        model.level_raise(model.range_projection(aa), (1,))


def test_equal_up_to_level_ck():
    for model in (swap_model(), rot_model(m=3)):
        D = model.D
        k = D.k
        from zsalg.kgraph import deg_splits

        for n, _ in deg_splits((2,) * k):
            for v in D.vertices:
                total = model.zero()
                for lam in D.paths(v, n):
                    total = total + model.range_projection(lam)
                assert model.equal_up_to_level(model.vertex(v), total, n)


def test_equal_up_to_level_distinguishes():
    model = swap_model()
    D = model.D
    a, b = D.paths("v", (1,))
    assert not model.equal_up_to_level(
        model.range_projection(a), model.range_projection(b), (2,)
    )


def test_zero_coefficient_noise_dropped():
    model = swap_model()
    x = model.vertex("v")
    noisy = x + model.path_gen(model.D.paths("v", (1,))[0]).scale(0)
    assert noisy.same_as(x) and set(noisy.terms) == set(x.terms)


def test_toeplitz_mode_forbids_level_raise():
    zs = zs_of(swap_pair())
    model = AlgebraModel(zs, ConstantHomotopy(trivial_cocycle(), m=1), (4,), covariant=False)
    with pytest.raises(NotApplicableError):
        model.level_raise(model.vertex("v"), (1,))


def test_level_raise_needs_no_sources():
    graph = kgraph_source_1graph((3,))
    model = AlgebraModel(
        zs_of(trivial_pair(graph)), ConstantHomotopy(trivial_cocycle(), m=1), (3,)
    )
    with pytest.raises(NoSourcesRequiredError):
        model.level_raise(model.vertex("v"), (1,))


def test_fiber_evaluation():
    model = rot_model(m=11)
    rng = random.Random(3)
    x = random_element(model, rng)
    with pytest.raises(OffGridError):
        model.evaluate_fiber(x, 11)
    x0 = model.evaluate_fiber(x, 0)
    assert all(f.m == 1 for f in x0.terms.values())
    for _ in range(100):
        x = random_element(model, rng)
        y = random_element(model, rng)
        for j in (0, 5, 10):
            assert model.evaluate_fiber(x * y, j).same_as(
                model.evaluate_fiber(x, j) * model.evaluate_fiber(y, j)
            )
            assert model.evaluate_fiber(x.star(), j).same_as(
                model.evaluate_fiber(x, j).star()
            )


def test_fiber_zero_untwisted():
    model = rot_model(m=11)
    D = model.D
    e = D.paths("v", (1, 0))[0]
    f = D.paths("v", (0, 1))[0]
    v = D.identity("v")
    sf = model.term(model.one_fn(), f, "v", v)
    se = model.term(model.one_fn(), e, "v", v)
    prod0 = model.evaluate_fiber(sf * se, 0)
    coeff = list(prod0.terms.values())[0]
    assert coeff.at(0).same_as(PhaseSum.one())


def test_zhat_apply_central():
    model = swap2_model(m=3)
    rng = random.Random(5)
    for _ in range(100):
        x = random_element(model, rng)
        y = random_element(model, rng)
        fn = GridFunction.from_phases(
            [Phase(Fraction(rng.randrange(8), 8)) for _ in range(model.m)]
        )
        lhs = model.zhat_apply(fn, x * y)
        assert lhs.same_as(model.zhat_apply(fn, x) * y)
        assert lhs.same_as(x * model.zhat_apply(fn, y))
    one = GridFunction.one(model.m)
    x = random_element(model, rng)
    assert model.zhat_apply(one, x).same_as(x)


def test_vertex_support_identity():
    model = swap_model()
    rng = random.Random(9)
    for _ in range(50):
        x = random_element(model, rng)
        assert model.vertex_support_identity(x, ["v"]).same_as(x)
        assert model.vertex_support_identity(x, []).is_zero()
        assert model.vertex_support_identity(x, ["v"]).same_as(
            model.vertex_filter(x, ["v"])
        )


def test_vertex_support_partial():
    # two-vertex graph: the support sum keeps exactly the matching terms
    graph = kgraph_source_1graph((3,))
    model = AlgebraModel(
        zs_of(trivial_pair(graph)), ConstantHomotopy(trivial_cocycle(), m=1), (3,)
    )
    e = graph.paths("v", (1,))[0]
    x = model.path_gen(e) + model.vertex("w")
    kept = model.vertex_support_identity(x, ["v"])
    assert set(kept.terms) == set(model.path_gen(e).terms)
    assert model.vertex_support_identity(x, ["v", "w"]).same_as(x)


def test_correspondence_pairing_edges():
    model = swap2_model(m=3)
    D = model.D
    z = D.paths("v", (0, 1))[0]
    xi = ModuleVector(model, [(z, model.vertex("v"))])
    assert correspondence_pair(xi, xi).same_as(model.vertex("v"))
    gvec = ModuleVector(model, [(z, model.tail_gen("g"))])
    assert correspondence_pair(gvec, gvec).same_as(model.vertex("v"))


def test_correspondence_axioms_random():
    model = swap2_model(m=3)
    D = model.D
    z = D.paths("v", (0, 1))[0]
    rng = random.Random(13)

    def vec():
        return ModuleVector(model, [(z, random_element(model, rng, gen_degree=(1, 0)))])

    for _ in range(100):
        xi, eta = vec(), vec()
        b = random_element(model, rng, gen_degree=(1, 0))
        inner = correspondence_pair(xi, eta)
        assert inner.star().same_as(correspondence_pair(eta, xi))
        assert correspondence_pair(xi, eta.rmul(b)).same_as(inner * b)
        norm = correspondence_pair(xi, xi)
        assert norm.star().same_as(norm)


def test_correspondence_rejects_bad_forms():
    model = swap2_model(m=3)
    D = model.D
    a = D.paths("v", (1, 0))[0]
    z = D.paths("v", (0, 1))[0]
    with pytest.raises(NotInModuleFormError):
        ModuleVector(model, [(a, model.vertex("v"))])  # wrong color edge
    with pytest.raises(NotInModuleFormError):
        bad_coeff = model.path_gen(z)  # coefficient leaves the subalgebra
        ModuleVector(model, [(z, bad_coeff)])


def test_corner_decomposition_fixtures():
    for gpd, units in (
        (pair_groupoid_2(), ["u", "w"]),
        (two_orbit_groupoid(), ["u", "w", "z"]),
    ):
        zero_graph, rep = validate_kgraph(KGraphPresentation(0, units, [], []), ())
        assert rep.passed
        pair = MatchedPair(gpd, zero_graph, ActionTable())
        model = AlgebraModel(
            ZSCategory(pair), ConstantHomotopy(trivial_cocycle(), m=1), ()
        )
        X = gpd.transversal()[0]
        assert corner_decomposition(model, X)


def test_corner_decomposition_single_object():
    from zsalg.fixtures import z2_groupoid

    gpd = z2_groupoid("v")
    zero_graph, _ = validate_kgraph(KGraphPresentation(0, ["v"], [], []), ())
    pair = MatchedPair(gpd, zero_graph, ActionTable())
    model = AlgebraModel(ZSCategory(pair), ConstantHomotopy(trivial_cocycle(), m=1), ())
    assert corner_decomposition(model, ["v"])


def test_model_requires_groupoid_tail():
    from zsalg.fixtures import x_monoid

    with pytest.raises(NotApplicableError):
        AlgebraModel(x_monoid(), ConstantHomotopy(trivial_cocycle(), m=1), (4,))


def test_element_json_roundtrippable_shape():
    model = swap_model()
    D = model.D
    a, b = D.paths("v", (1,))
    x = model.term(model.one_fn(), a, "g", b) + model.vertex("v")
    doc = x.to_json()
    assert [t["path"] for t in doc] == [["@v"], ["a"]]
    assert doc[1]["tail"] == "g" and doc[1]["adjoint_path"] == ["b"]
    assert doc[0]["coefficient"] == [{"re": 1.0, "im": 0.0}]


def test_explain_product_transcript():
    import json

    model = swap_model()
    D = model.D
    a, b = D.paths("v", (1,))
    x = model.term(model.one_fn(), a, "g", b)
    y = model.term(model.one_fn(), b, "v", D.identity("v"))
    records = model.explain_product(x, y)
    json.dumps(records)
    assert len(records) == 1
    rec = records[0]
    assert rec["common_extension"] == "b"
    assert rec["result"] == ["a", "g", "<v>"]
    # the transcript names exactly the terms the product produces
    assert set(map(tuple, [r["result"] for r in records])) == {
        tuple(map(str, k)) for k in (x * y).terms
    }
