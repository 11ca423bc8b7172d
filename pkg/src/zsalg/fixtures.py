"""Built-in fixtures used by the test suite, the CLI and the docs.

Everything here is a small, fully checked object: one-vertex graphs with one
or two edges per color, the flip action of Z/2 on the free monoid, the pair
groupoid, and the monoid product of N with the free monoid on two letters
whose inclusion famously fails concordance.  The random k-graph generator at
the bottom produces validated presentations for the oracle-agreement sweeps.
"""

from __future__ import annotations

import random

from .groupoid import GroupoidPresentation, validate_groupoid
from .kgraph import Edge, KGraph, KGraphPresentation, validate_kgraph
from .selfsim import (
    ActionTable,
    FreeMonoidCategory,
    MatchedPair,
    ZSCategory,
    ZSMorphism,
)


def kgraph_k1(bound=(3, 3)):
    """One-vertex 2-graph; edges e (color 1), f (color 2); square ef = fe."""
    pres = KGraphPresentation(
        2,
        ["v"],
        [Edge("e", 1, "v", "v"), Edge("f", 2, "v", "v")],
        [(("e", "f"), ("f", "e"))],
    )
    graph, rep = validate_kgraph(pres, bound)
    assert rep.passed, rep
    return graph

def kgraph_e2(bound=(4,)):
    """One-vertex 1-graph on edges a, b: paths are the free monoid on {a, b}."""
    pres = KGraphPresentation(
        1, ["v"], [Edge("a", 1, "v", "v"), Edge("b", 1, "v", "v")], []
    )
    graph, rep = validate_kgraph(pres, bound)
    assert rep.passed, rep
    return graph


def kgraph_single_loop(bound=(6,)):
    """One vertex, one loop: the path category is N."""
    pres = KGraphPresentation(1, ["*"], [Edge("1", 1, "*", "*")], [])
    graph, rep = validate_kgraph(pres, bound)
    assert rep.passed, rep
    return graph


def kgraph_source_1graph(bound=(3,)):
    """1-graph v <- w with nothing out of w: a source in color 1."""
    pres = KGraphPresentation(1, ["v", "w"], [Edge("e", 1, "v", "w")], [])
    graph, rep = validate_kgraph(pres, bound)
    assert rep.passed, rep
    return graph


def kgraph_convex_with_source(bound=(2, 2)):
    """Locally convex 2-graph with a source: product of (v <- w) and a loop."""
    verts = ["v", "w"]
    edges = [
        Edge("e", 1, "v", "w"),
        Edge("fv", 2, "v", "v"),
        Edge("fw", 2, "w", "w"),
    ]
    squares = [(("e", "fw"), ("fv", "e"))]
    graph, rep = validate_kgraph(KGraphPresentation(2, verts, edges, squares), bound)
    assert rep.passed, rep
    return graph


def kgraph_not_locally_convex(bound=(1, 1)):
    """Valid 2-graph that is not locally convex: color-2 at r(e) but not s(e)."""
    pres = KGraphPresentation(
        2,
        ["p", "q", "x"],
        [Edge("e", 1, "p", "q"), Edge("f", 2, "p", "x")],
        [],
    )
    graph, rep = validate_kgraph(pres, bound)
    assert rep.passed, rep
    return graph


def z2_groupoid(unit="v"):
    """Z/2 = {unit, g} as a one-object groupoid."""
    pres = GroupoidPresentation(
        units=[unit],
        morphisms=[unit, "g"],
        rng={"g": unit},
        src={"g": unit},
        inv={"g": "g"},
        compose={("g", "g"): unit},
    )
    gpd, rep = validate_groupoid(pres)
    assert rep.passed, rep
    return gpd


def trivial_groupoid(units):
    pres = GroupoidPresentation(units=list(units), morphisms=list(units))
    gpd, rep = validate_groupoid(pres)
    assert rep.passed, rep
    return gpd


def pair_groupoid_2():
    """Pair groupoid on units {u, w}: morphisms u, w, (u,w), (w,u)."""
    uw, wu = "m_uw", "m_wu"
    pres = GroupoidPresentation(
        units=["u", "w"],
        morphisms=["u", "w", uw, wu],
        rng={uw: "u", wu: "w"},
        src={uw: "w", wu: "u"},
        inv={uw: wu, wu: uw},
        compose={(uw, wu): "u", (wu, uw): "w"},
    )
    gpd, rep = validate_groupoid(pres)
    assert rep.passed, rep
    return gpd


def broken_pair_groupoid():
    """Pair groupoid with the inverse of (u,w) deliberately set to itself."""
    uw, wu = "m_uw", "m_wu"
    return GroupoidPresentation(
        units=["u", "w"],
        morphisms=["u", "w", uw, wu],
        rng={uw: "u", wu: "w"},
        src={uw: "w", wu: "u"},
        inv={uw: uw, wu: wu},
        compose={(uw, wu): "u", (wu, uw): "w"},
    )


def two_orbit_groupoid():
    """Disjoint union of the pair groupoid on {u, w} and Z/2 at unit z."""
    uw, wu = "m_uw", "m_wu"
    pres = GroupoidPresentation(
        units=["u", "w", "z"],
        morphisms=["u", "w", "z", uw, wu, "g"],
        rng={uw: "u", wu: "w", "g": "z"},
        src={uw: "w", wu: "u", "g": "z"},
        inv={uw: wu, wu: uw, "g": "g"},
        compose={(uw, wu): "u", (wu, uw): "w", ("g", "g"): "z"},
    )
    gpd, rep = validate_groupoid(pres)
    assert rep.passed, rep
    return gpd


def swap_pair(bound=(4,)):
    """Z/2 flipping the two edges of the one-vertex 1-graph; restriction g."""
    graph = kgraph_e2(bound)
    gpd = z2_groupoid("v")
    table = ActionTable(
        left={
            ("g", "a"): graph.nf(("b",)),
            ("g", "b"): graph.nf(("a",)),
        },
        right={("g", "a"): "g", ("g", "b"): "g"},
    )
    return MatchedPair(gpd, graph, table)


def badswap_pair(bound=(4,)):
    """Same flip but the restriction tables break the interchange identity."""
    graph = kgraph_e2(bound)
    gpd = z2_groupoid("v")
    table = ActionTable(
        left={
            ("g", "a"): graph.nf(("b",)),
            ("g", "b"): graph.nf(("a",)),
        },
        right={("g", "a"): "v", ("g", "b"): "g"},
    )
    return MatchedPair(gpd, graph, table)


def swap2_pair(bound=(3, 3)):
    """Flip action on a one-vertex 2-graph: colors {a,b | z}, squares az = za,
    bz = zb, with g fixing z and restricting to g everywhere."""
    pres = KGraphPresentation(
        2,
        ["v"],
        [Edge("a", 1, "v", "v"), Edge("b", 1, "v", "v"), Edge("z", 2, "v", "v")],
        [(("a", "z"), ("z", "a")), (("b", "z"), ("z", "b"))],
    )
    graph, rep = validate_kgraph(pres, bound)
    assert rep.passed, rep
    gpd = z2_groupoid("v")
    table = ActionTable(
        left={
            ("g", "a"): graph.nf(("b",)),
            ("g", "b"): graph.nf(("a",)),
            ("g", "z"): graph.nf(("z",)),
        },
        right={("g", "a"): "g", ("g", "b"): "g", ("g", "z"): "g"},
    )
    return MatchedPair(gpd, graph, table)


def trivial_pair(graph: KGraph):
    """The trivial (vertex groupoid) action on a validated k-graph."""
    gpd = trivial_groupoid(graph.vertices)
    return MatchedPair(gpd, graph, ActionTable())


def klein_four_groupoid(unit="v"):
    """Z/2 x Z/2 at one object: elements p, q, pq."""
    pres = GroupoidPresentation(
        units=[unit],
        morphisms=[unit, "p", "q", "pq"],
        rng={"p": unit, "q": unit, "pq": unit},
        src={"p": unit, "q": unit, "pq": unit},
        inv={"p": "p", "q": "q", "pq": "pq"},
        compose={
            ("p", "p"): unit,
            ("q", "q"): unit,
            ("pq", "pq"): unit,
            ("p", "q"): "pq",
            ("q", "p"): "pq",
            ("p", "pq"): "q",
            ("pq", "p"): "q",
            ("q", "pq"): "p",
            ("pq", "q"): "p",
        },
    )
    gpd, rep = validate_groupoid(pres)
    assert rep.passed, rep
    return gpd


def klein_unfaithful_pair(bound=(3,)):
    """Klein four-group on the two-edge loop graph with p and q acting and
    restricting identically: a valid self-similar action whose isotropy is
    never separated by any path (two colliding pairs at every length)."""
    graph = kgraph_e2(bound)
    gpd = klein_four_groupoid("v")
    a, b = graph.nf(("a",)), graph.nf(("b",))
    table = ActionTable(
        left={
            ("p", "a"): b, ("p", "b"): a,
            ("q", "a"): b, ("q", "b"): a,
            ("pq", "a"): a, ("pq", "b"): b,
        },
        right={
            ("p", "a"): "p", ("p", "b"): "p",
            ("q", "a"): "p", ("q", "b"): "p",
            ("pq", "a"): "v", ("pq", "b"): "v",
        },
    )
    return MatchedPair(gpd, graph, table)


def zs_of(pair: MatchedPair) -> ZSCategory:
    return ZSCategory(pair, gauge="path")


def x_monoid(bound=6):
    """The monoid product of N with the free monoid on {a, b}.

    The free monoid acts trivially on N; a positive number collapses any
    word w to a^{|w|} on restriction (and 0 fixes it).  Realized through the
    generator tables (w <| 1 = a for both letters); the closed form
    w <| n = a^{|w|} for n >= 1 is the independent oracle in the tests.
    """
    loops = kgraph_single_loop((bound,))
    free = FreeMonoidCategory(["a", "b"], obj="*")
    one = loops.nf(("1",))
    table = ActionTable(
        left={("a", "1"): one, ("b", "1"): one},
        right={("a", "1"): "a", ("b", "1"): "a"},
    )
    pair = MatchedPair(free, loops, table)
    return ZSCategory(pair, gauge="total")


def x_elem(cat: ZSCategory, n: int, w: str):
    """The product element n.w of the counterexample monoid."""
    path = cat.D.nf(("1",) * n, rng="*") if n else cat.D.identity("*")
    return ZSMorphism(path, w)


# ---------------------------------------------------------------------------
# random validated k-graphs


def random_kgraph(seed, max_vertices=4, max_edges_per_color=3, max_k=3, bound=None):
    """A random validated k-graph presentation.

    Squares are sampled as random endpoint-respecting bijections; for k >= 3
    the sample is retried until the color-descending triples resolve
    confluently, falling back to product-style (identity pairing) squares
    when the retry budget runs out, so that the generator always returns a
    validated graph.
    """
    rng = random.Random(seed)
    for attempt in range(60):
        k = rng.randint(1, max_k)
        flip_fallback = k >= 3 and attempt >= 30
        nv = 1 if flip_fallback else rng.randint(1, max_vertices)
        verts = [f"v{i}" for i in range(nv)]
        edges = []
        for color in range(1, k + 1):
            ne = rng.randint(1, max_edges_per_color)
            for j in range(ne):
                r_v, s_v = rng.choice(verts), rng.choice(verts)
                edges.append(Edge(f"c{color}x{j}", color, r_v, s_v))
        pres = _with_random_squares(rng, k, verts, edges, flip=flip_fallback)
        if pres is None:
            continue
        use_bound = tuple((bound or (3,) * k)[:k])
        try:
            graph, rep = validate_kgraph(pres, use_bound)
        except Exception:
            continue
        if rep.passed:
            return graph
    raise RuntimeError(f"random_kgraph(seed={seed}) exhausted retries")


def _with_random_squares(rng, k, verts, edges, flip=False):
    by_color = {}
    for e in edges:
        by_color.setdefault(e.color, []).append(e)
    squares = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            # group composable pairs by (range, source); a bijection must
            # match these fibers, else there is no valid square table.
            asc, desc = {}, {}
            for e in by_color.get(i, ()):
                for f in by_color.get(j, ()):
                    if e.src == f.rng:
                        asc.setdefault((e.rng, f.src), []).append((e.name, f.name))
            for f in by_color.get(j, ()):
                for e in by_color.get(i, ()):
                    if f.src == e.rng:
                        desc.setdefault((f.rng, e.src), []).append((f.name, e.name))
            if set(asc) != set(desc):
                return None
            for key in sorted(asc):
                a, d = sorted(asc[key]), sorted(desc[key])
                if len(a) != len(d):
                    return None
                if flip:
                    # one-vertex product pairing ef = fe: always confluent
                    d = [(f, e) for e, f in a]
                else:
                    rng.shuffle(d)
                squares.extend(zip(a, d))
    return KGraphPresentation(k, verts, edges, squares)
