import json

from fractions import Fraction
from codebounds.schemes import (
    Graph,
    SpaceSpec,
    avg_radial,
    distance_graph,
    ghd,
    graph_alpha_bruteforce,
    graph_chromatic_bruteforce,
    label_pairwise_distinct,
    orbit_pseudo_distance,
    pair_orbits,
    radial,
    space_points,
    triple_label_class,
    triple_orbits,
)


def c5() -> Graph:
    return Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def test_graph_json_round_trip():
    g = c5()
    h = Graph.from_json(g.to_json())
    assert h.vertices == 5 and set(h.edges) == set(g.edges)
    json.loads(g.to_json())  # schema is plain JSON


def test_graph_complement():
    g = c5()
    comp = g.complement()
    assert len(comp.edges) == 5 * 4 // 2 - 5
    assert not (set(comp.edges) & set(g.edges))


def test_alpha_chromatic_known_graphs():
    g = c5()
    assert graph_alpha_bruteforce(g) == 2
    assert graph_chromatic_bruteforce(g) == 3
    # Petersen: outer 5-cycle, inner pentagram, spokes
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, 5 + i) for i in range(5)]
    pet = Graph(10, edges)
    assert graph_alpha_bruteforce(pet) == 4
    assert graph_chromatic_bruteforce(pet) == 3
    empty = Graph(4, [])
    assert graph_alpha_bruteforce(empty) == 4
    assert graph_chromatic_bruteforce(empty) == 1


def test_space_spec_point_counts():
    assert SpaceSpec.hamming(5).point_count() == 32
    assert SpaceSpec.hamming(6, [0, 1, 2]).point_count() == 1 + 6 + 15
    assert SpaceSpec.projective(3, 2).point_count() == 1 + 7 + 7 + 1
    assert SpaceSpec.projective(4, 2).point_count() == 1 + 15 + 35 + 15 + 1


def test_space_points_match_count():
    for spec in (SpaceSpec.hamming(4), SpaceSpec.hamming(5, [0, 2, 4]),
                 SpaceSpec.projective(3, 2)):
        pts, label_of = space_points(spec)
        assert len(pts) == spec.point_count()
        a, b, c = label_of(pts[0], pts[0])
        assert a == b == c  # diagonal labels are (w, w, w)


def test_pair_orbit_sizes_sum():
    for spec in (SpaceSpec.hamming(6), SpaceSpec.hamming(7, [0, 1, 2, 3]),
                 SpaceSpec.projective(3, 2), SpaceSpec.projective(4, 3)):
        total = sum(o.size for o in pair_orbits(spec))
        assert total == spec.point_count() ** 2


def test_pair_orbits_by_enumeration():
    # formula sizes against a full scan of the materialized space
    spec = SpaceSpec.hamming(4)
    pts, label_of = space_points(spec)
    counts = {}
    for x in pts:
        for y in pts:
            lab = label_of(x, y)
            counts[lab] = counts.get(lab, 0) + 1
    for o in pair_orbits(spec):
        assert counts[(o.a, o.b, o.c)] == o.size
        assert o.dist == o.a + o.b - 2 * o.c


def test_distance_graph_edges():
    g = distance_graph(SpaceSpec.hamming(3), 2)
    # edges join pairs at distance 1..d-1, here distance exactly 1
    assert g.vertices == 8 and len(g.edges) == 8 * 3 // 2
    assert graph_alpha_bruteforce(g) == 4  # even-weight code


def test_ghd_values():
    assert ghd((0b000, 0b011), 3) == 2  # two words: plain distance
    assert ghd((0b000, 0b011, 0b101), 3) == 3
    assert ghd((0b0000, 0b0011, 0b0011), 4) == 2
    assert ghd((0b1111,), 4) == 0


def test_radial_values():
    assert radial((0b00, 0b11), 2) == 1
    assert radial((0b000, 0b011, 0b101), 3) == 1  # center 001
    assert radial((0b0000,), 4) == 0
    # pair radius is ceil(d/2)
    assert radial((0b0000, 0b0111), 4) == 2


def test_avg_radial_values():
    assert avg_radial((0b000, 0b011, 0b101), 3) == 1
    assert avg_radial((0b00, 0b11), 2) == 1
    assert avg_radial((0b0,), 1) == 0
    assert avg_radial((0b000, 0b000, 0b111), 3) == Fraction(3, 3)


def test_radial_agrees_with_center_scan():
    import random
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(2, 6)
        k = rng.randint(1, 4)
        words = [rng.randrange(1 << n) for _ in range(k)]
        brute = min(max(bin(y ^ w).count("1") for w in words)
                    for y in range(1 << n))
        assert radial(words, n) == brute
        brute_avg = min(Fraction(sum(bin(y ^ w).count("1") for w in words), k)
                        for y in range(1 << n))
        assert avg_radial(words, n) == brute_avg


def test_orbit_pseudo_distance_ghd_formula():
    n = 6
    for o in triple_orbits(n):
        lab = (o.a, o.b, o.c)
        assert orbit_pseudo_distance("ghd", lab, n) == o.a + o.b - o.c


def test_triple_label_class_properties():
    n = 5
    seen = {}
    for o in triple_orbits(n):
        cls = triple_label_class((o.a, o.b, o.c), n)
        assert (o.a, o.b, o.c) in cls
        assert min(cls) == min(triple_label_class(min(cls), n))
        for lab in cls:
            assert triple_label_class(lab, n) == cls
        seen.setdefault(min(cls), set()).update(cls)
    # classes partition the labels
    all_labels = {(o.a, o.b, o.c) for o in triple_orbits(n)}
    assert set().union(*seen.values()) == all_labels


def test_label_pairwise_distinct():
    assert not label_pairwise_distinct((0, 0, 0))    # x = y = 0
    assert not label_pairwise_distinct((0, 3, 0))    # x = 0
    assert not label_pairwise_distinct((2, 2, 2))    # x = y
    assert label_pairwise_distinct((1, 2, 1))
    assert label_pairwise_distinct((2, 3, 1))


def test_triple_class_invariant_under_point_swaps():
    # pseudo-distances are symmetric, so they are constant on classes
    n = 4
    for o in triple_orbits(n):
        cls = triple_label_class((o.a, o.b, o.c), n)
        for f in ("ghd", "radial", "avg_radial"):
            vals = {orbit_pseudo_distance(f, lab, n) for lab in cls}
            assert len(vals) == 1, (f, cls, vals)
