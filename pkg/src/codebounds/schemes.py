"""Spaces, orbit bookkeeping, pseudo-distances and small-graph baselines.

A space is either a Hamming ball (binary words of length n whose weight
lies in a prescribed set), a projective space (all subspaces of F_q^n),
or an explicit graph. Pair orbits under the symmetric / general linear
group are labeled (a, b, c) = (|x|, |y|, |x meet y|); triples over the
full automorphism group of the Hamming cube reduce, after translating
the third point to the origin, to the same labels acted on by the
permutations of the three points.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .exactmath import binomial, gaussian_binomial

__all__ = [
    "Graph",
    "SpaceSpec",
    "PairOrbit",
    "TripleOrbit",
    "pair_orbits",
    "triple_orbits",
    "triple_label_class",
    "label_pairwise_distinct",
    "ghd",
    "radial",
    "avg_radial",
    "orbit_pseudo_distance",
    "graph_alpha_bruteforce",
    "graph_chromatic_bruteforce",
    "space_points",
    "distance_graph",
]

MATERIALIZE_CAP = 4096


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..vertices-1."""

    vertices: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        for (u, v) in self.edges:
            if u == v or not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"bad edge ({u}, {v}) for {self.vertices} vertices")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @staticmethod
    def from_json(text: str) -> "Graph":
        data = json.loads(text)
        edges = tuple((int(u), int(v)) for u, v in data["edges"])
        return Graph(vertices=int(data["vertices"]), edges=edges)

    def to_json(self) -> str:
        return json.dumps({"vertices": self.vertices, "edges": [list(e) for e in self.edges]})

    def adjacency_masks(self) -> List[int]:
        adj = [0] * self.vertices
        for (u, v) in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def complement(self) -> "Graph":
        edges = tuple(
            (u, v)
            for u in range(self.vertices)
            for v in range(u + 1, self.vertices)
            if (u, v) not in set(self.edges)
        )
        return Graph(self.vertices, edges)


@dataclass(frozen=True)
class SpaceSpec:
    """Description of the underlying space of a bound computation.

    kind "hamming_ball": words of length n with weight in weight_set
    (q = 1). kind "projective": all subspaces of F_q^n, |x| = dim x.
    kind "graph": an explicit graph; only theta-type bounds apply.
    """

    kind: str
    n: int = 0
    weight_set: Tuple[int, ...] = ()
    q: int = 1
    graph: Graph | None = None

    def __post_init__(self) -> None:
        if self.kind == "hamming_ball":
            if self.n < 1:
                raise ValueError("hamming_ball: n >= 1 required")
            if self.q != 1:
                raise ValueError("hamming_ball: q must be 1")
            ws = tuple(sorted(set(self.weight_set)))
            if not ws or ws[0] < 0 or ws[-1] > self.n:
                raise ValueError(f"weight_set {self.weight_set} out of range for n={self.n}")
            object.__setattr__(self, "weight_set", ws)
        elif self.kind == "projective":
            if self.n < 1:
                raise ValueError("projective: n >= 1 required")
            if self.q < 2:
                raise ValueError("projective: q >= 2 required")
            object.__setattr__(self, "weight_set", tuple(range(self.n + 1)))
        elif self.kind == "graph":
            if self.graph is None:
                raise ValueError("graph spec needs a Graph")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @staticmethod
    def hamming(n: int, weight_set: Iterable[int] | None = None) -> "SpaceSpec":
        ws = tuple(weight_set) if weight_set is not None else tuple(range(n + 1))
        return SpaceSpec(kind="hamming_ball", n=n, weight_set=ws, q=1)

    @staticmethod
    def projective(n: int, q: int) -> "SpaceSpec":
        return SpaceSpec(kind="projective", n=n, q=q)

    @staticmethod
    def explicit(graph: Graph) -> "SpaceSpec":
        return SpaceSpec(kind="graph", graph=graph)

    def point_count(self) -> Fraction:
        if self.kind == "hamming_ball":
            return sum((binomial(self.n, w) for w in self.weight_set), Fraction(0))
        if self.kind == "projective":
            return sum((gaussian_binomial(self.n, k, self.q) for k in range(self.n + 1)),
                       Fraction(0))
        assert self.graph is not None
        return Fraction(self.graph.vertices)

    def canonical_json(self) -> str:
        data: Dict[str, object] = {"kind": self.kind}
        if self.kind == "graph":
            assert self.graph is not None
            data["vertices"] = self.graph.vertices
            data["edges"] = [list(e) for e in self.graph.edges]
        else:
            data["n"] = self.n
            data["q"] = self.q
            data["weight_set"] = list(self.weight_set)
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


@dataclass(frozen=True)
class PairOrbit:
    """Orbit of ordered pairs with |x| = a, |y| = b, |x meet y| = c."""

    a: int
    b: int
    c: int
    size: Fraction
    dist: int


@dataclass(frozen=True)
class TripleOrbit:
    """Orbit label of a point triple after translating the third point to 0.

    size counts the ordered pairs (x, y) carrying the label (the full
    triple orbit has 2^n times as many members). canonical is the
    lexicographically least label reachable under permutations of the
    three points; distinct records whether the three points are pairwise
    different.
    """

    a: int
    b: int
    c: int
    size: Fraction
    canonical: Tuple[int, int, int]
    distinct: bool


def _pair_orbit_size(spec: SpaceSpec, a: int, b: int, c: int) -> Fraction:
    n, q = spec.n, spec.q
    if q == 1:
        return binomial(n, a) * binomial(a, c) * binomial(n - a, b - c)
    return (gaussian_binomial(n, a, q) * gaussian_binomial(a, c, q)
            * gaussian_binomial(n - a, b - c, q) * q ** ((a - c) * (b - c)))


def pair_orbits(spec: SpaceSpec) -> List[PairOrbit]:
    """All pair orbits of the space, sorted by label (a, b, c)."""
    if spec.kind == "graph":
        raise ValueError("pair_orbits: explicit graphs have no orbit structure")
    out: List[PairOrbit] = []
    for a in spec.weight_set:
        for b in spec.weight_set:
            for c in range(max(0, a + b - spec.n), min(a, b) + 1):
                out.append(PairOrbit(a, b, c, _pair_orbit_size(spec, a, b, c),
                                     a + b - 2 * c))
    return sorted(out, key=lambda o: (o.a, o.b, o.c))


def _label_valid(n: int, label: Tuple[int, int, int]) -> bool:
    a, b, c = label
    return (0 <= a <= n and 0 <= b <= n
            and max(0, a + b - n) <= c <= min(a, b))


def triple_label_class(label: Tuple[int, int, int], n: int) -> FrozenSet[Tuple[int, int, int]]:
    """Closure of a label under the permutation action on the three points.

    Generators: swapping the two free points (a, b, c) -> (b, a, c), and
    swapping the first free point with the base point,
    (a, b, c) -> (a, a + b - 2c, a - c).
    """
    if not _label_valid(n, label):
        raise ValueError(f"invalid triple label {label} for n={n}")
    seen = {label}
    frontier = [label]
    while frontier:
        a, b, c = frontier.pop()
        for nxt in ((b, a, c), (a, a + b - 2 * c, a - c)):
            if nxt not in seen:
                if not _label_valid(n, nxt):
                    raise AssertionError(f"label action left valid range: {label} -> {nxt}")
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def label_pairwise_distinct(label: Tuple[int, int, int]) -> bool:
    """True iff a triple with this label has three pairwise different points."""
    a, b, c = label
    return a != 0 and b != 0 and not (b == a and c == a)


def triple_orbits(n: int) -> List[TripleOrbit]:
    """All triple-orbit labels for the Hamming cube H_n, sorted by label."""
    spec = SpaceSpec.hamming(n)
    out: List[TripleOrbit] = []
    for a in range(n + 1):
        for b in range(n + 1):
            for c in range(max(0, a + b - n), min(a, b) + 1):
                cls = triple_label_class((a, b, c), n)
                out.append(TripleOrbit(
                    a, b, c,
                    size=_pair_orbit_size(spec, a, b, c),
                    canonical=min(cls),
                    distinct=label_pairwise_distinct((a, b, c)),
                ))
    return sorted(out, key=lambda o: (o.a, o.b, o.c))


# ---------------------------------------------------------------------------
# Pseudo-distances on word tuples
# ---------------------------------------------------------------------------

def ghd(words: Sequence[int], n: int) -> int:
    """Generalized Hamming distance: number of non-constant coordinates."""
    if not words:
        raise ValueError("ghd: need at least one word")
    base = words[0]
    mask = 0
    for w in words[1:]:
        mask |= w ^ base
    return bin(mask & ((1 << n) - 1)).count("1")


def _column_classes(words: Sequence[int], n: int) -> Dict[int, int]:
    """Count columns by bit pattern over the words (pattern as a bitmask)."""
    counts: Dict[int, int] = {}
    for j in range(n):
        pat = 0
        for idx, w in enumerate(words):
            pat |= ((w >> j) & 1) << idx
        counts[pat] = counts.get(pat, 0) + 1
    return counts


def radial(words: Sequence[int], n: int) -> int:
    """Radius min_y max_i d(y, x_i), without scanning the 2^n centers.

    Columns are grouped by their bit pattern across the words; within a
    class the center only chooses how many columns get bit 1, so the
    search is a product of ranges of size at most n+1 over at most
    2^(k-1) - 1 pattern classes. Constant columns are settled by copying
    the common bit.
    """
    k = len(words)
    if k == 0:
        raise ValueError("radial: need at least one word")
    full = (1 << k) - 1
    counts = _column_classes(words, n)
    classes: List[Tuple[int, int]] = []  # (pattern mask P, column count)
    for pat, cnt in sorted(counts.items()):
        if pat == 0 or pat == full:
            continue  # constant column, center matches it for free
        mirror = pat ^ full
        if mirror in counts and mirror < pat:
            continue  # merged into the mirrored class below
        classes.append((pat, cnt + counts.get(mirror, 0)))
    space = 1
    for _, cnt in classes:
        space *= cnt + 1
    if space > 4_000_000:
        raise ValueError("radial: column-class search space too large")
    best = None
    for choice in itertools.product(*[range(cnt + 1) for _, cnt in classes]):
        dist = [0] * k
        for (pat, cnt), s in zip(classes, choice):
            # s columns take center bit 1: they hit the words with bit 0 in pat
            for i in range(k):
                if (pat >> i) & 1:
                    dist[i] += cnt - s
                else:
                    dist[i] += s
        worst = max(dist) if dist else 0
        if best is None or worst < best:
            best = worst
    return best if best is not None else 0


def avg_radial(words: Sequence[int], n: int) -> Fraction:
    """min_y (1/k) sum_i d(y, x_i); the coordinatewise majority attains it."""
    k = len(words)
    if k == 0:
        raise ValueError("avg_radial: need at least one word")
    total = 0
    for j in range(n):
        ones = sum((w >> j) & 1 for w in words)
        total += min(ones, k - ones)
    return Fraction(total, k)


def _triple_representative(label: Tuple[int, int, int], n: int) -> Tuple[int, int, int]:
    a, b, c = label
    x = (1 << a) - 1
    y = ((1 << c) - 1) | (((1 << (b - c)) - 1) << a)
    return (x, y, 0)


def orbit_pseudo_distance(f: str, label: Tuple[int, int, int], n: int):
    """Evaluate a pseudo-distance on a representative triple of the label.

    f is "ghd", "radial" or "avg_radial"; ghd on (a, b, c) is a + b - c.
    """
    if not _label_valid(n, label):
        raise ValueError(f"invalid triple label {label} for n={n}")
    words = _triple_representative(label, n)
    if f == "ghd":
        return ghd(words, n)
    if f == "radial":
        return radial(words, n)
    if f == "avg_radial":
        return avg_radial(words, n)
    raise ValueError(f"unknown pseudo-distance {f!r}")


# ---------------------------------------------------------------------------
# Exact graph baselines (small instances only)
# ---------------------------------------------------------------------------

def graph_alpha_bruteforce(graph: Graph) -> int:
    """Exact independence number by branch and bound; up to ~20 vertices."""
    v = graph.vertices
    if v > 22:
        raise ValueError(f"graph_alpha_bruteforce: {v} vertices is too many")
    adj = graph.adjacency_masks()
    best = 0

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def grow(cand: int, size: int) -> None:
        nonlocal best
        if size + popcount(cand) <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        # branch on the candidate vertex with most candidate neighbors
        pivot, pivot_deg = -1, -1
        m = cand
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            deg = popcount(adj[u] & cand)
            if deg > pivot_deg:
                pivot, pivot_deg = u, deg
        grow(cand & ~(1 << pivot) & ~adj[pivot], size + 1)
        grow(cand & ~(1 << pivot), size)

    grow((1 << v) - 1, 0)
    return best


def graph_chromatic_bruteforce(graph: Graph) -> int:
    """Exact chromatic number by backtracking; up to ~12 vertices."""
    v = graph.vertices
    if v > 14:
        raise ValueError(f"graph_chromatic_bruteforce: {v} vertices is too many")
    if v == 0:
        return 0
    adj = graph.adjacency_masks()
    order = sorted(range(v), key=lambda u: -bin(adj[u]).count("1"))

    def colorable(k: int) -> bool:
        colors = [-1] * v

        def assign(idx: int) -> bool:
            if idx == len(order):
                return True
            u = order[idx]
            used = {colors[w] for w in range(v) if (adj[u] >> w) & 1 and colors[w] >= 0}
            cap = max([colors[w] for w in range(v) if colors[w] >= 0], default=-1)
            for col in range(min(k, cap + 2)):  # symmetry break: at most one new color
                if col in used:
                    continue
                colors[u] = col
                if assign(idx + 1):
                    return True
                colors[u] = -1
            return False

        return assign(0)

    for k in range(1, v + 1):
        if colorable(k):
            return k
    return v


# ---------------------------------------------------------------------------
# Materialization of small spaces
# ---------------------------------------------------------------------------

def _ball_points(n: int, weight_set: Sequence[int]) -> List[int]:
    ws = set(weight_set)
    return [x for x in range(1 << n) if bin(x).count("1") in ws]


def _subspaces_f2(n: int) -> List[FrozenSet[int]]:
    """All subspaces of F_2^n as frozen sets of vectors (including 0)."""
    seen = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        nxt = []
        for s in frontier:
            for vec in range(1, 1 << n):
                if vec in s:
                    continue
                t = frozenset(x ^ (vec * b) for x in s for b in (0, 1))
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), tuple(sorted(s))))


def space_points(spec: SpaceSpec) -> Tuple[List[object], Callable[[object, object], Tuple[int, int, int]]]:
    """Materialize a small space: points plus the pair-label function.

    Supports Hamming balls and projective spaces over F_2 with at most
    MATERIALIZE_CAP points; used by oracles and validation, not by the
    production bound pipeline.
    """
    if spec.kind == "hamming_ball":
        if spec.point_count() > MATERIALIZE_CAP:
            raise ValueError("space too large to materialize")
        pts = _ball_points(spec.n, spec.weight_set)

        def label(x: int, y: int) -> Tuple[int, int, int]:
            return (bin(x).count("1"), bin(y).count("1"), bin(x & y).count("1"))

        return pts, label
    if spec.kind == "projective":
        if spec.q != 2:
            raise ValueError("only q = 2 projective spaces can be materialized")
        if spec.point_count() > MATERIALIZE_CAP:
            raise ValueError("space too large to materialize")
        pts = _subspaces_f2(spec.n)

        def label(x: FrozenSet[int], y: FrozenSet[int]) -> Tuple[int, int, int]:
            dim = lambda s: len(s).bit_length() - 1
            return (dim(x), dim(y), dim(x & y))

        return pts, label
    raise ValueError("space_points: explicit graphs are already materialized")


def distance_graph(spec: SpaceSpec, d: int) -> Graph:
    """Graph on the materialized space joining pairs with 0 < dist < d."""
    pts, label = space_points(spec)
    edges = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            a, b, c = label(pts[i], pts[j])
            if 0 < a + b - 2 * c < d:
                edges.append((i, j))
    return Graph(len(pts), tuple(edges))
