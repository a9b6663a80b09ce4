"""Block-diagonal kernels that linearize invariant positive functions.

For a Hamming ball or a projective space, the algebra of functions
F(x, y) invariant under the symmetry group splits into isotypic levels
k = 0, 1, ..., and F is positive semidefinite on the whole space iff
for every level the small matrix M_k obtained by reading F through the
kernel of that level is positive semidefinite:

    F(x, y) = sum_k  M_k[|x|, |y|] * kappa_k(|x|, |y|, |x meet y|).

kappa_k(i, j, c) is an explicit rational: a product of (q-)binomial
factors times the degree-k orthogonal-family value at co-overlap
t = i - c, normalized so that kappa_k(i, j, i) carries the full
prefactor (the t = 0 polynomial value is 1). Entries are exact
Fractions; floating point enters only when blocks are assembled for a
numeric solver.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from .exactmath import binomial, gaussian_binomial, krawtchouk, level_kernel_table
from .schemes import SpaceSpec, distance_graph, pair_orbits, space_points

__all__ = [
    "KernelLevel",
    "BlockKernel",
    "build_kernel",
    "kernel_from_json",
    "kernel_to_json",
    "assemble_blocks",
    "fit_blocks_exact",
    "krawtchouk_kernel",
    "validate_kernel_small",
]


@dataclass(frozen=True)
class KernelLevel:
    """One isotypic level: a block indexed by the weights in `indices`."""

    k: int
    indices: Tuple[int, ...]
    h: Fraction  # dimension of the irreducible carried by this level
    entries: Mapping[Tuple[int, int, int], Fraction] = field(repr=False)  # (i, j, c), i <= j

    @property
    def multiplicity(self) -> int:
        return len(self.indices)

    def __post_init__(self) -> None:
        from types import MappingProxyType

        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))


@dataclass(frozen=True)
class BlockKernel:
    space: SpaceSpec
    levels: Tuple[KernelLevel, ...]

    def level(self, k: int) -> KernelLevel:
        for lev in self.levels:
            if lev.k == k:
                return lev
        raise KeyError(f"no level {k}")

    def entry(self, k: int, i: int, j: int, c: int) -> Fraction:
        lev = self.level(k)
        return lev.entries[(i, j, c)] if i <= j else lev.entries[(j, i, c)]

    def point_count(self) -> Fraction:
        return self.space.point_count()


def _compute_kernel(spec: SpaceSpec) -> BlockKernel:
    n, q = spec.n, spec.q
    size = spec.point_count()
    table = level_kernel_table(n, q)
    levels: List[KernelLevel] = []
    for k in range(n // 2 + 1):
        indices = tuple(w for w in spec.weight_set if k <= w <= n - k)
        if not indices:
            continue
        h = gaussian_binomial(n, k, q) - gaussian_binomial(n, k - 1, q)
        entries: Dict[Tuple[int, int, int], Fraction] = {}
        for ii, i in enumerate(indices):
            for j in indices[ii:]:
                pre = (size * h
                       * gaussian_binomial(j - k, i - k, q)
                       * gaussian_binomial(n - 2 * k, j - k, q)
                       / (gaussian_binomial(n, j, q) * gaussian_binomial(j, i, q))
                       * q ** (k * (j - k)))
                for c in range(max(0, i + j - n), min(i, j) + 1):
                    entries[(i, j, c)] = pre * table[k][(i, j)][i - c]
        levels.append(KernelLevel(k=k, indices=indices, h=h, entries=entries))
    return BlockKernel(space=spec, levels=tuple(levels))


# ---------------------------------------------------------------------------
# JSON cache
# ---------------------------------------------------------------------------

_SCHEMA = 1


def kernel_to_json(kernel: BlockKernel) -> str:
    levels = []
    for lev in kernel.levels:
        levels.append({
            "k": lev.k,
            "m": lev.multiplicity,
            "indices": list(lev.indices),
            "h": f"{lev.h.numerator}/{lev.h.denominator}",
            "entries": [
                [i, j, c, f"{v.numerator}/{v.denominator}"]
                for (i, j, c), v in sorted(lev.entries.items())
            ],
        })
    return json.dumps({
        "schema": _SCHEMA,
        "space": json.loads(kernel.space.canonical_json()),
        "levels": levels,
    })


def kernel_from_json(text: str, spec: SpaceSpec) -> BlockKernel:
    data = json.loads(text)
    if data.get("schema") != _SCHEMA:
        raise ValueError(f"unsupported kernel schema {data.get('schema')!r}")
    if json.dumps(data["space"], sort_keys=True, separators=(",", ":")) != spec.canonical_json():
        raise ValueError("cached kernel belongs to a different space")
    levels = []
    for lev in data["levels"]:
        if "m" in lev and int(lev["m"]) != len(lev["indices"]):
            raise ValueError("kernel level multiplicity disagrees with indices")
        entries = {
            (int(i), int(j), int(c)): Fraction(v)
            for i, j, c, v in lev["entries"]
        }
        levels.append(KernelLevel(
            k=int(lev["k"]),
            indices=tuple(int(w) for w in lev["indices"]),
            h=Fraction(lev["h"]),
            entries=entries,
        ))
    return BlockKernel(space=spec, levels=tuple(levels))


def _cache_path(spec: SpaceSpec, cache_dir: str) -> str:
    return os.path.join(cache_dir, f"kernel-{spec.content_hash()}.json")


def build_kernel(spec: SpaceSpec, cache_dir: Optional[str] = None) -> Tuple[BlockKernel, bool]:
    """Kernel for a space, with transparent JSON caching.

    cache_dir falls back to the BOUNDS_CACHE_DIR environment variable;
    with neither set the kernel is computed in memory every time.
    Returns (kernel, cache_hit).
    """
    if spec.kind == "graph":
        raise ValueError("explicit graphs have no block kernel")
    cache_dir = cache_dir or os.environ.get("BOUNDS_CACHE_DIR")
    if cache_dir:
        path = _cache_path(spec, cache_dir)
        if os.path.exists(path):
            with open(path) as fh:
                try:
                    return kernel_from_json(fh.read(), spec), True
                except (ValueError, KeyError):
                    pass  # stale or corrupt entry: recompute below
    kernel = _compute_kernel(spec)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(kernel_to_json(kernel))
            os.replace(tmp, _cache_path(spec, cache_dir))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    return kernel, False


# ---------------------------------------------------------------------------
# Assembly and exact fitting
# ---------------------------------------------------------------------------

def assemble_blocks(kernel: BlockKernel, values: Mapping[Tuple[int, int, int], float]
                    ) -> List[np.ndarray]:
    """Numeric blocks M_k[i, j] = sum_c kappa_k(i, j, c) * values[(i, j, c)].

    values is keyed by pair-orbit labels with a <= b; missing labels
    count as zero.
    """
    out: List[np.ndarray] = []
    for lev in kernel.levels:
        pos = {w: t for t, w in enumerate(lev.indices)}
        block = np.zeros((len(lev.indices), len(lev.indices)))
        for (i, j, c), kap in lev.entries.items():
            v = values.get((i, j, c))
            if not v:
                continue
            block[pos[i], pos[j]] += float(kap) * v
            if i != j:
                block[pos[j], pos[i]] += float(kap) * v
        out.append(block)
    return out


def _solve_square_exact(rows: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    """Gaussian elimination over Fractions; raises on a singular system."""
    m = len(rows)
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular kernel system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][m] for r in range(m)]


def fit_blocks_exact(kernel: BlockKernel, values: Mapping[Tuple[int, int, int], Fraction]
                     ) -> Dict[int, Dict[Tuple[int, int], Fraction]]:
    """Invert the kernel map exactly: recover M_k entries from orbit values.

    For each weight pair (i, j) the labels (i, j, c) and the levels k
    acting on that pair form a square invertible system, so any
    invariant function has a unique block preimage. Returns
    {k: {(i, j): entry}} with i <= j.
    """
    out: Dict[int, Dict[Tuple[int, int], Fraction]] = {lev.k: {} for lev in kernel.levels}
    by_pair: Dict[Tuple[int, int], List[int]] = {}
    for lev in kernel.levels:
        for ii, i in enumerate(lev.indices):
            for j in lev.indices[ii:]:
                by_pair.setdefault((i, j), []).append(lev.k)
    for (i, j), ks in sorted(by_pair.items()):
        cs = list(range(max(0, i + j - kernel.space.n), min(i, j) + 1))
        if len(ks) != len(cs):
            raise AssertionError(f"non-square kernel system at {(i, j)}")
        rows = [[kernel.entry(k, i, j, c) for k in ks] for c in cs]
        rhs = [Fraction(values[(i, j, c)]) for c in cs]
        sol = _solve_square_exact(rows, rhs)
        for k, m in zip(ks, sol):
            out[k][(i, j)] = m
    return out


def krawtchouk_kernel(n: int) -> Dict[int, Dict[int, Fraction]]:
    """1x1 blocks of the translation-reduced cube: {k: {i: C(n,i) K_k(i)}}.

    A distance distribution (y_i) is the restriction of a positive
    invariant function iff all these scalars are nonnegative.
    """
    return {
        k: {i: binomial(n, i) * krawtchouk(n, k, i) for i in range(n + 1)}
        for k in range(n + 1)
    }


# ---------------------------------------------------------------------------
# Small-space validation
# ---------------------------------------------------------------------------

def _label_tensor(spec: SpaceSpec):
    """Materialize the space; return (N, flat label array, label -> id maps)."""
    pts, label_fn = space_points(spec)
    n_pts = len(pts)
    labels = sorted({(o.a, o.b, o.c) for o in pair_orbits(spec)})
    lab_id = {lab: t for t, lab in enumerate(labels)}
    lab_of = np.empty((n_pts, n_pts), dtype=np.int64)
    for xi in range(n_pts):
        for yi in range(n_pts):
            lab_of[xi, yi] = lab_id[label_fn(pts[xi], pts[yi])]
    return n_pts, labels, lab_id, lab_of


def validate_kernel_small(spec: SpaceSpec, *, draws: int = 100, seed: int = 0,
                          eig_tol: float = 1e-8, theta_tol: float = 1e-6,
                          theta_d: Optional[int] = None,
                          run_theta: bool = True) -> Dict[str, object]:
    """End-to-end check of a kernel on a fully materialized space.

    Verifies, in order: the dimension identity sum_k m_k h_k = |X|;
    constancy of the level-0 entries; sufficiency (random PSD blocks
    assemble to a PSD function on X, smallest eigenvalue down to
    -eig_tol * scale); completeness (orbit averages of random Gram
    matrices fit exactly to PSD blocks); and agreement of the reduced
    positive theta function with its unsymmetrized value on a distance
    graph. Raises AssertionError with a narrative message on failure;
    returns a report dict on success.
    """
    kernel, _ = build_kernel(spec)
    n_pts, labels, lab_id, lab_of = _label_tensor(spec)
    report: Dict[str, object] = {"space": json.loads(spec.canonical_json()), "points": n_pts}

    total = sum((Fraction(lev.multiplicity) * lev.h for lev in kernel.levels), Fraction(0))
    if total != spec.point_count():
        raise AssertionError(
            f"dimension identity failed: sum m_k h_k = {total}, |X| = {spec.point_count()}")
    report["dimension_identity"] = True

    lev0 = kernel.level(0)
    if any(v != spec.point_count() for v in lev0.entries.values()):
        raise AssertionError("level-0 entries are not constant = |X|")
    report["level0_constant"] = True

    # float kernel tensor: for each level, per-label block contribution
    kap_float = []
    for lev in kernel.levels:
        pos = {w: t for t, w in enumerate(lev.indices)}
        per_label = {}
        for (i, j, c), v in lev.entries.items():
            per_label[lab_id[(i, j, c)]] = (pos[i], pos[j], float(v))
            if i != j:
                per_label[lab_id[(j, i, c)]] = (pos[j], pos[i], float(v))
        kap_float.append((lev, pos, per_label))

    rng = np.random.default_rng(seed)

    worst_suff = 0.0
    for _ in range(draws):
        fvals = np.zeros(len(labels))
        for lev, pos, per_label in kap_float:
            s = len(lev.indices)
            a = rng.normal(size=(s, s))
            m = a @ a.T
            for lid, (pi, pj, kv) in per_label.items():
                fvals[lid] += m[pi, pj] * kv
        big = fvals[lab_of]
        eigs = np.linalg.eigvalsh(big)
        scale = max(1.0, float(eigs[-1]))
        worst_suff = min(worst_suff, float(eigs[0]) / scale)
        if eigs[0] < -eig_tol * scale:
            raise AssertionError(
                f"sufficiency failed: assembled function has eigenvalue {eigs[0]:.3e} "
                f"(scale {scale:.3e})")
    report["sufficiency_min_eig_ratio"] = worst_suff

    counts = np.bincount(lab_of.ravel(), minlength=len(labels))
    worst_fit = 0.0
    for _ in range(draws):
        # integer Gram matrices keep the whole fit in exact arithmetic
        b = rng.integers(-9, 10, size=(n_pts, max(2, n_pts // 3)))
        gram = (b @ b.T).astype(object)
        sums = np.zeros(len(labels), dtype=object)
        np.add.at(sums, lab_of.ravel(), gram.ravel())
        vals = {lab: Fraction(int(sums[t]), int(counts[t]))
                for t, lab in enumerate(labels)}
        blocks = fit_blocks_exact(kernel, vals)
        scale = float(np.abs(b @ b.T).max())
        for lev in kernel.levels:
            s = len(lev.indices)
            m = np.zeros((s, s))
            pos = {w: t for t, w in enumerate(lev.indices)}
            for (i, j), v in blocks[lev.k].items():
                m[pos[i], pos[j]] = float(v)
                m[pos[j], pos[i]] = float(v)
            low = float(np.linalg.eigvalsh(m)[0])
            worst_fit = min(worst_fit, low / scale)
            if low < -eig_tol * scale * n_pts:
                raise AssertionError(
                    f"completeness failed: fitted level {lev.k} has eigenvalue "
                    f"{low:.3e} (scale {scale:.3e})")
        # exact round trip: the fitted blocks must resynthesize the averages
        for (i, j, c), want in vals.items():
            if i > j:
                continue
            got = sum((blocks[lev.k].get((i, j), Fraction(0)) * lev.entries[(i, j, c)]
                       for lev in kernel.levels if (i, j, c) in lev.entries), Fraction(0))
            if got != want:
                raise AssertionError(f"fit round trip broke at label {(i, j, c)}")
    report["completeness_min_eig_ratio"] = worst_fit

    if run_theta:
        from . import bounds as _bounds

        d = theta_d if theta_d is not None else min(3, spec.n)
        sym = _bounds.reduced_theta_prime(spec, d)
        graph = distance_graph(spec, d)
        unsym = _bounds.unsymmetrized_theta_prime(spec, d, graph)
        rel = abs(sym - unsym) / max(1.0, abs(unsym))
        if rel > theta_tol:
            raise AssertionError(
                f"reduced positive theta {sym!r} differs from direct value {unsym!r} "
                f"(rel {rel:.2e}) at d={d}")
        report["theta_prime_reduced"] = sym
        report["theta_prime_direct"] = unsym
        report["theta_prime_rel_gap"] = rel
    return report
