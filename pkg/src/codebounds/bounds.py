"""Bound computations: LP and SDP upper bounds for code sizes.

Every bound here is an upper bound on the number of points one can pick
in a space subject to a separation constraint: classical distance-d
codes in Hamming balls and projective spaces, independent sets in
explicit graphs, and codes whose triples must be separated in a
three-point pseudo-distance.

The SDP paths certify their output: the float dual returned by the
interior-point solver is converted to an exactly feasible rational dual
point (slack repairs cost nothing because the repaired multipliers
belong to homogeneous constraints), positive semidefiniteness is proved
by exact LDL factorization, and any remaining eigenvalue defect eps is
charged to the bound as eps times an a priori trace bound. The reported
rational value is therefore a theorem, not a solver printout.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from .exactmath import binomial, krawtchouk
from .schemes import (Graph, SpaceSpec, distance_graph, label_pairwise_distinct,
                      orbit_pseudo_distance, pair_orbits, triple_label_class)
from .blockdiag import BlockKernel, build_kernel
from .solvers import SdpProblem, solve_lp_exact, solve_sdp

__all__ = [
    "BoundResult",
    "delsarte_lp_bound",
    "theta_bound",
    "ball_sdp_bound",
    "projective_sdp_bound",
    "triple_sdp_bound",
    "reduced_theta_prime",
    "unsymmetrized_theta_prime",
    "triple_translation_oracle",
    "delsarte_equivalence_gap",
]

GAP_WARN = 1e-6


@dataclass
class BoundResult:
    """Outcome of one bound computation.

    value/dual are solver floats; certified, when present, is an exact
    rational upper bound (as a string in records); bound is the integer
    floor actually usable as a code-size bound.
    """

    request: Dict[str, object]
    primal: float
    dual: float
    status: str
    bound: int
    certified: Optional[Fraction] = None
    wall_time_ms: float = 0.0
    kernel_cache_hit: bool = False
    warnings: List[str] = field(default_factory=list)

    @property
    def gap(self) -> float:
        return abs(self.primal - self.dual) / (1.0 + abs(self.primal) + abs(self.dual))

    def to_record(self) -> Dict[str, object]:
        return {
            "request": self.request,
            "primal": self.primal,
            "dual": self.dual,
            "gap": self.gap,
            "bound": self.bound,
            "status": self.status,
            "certified": None if self.certified is None else str(self.certified),
            "wall_time_ms": round(self.wall_time_ms, 3),
            "kernel_cache_hit": self.kernel_cache_hit,
            "warnings": self.warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record())


def _floor_bound(value) -> int:
    if isinstance(value, Fraction):
        return int(math.floor(value + Fraction(1, 100000)))
    return int(math.floor(value + 1e-5))


# ---------------------------------------------------------------------------
# Distance-distribution LP
# ---------------------------------------------------------------------------

def delsarte_lp_bound(n: int, d: int) -> BoundResult:
    """Exact LP bound on codes of length n, minimum distance d.

    Maximizes 1 + sum_{i>=d} y_i over distance distributions with
    nonnegative degree-k averages; solved in exact rational arithmetic,
    so `certified` is the true LP optimum.
    """
    if not (1 <= d <= n):
        raise ValueError("need 1 <= d <= n")
    t0 = time.perf_counter()
    idx = list(range(d, n + 1))
    c = [Fraction(1)] * len(idx)
    a_ub = [[-krawtchouk(n, k, i) for i in idx] for k in range(1, n + 1)]
    b_ub = [binomial(n, k) for k in range(1, n + 1)]
    sol = solve_lp_exact(c, a_ub=a_ub, b_ub=b_ub)
    if sol.status != "optimal":
        raise ArithmeticError(f"distance LP unexpectedly {sol.status}")
    value = 1 + sol.value
    ms = (time.perf_counter() - t0) * 1000
    return BoundResult(
        request={"kind": "delsarte", "n": n, "d": d},
        primal=float(value), dual=float(value), status="optimal",
        bound=_floor_bound(value), certified=value, wall_time_ms=ms)


# ---------------------------------------------------------------------------
# Lovász theta on explicit graphs
# ---------------------------------------------------------------------------

def _theta_problem(graph: Graph, prime: bool) -> Tuple[SdpProblem, List[Tuple[int, int]]]:
    p = SdpProblem()
    v = graph.vertices
    blk = p.add_block(v)
    for i in range(v):
        for j in range(i, v):
            p.set_objective(blk, i, j, 1.0)
    p.add_constraint(1.0, [(blk, i, i, 1.0) for i in range(v)])
    for (i, j) in graph.edges:
        p.add_constraint(0.0, [(blk, i, j, 1.0)])
    nonedges: List[Tuple[int, int]] = []
    if prime:
        es = set(graph.edges)
        nonedges = [(i, j) for i in range(v) for j in range(i + 1, v)
                    if (i, j) not in es]
        s0 = p.add_scalars(len(nonedges))
        for t, (i, j) in enumerate(nonedges):
            p.add_constraint(0.0, [(blk, i, j, 1.0), ("s", s0 + t, -1.0)])
    return p, nonedges


def theta_bound(graph: Graph, variant: str = "theta", *, tol: float = 1e-9) -> BoundResult:
    """Lovász theta ("theta") or its nonnegative refinement ("theta_prime").

    The certified value adds a float-level safety term: the exact dual
    slack matrix is recomputed from the multipliers and any negative
    eigenvalue (the primal has trace one, so the penalty is just |lam|)
    and any slack violation (primal entries are at most one) are charged
    to the bound.
    """
    if variant not in ("theta", "theta_prime"):
        raise ValueError(f"unknown variant {variant!r}")
    t0 = time.perf_counter()
    prob, nonedges = _theta_problem(graph, variant == "theta_prime")
    sol = solve_sdp(prob, tol=tol)
    warnings = []
    v = graph.vertices
    # rebuild the dual slack matrix S = A'(y) - C from scratch
    s = -np.ones((v, v))
    y = sol.y
    s += np.diag(np.full(v, y[0]))
    pos = 1
    for (i, j) in graph.edges:
        s[i, j] += y[pos] / 1.0
        s[j, i] += y[pos]
        pos += 1
    slack_violation = 0.0
    for (i, j) in nonedges:
        s[i, j] += y[pos]
        s[j, i] += y[pos]
        slack_violation += max(0.0, float(y[pos]))  # slot slack is -y
        pos += 1
    lam_min = float(np.linalg.eigvalsh((s + s.T) / 2)[0])
    # <J - S', B> reasoning: tr B = 1 covers the eigenvalue defect,
    # B entries in [0, 1] cover slack defects (2 per nonedge pair)
    safety = max(0.0, -lam_min) * 1.0000001 + 2.0 * slack_violation + 1e-12
    cert = float(sol.dual) + safety
    if sol.status != "optimal":
        warnings.append(f"solver status {sol.status}")
    if sol.rel_gap > GAP_WARN:
        warnings.append(f"duality gap {sol.rel_gap:.2e} above {GAP_WARN:.0e}")
    ms = (time.perf_counter() - t0) * 1000
    return BoundResult(
        request={"kind": variant, "vertices": v, "edges": len(graph.edges)},
        primal=sol.primal, dual=cert, status=sol.status,
        bound=_floor_bound(cert), certified=None, wall_time_ms=ms,
        warnings=warnings)


# ---------------------------------------------------------------------------
# Shared machinery for the reduced programs
# ---------------------------------------------------------------------------

@dataclass
class _LevelExact:
    k: int
    indices: Tuple[int, ...]
    # scaled exact coefficients kappa-hat[(p, q, c)] with p <= q
    kappa: Dict[Tuple[int, int, int], Fraction]
    scale: Dict[int, Fraction]  # power-of-two column scaling per index


@dataclass
class _SlotExact:
    obj: Fraction                      # objective coefficient
    lam_coeff: Fraction                # coefficient of the normalization dual
    members: List[Tuple[int, int, int]]  # labels (p, q, c) with p <= q


def _pow2_scale(x: float) -> Fraction:
    """2^-round(log2 sqrt x) as an exact fraction (1 for degenerate x)."""
    if not (x > 0) or not math.isfinite(x):
        return Fraction(1)
    e = int(round(math.log2(x) / 2))
    return Fraction(1, 2 ** e) if e >= 0 else Fraction(2 ** (-e))


def _solve_rows_exact(rows: List[List[Fraction]], rhs: List[Fraction],
                      ncols: int) -> List[Fraction]:
    """Any exact solution of a full-row-rank underdetermined system."""
    m = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols: List[int] = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        piv_cols.append(col)
        row += 1
        if row == m:
            break
    if row < m:
        for r in range(row, m):
            if aug[r][ncols] != 0:
                raise ArithmeticError("inconsistent correction system")
    x = [Fraction(0)] * ncols
    for r, col in enumerate(piv_cols):
        x[col] = aug[r][ncols]
    return x


def _psd_proof(mat: List[List[Fraction]]) -> bool:
    """Exact proof that a rational symmetric matrix is psd (LDL pivots)."""
    s = len(mat)
    a = [row[:] for row in mat]
    for i in range(s):
        piv = a[i][i]
        if piv < 0:
            return False
        if piv == 0:
            # psd with a zero pivot forces the whole residual row to vanish
            if any(a[i][j] != 0 for j in range(i + 1, s)):
                return False
            continue
        ai = a[i]
        for r in range(i + 1, s):
            f = a[r][i] / piv
            if f:
                ar = a[r]
                for c in range(i, s):
                    ar[c] -= f * ai[c]
    return True


def _certify_dual(levels: List[_LevelExact], slots: List[_SlotExact],
                  x_float: Dict[int, np.ndarray], lam: Fraction,
                  var_bound: Fraction,
                  protect: Set[Tuple[int, int]] = frozenset()
                  ) -> Dict[str, object]:
    """Turn a float dual point into an exactly feasible rational one.

    x_float[k] is the solver's dual slack block for level k (already
    approximately psd). Slack violations are repaired by exact
    per-weight-pair corrections that leave every other slack and the
    objective untouched; psd is then proved by exact LDL, with any
    residual eigenvalue defect eps charged as eps * trace bound.
    Returns penalty (Fraction), corrected blocks, and diagnostics.
    """
    # exact rational copies of the dual blocks
    x: Dict[int, Dict[Tuple[int, int], Fraction]] = {}
    for lev in levels:
        blk = {}
        arr = x_float[lev.k]
        for pi, p in enumerate(lev.indices):
            for qi, q in enumerate(lev.indices[pi:], start=pi):
                blk[(p, lev.indices[qi])] = Fraction(float(arr[pi, qi]))
        x[lev.k] = blk

    def vee(p: int, q: int, c: int) -> Fraction:
        tot = Fraction(0)
        for lev in levels:
            kap = lev.kappa.get((p, q, c))
            if kap is not None:
                w = Fraction(1) if p == q else Fraction(2)
                tot += kap * w * x[lev.k][(p, q)]
        return tot

    def slack_of(s: _SlotExact) -> Fraction:
        return s.lam_coeff * lam - s.obj - sum((vee(*mem) for mem in s.members),
                                               Fraction(0))

    # one repair pass: collect violations, fix each at one member pair
    fixes = 0
    targets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    slot_at: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for si, s in enumerate(slots):
        for mi, (p, q, c) in enumerate(s.members):
            slot_at.setdefault((p, q), []).append((si, mi))
    slacks = [slack_of(s) for s in slots]
    for si, s in enumerate(slots):
        if slacks[si] >= 0:
            continue
        mem = next(((p, q, c) for (p, q, c) in s.members if (p, q) not in protect),
                   None)
        if mem is None:
            raise ArithmeticError("slack violation with only protected members")
        p, q, c = mem
        dd = targets.setdefault((p, q), {})
        dd[c] = dd.get(c, Fraction(0)) + slacks[si]
        fixes += 1

    for (p, q), deltas in targets.items():
        # rows: every label (p,q,c) that occurs in some slot must keep or hit
        # its prescribed change; labels with no slot are unconstrained
        cs = sorted({slots[si].members[mi][2] for (si, mi) in slot_at[(p, q)]})
        lev_list = [lev for lev in levels
                    if any((p, q, c) in lev.kappa for c in cs)]
        w = Fraction(1) if p == q else Fraction(2)
        rows = [[lev.kappa.get((p, q, c), Fraction(0)) * w for lev in lev_list]
                for c in cs]
        rhs = [deltas.get(c, Fraction(0)) for c in cs]
        sol = _solve_rows_exact(rows, rhs, len(lev_list))
        for lev, dx in zip(lev_list, sol):
            if dx:
                x[lev.k][(p, q)] += dx

    # verify all slacks are now exactly nonnegative
    for si, s in enumerate(slots):
        sl = slack_of(s)
        if sl < 0:
            raise ArithmeticError(f"slack {si} still negative after repair: {sl}")

    # exact psd proof per level block, with eps relaxation fallback
    penalty = Fraction(0)
    eps_used: Dict[int, Fraction] = {}
    for lev in levels:
        sz = len(lev.indices)
        mat = [[Fraction(0)] * sz for _ in range(sz)]
        for pi, p in enumerate(lev.indices):
            for qi in range(pi, sz):
                q = lev.indices[qi]
                mat[pi][qi] = x[lev.k][(p, q)]
                mat[qi][pi] = x[lev.k][(p, q)]
        if _psd_proof(mat):
            continue
        flo = np.array([[float(v) for v in row] for row in mat])
        lam_min = float(np.linalg.eigvalsh(flo)[0])
        eps = Fraction(2 * max(0.0, -lam_min) + 2.0 ** -40)
        ok = False
        for _ in range(6):
            trial = [row[:] for row in mat]
            for i in range(sz):
                trial[i][i] += eps
            if _psd_proof(trial):
                ok = True
                break
            eps *= 16
        if not ok:
            raise ArithmeticError(f"level {lev.k}: psd proof failed")
        eps_used[lev.k] = eps
        trace_bound = var_bound * sum(
            (abs(lev.kappa.get((p, p, c), Fraction(0)))
             for p in lev.indices for c in range(0, p + 1)), Fraction(0))
        penalty += eps * trace_bound
    return {"penalty": penalty, "x": x, "fixes": fixes, "eps": eps_used}


# ---------------------------------------------------------------------------
# Reduced positive-theta program on Hamming balls and projective spaces
# ---------------------------------------------------------------------------

def _pair_program(spec: SpaceSpec, d: int, kernel: BlockKernel):
    """Build the symmetry-reduced program and its exact mirror.

    Variables are z_o = w_o sigma_o y_o per kept unordered pair orbit
    (w doubles off-diagonal labels), so the objective is sum z and the
    normalization is sum of diagonal z equal to one. Level blocks are
    tied to the slots through the exact kernel coefficients, rescaled
    by powers of two for float conditioning.
    """
    n = spec.n
    orbits = {(o.a, o.b, o.c): o for o in pair_orbits(spec) if o.a <= o.b}
    kept = [lab for lab, o in sorted(orbits.items()) if o.dist == 0 or o.dist >= d]
    slot_id = {lab: t for t, lab in enumerate(kept)}

    # blocks eat one-orientation orbit masses: M_k[p,q] = sum_c kappa * z / w
    levels_exact: List[_LevelExact] = []
    for lev in kernel.levels:
        sc = {p: _pow2_scale(max(abs(float(lev.entries[(p, p, c)]))
                                 for c in range(max(0, 2 * p - n), p + 1)))
              for p in lev.indices}
        kap = {}
        for (p, q, c), v in lev.entries.items():
            w = Fraction(1) if p == q else Fraction(2)
            kap[(p, q, c)] = sc[p] * sc[q] * v / w
        levels_exact.append(_LevelExact(lev.k, lev.indices, kap, sc))

    prob = SdpProblem()
    block_of = {}
    for lev in kernel.levels:
        block_of[lev.k] = prob.add_block(len(lev.indices))
    s0 = prob.add_scalars(len(kept))
    for lab in kept:
        prob.set_objective_scalar(s0 + slot_id[lab], 1.0)
    prob.add_constraint(1.0, [("s", s0 + slot_id[lab], 1.0)
                              for lab in kept if lab[0] == lab[1] == lab[2]])
    tie_index: Dict[Tuple[int, int, int], int] = {}
    for le in levels_exact:
        pos = {w: t for t, w in enumerate(le.indices)}
        for pi, p in enumerate(le.indices):
            for q in le.indices[pi:]:
                entries = [(block_of[le.k], pos[p], pos[q], 1.0 if p == q else 0.5)]
                for c in range(max(0, p + q - n), min(p, q) + 1):
                    lab = (p, q, c)
                    if lab in slot_id:
                        entries.append(("s", s0 + slot_id[lab],
                                        -float(le.kappa[lab])))
                cid = prob.add_constraint(0.0, entries)
                tie_index[(le.k, p, q)] = cid

    slots = []
    for lab in kept:
        a, b, c = lab
        slots.append(_SlotExact(
            obj=Fraction(1),
            lam_coeff=Fraction(1) if a == b == c else Fraction(0),
            members=[lab]))
    return prob, levels_exact, slots, tie_index, kept


def _solve_pair_program(spec: SpaceSpec, d: int, *, tol: float,
                        cache_dir: Optional[str], request: Dict[str, object]
                        ) -> BoundResult:
    t0 = time.perf_counter()
    kernel, hit = build_kernel(spec, cache_dir)
    prob, levels_exact, slots, tie_index, kept = _pair_program(spec, d, kernel)
    sol = solve_sdp(prob, tol=tol)
    warnings = []
    if sol.status != "optimal":
        warnings.append(f"solver status {sol.status}")
    certified = None
    try:
        x_float = {lev.k: sol.s_blocks[bi]
                   for bi, lev in enumerate(kernel.levels)}
        lam = Fraction(float(sol.y[0]))  # normalization is constraint 0
        rep = _certify_dual(levels_exact, slots, x_float, lam,
                            var_bound=Fraction(spec.point_count()))
        certified = lam + rep["penalty"]
        if rep["eps"]:
            warnings.append(f"psd relaxation used on levels {sorted(rep['eps'])}")
    except ArithmeticError as exc:
        warnings.append(f"certification failed: {exc}")
    if sol.rel_gap > GAP_WARN:
        warnings.append(f"duality gap {sol.rel_gap:.2e} above {GAP_WARN:.0e}")
    ms = (time.perf_counter() - t0) * 1000
    bound = _floor_bound(certified) if certified is not None else _floor_bound(sol.dual)
    return BoundResult(request=request, primal=sol.primal, dual=sol.dual,
                       status=sol.status, bound=bound, certified=certified,
                       wall_time_ms=ms, kernel_cache_hit=hit, warnings=warnings)


def ball_sdp_bound(n: int, d: int, weight_set: Optional[Iterable[int]] = None, *,
                   tol: float = 1e-8, cache_dir: Optional[str] = None) -> BoundResult:
    """Certified SDP bound for distance-d codes in a Hamming ball."""
    spec = SpaceSpec.hamming(n, weight_set)
    request = {"kind": "ball", "n": n, "d": d,
               "weight_set": list(spec.weight_set)}
    return _solve_pair_program(spec, d, tol=tol, cache_dir=cache_dir,
                               request=request)


def projective_sdp_bound(n: int, q: int, d: int, *, tol: float = 1e-8,
                         cache_dir: Optional[str] = None) -> BoundResult:
    """Certified SDP bound for subspace codes at injection distance d."""
    spec = SpaceSpec.projective(n, q)
    request = {"kind": "projective", "n": n, "q": q, "d": d}
    return _solve_pair_program(spec, d, tol=tol, cache_dir=cache_dir,
                               request=request)


def reduced_theta_prime(spec: SpaceSpec, d: int, *, tol: float = 1e-8) -> float:
    """Float value of the reduced program (used for cross-validation)."""
    kernel, _ = build_kernel(spec)
    prob, *_ = _pair_program(spec, d, kernel)
    sol = solve_sdp(prob, tol=tol)
    if sol.status != "optimal" and not (sol.rel_gap < 1e-6 and
                                        sol.primal_infeas < 1e-5):
        raise ArithmeticError(f"reduced program: {sol.status}")
    return float(sol.dual)


# ---------------------------------------------------------------------------
# Unsymmetrized oracles
# ---------------------------------------------------------------------------

def unsymmetrized_theta_prime(spec: SpaceSpec, d: int,
                              graph: Optional[Graph] = None, *,
                              tol: float = 1e-8) -> float:
    """theta' of the distance graph without using the orbit reduction.

    Small spaces are handled by the dense SDP directly. Full Hamming
    cubes with 2^n up to 256 use the translation-only reduction: an LP
    over a function beta on the cube with nonnegative Fourier transform,
    which needs only the abelian character basis.
    """
    if graph is None:
        graph = distance_graph(spec, d)
    full_cube = (spec.kind == "hamming_ball"
                 and spec.weight_set == tuple(range(spec.n + 1)))
    if graph.vertices <= 80:
        sol = solve_sdp(_theta_problem(graph, True)[0], tol=tol)
        if sol.status != "optimal" and not (sol.rel_gap < 1e-6 and
                                            sol.primal_infeas < 1e-5):
            raise ArithmeticError(f"direct program: {sol.status}")
        return float(sol.dual)
    if full_cube and spec.n <= 8:
        return _translation_theta_prime(spec.n, d)
    raise ValueError("space too large for the unsymmetrized oracle")


def _translation_theta_prime(n: int, d: int) -> float:
    """LP value of theta' on the Hamming distance graph via translations.

    Averaging an optimal matrix over translations x -> x + t makes it a
    convolution kernel B[x, y] = beta(x xor y); psd then means the
    Fourier transform of beta is nonnegative. Everything stays indexed
    by single words, no weight symmetry is used.
    """
    from scipy.optimize import linprog

    words = [z for z in range(1 << n)
             if z == 0 or bin(z).count("1") >= d]
    nv = len(words)
    # maximize 2^n sum beta  <=>  minimize -sum beta
    c = -np.ones(nv)
    a_ub = np.empty((1 << n, nv))
    for s in range(1 << n):
        for t, z in enumerate(words):
            a_ub[s, t] = -(-1.0) ** bin(s & z).count("1")  # -hat(beta)(s) <= 0
    b_ub = np.zeros(1 << n)
    a_eq = np.zeros((1, nv))
    a_eq[0, 0] = 1.0
    b_eq = np.array([2.0 ** -n])
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * nv, method="highs")
    if not res.success:
        raise ArithmeticError(f"translation LP failed: {res.message}")
    # sanity: residuals of the reported optimum (A_ub x <= 0 and the pin)
    beta = res.x
    if float(np.max(a_ub @ beta)) > 1e-9 or abs(beta[0] - 2.0 ** -n) > 1e-12 \
            or float(np.min(beta)) < -1e-12:
        raise ArithmeticError("translation LP returned an infeasible point")
    return float(2.0 ** n * np.sum(beta))


def delsarte_equivalence_gap(n: int, d: int, *, tol: float = 1e-9) -> float:
    """Relative gap between the distance LP and the reduced program."""
    lp = delsarte_lp_bound(n, d)
    sdp = reduced_theta_prime(SpaceSpec.hamming(n), d, tol=tol)
    lpv = float(lp.certified)
    return abs(lpv - sdp) / max(1.0, lpv)


# ---------------------------------------------------------------------------
# Triple-point program
# ---------------------------------------------------------------------------

def _triple_classes(n: int):
    """Canonical classes of triple labels: {canonical: sorted members}."""
    classes: Dict[Tuple[int, int, int], List[Tuple[int, int, int]]] = {}
    seen = set()
    for a in range(n + 1):
        for b in range(n + 1):
            for c in range(max(0, a + b - n), min(a, b) + 1):
                lab = (a, b, c)
                if lab in seen:
                    continue
                cls = triple_label_class(lab, n)
                seen |= cls
                classes[min(cls)] = sorted(cls)
    return classes


def _triple_program(n: int, f: str, m: Fraction,
                    cache_dir: Optional[str] = None):
    """Reduced program bounding codes whose distinct triples have f >= m.

    Variables mu are 2^n times the moments of the code's triple
    distribution, one per label class; mu of the empty-overlap class is
    one by normalization, classes of genuinely three distinct points
    with pseudo-distance below m are forced to zero, and the level
    blocks assembled from the pair kernel must be psd. The objective is
    1 + sum binom(n, a) mu over the classes of repeated-point labels.
    """
    spec = SpaceSpec.hamming(n)
    kernel, hit = build_kernel(spec, cache_dir)
    classes = _triple_classes(n)
    label_class: Dict[Tuple[int, int, int], Tuple[int, int, int]] = {}
    for canon, members in classes.items():
        for lab in members:
            label_class[lab] = canon

    fixed = (0, 0, 0)
    forced: Set[Tuple[int, int, int]] = set()
    for canon, members in classes.items():
        if canon == fixed:
            continue
        if label_pairwise_distinct(canon) and \
                Fraction(orbit_pseudo_distance(f, canon, n)) < m:
            forced.add(canon)

    slot_classes = [canon for canon in sorted(classes)
                    if canon != fixed and canon not in forced]
    slot_id = {canon: t for t, canon in enumerate(slot_classes)}
    obj_coeff = {label_class[(a, 0, 0)]: binomial(n, a) for a in range(1, n + 1)}

    # blocks eat one-orientation pair-orbit masses of the triple moments:
    # M_k[p,q] = sum_c kappa * sigma_pair * mu(class)
    sizes = {(o.a, o.b, o.c): o.size for o in pair_orbits(spec) if o.a <= o.b}
    levels_exact: List[_LevelExact] = []
    for lev in kernel.levels:
        sc = {p: _pow2_scale(max(abs(float(lev.entries[(p, p, c)] *
                                           sizes[(p, p, c)]))
                                 for c in range(max(0, 2 * p - n), p + 1)))
              for p in lev.indices}
        kap = {key: sc[key[0]] * sc[key[1]] * v * sizes[key]
               for key, v in lev.entries.items()}
        levels_exact.append(_LevelExact(lev.k, lev.indices, kap, sc))

    prob = SdpProblem()
    block_of = {lev.k: prob.add_block(len(lev.indices)) for lev in kernel.levels}
    s0 = prob.add_scalars(len(slot_classes))
    for canon, coeff in obj_coeff.items():
        if canon in slot_id:
            prob.set_objective_scalar(s0 + slot_id[canon], float(coeff))

    for le in levels_exact:
        pos = {w: t for t, w in enumerate(le.indices)}
        for pi, p in enumerate(le.indices):
            for q in le.indices[pi:]:
                entries = [(block_of[le.k], pos[p], pos[q], 1.0 if p == q else 0.5)]
                rhs = Fraction(0)
                acc: Dict[int, float] = {}
                for c in range(max(0, p + q - n), min(p, q) + 1):
                    canon = label_class[(p, q, c)]
                    if canon == fixed:
                        rhs += le.kappa[(p, q, c)]  # times mu = 1
                    elif canon in forced:
                        continue
                    else:
                        sid = s0 + slot_id[canon]
                        acc[sid] = acc.get(sid, 0.0) - float(le.kappa[(p, q, c)])
                entries.extend(("s", sid, v) for sid, v in acc.items())
                prob.add_constraint(float(rhs), entries)

    slots = []
    for canon in slot_classes:
        members = [lab for lab in classes[canon] if lab[0] <= lab[1]]
        slots.append(_SlotExact(
            obj=Fraction(obj_coeff.get(canon, 0)),
            lam_coeff=Fraction(0),
            members=members))
    return prob, levels_exact, slots, kernel, hit


def triple_sdp_bound(n: int, f: str, m, *, tol: float = 1e-8,
                     cache_dir: Optional[str] = None) -> BoundResult:
    """Certified bound for codes whose distinct triples have f at least m.

    f is "ghd", "radial" or "avg_radial"; m may be fractional for
    "avg_radial". A vacuous threshold (m below every achievable value)
    yields exactly 2^n.
    """
    if f not in ("ghd", "radial", "avg_radial"):
        raise ValueError(f"unknown pseudo-distance {f!r}")
    t0 = time.perf_counter()
    m = Fraction(m)
    prob, levels_exact, slots, kernel, hit = _triple_program(n, f, m, cache_dir)
    sol = solve_sdp(prob, tol=tol)
    warnings = []
    if sol.status != "optimal":
        warnings.append(f"solver status {sol.status}")
    certified = None
    try:
        x_float = {lev.k: sol.s_blocks[bi]
                   for bi, lev in enumerate(kernel.levels)}
        rep = _certify_dual(levels_exact, slots, x_float, Fraction(0),
                            var_bound=Fraction(1), protect={(0, 0)})
        # dual objective: rhs times multipliers, exactly
        base = Fraction(0)
        lev0 = levels_exact[0]
        base += lev0.kappa[(0, 0, 0)] * rep["x"][0][(0, 0)]
        certified = 1 + base + rep["penalty"]
        if rep["eps"]:
            warnings.append(f"psd relaxation used on levels {sorted(rep['eps'])}")
    except ArithmeticError as exc:
        warnings.append(f"certification failed: {exc}")
    if sol.rel_gap > GAP_WARN:
        warnings.append(f"duality gap {sol.rel_gap:.2e} above {GAP_WARN:.0e}")
    ms = (time.perf_counter() - t0) * 1000
    value = float(certified) if certified is not None else sol.dual + 1.0
    bound = _floor_bound(certified) if certified is not None \
        else _floor_bound(sol.dual + 1.0)
    return BoundResult(
        request={"kind": "triple", "n": n, "f": f, "m": str(m)},
        primal=sol.primal + 1.0, dual=value, status=sol.status, bound=bound,
        certified=certified, wall_time_ms=ms, kernel_cache_hit=hit,
        warnings=warnings)


def triple_translation_oracle(n: int, f: str, m, *, tol: float = 1e-8) -> float:
    """Triple bound reduced only under translations (validation oracle).

    One dense psd block M[x, y] = mu(set {x, y, 0}) over all words,
    avoiding the orbit kernels entirely; agrees with the fully reduced
    value because further symmetrization preserves feasibility.
    """
    from .schemes import avg_radial, ghd, radial
    fdist = {"ghd": ghd, "radial": radial, "avg_radial": avg_radial}[f]
    m = Fraction(m)
    size = 1 << n

    def canon_set(words: Tuple[int, ...]) -> Tuple[int, ...]:
        best = None
        for t in words:
            shifted = tuple(sorted(w ^ t for w in words))
            if best is None or shifted < best:
                best = shifted
        return best

    var_id: Dict[Tuple[int, ...], int] = {}
    reps: List[Tuple[int, ...]] = []
    for x in range(size):
        for y in range(x, size):
            key = canon_set(tuple(sorted({x, y, 0})))
            if key not in var_id:
                var_id[key] = len(reps)
                reps.append(key)

    forced = np.zeros(len(reps), dtype=bool)
    for key, vid in var_id.items():
        if len(key) == 3 and Fraction(fdist(key, n)) < m:
            forced[vid] = True

    prob = SdpProblem()
    blk = prob.add_block(size)
    s0 = prob.add_scalars(len(reps))
    fixed_key = (0,)
    for x in range(size):
        for y in range(x, size):
            key = canon_set(tuple(sorted({x, y, 0})))
            vid = var_id[key]
            entries = [(blk, x, y, 1.0 if x == y else 0.5)]
            if key == fixed_key:
                prob.add_constraint(1.0, entries)        # mu of {0} block entry
            elif forced[vid]:
                prob.add_constraint(0.0, entries)
            else:
                prob.add_constraint(0.0, entries + [("s", s0 + vid, -1.0)])
    # objective: 1 + sum over singleton-pair classes; the class of {0, x}
    # with |x| = a collects binom(n, a) labels, each variable counted once
    coeff = np.zeros(len(reps))
    for x in range(1, size):
        key = canon_set((0, x))
        coeff[var_id[key]] += 1.0
    for vid, v in enumerate(coeff):
        if v and not forced[vid]:
            prob.set_objective_scalar(s0 + vid, float(v))
    sol = solve_sdp(prob, tol=tol)
    if sol.status != "optimal" and not (sol.rel_gap < 1e-6 and
                                        sol.primal_infeas < 1e-5):
        raise ArithmeticError(f"translation triple program: {sol.status}")
    return 1.0 + float(sol.dual)
