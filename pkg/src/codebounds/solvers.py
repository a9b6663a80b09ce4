"""Optimization back ends: an exact rational simplex and a dense SDP solver.

The LP path runs entirely over fractions.Fraction so optimal values and
dual certificates are exact. The SDP path is a standard primal-dual
interior-point method (predictor-corrector, infeasible start) on
problems whose variable is a direct sum of dense symmetric blocks and
nonnegative scalar slots:

    (P)  max <C, Z>   s.t.  <A_i, Z> = b_i,  Z psd
    (D)  min b'y      s.t.  S = sum_i y_i A_i - C  psd

Off-diagonal coefficients are stored once; an entry (r, c, v) with
r != c means A[r,c] = A[c,r] = v, so it contributes 2*v*Z[r,c] to the
inner product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

__all__ = [
    "LpSolution",
    "solve_lp_exact",
    "SdpProblem",
    "SdpSolution",
    "solve_sdp",
    "psd_check",
]


# ---------------------------------------------------------------------------
# Exact LP: two-phase simplex with Bland's rule
# ---------------------------------------------------------------------------

@dataclass
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction
    x: List[Fraction]
    dual_ub: List[Fraction]
    dual_eq: List[Fraction]


def _pivot(tab: List[List[Fraction]], basis: List[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    for r in range(len(tab)):
        if r != row and tab[r][col] != 0:
            f = tab[r][col]
            tab[r] = [a - f * b for a, b in zip(tab[r], tab[row])]
    basis[row] = col


def _simplex_phase(tab: List[List[Fraction]], basis: List[int], cost: List[Fraction],
                   allowed: Sequence[bool]) -> Tuple[str, List[Fraction]]:
    """Minimize cost'x on the tableau in place; returns (status, reduced costs)."""
    m = len(tab)
    width = len(tab[0])
    while True:
        # reduced costs r_j = c_j - c_B' B^-1 A_j, computed from the tableau
        cb = [cost[basis[r]] for r in range(m)]
        red = list(cost)
        for r in range(m):
            if cb[r] != 0:
                red = [rj - cb[r] * arj for rj, arj in zip(red, tab[r])]
        enter = next((j for j in range(width - 1) if allowed[j] and red[j] < 0), None)
        if enter is None:
            return "optimal", red
        leave, best = None, None
        for r in range(m):
            if tab[r][enter] > 0:
                ratio = tab[r][-1] / tab[r][enter]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    leave, best = r, ratio
        if leave is None:
            return "unbounded", red
        _pivot(tab, basis, leave, enter)


def solve_lp_exact(c: Sequence[Fraction],
                   a_ub: Sequence[Sequence[Fraction]] = (),
                   b_ub: Sequence[Fraction] = (),
                   a_eq: Sequence[Sequence[Fraction]] = (),
                   b_eq: Sequence[Fraction] = ()) -> LpSolution:
    """Maximize c'x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0.

    All data must be Fraction-convertible; the result is exact. Dual
    vectors satisfy strong duality and are verified before returning.
    """
    c = [Fraction(v) for v in c]
    n = len(c)
    rows: List[List[Fraction]] = []
    kinds: List[str] = []
    rhs: List[Fraction] = []
    for row, b in zip(a_ub, b_ub):
        rows.append([Fraction(v) for v in row])
        kinds.append("ub")
        rhs.append(Fraction(b))
    for row, b in zip(a_eq, b_eq):
        rows.append([Fraction(v) for v in row])
        kinds.append("eq")
        rhs.append(Fraction(b))
    m = len(rows)
    if m == 0:
        if any(v > 0 for v in c):
            return LpSolution("unbounded", Fraction(0), [], [], [])
        return LpSolution("optimal", Fraction(0), [Fraction(0)] * n, [], [])

    # columns: x (n) | slack per ub row | artificial per row needing one
    n_slack = sum(1 for k in kinds if k == "ub")
    slack_of: Dict[int, int] = {}
    s = 0
    for r, k in enumerate(kinds):
        if k == "ub":
            slack_of[r] = n + s
            s += 1
    art_of: Dict[int, int] = {}
    total = n + n_slack
    tab: List[List[Fraction]] = []
    basis: List[int] = []
    for r in range(m):
        row = rows[r] + [Fraction(0)] * n_slack
        b = rhs[r]
        if r in slack_of:
            row[slack_of[r]] = Fraction(1)
        if b < 0:
            row = [-v for v in row]
            b = -b
            if r in slack_of:
                pass  # slack coefficient flipped to -1; needs an artificial
        needs_art = True
        if r in slack_of and row[slack_of[r]] == 1:
            basis.append(slack_of[r])
            needs_art = False
        if needs_art:
            art_of[r] = total
            total += 1
            basis.append(art_of[r])
        tab.append(row + [b])
    width = total + 1
    for r in range(m):
        row = tab[r]
        pad = [Fraction(0)] * (width - len(row))
        tab[r] = row[:-1] + pad + [row[-1]]
        if r in art_of:
            tab[r][art_of[r]] = Fraction(1)

    zero = Fraction(0)
    if art_of:
        cost1 = [zero] * width
        for a in art_of.values():
            cost1[a] = Fraction(1)
        allowed = [True] * (width - 1)
        status, _ = _simplex_phase(tab, basis, cost1, allowed)
        phase1 = sum((cost1[basis[r]] * tab[r][-1] for r in range(m)), zero)
        if phase1 > 0:
            return LpSolution("infeasible", zero, [], [], [])
        # drive any basic artificial out (degenerate rows) or it stays at 0
        for r in range(m):
            if basis[r] in set(art_of.values()):
                enter = next((j for j in range(n + n_slack) if tab[r][j] != 0), None)
                if enter is not None:
                    _pivot(tab, basis, r, enter)

    cost2 = [zero] * width
    for j in range(n):
        cost2[j] = -c[j]  # minimize -c'x
    allowed = [True] * (width - 1)
    for a in art_of.values():
        allowed[a] = False
    status, red = _simplex_phase(tab, basis, cost2, allowed)
    if status == "unbounded":
        return LpSolution("unbounded", zero, [], [], [])

    x = [zero] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = tab[r][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), zero)

    # duals: y_r is the reduced cost at the unit column of row r, negated
    # back to the maximization sign convention; rows that were scaled by
    # -1 (negative rhs) flip once more
    duals = [zero] * m
    for r in range(m):
        col = slack_of.get(r, art_of.get(r))
        sign = Fraction(1)
        if rhs[r] < 0:
            sign = Fraction(-1)
        duals[r] = sign * red[col]
    dual_ub = [duals[r] for r in range(m) if kinds[r] == "ub"]
    dual_eq = [duals[r] for r in range(m) if kinds[r] == "eq"]

    _verify_lp(c, rows, kinds, rhs, x, duals, value)
    return LpSolution("optimal", value, x, dual_ub, dual_eq)


def _verify_lp(c, rows, kinds, rhs, x, duals, value) -> None:
    zero = Fraction(0)
    for row, kind, b in zip(rows, kinds, rhs):
        lhs = sum((a * xi for a, xi in zip(row, x)), zero)
        if kind == "ub" and lhs > b:
            raise AssertionError("lp: primal ub constraint violated")
        if kind == "eq" and lhs != b:
            raise AssertionError("lp: primal eq constraint violated")
    if any(xi < 0 for xi in x):
        raise AssertionError("lp: negative variable")
    for r, kind in enumerate(kinds):
        if kind == "ub" and duals[r] < 0:
            raise AssertionError("lp: negative ub dual")
    for j in range(len(c)):
        cover = sum((duals[r] * rows[r][j] for r in range(len(rows))), zero)
        if cover < c[j]:
            raise AssertionError("lp: dual constraint violated")
    dual_val = sum((duals[r] * rhs[r] for r in range(len(rows))), zero)
    if dual_val != value:
        raise AssertionError("lp: duality gap nonzero")


# ---------------------------------------------------------------------------
# SDP problem container
# ---------------------------------------------------------------------------

class SdpProblem:
    """Equality-form SDP over symmetric blocks plus nonnegative scalars.

    Build incrementally: add blocks and scalar slots, set objective
    entries, then add constraints as (rhs, entries) where each entry is
    (block, r, c, v) for a block coefficient or ("s", idx, v) for a
    scalar slot coefficient.
    """

    def __init__(self) -> None:
        self.block_sizes: List[int] = []
        self.num_scalars = 0
        self._obj_blocks: List[Dict[Tuple[int, int], float]] = []
        self._obj_scalars: Dict[int, float] = {}
        self._constraints: List[Tuple[float, List[tuple]]] = []

    def add_block(self, size: int) -> int:
        self.block_sizes.append(size)
        self._obj_blocks.append({})
        return len(self.block_sizes) - 1

    def add_scalars(self, count: int) -> int:
        """Returns the index of the first new slot."""
        first = self.num_scalars
        self.num_scalars += count
        return first

    def set_objective(self, block: int, r: int, c: int, v: float) -> None:
        self._obj_blocks[block][(min(r, c), max(r, c))] = float(v)

    def set_objective_scalar(self, idx: int, v: float) -> None:
        self._obj_scalars[idx] = float(v)

    def add_constraint(self, rhs: float, entries: List[tuple]) -> int:
        self._constraints.append((float(rhs), entries))
        return len(self._constraints) - 1

    # -- frozen numeric form ------------------------------------------------

    def freeze(self) -> "_FrozenSdp":
        m = len(self._constraints)
        b = np.array([rhs for rhs, _ in self._constraints])
        c_blocks = []
        for size, obj in zip(self.block_sizes, self._obj_blocks):
            mat = np.zeros((size, size))
            for (r, c), v in obj.items():
                mat[r, c] = v
                mat[c, r] = v
            c_blocks.append(mat)
        c_scalars = np.zeros(self.num_scalars)
        for idx, v in self._obj_scalars.items():
            c_scalars[idx] = v

        per_block = []
        for bi, size in enumerate(self.block_sizes):
            cid, rr, cc, vv = [], [], [], []
            for i, (_, entries) in enumerate(self._constraints):
                for ent in entries:
                    if ent[0] == "s" or ent[0] != bi:
                        continue
                    _, r, c, v = ent
                    if r == c:
                        cid.append(i); rr.append(r); cc.append(c); vv.append(v)
                    else:
                        cid.append(i); rr.append(r); cc.append(c); vv.append(v)
                        cid.append(i); rr.append(c); cc.append(r); vv.append(v)
            per_block.append((np.array(cid, dtype=np.int64),
                              np.array(rr, dtype=np.int64),
                              np.array(cc, dtype=np.int64),
                              np.array(vv, dtype=float)))
        srow, scol, sval = [], [], []
        for i, (_, entries) in enumerate(self._constraints):
            for ent in entries:
                if ent[0] == "s":
                    _, idx, v = ent
                    srow.append(i); scol.append(idx); sval.append(v)
        vmat = sp.csr_matrix((sval, (srow, scol)), shape=(m, max(self.num_scalars, 1)))
        return _FrozenSdp(self.block_sizes, self.num_scalars, b, c_blocks, c_scalars,
                          per_block, vmat)


@dataclass
class _FrozenSdp:
    block_sizes: List[int]
    num_scalars: int
    b: np.ndarray
    c_blocks: List[np.ndarray]
    c_scalars: np.ndarray
    per_block: List[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]
    vmat: sp.csr_matrix

    def apply_a(self, xb: List[np.ndarray], xs: np.ndarray) -> np.ndarray:
        m = len(self.b)
        out = np.zeros(m)
        for (cid, rr, cc, vv), x in zip(self.per_block, xb):
            if len(cid):
                np.add.at(out, cid, vv * x[rr, cc])
        if self.num_scalars:
            out += self.vmat @ xs
        return out

    def apply_at(self, y: np.ndarray) -> Tuple[List[np.ndarray], np.ndarray]:
        outb = []
        for size, (cid, rr, cc, vv) in zip(self.block_sizes, self.per_block):
            mat = np.zeros((size, size))
            if len(cid):
                np.add.at(mat, (rr, cc), vv * y[cid])
            outb.append(mat)
        outs = self.vmat.T @ y if self.num_scalars else np.zeros(0)
        return outb, outs


@dataclass
class SdpSolution:
    status: str  # "optimal" | "max_iterations" | "numerical_failure"
    primal: float
    dual: float
    x_blocks: List[np.ndarray]
    x_scalars: np.ndarray
    y: np.ndarray
    s_blocks: List[np.ndarray]
    s_scalars: np.ndarray
    iterations: int
    rel_gap: float
    primal_infeas: float
    dual_infeas: float


def psd_check(mat: np.ndarray, tol: float = 1e-9) -> bool:
    if mat.size == 0:
        return True
    w = np.linalg.eigvalsh((mat + mat.T) / 2)
    return bool(w[0] >= -tol * max(1.0, float(w[-1])))


def _min_eig_step(xb: np.ndarray, dxb: np.ndarray) -> float:
    """Largest t with xb + t*dxb psd, assuming xb is pd (inf -> 1e20)."""
    if xb.size == 0:
        return 1e20
    try:
        low = np.linalg.cholesky(xb)
        w = sla.solve_triangular(low, dxb, lower=True)
        w = sla.solve_triangular(low, w.T, lower=True)
        lam = np.linalg.eigvalsh((w + w.T) / 2)[0]
    except np.linalg.LinAlgError:
        wx = np.linalg.eigvalsh(xb)
        if wx[0] <= 0:
            return 0.0
        return _min_eig_step(xb + 1e-14 * np.eye(len(xb)), dxb)
    if lam >= -1e-16:
        return 1e20
    return -1.0 / lam


def solve_sdp(problem: SdpProblem, *, tol: float = 1e-9, max_iter: int = 120,
              verbose: bool = False) -> SdpSolution:
    """Primal-dual predictor-corrector interior-point solve."""
    fz = problem.freeze()
    m = len(fz.b)
    sizes = fz.block_sizes
    nu = sum(sizes) + fz.num_scalars
    if nu == 0 or m == 0:
        raise ValueError("empty problem")

    bnorm = float(np.linalg.norm(fz.b))
    cnorm = float(np.sqrt(sum(np.sum(cb * cb) for cb in fz.c_blocks)
                          + np.sum(fz.c_scalars ** 2)))
    eta_p = max(10.0, 2.0 * float(np.max(np.abs(fz.b), initial=0.0)))
    eta_d = max(10.0, 2.0 * cnorm)
    xb = [eta_p * np.eye(s) for s in sizes]
    xs = eta_p * np.ones(fz.num_scalars)
    sb = [eta_d * np.eye(s) for s in sizes]
    ss = eta_d * np.ones(fz.num_scalars)
    y = np.zeros(m)

    status = "max_iterations"
    it = 0
    rel_gap = np.inf
    pinf = dinf = np.inf
    pobj = dobj = 0.0
    best = None  # snapshot of the lowest-merit iterate
    stall = 0

    def inner(zb, zs, wb, ws):
        tot = sum(float(np.tensordot(a, bb)) for a, bb in zip(zb, wb))
        return tot + float(zs @ ws)

    for it in range(1, max_iter + 1):
        rp = fz.b - fz.apply_a(xb, xs)
        atyb, atys = fz.apply_at(y)
        dresb = [at - cb - s for at, cb, s in zip(atyb, fz.c_blocks, sb)]
        dress = atys - fz.c_scalars - ss
        mu = inner(xb, xs, sb, ss) / nu

        pobj = inner(fz.c_blocks, fz.c_scalars, xb, xs)
        dobj = float(fz.b @ y)
        rel_gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        pinf = float(np.linalg.norm(rp)) / (1.0 + bnorm)
        dinf = float(np.sqrt(sum(np.sum(r * r) for r in dresb) + np.sum(dress ** 2))) \
            / (1.0 + cnorm)
        if verbose:
            print(f"  it {it:3d} mu={mu:9.2e} gap={rel_gap:9.2e} "
                  f"pinf={pinf:9.2e} dinf={dinf:9.2e}")
        if rel_gap < tol and pinf < tol * 10 and dinf < tol * 10:
            status = "optimal"
            best = None
            break
        merit = max(rel_gap, pinf, dinf)
        if best is None or merit < 0.9 * best[0]:
            best = (merit, [x.copy() for x in xb], xs.copy(), y.copy(),
                    [s.copy() for s in sb], ss.copy(),
                    pobj, dobj, rel_gap, pinf, dinf)
            stall = 0
        else:
            stall += 1
            if stall >= 25:
                status = "stalled"  # finite precision floor; best iterate kept
                break

        try:
            s_chol = [np.linalg.cholesky(s) if s.size else s for s in sb]
        except np.linalg.LinAlgError:
            status = "numerical_failure"
            break
        s_inv = []
        for s, ch in zip(sb, s_chol):
            if s.size == 0:
                s_inv.append(s)
                continue
            inv = sla.cho_solve((ch, True), np.eye(len(s)))
            s_inv.append((inv + inv.T) / 2)

        # Schur complement M[i,j] = tr(A_i X A_j S^-1) + scalar part
        schur = np.zeros((m, m))
        for bi, (cid, rr, cc, vv) in enumerate(fz.per_block):
            if not len(cid):
                continue
            x = xb[bi]
            sinv = s_inv[bi]
            order = np.argsort(cid, kind="stable")
            cid_o, rr_o, cc_o, vv_o = cid[order], rr[order], cc[order], vv[order]
            starts = np.searchsorted(cid_o, np.arange(m + 1))
            for j in range(m):
                lo, hi = starts[j], starts[j + 1]
                if lo == hi:
                    continue
                w = (x[:, rr_o[lo:hi]] * vv_o[lo:hi]) @ sinv[cc_o[lo:hi], :]
                contrib = np.bincount(cid_o, weights=vv_o * w[cc_o, rr_o], minlength=m)
                schur[:, j] += contrib
        if fz.num_scalars:
            dscale = sp.diags(xs / ss)
            schur += (fz.vmat @ dscale @ fz.vmat.T).toarray()

        reg_used = 0.0
        try:
            schur_f = sla.cho_factor(schur, lower=True)
        except np.linalg.LinAlgError:
            reg_used = 1e-12 * max(1.0, float(np.trace(schur)) / m)
            try:
                schur_f = sla.cho_factor(schur + reg_used * np.eye(m), lower=True)
            except np.linalg.LinAlgError:
                status = "numerical_failure"
                break

        def schur_solve(rhs):
            # iterative refinement: the primal residual floor is set by the
            # accuracy of these solves, unlike the dual which contracts exactly
            dy = sla.cho_solve(schur_f, rhs)
            for _ in range(2):
                r = rhs - schur @ dy - reg_used * dy
                dy = dy + sla.cho_solve(schur_f, r)
            return dy

        def solve_direction(sigma_mu, cross_b, cross_s):
            # rhs = A(sigma*mu*S^-1 - cross - X Dres S^-1) - b
            ub = []
            for bi in range(len(sizes)):
                u = sigma_mu * s_inv[bi] - xb[bi] @ dresb[bi] @ s_inv[bi]
                if cross_b is not None:
                    u = u - cross_b[bi]
                ub.append(u)
            us = np.zeros(fz.num_scalars)
            if fz.num_scalars:
                us = sigma_mu / ss - xs * dress / ss
                if cross_s is not None:
                    us = us - cross_s
            rhs = fz.apply_a([(u + u.T) / 2 for u in ub], us) - fz.b
            dy = schur_solve(rhs)
            dsb_, dss_ = fz.apply_at(dy)
            dsb = [dd + dr for dd, dr in zip(dsb_, dresb)]
            dss = dss_ + dress if fz.num_scalars else np.zeros(0)
            dxb = []
            for bi in range(len(sizes)):
                u = sigma_mu * s_inv[bi] - xb[bi] - xb[bi] @ dsb[bi] @ s_inv[bi]
                if cross_b is not None:
                    u = u - cross_b[bi]
                dxb.append((u + u.T) / 2)
            dxs = np.zeros(0)
            if fz.num_scalars:
                dxs = sigma_mu / ss - xs - xs * dss / ss
                if cross_s is not None:
                    dxs = dxs - cross_s
            return dy, dxb, dxs, dsb, dss

        def max_step(zb, zs, dzb, dzs):
            a = 1e20
            for z, dz in zip(zb, dzb):
                a = min(a, _min_eig_step(z, dz))
            if len(zs):
                neg = dzs < 0
                if np.any(neg):
                    a = min(a, float(np.min(-zs[neg] / dzs[neg])))
            return a

        # predictor
        dy, dxb, dxs, dsb, dss = solve_direction(0.0, None, None)
        ap = min(1.0, 0.98 * max_step(xb, xs, dxb, dxs))
        ad = min(1.0, 0.98 * max_step(sb, ss, dsb, dss))
        mu_aff = (inner([x + ap * d for x, d in zip(xb, dxb)], xs + ap * dxs,
                        [s + ad * d for s, d in zip(sb, dsb)], ss + ad * dss)) / nu
        sigma = min(1.0, max(1e-8, (max(mu_aff, 0.0) / mu) ** 3))
        if max(pinf, dinf) > max(rel_gap, 10.0 * tol):
            sigma = max(sigma, 0.5)  # recenter until feasibility catches up

        # corrector with second-order cross term
        cross_b = []
        for bi in range(len(sizes)):
            u = dxb[bi] @ dsb[bi] @ s_inv[bi]
            cross_b.append((u + u.T) / 2)
        cross_s = dxs * dss / ss if fz.num_scalars else None
        dy, dxb, dxs, dsb, dss = solve_direction(sigma * mu, cross_b, cross_s)
        ap = min(1.0, 0.98 * max_step(xb, xs, dxb, dxs))
        ad = min(1.0, 0.98 * max_step(sb, ss, dsb, dss))
        if ap < 1e-10 and ad < 1e-10:
            status = "numerical_failure"
            break

        xb = [x + ap * d for x, d in zip(xb, dxb)]
        xs = xs + ap * dxs
        y = y + ad * dy
        sb = [s + ad * d for s, d in zip(sb, dsb)]
        ss = ss + ad * dss

    if best is not None and status != "optimal" and best[0] < max(rel_gap, pinf, dinf):
        _, xb, xs, y, sb, ss, pobj, dobj, rel_gap, pinf, dinf = best
    return SdpSolution(status=status, primal=pobj, dual=dobj,
                       x_blocks=xb, x_scalars=xs, y=y, s_blocks=sb, s_scalars=ss,
                       iterations=it, rel_gap=rel_gap,
                       primal_infeas=pinf, dual_infeas=dinf)
