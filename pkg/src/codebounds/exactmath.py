"""Exact combinatorial arithmetic and orthogonal-polynomial kernels.

Everything in this module is computed over arbitrary-precision rationals
(:class:`fractions.Fraction`); floats never enter. It provides

* binomial and Gaussian (q-)binomial coefficients,
* Krawtchouk polynomials together with the character-sum identity check,
* the Hahn / q-Hahn polynomial values that drive the block-diagonal
  kernels of the Hamming and projective association schemes.

The Hahn values are not taken from a closed form. For each level k the
degree-k member is pinned down constructively: the top primitive
idempotent of the Johnson (q = 1) or Grassmann (q > 1) scheme J_q(n, k)
is computed exactly from the standard P-polynomial intersection arrays,
and the resulting orbit kernel is transferred to every index pair
(i, j), k <= i <= j <= n-k, by one-step "up" recurrences that count how
a (j+1)-set (or subspace) restricts to its j-subsets (hyperplanes).
The values are normalized so that Q_k(n, i, j; 0) = 1 for every k.
Validation against materialized small spaces lives in
:mod:`codebounds.blockdiag`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Tuple

import numpy as np

ExactScalar = Fraction

__all__ = [
    "ExactScalar",
    "binomial",
    "gaussian_binomial",
    "krawtchouk",
    "krawtchouk_character_check",
    "hahn",
    "PolynomialTable",
    "level_kernel_table",
    "level_multiplicity_bounds",
]


def binomial(n: int, k: int) -> Fraction:
    """Binomial coefficient C(n, k) as an exact rational.

    Out-of-range k (k < 0 or k > n) returns 0, which keeps downstream
    convolution sums free of index guards.
    """
    if n < 0:
        raise ValueError(f"binomial: n must be >= 0, got {n}")
    if k < 0 or k > n:
        return Fraction(0)
    return Fraction(math.comb(n, k))


def gaussian_binomial(n: int, k: int, q: int) -> Fraction:
    """Gaussian binomial [n, k]_q; counts k-dim subspaces of F_q^n.

    q = 1 degenerates to the ordinary binomial. Out-of-range k returns 0.
    """
    if n < 0:
        raise ValueError(f"gaussian_binomial: n must be >= 0, got {n}")
    if q < 1:
        raise ValueError(f"gaussian_binomial: q must be >= 1, got {q}")
    if k < 0 or k > n:
        return Fraction(0)
    if q == 1:
        return Fraction(math.comb(n, k))
    num = 1
    den = 1
    for t in range(k):
        num *= q ** (n - t) - 1
        den *= q ** (t + 1) - 1
    return Fraction(num, den)


def krawtchouk(n: int, k: int, t: int) -> Fraction:
    """Binary Krawtchouk polynomial K_k^n evaluated at integer t.

    K_k^n(t) = sum_j (-1)^j C(t, j) C(n-t, k-j). The value is an integer
    (returned as Fraction); K_k^n(d(x, y)) is the character sum over all
    weight-k words, see :func:`krawtchouk_character_check`.
    """
    if not 0 <= t <= n:
        raise ValueError(f"krawtchouk: need 0 <= t <= n, got t={t}, n={n}")
    if k < 0 or k > n:
        return Fraction(0)
    acc = 0
    for j in range(k + 1):
        if j > t or k - j > n - t:
            continue
        term = math.comb(t, j) * math.comb(n - t, k - j)
        acc += -term if j & 1 else term
    return Fraction(acc)


def krawtchouk_character_check(n: int) -> bool:
    """Verify sum_{wt(z)=k} chi_z(x) chi_z(y) = K_k^n(d(x, y)) exhaustively.

    chi_z(x) = (-1)^{x.z}, so the summand depends on w = x xor y only;
    every pair (x, y) is covered by letting w range over the whole space.
    Exhaustive over all w and all k; intended for n <= 12.
    """
    if n < 1 or n > 14:
        raise ValueError(f"krawtchouk_character_check: need 1 <= n <= 14, got {n}")
    words = np.arange(2 ** n, dtype=np.int64)
    popcnt = np.zeros(2 ** n, dtype=np.int64)
    for b in range(n):
        popcnt += (words >> b) & 1
    wt_w = popcnt
    for k in range(n + 1):
        zs = words[popcnt == k]
        # sign matrix over (z, w): (-1)^{popcount(z & w)}
        acc = np.zeros(2 ** n, dtype=np.int64)
        for z in zs:
            acc += 1 - 2 * (popcnt[np.bitwise_and(int(z), words)] & 1)
        expect = np.array([int(krawtchouk(n, k, int(t))) for t in range(n + 1)])
        if not np.array_equal(acc, expect[wt_w]):
            return False
    return True


# ---------------------------------------------------------------------------
# Level kernels of the Johnson / Grassmann towers
# ---------------------------------------------------------------------------

def _qint(m: int, q: int) -> Fraction:
    """q-integer [m]_q = 1 + q + ... + q^{m-1} (= m when q = 1)."""
    if q == 1:
        return Fraction(m)
    return Fraction(q ** m - 1, q - 1)


def _top_idempotent_orbit_values(n: int, k: int, q: int) -> Dict[int, Fraction]:
    """Orbit values of the l = k primitive idempotent of J_q(n, k).

    Returns {c: value} where c = |z meet z'| (size or dimension) over pairs
    of k-sets/k-subspaces. Computed from the P-polynomial intersection
    array of the Johnson / Grassmann graph via the three-term recurrence;
    the multiplicity it implies is cross-checked against the closed form
    [n,k]_q - [n,k-1]_q.
    """
    if not 0 <= k <= n - k:
        raise ValueError(f"level {k} out of range for n={n}")
    diam = k

    def b_(j: int) -> Fraction:
        base = Fraction(q ** (2 * j + 1)) if q > 1 else Fraction(1)
        return base * _qint(k - j, q) * _qint(n - k - j, q)

    def c_(j: int) -> Fraction:
        return _qint(j, q) ** 2

    valency = b_(0)

    def a_(j: int) -> Fraction:
        return valency - b_(j) - c_(j)

    def theta(l: int) -> Fraction:
        base = Fraction(q ** (l + 1)) if q > 1 else Fraction(1)
        return base * _qint(k - l, q) * _qint(n - k - l, q) - _qint(l, q)

    def eigen_seq(l: int) -> list[Fraction]:
        th = theta(l)
        p = [Fraction(1)]
        if diam >= 1:
            p.append(th)
        for d in range(1, diam):
            p.append((th * p[d] - b_(d - 1) * p[d - 1] - a_(d) * p[d]) / c_(d + 1))
        return p

    p_top = eigen_seq(k)
    valencies = eigen_seq(0)
    size_k = gaussian_binomial(n, k, q)
    mult = size_k / sum(p_top[d] ** 2 / valencies[d] for d in range(diam + 1))
    closed = gaussian_binomial(n, k, q) - gaussian_binomial(n, k - 1, q)
    if mult != closed:
        raise ArithmeticError(
            f"idempotent multiplicity mismatch at n={n}, k={k}, q={q}: "
            f"{mult} != {closed}"
        )
    return {k - d: mult * p_top[d] / valencies[d] / size_k for d in range(diam + 1)}


def _up_step(f: Mapping[int, Fraction], other: int, new: int, n: int, q: int
             ) -> Dict[int, Fraction]:
    """One up-transfer of an orbit kernel: index `new`-1 -> `new`.

    f is the orbit function {c: value} of an invariant kernel on
    X_other x X_{new-1}; the result is its push-forward to
    X_other x X_{new}, obtained by summing over the [new]_q hyperplanes
    (or (new-1)-subsets) of the second argument. For overlap c after the
    step, [new - c]_q of them keep the overlap and q^{new-c} [c]_q drop it
    by one.
    """
    g: Dict[int, Fraction] = {}
    zero = Fraction(0)
    for c in range(max(0, other + new - n), min(other, new) + 1):
        stay = _qint(new - c, q) * f.get(c, zero)
        drop = Fraction(q ** (new - c)) * _qint(c, q) * f.get(c - 1, zero)
        g[c] = stay + drop
    return g


@lru_cache(maxsize=None)
def _raw_level_kernels(n: int, q: int) -> Dict[int, Dict[Tuple[int, int], Dict[int, Fraction]]]:
    """Unnormalized level kernels {k: {(i, j): {c: value}}}, k <= i <= j <= n-k."""
    out: Dict[int, Dict[Tuple[int, int], Dict[int, Fraction]]] = {}
    for k in range(n // 2 + 1):
        level: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        row = _top_idempotent_orbit_values(n, k, q)
        for j in range(k, n - k + 1):
            if j > k:
                row = _up_step(row, k, j, n, q)
            col = dict(row)
            for i in range(k, j + 1):
                if i > k:
                    col = _up_step(col, j, i, n, q)
                level[(i, j)] = col
        out[k] = level
    return out


@lru_cache(maxsize=None)
def level_kernel_table(n: int, q: int) -> Dict[int, Dict[Tuple[int, int], Dict[int, Fraction]]]:
    """Normalized Hahn values {k: {(i, j): {t: Q_k(n, i, j; t)}}}.

    t = i - c is the co-overlap; Q_k(n, i, j; 0) = 1 by construction.
    The t = 0 value of the raw kernel is nonzero because zeros of an
    orthogonal-polynomial family lie strictly inside its support.
    """
    raw = _raw_level_kernels(n, q)
    out: Dict[int, Dict[Tuple[int, int], Dict[int, Fraction]]] = {}
    for k, level in raw.items():
        norm_level: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j), vals in level.items():
            anchor = vals[i]
            if anchor == 0:
                raise ArithmeticError(f"vanishing anchor at n={n}, q={q}, k={k}, ({i},{j})")
            norm_level[(i, j)] = {i - c: v / anchor for c, v in vals.items()}
        out[k] = norm_level
    return out


def level_multiplicity_bounds(n: int) -> int:
    """Number of levels (isotypic components) of the weight tower: 1 + n//2."""
    return n // 2 + 1


def hahn(q: int, n: int, i: int, j: int, k: int, t: int) -> Fraction:
    """Hahn (q = 1) or q-Hahn polynomial value Q_k(n, i, j; t).

    Defined for k <= i <= j <= n-k and 0 <= t <= min(i, n-j), with the
    normalization Q_k(n, i, j; 0) = 1 for every k (so Q_0 is identically
    1). These are the degree-k members of the orthogonal family attached
    to the pair of levels (i, j) in the Johnson / Grassmann tower.
    """
    if not (0 <= k <= i <= j <= n - k):
        raise ValueError(f"hahn: need 0 <= k <= i <= j <= n-k, got {(q, n, i, j, k, t)}")
    if not 0 <= t <= min(i, n - j):
        raise ValueError(f"hahn: t={t} outside [0, {min(i, n - j)}]")
    return level_kernel_table(n, q)[k][(i, j)][t]


@dataclass(frozen=True)
class PolynomialTable:
    """Immutable table of exact polynomial values for one family.

    family is "krawtchouk" (keys (k, t)) or "hahn" (keys (k, i, j, t),
    q = 1 giving ordinary Hahn values). Entries are exact rationals and
    agree with :func:`krawtchouk` / :func:`hahn` by construction.
    """

    n: int
    family: str
    q: int
    values: Mapping[tuple, Fraction] = field(repr=False)

    @staticmethod
    def krawtchouk_table(n: int) -> "PolynomialTable":
        vals = {
            (k, t): krawtchouk(n, k, t)
            for k in range(n + 1)
            for t in range(n + 1)
        }
        return PolynomialTable(n=n, family="krawtchouk", q=1, values=vals)

    @staticmethod
    def hahn_table(n: int, q: int = 1) -> "PolynomialTable":
        table = level_kernel_table(n, q)
        vals = {
            (k, i, j, t): v
            for k, level in table.items()
            for (i, j), ts in level.items()
            for t, v in ts.items()
        }
        family = "hahn" if q == 1 else "q-hahn"
        return PolynomialTable(n=n, family=family, q=q, values=vals)

    def value(self, *key: int) -> Fraction:
        return self.values[key]

    def __post_init__(self) -> None:
        from types import MappingProxyType

        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))
