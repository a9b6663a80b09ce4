from fractions import Fraction

import numpy as np
import pytest

from codebounds.blockdiag import build_kernel, validate_kernel_small
from codebounds.schemes import SpaceSpec, space_points


def test_dimension_identity_small():
    for spec in (SpaceSpec.hamming(5), SpaceSpec.hamming(6, [0, 1, 2, 3]),
                 SpaceSpec.projective(3, 2), SpaceSpec.projective(2, 3)):
        kern, _ = build_kernel(spec)
        total = sum((Fraction(lev.multiplicity) * lev.h for lev in kern.levels),
                    Fraction(0))
        assert total == spec.point_count()


def test_level_zero_is_constant():
    kern, _ = build_kernel(SpaceSpec.hamming(5))
    lev0 = kern.level(0)
    assert set(lev0.entries.values()) == {Fraction(32)}


def test_entry_symmetry_access():
    kern, _ = build_kernel(SpaceSpec.hamming(4))
    for lev in kern.levels:
        for (i, j, c), v in lev.entries.items():
            assert kern.entry(lev.k, j, i, c) == v


def test_cache_round_trip(tmp_path):
    spec = SpaceSpec.hamming(6, [0, 1, 2])
    fresh, hit0 = build_kernel(spec, cache_dir=str(tmp_path))
    again, hit1 = build_kernel(spec, cache_dir=str(tmp_path))
    assert not hit0 and hit1
    assert len(fresh.levels) == len(again.levels)
    for a, b in zip(fresh.levels, again.levels):
        assert a.k == b.k and a.indices == b.indices and a.h == b.h
        assert dict(a.entries) == dict(b.entries)


def test_cache_file_schema(tmp_path):
    import json
    import os

    spec = SpaceSpec.hamming(3)
    build_kernel(spec, cache_dir=str(tmp_path))
    (name,) = os.listdir(tmp_path)
    data = json.loads((tmp_path / name).read_text())
    assert data["schema"] == 1
    assert data["space"]["kind"] == "hamming_ball"
    for lev in data["levels"]:
        assert set(lev) == {"k", "m", "indices", "h", "entries"}
        assert lev["m"] == len(lev["indices"])
        for i, j, c, v in lev["entries"]:
            num, den = v.split("/")
            int(num), int(den)  # rationals ride as "num/den" strings


def test_cache_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("BOUNDS_CACHE_DIR", str(tmp_path))
    build_kernel(SpaceSpec.hamming(4))
    _, hit = build_kernel(SpaceSpec.hamming(4))
    assert hit


def test_kernel_assembles_psd_function():
    # sum_k <random psd block, E_k(x, y)> must be psd on the whole space
    spec = SpaceSpec.hamming(4)
    kern, _ = build_kernel(spec)
    pts, label_of = space_points(spec)
    rng = np.random.default_rng(3)
    blocks = {}
    for lev in kern.levels:
        g = rng.standard_normal((lev.multiplicity, lev.multiplicity))
        blocks[lev.k] = g @ g.T
    mat = np.zeros((len(pts), len(pts)))
    for xi, x in enumerate(pts):
        for yi, y in enumerate(pts):
            a, b, c = label_of(x, y)
            key = (a, b, c) if a <= b else (b, a, c)
            val = 0.0
            for lev in kern.levels:
                if key in lev.entries:
                    pi = lev.indices.index(key[0])
                    qi = lev.indices.index(key[1])
                    val += blocks[lev.k][pi, qi] * float(lev.entries[key])
            mat[xi, yi] = val
    eigs = np.linalg.eigvalsh((mat + mat.T) / 2)
    assert eigs.min() >= -1e-8 * max(1.0, eigs.max())


def test_validate_kernel_small_hamming():
    rep = validate_kernel_small(SpaceSpec.hamming(3), draws=20, seed=1)
    assert rep["dimension_identity"] and rep["level0_constant"]
    assert rep["sufficiency_min_eig_ratio"] >= -1e-8
    assert rep["completeness_min_eig_ratio"] >= -1e-8
    assert rep["theta_prime_rel_gap"] <= 1e-6


def test_validate_kernel_small_ball_and_projective():
    rep = validate_kernel_small(SpaceSpec.hamming(4, [0, 1, 2]), draws=20,
                                seed=2)
    assert rep["theta_prime_rel_gap"] <= 1e-6
    rep = validate_kernel_small(SpaceSpec.projective(2, 2), draws=20, seed=3)
    assert rep["dimension_identity"]


def test_validate_rejects_corrupted_kernel(monkeypatch):
    import codebounds.blockdiag as bd

    real = bd.build_kernel

    def poisoned(spec, cache_dir=None):
        kern, hit = real(spec, cache_dir)
        levels = list(kern.levels)
        lev = levels[1]
        entries = dict(lev.entries)
        key = next(iter(entries))
        entries[key] += Fraction(1, 7)
        levels[1] = type(lev)(lev.k, lev.indices, lev.h, entries)
        return type(kern)(kern.space, tuple(levels)), hit

    monkeypatch.setattr(bd, "build_kernel", poisoned)
    with pytest.raises(AssertionError):
        validate_kernel_small(SpaceSpec.hamming(3), draws=20, seed=4)
