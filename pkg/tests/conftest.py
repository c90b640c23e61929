"""Shared builders for randomized operator-theory tests."""

from __future__ import annotations

import numpy as np
import pytest

import shiftlab as sl


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_matrix(rng, dim=2, scale=1.0):
    return scale * (rng.standard_normal((dim, dim))
                    + 1j * rng.standard_normal((dim, dim)))


def random_invertible(rng, dim=2, smin=0.2):
    while True:
        m = random_matrix(rng, dim)
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] > smin:
            return m


def random_unitary(rng, dim=2):
    return sl.nearest_unitary(random_matrix(rng, dim))


def random_diag_unitary(rng, dim=2):
    return np.diag(np.exp(2j * np.pi * rng.random(dim)))


def random_projection(rng, dim=2, rank=1):
    u = random_unitary(rng, dim)
    d = np.zeros(dim)
    d[:rank] = 1.0
    return u @ np.diag(d) @ u.conj().T


def ei_shift(rng, dim=2, lo=0, length=3, label="S"):
    """Random eventually-identity shift with invertible weights."""
    weights = [random_invertible(rng, dim) for _ in range(length)]
    return sl.BilateralShift(sl.EventuallyIdentityWeights(lo, weights),
                             label=label)


def conjugated_shift(rng, s, m=0, label="T", diagonal=False):
    """Shift equivalent to s by a single-band intertwiner at offset m.

    Builds T_n = V_n S_{n+m} V_{n-1}^* from random (optionally diagonal)
    unitaries V_n that are constant outside the (shifted) support, so T is
    eventually-identity.  Returns (T, entries) with the band entries used.
    """
    lo, hi = s.weights.described_range()
    lo_t, hi_t = lo - m, hi - m
    make = random_diag_unitary if diagonal else random_unitary
    v = {}
    for n in range(lo_t - 1, hi_t + 1):
        v[n] = make(rng, s.dim)

    def vat(n):
        return v[min(max(n, lo_t - 1), hi_t)]

    weights = [vat(n) @ s.weight(n + m) @ vat(n - 1).conj().T
               for n in range(lo_t - 1, hi_t + 2)]
    t = sl.BilateralShift(sl.EventuallyIdentityWeights(lo_t - 1, weights),
                          label=label)
    return t, vat


def perturb_one_singular_value(rng, shift, factor=1.25):
    """Scale one singular value of one interior weight by `factor`."""
    lo, hi = shift.weights.described_range()
    n = int(rng.integers(lo, hi + 1))
    w = shift.weight(n)
    x, s, yh = np.linalg.svd(w)
    which = int(rng.integers(0, len(s)))
    s = s.copy()
    s[which] *= factor
    new = x @ np.diag(s) @ yh
    mats = [new if k == n else shift.weight(k) for k in range(lo, hi + 1)]
    return sl.BilateralShift(sl.EventuallyIdentityWeights(lo, mats),
                             label=shift.label + "-perturbed")


def two_band_unitary(rng, dim=2, k1=-1, k2=1, span=(-10, 10), rank=None):
    """Two-band unitary from a rank-complementary projection pair.

    With P a projection and V_n unitaries, the bands ``A_n = P V_{n+k1}``
    and ``B_n = (I - P) V_{n+k2}`` satisfy the two-band unitarity relations
    for any offsets k1 < k2.
    """
    if rank is None:
        rank = int(rng.integers(1, dim))
    p = random_projection(rng, dim, rank)
    q = np.eye(dim) - p
    lo, hi = span
    v = [random_unitary(rng, dim) for _ in range(lo, hi + 1)]

    def vat(n):
        return v[min(max(n, lo), hi) - lo]

    band_a = sl.WindowedWeights(lo - k1, [p @ vat(n + k1)
                                          for n in range(lo - k1, hi - k1 + 1)])
    band_b = sl.WindowedWeights(lo - k2, [q @ vat(n + k2)
                                          for n in range(lo - k2, hi - k2 + 1)])
    return sl.BandedOperator({k1: band_a, k2: band_b})


def multi_band_unitary(rng, dim, offsets, span=(-10, 10)):
    """Unitary with one band per offset, built from an orthogonal resolution.

    Band k_i holds ``P_i V_{n+k_i}`` where the P_i are mutually orthogonal
    projections summing to I; every entry is a partial isometry.
    """
    u = random_unitary(rng, dim)
    ranks = _random_composition(rng, dim, len(offsets))
    projections = []
    start = 0
    for r in ranks:
        d = np.zeros(dim)
        d[start:start + r] = 1.0
        projections.append(u @ np.diag(d) @ u.conj().T)
        start += r
    lo, hi = span
    v = [random_unitary(rng, dim) for _ in range(lo, hi + 1)]

    def vat(n):
        return v[min(max(n, lo), hi) - lo]

    bands = {}
    for k, p in zip(offsets, projections):
        bands[k] = sl.WindowedWeights(
            lo - k, [p @ vat(n + k) for n in range(lo - k, hi - k + 1)])
    return sl.BandedOperator(bands)


def _random_composition(rng, total, parts):
    """`parts` positive integers summing to `total` (requires parts <= total)."""
    cuts = sorted(rng.choice(np.arange(1, total), size=parts - 1, replace=False)) \
        if parts > 1 else []
    bounds = [0] + list(cuts) + [total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]
