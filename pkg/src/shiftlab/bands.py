"""Banded operators on two-sided block sequences, with verification ops.

A banded operator stores finitely many diagonals ("bands").  Band offset k
holds the entries ``U_{n, n+k}``, indexed by the row n, so the matrix entry
at position (i, j) is ``bands[j - i].weight_at(i)``.  Under this convention a
bilateral shift is the single band at offset -1 and the unweighted shift F is
that band filled with identities.

All verification routines work on an explicit index window [lo, hi].
Conditions that would touch indices outside a windowed sequence are skipped
and recorded, never failed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, PreconditionError
from .matrices import (
    DEFAULT_TOL,
    Tolerance,
    frob,
    herm,
    is_partial_isometry,
)
from .shifts import (
    BilateralShift,
    WeightSequence,
    WindowedVector,
    WindowedWeights,
    identity_weights,
    map_weights,
)


@dataclass
class ConditionCheck:
    condition: str
    index: int
    residual: float
    passed: bool


@dataclass
class SkippedCheck:
    condition: str
    index: int
    reason: str


@dataclass
class WindowReport:
    """Outcome of verifying a family of indexed conditions on [lo, hi]."""

    lo: int
    hi: int
    checks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    context: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def first_failure(self):
        bad = self.failures()
        return bad[0] if bad else None

    def summary(self) -> str:
        state = "pass" if self.passed else "FAIL"
        head = (f"[{state}] window [{self.lo}, {self.hi}]: "
                f"{len(self.checks)} checks, {len(self.skipped)} skipped, "
                f"max residual {self.max_residual:.3e}")
        worst = self.first_failure()
        if worst is not None:
            head += f"; first failure {worst.condition} at n={worst.index}"
        return head

    def to_jsonable(self) -> dict:
        return {
            "window": [self.lo, self.hi],
            "passed": self.passed,
            "max_residual": self.max_residual,
            "checks": [vars(c) for c in self.checks],
            "skipped": [vars(s) for s in self.skipped],
            "context": self.context,
        }


class _Reporter:
    """Accumulates condition checks against one tolerance."""

    def __init__(self, lo: int, hi: int, tol: Tolerance):
        self.report = WindowReport(lo, hi)
        self.tol = tol

    def check_close(self, condition: str, index: int, x, y, scale=None):
        res = frob(np.asarray(x) - np.asarray(y))
        if scale is None:
            scale = max(frob(x), frob(y))
        ok = res <= self.tol.bound(scale)
        self.report.checks.append(ConditionCheck(condition, index, res, ok))
        return ok

    def check_zero(self, condition: str, index: int, x, scale: float = 1.0):
        res = frob(x)
        ok = res <= self.tol.bound(scale)
        self.report.checks.append(ConditionCheck(condition, index, res, ok))
        return ok

    def record(self, condition: str, index: int, residual: float, passed: bool):
        self.report.checks.append(ConditionCheck(condition, index, residual, passed))

    def skip(self, condition: str, index: int, reason: str):
        self.report.skipped.append(SkippedCheck(condition, index, reason))


class BandedOperator:
    """Operator with finitely many nonzero diagonals.

    ``bands`` maps an integer offset k to the weight sequence of the entries
    ``U_{n, n+k}`` (indexed by the row n).
    """

    def __init__(self, bands: dict, label: str = ""):
        if not bands:
            raise ValueError("a banded operator needs at least one band")
        items = sorted(bands.items())
        dim = None
        for k, seq in items:
            if not isinstance(k, int):
                raise TypeError(f"band offset {k!r} is not an integer")
            if not isinstance(seq, WeightSequence):
                raise TypeError(f"band {k} is not a WeightSequence")
            if dim is None:
                dim = seq.dim
            elif seq.dim != dim:
                raise DimensionError(
                    f"band {k} has dim {seq.dim}, expected {dim}")
        self._bands = dict(items)
        self._dim = dim
        self.label = label

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def offsets(self):
        return tuple(sorted(self._bands))

    def band(self, k: int) -> WeightSequence:
        return self._bands[k]

    def has_entry(self, i: int, j: int) -> bool:
        k = j - i
        return k in self._bands and self._bands[k].has_index(i)

    def entry(self, i: int, j: int) -> np.ndarray:
        """Matrix entry at (i, j); structurally zero off the stored bands."""
        k = j - i
        if k not in self._bands:
            return np.zeros((self._dim, self._dim), dtype=complex)
        return self._bands[k].weight_at(i)

    def __repr__(self):
        name = f" {self.label!r}" if self.label else ""
        return f"BandedOperator{name}(offsets={self.offsets}, dim={self.dim})"


def single_band(offset: int, seq: WeightSequence, label: str = "") -> BandedOperator:
    return BandedOperator({offset: seq}, label=label)


def identity_operator(dim: int) -> BandedOperator:
    return single_band(0, identity_weights(dim), label="identity")


def forward_shift_operator(dim: int) -> BandedOperator:
    """The unweighted bilateral shift F (band -1 filled with identities)."""
    return single_band(-1, identity_weights(dim), label="F")


def diagonal_form(k: int, diag: WeightSequence, label: str = "") -> BandedOperator:
    """The operator ``F^k D`` for a diagonal operator D with entries D_n.

    Applying D and then k forward shifts lands entry ``D_{i-k}`` at matrix
    position (i, i-k), i.e. a single band at offset ``-k`` whose row-i entry
    is ``D.weight_at(i - k)``.
    """
    return single_band(-k, map_weights(diag, lambda w: w, delta=-k), label=label)


def banded_adjoint(u: BandedOperator) -> BandedOperator:
    """Adjoint operator: band d of U* holds ``(U_{i+d, i})*`` at row i."""
    bands = {}
    for k in u.offsets:
        bands[-k] = map_weights(u.band(k), herm, delta=-k)
    return BandedOperator(bands, label=f"{u.label}*" if u.label else "")


def apply_banded(u: BandedOperator, x: WindowedVector) -> WindowedVector:
    """``y_i = sum_k U_{i, i+k} x_{i+k}`` over the stored bands."""
    if u.dim != x.dim:
        raise DimensionError(f"operator dim {u.dim} does not match vector dim {x.dim}")
    offs = u.offsets
    lo = x.lo - max(offs)
    hi = x.hi - min(offs)
    out = np.zeros((hi - lo + 1, x.dim), dtype=complex)
    for k in offs:
        seq = u.band(k)
        for n in range(x.lo, x.hi + 1):
            i = n - k
            out[i - lo] += seq.weight_at(i) @ x.block(n)
    return WindowedVector(lo, out)


def _band_pair_available(seq: WeightSequence, *indices) -> bool:
    return all(seq.has_index(i) for i in indices)


def verify_intertwining(a: BandedOperator, s: BilateralShift, t: BilateralShift,
                        lo: int, hi: int, tol: Tolerance = DEFAULT_TOL) -> WindowReport:
    """Check ``A S = T A`` entrywise on the window.

    For each stored band offset k and each row i in [lo, hi] the condition is
    ``A_{i,i+k} S_{i+k} = T_i A_{i-1, i-1+k}``; every other entry of A S and
    T A is structurally zero on both sides.
    """
    if not (a.dim == s.dim == t.dim):
        raise DimensionError("operator and shifts must share the block dimension")
    rep = _Reporter(lo, hi, tol)
    for k in a.offsets:
        band = a.band(k)
        name = f"band{k:+d}"
        for i in range(lo, hi + 1):
            if not (_band_pair_available(band, i, i - 1)
                    and s.has_weight(i + k) and t.has_weight(i)):
                rep.skip(name, i, "index outside a stored window")
                continue
            lhs = band.weight_at(i) @ s.weight(i + k)
            rhs = t.weight(i) @ band.weight_at(i - 1)
            rep.check_close(name, i, lhs, rhs)
    return rep.report


def verify_unitary_banded(u: BandedOperator, lo: int, hi: int,
                          tol: Tolerance = DEFAULT_TOL) -> WindowReport:
    """Check ``U U* = I`` and ``U* U = I`` entrywise on the window.

    Works for any band pattern; the specialized two- and three-band
    verifiers below report the same conditions under structural names.
    """
    offs = u.offsets
    rep = _Reporter(lo, hi, tol)
    eye = np.eye(u.dim)
    deltas = sorted({k - kk for k in offs for kk in offs})
    for i in range(lo, hi + 1):
        for d in deltas:
            # (U U*)_{i, i+d} = sum_k U_{i, i+k} (U_{i+d, i+k})*
            terms, ok = [], True
            for k in offs:
                kk = k - d
                if kk not in offs:
                    continue
                if not (u.band(k).has_index(i) and u.band(kk).has_index(i + d)):
                    ok = False
                    break
                terms.append(u.band(k).weight_at(i) @ herm(u.band(kk).weight_at(i + d)))
            name = f"UU*[{d:+d}]"
            if not ok:
                rep.skip(name, i, "index outside a stored window")
            else:
                total = sum(terms) if terms else np.zeros((u.dim, u.dim))
                target = eye if d == 0 else 0.0 * eye
                rep.check_close(name, i, total, target, scale=1.0)
            # (U* U)_{i, i+d} = sum_k (U_{i-k, i})* U_{i-k, i+d}
            terms, ok = [], True
            for k in offs:
                kk = k + d
                if kk not in offs:
                    continue
                if not (u.band(k).has_index(i - k) and u.band(kk).has_index(i - k)):
                    ok = False
                    break
                terms.append(herm(u.band(k).weight_at(i - k)) @ u.band(kk).weight_at(i - k))
            name = f"U*U[{d:+d}]"
            if not ok:
                rep.skip(name, i, "index outside a stored window")
            else:
                total = sum(terms) if terms else np.zeros((u.dim, u.dim))
                target = eye if d == 0 else 0.0 * eye
                rep.check_close(name, i, total, target, scale=1.0)
    return rep.report


def verify_unitary_two_band(u: BandedOperator, lo: int, hi: int,
                            tol: Tolerance = DEFAULT_TOL) -> WindowReport:
    """Unitarity of an operator with exactly two stored bands k1 < k2.

    Writing A_n, B_n for the entries on the lower and upper band and
    ``k = k2 - k1``, the operator is unitary exactly when, for every n:

    * rows resolve the identity:    ``A_n A_n* + B_n B_n* = I``
    * columns resolve the identity: ``A_{n+k}* A_{n+k} + B_n* B_n = I``
    * staggered ranges orthogonal:  ``A_{n+k} B_n* = 0``
    * same-row kernels orthogonal:  ``A_n* B_n = 0``
    """
    offs = u.offsets
    if len(offs) != 2:
        raise PreconditionError(f"expected exactly 2 bands, found {len(offs)}")
    k1, k2 = offs
    k = k2 - k1
    a, b = u.band(k1), u.band(k2)
    rep = _Reporter(lo, hi, tol)
    rep.report.context["offsets"] = [k1, k2]
    eye = np.eye(u.dim)
    for n in range(lo, hi + 1):
        if _band_pair_available(a, n) and _band_pair_available(b, n):
            an, bn = a.weight_at(n), b.weight_at(n)
            rep.check_close("rows_identity", n,
                            an @ herm(an) + bn @ herm(bn), eye, scale=1.0)
            rep.check_zero("same_row_orthogonality", n, herm(an) @ bn)
        else:
            rep.skip("rows_identity", n, "index outside a stored window")
        if _band_pair_available(a, n + k) and _band_pair_available(b, n):
            ank, bn = a.weight_at(n + k), b.weight_at(n)
            rep.check_close("columns_identity", n,
                            herm(ank) @ ank + herm(bn) @ bn, eye, scale=1.0)
            rep.check_zero("staggered_orthogonality", n, ank @ herm(bn))
        else:
            rep.skip("columns_identity", n, "index outside a stored window")
    return rep.report


def verify_unitary_three_band(u: BandedOperator, lo: int, hi: int,
                              tol: Tolerance = DEFAULT_TOL) -> WindowReport:
    """Unitarity of an operator with bands exactly at offsets -1, 0, +1.

    With A_n, B_n, C_n the entries at offsets -1, 0, +1, the six condition
    families checked for each n are the structurally nonzero entries of
    ``U U* - I`` and ``U* U - I``:

    * ``A_n A_n* + B_n B_n* + C_n C_n* = I``
    * ``C_n A_{n+2}* = 0``
    * ``A_{n+1} B_n* + B_{n+1} C_n* = 0``
    * ``A_{n+1}* A_{n+1} + B_n* B_n + C_{n-1}* C_{n-1} = I``
    * ``A_n* C_n = 0``
    * ``B_n* C_n + A_{n+1}* B_{n+1} = 0``
    """
    if u.offsets != (-1, 0, 1):
        raise PreconditionError(
            f"expected bands exactly at offsets (-1, 0, +1), found {u.offsets}")
    a, b, c = u.band(-1), u.band(0), u.band(1)
    rep = _Reporter(lo, hi, tol)
    eye = np.eye(u.dim)

    def have(seq_indices):
        return all(seq.has_index(i) for seq, i in seq_indices)

    for n in range(lo, hi + 1):
        if have([(a, n), (b, n), (c, n)]):
            an, bn, cn = a.weight_at(n), b.weight_at(n), c.weight_at(n)
            rep.check_close("rows_identity", n,
                            an @ herm(an) + bn @ herm(bn) + cn @ herm(cn),
                            eye, scale=1.0)
            rep.check_zero("same_row_orthogonality", n, herm(an) @ cn)
        else:
            rep.skip("rows_identity", n, "index outside a stored window")
        if have([(c, n), (a, n + 2)]):
            rep.check_zero("gap_two_orthogonality", n,
                           c.weight_at(n) @ herm(a.weight_at(n + 2)))
        else:
            rep.skip("gap_two_orthogonality", n, "index outside a stored window")
        if have([(a, n + 1), (b, n), (b, n + 1), (c, n)]):
            rep.check_zero("gap_one_rows", n,
                           a.weight_at(n + 1) @ herm(b.weight_at(n))
                           + b.weight_at(n + 1) @ herm(c.weight_at(n)))
            rep.check_zero("gap_one_columns", n,
                           herm(b.weight_at(n)) @ c.weight_at(n)
                           + herm(a.weight_at(n + 1)) @ b.weight_at(n + 1))
        else:
            rep.skip("gap_one_rows", n, "index outside a stored window")
        if have([(a, n + 1), (b, n), (c, n - 1)]):
            an1, bn, cn1 = a.weight_at(n + 1), b.weight_at(n), c.weight_at(n - 1)
            rep.check_close("columns_identity", n,
                            herm(an1) @ an1 + herm(bn) @ bn + herm(cn1) @ cn1,
                            eye, scale=1.0)
        else:
            rep.skip("columns_identity", n, "index outside a stored window")
    return rep.report


def check_two_band_structure(u: BandedOperator, lo: int, hi: int,
                             tol: Tolerance = DEFAULT_TOL) -> WindowReport:
    """Structural consequences of two-band unitarity.

    Requires ``verify_unitary_two_band`` to pass on the window; then asserts
    that every band entry is a partial isometry, that same-row entries have
    orthogonal ranges, and that staggered co-ranges are orthogonal.
    """
    pre = verify_unitary_two_band(u, lo, hi, tol)
    if not pre.passed:
        bad = pre.first_failure()
        raise PreconditionError(
            f"operator is not unitary on the window "
            f"({bad.condition} at n={bad.index})", residual=bad.residual,
            index=bad.index)
    k1, k2 = u.offsets
    k = k2 - k1
    a, b = u.band(k1), u.band(k2)
    rep = _Reporter(lo, hi, tol)
    for n in range(lo, hi + 1):
        if not (_band_pair_available(a, n) and _band_pair_available(b, n)):
            rep.skip("partial_isometry", n, "index outside a stored window")
            continue
        an, bn = a.weight_at(n), b.weight_at(n)
        rep.check_zero(f"partial_isometry[{k1:+d}]", n,
                       an @ herm(an) @ an - an, scale=max(frob(an), 1.0))
        rep.check_zero(f"partial_isometry[{k2:+d}]", n,
                       bn @ herm(bn) @ bn - bn, scale=max(frob(bn), 1.0))
        rep.check_zero("range_orthogonality", n, herm(an) @ bn)
        if _band_pair_available(a, n + k):
            rep.check_zero("corange_orthogonality", n,
                           a.weight_at(n + k) @ herm(bn))
        else:
            rep.skip("corange_orthogonality", n, "index outside a stored window")
    return rep.report


def check_diagonal_propagation(a: BandedOperator,
                               s: BilateralShift | None = None,
                               t: BilateralShift | None = None,
                               lo: int = 0, hi: int = 0,
                               tol: Tolerance = DEFAULT_TOL) -> WindowReport:
    """Check that every band is either entirely nonzero or entirely zero.

    An operator intertwining two shifts with invertible weights propagates
    any nonzero entry along its whole diagonal, so a band mixing zero and
    nonzero entries certifies that no such intertwining exists.  When shifts
    are supplied, the intertwining relation and their quasi-invertibility
    are verified first as preconditions.
    """
    if (s is None) != (t is None):
        raise ValueError("supply both shifts or neither")
    if s is not None:
        if not (s.quasi_invertible and t.quasi_invertible):
            raise PreconditionError("shifts must have quasi-invertible weights")
        pre = verify_intertwining(a, s, t, lo, hi, tol)
        if not pre.passed:
            bad = pre.first_failure()
            raise PreconditionError(
                f"intertwining fails on the window ({bad.condition} at "
                f"n={bad.index})", residual=bad.residual, index=bad.index)
    rep = _Reporter(lo, hi, tol)
    counts = {}
    for k in a.offsets:
        band = a.band(k)
        zero_idx, nonzero_idx = [], []
        for n in range(lo, hi + 1):
            if not band.has_index(n):
                rep.skip(f"support[{k:+d}]", n, "index outside a stored window")
                continue
            (nonzero_idx if frob(band.weight_at(n)) > tol.abs else zero_idx).append(n)
        counts[k] = {"nonzero": len(nonzero_idx), "zero": len(zero_idx)}
        if zero_idx and nonzero_idx:
            # name the first index of the minority class
            minority = nonzero_idx if len(nonzero_idx) <= len(zero_idx) else zero_idx
            rep.record(f"support[{k:+d}]", minority[0], 0.0, False)
        else:
            rep.record(f"support[{k:+d}]", lo, 0.0, True)
    rep.report.context["band_support"] = counts
    return rep.report


def check_band_count_bound(u: BandedOperator, bound: int, lo: int, hi: int,
                           tol: Tolerance = DEFAULT_TOL) -> WindowReport:
    """Row-wise projection structure and the band-count bound.

    Requires every stored entry on the window to be a partial isometry
    (raises otherwise, naming the entry).  For each row n the products
    ``U_{n,n+k} U_{n,n+k}*`` must then be orthogonal projections with
    mutually orthogonal ranges summing to the identity, which forces the
    number of effectively nonzero bands to be at most the block dimension.
    The effective count is reported in ``context``.
    """
    rep = _Reporter(lo, hi, tol)
    eye = np.eye(u.dim)
    effective = []
    for k in u.offsets:
        band = u.band(k)
        nonzero = False
        for n in range(lo, hi + 1):
            if not band.has_index(n):
                continue
            w = band.weight_at(n)
            if frob(w) > tol.abs:
                nonzero = True
                if not is_partial_isometry(w, tol):
                    raise PreconditionError(
                        f"entry on band {k:+d} at n={n} is not a partial isometry",
                        index=n, residual=frob(w @ herm(w) @ w - w))
        if nonzero:
            effective.append(k)
    for n in range(lo, hi + 1):
        projections = []
        ok = True
        for k in effective:
            if not u.band(k).has_index(n):
                ok = False
                break
            w = u.band(k).weight_at(n)
            projections.append((k, w @ herm(w)))
        if not ok:
            rep.skip("projection_sum", n, "index outside a stored window")
            continue
        total = sum(p for _, p in projections)
        rep.check_close("projection_sum", n, total, eye, scale=1.0)
        for idx in range(len(projections)):
            for jdx in range(idx + 1, len(projections)):
                ki, pi = projections[idx]
                kj, pj = projections[jdx]
                rep.check_zero(f"mutual_orthogonality[{ki:+d},{kj:+d}]", n, pi @ pj)
    rep.record("band_count", lo, float(max(len(effective) - bound, 0)),
               len(effective) <= bound)
    rep.report.context["effective_band_count"] = len(effective)
    rep.report.context["bound"] = bound
    return rep.report


@dataclass
class ConjugationResult:
    """Outcome of conjugating a shift by a banded unitary."""

    shift: BilateralShift | None
    report: WindowReport

    @property
    def is_shift(self) -> bool:
        return self.shift is not None


def conjugate_to_shift(u: BandedOperator, s: BilateralShift, lo: int, hi: int,
                       tol: Tolerance = DEFAULT_TOL) -> ConjugationResult:
    """Compute ``U S U*`` on the window and read it back as a shift.

    Succeeds when the conjugated operator has all its weight concentrated on
    the shift band (offset -1) with every weight nonzero; otherwise returns
    a failure report listing the off-band residuals.

    Raises
    ------
    PreconditionError
        when U is not unitary on the window.
    """
    if u.dim != s.dim:
        raise DimensionError("operator and shift must share the block dimension")
    unit = verify_unitary_banded(u, lo, hi, tol)
    if not unit.passed:
        bad = unit.first_failure()
        raise PreconditionError(
            f"operator is not unitary on the window ({bad.condition} at "
            f"n={bad.index})", residual=bad.residual, index=bad.index)

    offs = u.offsets
    deltas = sorted({k - kk - 1 for k in offs for kk in offs})
    entries = {d: {} for d in deltas}
    rep = _Reporter(lo, hi, tol)
    for i in range(lo, hi + 1):
        for d in deltas:
            total = np.zeros((u.dim, u.dim), dtype=complex)
            ok = True
            for k in offs:
                kk = k - 1 - d
                if kk not in offs:
                    continue
                if not (u.band(k).has_index(i) and s.has_weight(i + k)
                        and u.band(kk).has_index(i + d)):
                    ok = False
                    break
                total += (u.band(k).weight_at(i) @ s.weight(i + k)
                          @ herm(u.band(kk).weight_at(i + d)))
            if ok:
                entries[d][i] = total
            else:
                rep.skip(f"conjugated[{d:+d}]", i, "index outside a stored window")

    scale = max((frob(m) for m in entries.get(-1, {}).values()), default=1.0)
    scale = max(scale, 1.0)
    for d in deltas:
        if d == -1:
            continue
        for i, m in sorted(entries[d].items()):
            rep.check_zero(f"off_band[{d:+d}]", i, m, scale=scale)
    rows = sorted(entries.get(-1, {}))
    for i in rows:
        w = entries[-1][i]
        rep.record("shift_weight_nonzero", i, frob(w), frob(w) > tol.abs)
    report = rep.report
    report.context["row_range"] = [rows[0], rows[-1]] if rows else None

    shift = None
    if report.passed and rows and rows == list(range(rows[0], rows[-1] + 1)):
        weights = [entries[-1][i] for i in rows]
        shift = BilateralShift(WindowedWeights(rows[0], weights),
                               label=f"conj({s.label})" if s.label else "")
    return ConjugationResult(shift, report)
