"""Canonical forms and the diagonal-form unitary-equivalence decision.

The decision procedure reduces "is there a unitary intertwiner supported on
one diagonal?" to finitely many matrix conditions: a weight-norm screen, an
eigenvalue-moduli screen for normal 2x2 weights, and the Gram-chain
conditions, which ask for one unitary conjugating two families of positive
matrices.  A found conjugator is turned into a full diagonal witness by a
two-sided recursion and re-verified; certified failures carry a recomputable
obstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .bands import (
    BandedOperator,
    ConditionCheck,
    SkippedCheck,
    WindowReport,
    single_band,
    verify_intertwining,
)
from .errors import ConditioningError, DimensionError, PreconditionError
from .matrices import (
    DEFAULT_TOL,
    Tolerance,
    condition_ratio,
    frob,
    herm,
    is_normal,
    nearest_unitary,
    operator_norm,
    polar_decompose,
)
from .shifts import BilateralShift, PeriodicWeights, WindowedWeights


class VerdictStatus(str, Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not_equivalent"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Obstruction:
    """A recomputable reason why no diagonal-form intertwiner exists."""

    kind: str          # "norm-profile" | "eigenvalue-moduli" | "gram-spectrum"
                       # | "conjugator-infeasible"
    offset: int
    index: int | None
    residual: float
    detail: str


@dataclass
class EquivalenceVerdict:
    status: VerdictStatus
    offset: int | None = None
    witness: BandedOperator | None = None
    witness_report: WindowReport | None = None
    obstruction: Obstruction | None = None
    reason: str | None = None

    @property
    def is_equivalent(self) -> bool:
        return self.status is VerdictStatus.EQUIVALENT

    @property
    def is_not_equivalent(self) -> bool:
        return self.status is VerdictStatus.NOT_EQUIVALENT

    @property
    def is_inconclusive(self) -> bool:
        return self.status is VerdictStatus.INCONCLUSIVE

    def summary(self) -> str:
        if self.is_equivalent:
            return (f"equivalent at offset {self.offset} "
                    f"(witness max residual {self.witness_report.max_residual:.3e})")
        if self.is_not_equivalent:
            o = self.obstruction
            at = f" at n={o.index}" if o.index is not None else ""
            return (f"not equivalent at offset {o.offset}: {o.kind}{at} "
                    f"(residual {o.residual:.3e})")
        return f"inconclusive: {self.reason}"


@dataclass(frozen=True)
class GramChain:
    """``G_n = P_n* P_n`` for the weight products P_n of increasing length."""

    direction: str      # "forward" | "backward"
    base: int
    matrices: tuple

    @property
    def depth(self) -> int:
        return len(self.matrices)


class GramChains(NamedTuple):
    forward_s: GramChain
    forward_t: GramChain
    backward_s: GramChain
    backward_t: GramChain

    def pairs(self):
        """(G_s, G_t) pairs, forward chains first."""
        return (list(zip(self.forward_s.matrices, self.forward_t.matrices))
                + list(zip(self.backward_s.matrices, self.backward_t.matrices)))


def gram_chains(s: BilateralShift, t: BilateralShift, m: int, k_base: int,
                depth: int) -> GramChains:
    """Gram matrices of the matched forward and backward weight products.

    Forward, for n = 1..depth: products ``S_{m+k+n-1} ... S_{m+k}`` against
    ``T_{k+n-1} ... T_k`` (k = k_base).  Backward: adjoint products
    ``S_{m+k-n}* ... S_{m+k-1}*`` against ``T_{k-n}* ... T_{k-1}*``.  A
    unitary V satisfies all the metric equalities exactly when
    ``V* G_t V = G_s`` for every pair.
    """
    if depth < 1:
        raise ValueError("depth must be a positive integer")
    if s.dim != t.dim:
        raise DimensionError("shifts must share the block dimension")

    def chain(shift, base, direction):
        mats = []
        acc = np.eye(shift.dim, dtype=complex)
        if direction == "forward":
            for n in range(depth):
                acc = shift.weight(base + n) @ acc
                mats.append(herm(acc) @ acc)
        else:
            # each new factor carries the smallest index and sits leftmost
            for n in range(1, depth + 1):
                acc = herm(shift.weight(base - n)) @ acc
                mats.append(herm(acc) @ acc)
        return GramChain(direction, base, tuple(mats))

    return GramChains(
        forward_s=chain(s, m + k_base, "forward"),
        forward_t=chain(t, k_base, "forward"),
        backward_s=chain(s, m + k_base, "backward"),
        backward_t=chain(t, k_base, "backward"),
    )


@dataclass
class ConjugatorResult:
    """Search outcome for a joint unitary conjugator.

    ``certificate`` is set when the absence of a solution is certified:
    "spectrum-mismatch" (some pair has different eigenvalues),
    "empty-nullspace" (the linear constraints only admit zero), or
    "singular-nullspace" (every sampled solution of the linear constraints
    was singular, so none can be unitary).
    """

    unitary: np.ndarray | None
    certificate: str | None = None
    pair_index: int | None = None
    residual: float = 0.0
    nullspace_dim: int = 0
    diagnostics: dict = field(default_factory=dict)


def _eigen_mismatch(g_s, g_t, tol: Tolerance):
    """Largest gap between the sorted spectra of two Hermitian matrices."""
    es = np.sort(np.linalg.eigvalsh(0.5 * (g_s + herm(g_s))))
    et = np.sort(np.linalg.eigvalsh(0.5 * (g_t + herm(g_t))))
    gap = float(np.max(np.abs(es - et)))
    scale = max(float(np.max(np.abs(es))), float(np.max(np.abs(et))), 1.0)
    return gap, scale


def solve_joint_conjugator(pairs, tol: Tolerance = DEFAULT_TOL, seed: int = 0,
                           max_restarts: int = 64) -> ConjugatorResult:
    """Find a unitary U with ``U* G_t U = G_s`` for every pair (G_s, G_t).

    Each constraint is linear, ``G_t U - U G_s = 0``; the stacked system's
    null space is computed by SVD and searched for a unitary element by
    projecting candidate combinations to their unitary polar factor.  The
    polar factor of any nonsingular null-space element satisfies the
    constraints again, so the search succeeds on the first well-conditioned
    sample whenever a solution exists.
    """
    pairs = [(np.asarray(gs, dtype=complex), np.asarray(gt, dtype=complex))
             for gs, gt in pairs]
    if not pairs:
        raise ValueError("need at least one constraint pair")
    dim = pairs[0][0].shape[0]
    for i, (gs, gt) in enumerate(pairs):
        if gs.shape != (dim, dim) or gt.shape != (dim, dim):
            raise DimensionError(f"pair {i} has inconsistent shapes")
        gap, scale = _eigen_mismatch(gs, gt, tol)
        if gap > tol.bound(scale):
            return ConjugatorResult(None, certificate="spectrum-mismatch",
                                    pair_index=i, residual=gap)

    eye = np.eye(dim)
    blocks = []
    for gs, gt in pairs:
        scale = max(frob(gs), frob(gt), 1.0)
        # row-major vec: vec(G_t U - U G_s) = (G_t (x) I - I (x) G_s^T) vec(U)
        blocks.append((np.kron(gt, eye) - np.kron(eye, gs.T)) / scale)
    system = np.vstack(blocks)
    _, svals, vh = np.linalg.svd(system)
    cutoff = max(svals[0] if len(svals) else 0.0, 1.0) * max(tol.rel, 1e-11)
    null = [vh[j].conj() for j in range(len(vh)) if j >= len(svals) or svals[j] <= cutoff]
    if not null:
        return ConjugatorResult(None, certificate="empty-nullspace",
                                nullspace_dim=0)

    basis = [v.reshape(dim, dim) for v in null]
    rng = np.random.default_rng(seed)
    candidates = list(basis)
    for _ in range(max_restarts):
        coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
        candidates.append(sum(c * b for c, b in zip(coeffs, basis)))

    def constraint_residual(w):
        return max(frob(herm(w) @ gt @ w - gs) / max(frob(gs), frob(gt), 1.0)
                   for gs, gt in pairs)

    saw_nonsingular = False
    best_residual = math.inf
    for x in candidates:
        svals_x = np.linalg.svd(x, compute_uv=False)
        if svals_x[-1] <= 1e-10 * max(svals_x[0], 1e-300):
            continue
        saw_nonsingular = True
        w = nearest_unitary(x)
        worst = constraint_residual(w)
        if worst <= tol.bound(1.0):
            return ConjugatorResult(w, residual=worst, nullspace_dim=len(basis))
        best_residual = min(best_residual, worst)
    if not saw_nonsingular:
        return ConjugatorResult(None, certificate="singular-nullspace",
                                nullspace_dim=len(basis))
    return ConjugatorResult(None, nullspace_dim=len(basis),
                            residual=best_residual,
                            diagnostics={"note": "nonsingular null elements "
                                                 "found but none verified"})


@dataclass
class PositiveForm:
    shift: BilateralShift
    diagonal: BandedOperator
    max_residual: float


def positive_form(s: BilateralShift, lo: int, hi: int,
                  tol: Tolerance = DEFAULT_TOL) -> PositiveForm:
    """Diagonal conjugation of a shift to one with positive weights.

    Polar-decomposes each weight ``S_n = U_n P_n`` and accumulates the
    unitary factors into a diagonal operator whose entries D_n satisfy
    ``D_n S_n = T_n D_{n-1}`` with ``T_n = V_{n-1}* P_n V_{n-1}`` Hermitian
    positive (definite when the weights are invertible).  Conjugation by a
    unitary preserves operator norms, so ``||T_n|| = ||S_n||``.

    Returns
    -------
    PositiveForm(shift, diagonal, max_residual)
        ``shift`` holds the positive weights on [lo, hi] (windowed);
        ``diagonal`` is the conjugating diagonal operator on [lo-1, hi];
        ``max_residual`` is the worst intertwining defect (machine level).
    """
    if hi < lo:
        raise ValueError("hi must be >= lo")
    unitaries = {}
    positives = {}
    for n in range(lo, hi + 1):
        if condition_ratio(s.weight(n)) <= 1e-10:
            raise ConditioningError(
                f"weight at n={n} is singular or ill-conditioned", index=n)
        unitaries[n], positives[n] = polar_decompose(s.weight(n))

    anchor = min(max(0, lo - 1), hi)
    v = {anchor: np.eye(s.dim, dtype=complex)}
    for n in range(anchor + 1, hi + 1):
        v[n] = unitaries[n] @ v[n - 1]
    for n in range(anchor, lo - 1, -1):
        v[n - 1] = herm(unitaries[n]) @ v[n]

    t_weights = []
    max_res = 0.0
    for n in range(lo, hi + 1):
        tn = herm(v[n - 1]) @ positives[n] @ v[n - 1]
        tn = 0.5 * (tn + herm(tn))
        t_weights.append(tn)
        res = frob(herm(v[n]) @ s.weight(n) - tn @ herm(v[n - 1]))
        max_res = max(max_res, res)

    shift = BilateralShift(WindowedWeights(lo, t_weights),
                           label=f"positive({s.label})" if s.label else "")
    diag_entries = [herm(v[n]) for n in range(lo - 1, hi + 1)]
    diagonal = single_band(0, WindowedWeights(lo - 1, diag_entries),
                           label="positive-form conjugator")
    return PositiveForm(shift, diagonal, max_res)


def _norm_mismatch(s, t, k, lo, hi, tol):
    """First (n, |gap|) where ``||S_{n+k}|| != ||T_n||`` on the window."""
    for n in range(lo, hi + 1):
        if not (s.has_weight(n + k) and t.has_weight(n)):
            continue
        a = operator_norm(s.weight(n + k))
        b = operator_norm(t.weight(n))
        if abs(a - b) > tol.bound(max(a, b)):
            return n, abs(a - b)
    return None


def norm_offset_screen(s: BilateralShift, t: BilateralShift, k_min: int,
                       k_max: int, lo: int, hi: int,
                       tol: Tolerance = DEFAULT_TOL) -> set:
    """Offsets k in [k_min, k_max] with ``||S_{n+k}|| = ||T_n||`` on the window.

    An empty result certifies that no diagonal-form intertwiner with offset
    in the range exists.
    """
    return {k for k in range(k_min, k_max + 1)
            if _norm_mismatch(s, t, k, lo, hi, tol) is None}


def eigen_moduli_screen(s: BilateralShift, t: BilateralShift, k: int,
                        lo: int, hi: int,
                        tol: Tolerance = DEFAULT_TOL) -> WindowReport:
    """Compare eigenvalue-moduli multisets of ``S_{n+k}`` and ``T_n``.

    Valid screen for 2x2 normal weights: a diagonal-form intertwiner at
    offset k forces the moduli to agree at every n, so any failure refutes
    equivalence at that offset.
    """
    if s.dim != 2 or t.dim != 2:
        raise PreconditionError("eigenvalue-moduli screen requires dim 2")
    rep = WindowReport(lo, hi)
    for n in range(lo, hi + 1):
        if not (s.has_weight(n + k) and t.has_weight(n)):
            rep.skipped.append(SkippedCheck("eigen_moduli", n,
                                            "index outside a stored window"))
            continue
        ws, wt = s.weight(n + k), t.weight(n)
        for name, w in (("S", ws), ("T", wt)):
            if not is_normal(w, tol):
                raise PreconditionError(
                    f"{name}-weight at n={n} is not normal", index=n)
        ms = np.sort(np.abs(np.linalg.eigvals(ws)))
        mt = np.sort(np.abs(np.linalg.eigvals(wt)))
        gap = float(np.max(np.abs(ms - mt)))
        scale = max(float(ms.max()), float(mt.max()), 1.0)
        rep.checks.append(ConditionCheck("eigen_moduli", n, gap,
                                         gap <= tol.bound(scale)))
    return rep


def construct_diagonal_intertwiner(s: BilateralShift, t: BilateralShift, m: int,
                                   u0: np.ndarray, lo: int, hi: int,
                                   tol: Tolerance = DEFAULT_TOL,
                                   unitary_tol: float = 1e-8) -> dict:
    """Extend one unitary to the full diagonal of an intertwiner.

    Returns the band entries ``{n: V_n}`` for rows ``lo-1 .. hi`` of the
    single-band operator at offset m that intertwines S into T.  The entries
    obey ``V_n S_{n+m} = T_n V_{n-1}`` with the anchor ``V_{-1} = u0``;
    upward entries use weight inverses of S, downward entries inverses of T.
    Each entry is checked for unitarity, which holds exactly when the Gram
    conditions held for ``u0`` at the required depth.

    Raises
    ------
    PreconditionError
        naming the first row whose entry drifts from unitarity beyond
        ``unitary_tol`` (the Gram precondition failed at that depth).
    ConditioningError
        when a required weight inverse is ill-conditioned.
    """
    u0 = np.asarray(u0, dtype=complex)
    if u0.shape != (s.dim, s.dim):
        raise DimensionError("anchor unitary has the wrong shape")
    eye = np.eye(s.dim)
    if frob(herm(u0) @ u0 - eye) > unitary_tol:
        raise PreconditionError("anchor matrix is not unitary",
                                residual=frob(herm(u0) @ u0 - eye))

    def checked(n, mat):
        res = frob(herm(mat) @ mat - eye)
        if res > unitary_tol:
            raise PreconditionError(
                f"diagonal entry at n={n} is not unitary; the metric "
                f"conditions fail at this depth", residual=res, index=n)
        return mat

    def inv_right(x, a, n):
        # x @ a^{-1}
        if condition_ratio(a) <= 1e-10:
            raise ConditioningError(f"weight at n={n} is not invertible", index=n)
        return np.linalg.solve(a.T, x.T).T

    def inv_left(a, x, n):
        # a^{-1} @ x
        if condition_ratio(a) <= 1e-10:
            raise ConditioningError(f"weight at n={n} is not invertible", index=n)
        return np.linalg.solve(a, x)

    entries = {-1: u0}
    for n in range(0, hi + 1):
        entries[n] = checked(n, t.weight(n) @ inv_right(entries[n - 1],
                                                        s.weight(n + m), n + m))
    for n in range(-1, lo - 1, -1):
        entries[n - 1] = checked(n - 1, inv_left(t.weight(n),
                                                 entries[n] @ s.weight(n + m), n))
    return {n: entries[n] for n in range(lo - 1, hi + 1)}


def diagonal_witness(s: BilateralShift, t: BilateralShift, m: int,
                     u0: np.ndarray, lo: int, hi: int,
                     tol: Tolerance = DEFAULT_TOL,
                     unitary_tol: float = 1e-8) -> BandedOperator:
    """Single-band intertwiner at offset m built from the anchor unitary."""
    entries = construct_diagonal_intertwiner(s, t, m, u0, lo, hi, tol, unitary_tol)
    mats = [entries[n] for n in range(lo - 1, hi + 1)]
    return single_band(m, WindowedWeights(lo - 1, mats), label="diagonal witness")


def _described_span(shift: BilateralShift):
    rng = shift.weights.described_range()
    if rng is None:
        return None
    return rng


def _combined_period(s, t):
    periods = [seq.period for seq in (s.weights, t.weights)
               if isinstance(seq, PeriodicWeights)]
    return math.lcm(*periods) if periods else None


def _auto_window(s, t, m):
    period = _combined_period(s, t)
    spans = []
    for shift, delta in ((s, -m), (t, 0)):
        rng = _described_span(shift)
        if rng is not None:
            spans.append((rng[0] + delta, rng[1] + delta))
    lo = min((a for a, _ in spans), default=0) - 2
    hi = max((b for _, b in spans), default=0) + 2
    if period is not None:
        lo = min(lo, -period - 2)
        hi = max(hi, period + 2)
    # windowed descriptions bound the reachable rows
    if isinstance(t.weights, WindowedWeights):
        a, b = t.weights.described_range()
        lo, hi = max(lo, a), min(hi, b)
    if isinstance(s.weights, WindowedWeights):
        a, b = s.weights.described_range()
        lo, hi = max(lo, a - m), min(hi, b - m)
    if hi < lo:
        raise PreconditionError(
            "stored weight windows leave no usable decision window at "
            f"offset {m}")
    return (lo, hi)


def _auto_depth(s, t, m):
    """Depth at which the Gram chains stop carrying new information.

    Eventually-identity products stabilize once the supports are exhausted;
    periodic products are sampled over twice the combined period.  Windowed
    descriptions cap the depth at what is accessible.
    """
    reaches = []
    for shift, base in ((s, m), (t, 0)):
        rng = _described_span(shift)
        if rng is not None:
            reaches.append(max(rng[1] - base, base - rng[0], 0))
    period = _combined_period(s, t)
    if period is not None:
        desired = 2 * period + 4 + (max(reaches) if reaches else 0)
    else:
        desired = (max(reaches) if reaches else 0) + 4
    caps = []
    for shift, base in ((s, m), (t, 0)):
        if isinstance(shift.weights, WindowedWeights):
            a, b = shift.weights.described_range()
            caps.append(b - base + 1)
            caps.append(base - a)
    if caps:
        desired = min(desired, min(caps))
    return max(desired, 1)


def _not_equivalent(m, kind, index, residual, detail):
    return EquivalenceVerdict(
        VerdictStatus.NOT_EQUIVALENT, offset=m,
        obstruction=Obstruction(kind, m, index, residual, detail))


def decide_diagonal_equivalence(s: BilateralShift, t: BilateralShift, m: int,
                                depth: int | None = None,
                                window: tuple | None = None,
                                tol: Tolerance = DEFAULT_TOL,
                                seed: int = 0) -> EquivalenceVerdict:
    """Decide unitary equivalence by a single-band intertwiner at offset m.

    Pipeline: weight-norm screen at offset m, eigenvalue-moduli screen (2x2
    normal weights), Gram chains to the stabilization depth, joint-conjugator
    search, then construction and re-verification of the full diagonal
    witness.  Verdicts are certified relative to the window; for periodic
    weights an Equivalent verdict additionally requires the witness entries
    to repeat with the combined period, otherwise the result is
    ``inconclusive`` rather than an extrapolation.
    """
    if s.dim != t.dim:
        raise DimensionError("shifts must share the block dimension")
    for name, shift in (("S", s), ("T", t)):
        if not shift.quasi_invertible:
            raise ConditioningError(f"{name} has weights failing the "
                                    f"invertibility threshold")
    if window is None:
        window = _auto_window(s, t, m)
    lo, hi = window
    if depth is None:
        depth = _auto_depth(s, t, m)

    mism = _norm_mismatch(s, t, m, lo, hi, tol)
    if mism is not None:
        n, gap = mism
        return _not_equivalent(m, "norm-profile", n, gap,
                               f"||S_{{n+{m}}}|| != ||T_n|| at n={n}")

    if s.dim == 2:
        def all_normal(shift):
            return all(is_normal(w, tol) for _, w in shift.weights.described_items())
        if all_normal(s) and all_normal(t):
            rep = eigen_moduli_screen(s, t, m, lo, hi, tol)
            if not rep.passed:
                bad = rep.first_failure()
                return _not_equivalent(m, "eigenvalue-moduli", bad.index,
                                       bad.residual,
                                       "eigenvalue moduli differ at "
                                       f"n={bad.index}")

    chains = gram_chains(s, t, m, 0, depth)
    pairs = chains.pairs()
    found = solve_joint_conjugator(pairs, tol=tol, seed=seed)
    if found.unitary is None:
        if found.certificate == "spectrum-mismatch":
            i = found.pair_index
            direction = "forward" if i < depth else "backward"
            step = (i % depth) + 1
            return _not_equivalent(
                m, "gram-spectrum", step, found.residual,
                f"{direction} product Gram spectra differ at depth {step}")
        if found.certificate in ("empty-nullspace", "singular-nullspace"):
            return _not_equivalent(
                m, "conjugator-infeasible", None, found.residual,
                f"no unitary satisfies the metric conditions to depth {depth} "
                f"({found.certificate})")
        return EquivalenceVerdict(
            VerdictStatus.INCONCLUSIVE, offset=m,
            reason=f"conjugator search exhausted without certificate "
                   f"(nullspace dim {found.nullspace_dim})")

    verify_tol = Tolerance(rel=max(tol.rel, 1e-8), abs=max(tol.abs, 1e-10))
    try:
        witness = diagonal_witness(s, t, m, found.unitary, lo, hi, tol)
    except (PreconditionError, ConditioningError) as exc:
        return EquivalenceVerdict(
            VerdictStatus.INCONCLUSIVE, offset=m,
            reason=f"witness construction failed: {exc}")
    wrep = verify_intertwining(witness, s, t, lo, hi, verify_tol)
    if not wrep.passed:
        return EquivalenceVerdict(
            VerdictStatus.INCONCLUSIVE, offset=m,
            reason="constructed witness failed re-verification")

    period = _combined_period(s, t)
    if period is not None:
        ok, why = _periodic_witness_certificate(s, t, witness, m, period,
                                                lo, hi, verify_tol)
        if not ok:
            return EquivalenceVerdict(
                VerdictStatus.INCONCLUSIVE, offset=m,
                reason=f"metric conditions hold to depth {depth} but the "
                       f"witness does not certify the periodic horizon: {why}")
    return EquivalenceVerdict(VerdictStatus.EQUIVALENT, offset=m,
                              witness=witness, witness_report=wrep)


def _periodic_witness_certificate(s, t, witness, m, period, lo, hi, tol):
    """A periodic witness extends to all indices; check entries repeat.

    Beyond any eventually-identity supports the recursion has periodic
    coefficients, so ``V_{n+period} = V_n`` on both window margins implies it
    for every index.  Empty margins mean the window is too small to certify.
    """
    band = witness.band(m)
    spans = [rng for rng in (_described_span(s), _described_span(t)) if rng is not None]
    upper_start = max([r[1] for r in spans], default=lo - 1) + 1
    lower_end = min([r[0] for r in spans], default=hi + 1) - 1

    def entries_repeat(a, b):
        checked = False
        for n in range(a, b - period + 1):
            if not (band.has_index(n) and band.has_index(n + period)):
                continue
            checked = True
            if not tol.close(band.weight_at(n), band.weight_at(n + period)):
                return False, f"entries at n={n} and n={n + period} differ"
        if not checked:
            return False, "window leaves no margin to compare a full period"
        return True, ""

    ok_hi, why_hi = entries_repeat(max(upper_start, lo - 1), hi)
    if not ok_hi:
        return False, why_hi
    ok_lo, why_lo = entries_repeat(lo - 1, min(lower_end, hi))
    if not ok_lo:
        return False, why_lo
    return True, ""


def decide_diagonal_equivalence_scan(s: BilateralShift, t: BilateralShift,
                                     k_min: int, k_max: int,
                                     depth: int | None = None,
                                     window: tuple | None = None,
                                     tol: Tolerance = DEFAULT_TOL,
                                     seed: int = 0) -> EquivalenceVerdict:
    """Scan offsets in [k_min, k_max], trying norm-feasible ones first.

    Returns the first Equivalent verdict (offsets ordered by |m|, positive
    first on ties); otherwise Inconclusive if any offset was inconclusive;
    otherwise NotEquivalent with the scan summary as obstruction.
    """
    if window is None:
        base_lo, base_hi = _auto_window(s, t, 0)
        spread = max(abs(k_min), abs(k_max))
        lo, hi = base_lo - spread, base_hi + spread
    else:
        lo, hi = window
    feasible = sorted(norm_offset_screen(s, t, k_min, k_max, lo, hi, tol),
                      key=lambda k: (abs(k), -k))
    if not feasible:
        return _not_equivalent(
            0, "norm-profile", None, 0.0,
            f"no offset in [{k_min}, {k_max}] matches the weight-norm profile")
    inconclusive = []
    last = None
    for m in feasible:
        verdict = decide_diagonal_equivalence(s, t, m, depth=depth,
                                              window=window, tol=tol, seed=seed)
        if verdict.is_equivalent:
            return verdict
        if verdict.is_inconclusive:
            inconclusive.append(verdict)
        last = verdict
    if inconclusive:
        return inconclusive[0]
    verdict = last
    verdict.obstruction.detail += (
        f" (last of {len(feasible)} norm-feasible offsets scanned)")
    return verdict
