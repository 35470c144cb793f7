"""Brute-force verification on the rational lattice ``{0, 1/k, ..., 1}^n``.

Lattice points are stored as integer numerators in ``0..k`` (an ``(m, n)``
array); divide by ``k`` for coordinates.  All checks are exact.

Dominance inside the feasible lattice uses a unit-step criterion: a feasible
lattice point ``x`` is strictly dominated by another feasible lattice point
iff, for some non-empty set ``S`` of variables, moving every ``i`` in ``S``
one lattice step in its preferred direction stays feasible.  (If ``y``
dominates ``x``, taking ``S`` as the coordinates where they differ works:
every order constraint keeps at least the slack that ``y`` witnesses.)
``pareto_filter`` is the plain pairwise scan and serves as the cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .hasse import Instance, Signature
from .solver import Binding, FrontRepresentation, ParetoFace

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    pass


def dominates(x: Sequence, y: Sequence, sig: Signature, strict: bool = False) -> bool:
    """Weak Pareto dominance ``x >= y`` (``strict`` adds ``x != y``)."""
    if len(x) != len(y) or len(x) != sig.n:
        raise ValueError(f"length mismatch: {len(x)}, {len(y)}, n={sig.n}")
    for i in range(1, sig.n + 1):
        a, b = x[i - 1], y[i - 1]
        if i in sig.ascending:
            if a < b:
                return False
        elif a > b:
            return False
    if strict:
        return tuple(x) != tuple(y)
    return True


def pareto_filter(points: Iterable[Sequence], sig: Signature) -> list[tuple]:
    """Points not strictly dominated by any other point of the set."""
    pts = sorted(set(map(tuple, points)))
    return [
        p for p in pts if not any(dominates(q, p, sig, strict=True) for q in pts)
    ]


def _extend(
    n: int,
    constraints: Sequence[tuple[int, int]],
    k: int,
    budget: int,
) -> np.ndarray:
    """All integer vectors in ``0..k`` (columns 0..n-1) meeting ``x_a >= x_b``.

    Builds column by column; a row's admissible range for the new column
    comes from the constraints against columns already placed, so every
    constraint is enforced when its later column is added.
    """
    rows = np.zeros((1, 0), dtype=np.int16)
    for col in range(n):
        uppers = [a for a, b in constraints if b == col and a < col]
        lowers = [b for a, b in constraints if a == col and b < col]
        m = rows.shape[0]
        hi = np.full(m, k, dtype=np.int16)
        lo = np.zeros(m, dtype=np.int16)
        for a in uppers:
            hi = np.minimum(hi, rows[:, a])
        for b in lowers:
            lo = np.maximum(lo, rows[:, b])
        counts = np.clip(hi - lo + 1, 0, None).astype(np.int64)
        total = int(counts.sum())
        if total > budget:
            raise BudgetExceeded(
                f"lattice enumeration exceeds budget {budget} "
                f"(>= {total} points after {col + 1} of {n} variables)"
            )
        rep = np.repeat(rows, counts, axis=0)
        starts = np.repeat(lo, counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        new = (starts + offsets).astype(np.int16)
        rows = np.concatenate([rep, new[:, None]], axis=1)
    return rows


def grid_enumerate(instance: Instance, k: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Feasible lattice points, as numerators ``0..k``, one row per point."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cons = [(i - 1, j - 1) for i, j in instance.constraints if i != j]
    return _extend(instance.n, cons, k, budget)


def grid_pareto(points: np.ndarray, instance: Instance, k: int, chunk: int = 2048) -> np.ndarray:
    """Boolean mask of the non-dominated rows of a feasible lattice point set."""
    n = instance.n
    sig = instance.signature
    direction = np.array([1 if i in sig.ascending else -1 for i in range(1, n + 1)], dtype=np.int16)
    cons = [(i - 1, j - 1) for i, j in instance.constraints if i != j]

    movable = np.where(direction > 0, points < k, points > 0)
    gaps = [np.minimum(points[:, a] - points[:, b], 2) for a, b in cons]
    feats = np.concatenate([movable.astype(np.int16)] + [g[:, None] for g in gaps], axis=1)
    # rows only matter through this feature vector; pack it into one integer
    # so the dedup is a 1-d unique (radix 3 covers both bits and gaps)
    if feats.shape[1] <= 39:
        packed = feats.astype(np.int64) @ (3 ** np.arange(feats.shape[1], dtype=np.int64))
        _, first, inverse = np.unique(packed, return_index=True, return_inverse=True)
        uniq = feats[first]
    else:
        uniq, inverse = np.unique(feats, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)

    subsets = np.array(list(itertools.product([0, 1], repeat=n))[1:], dtype=np.int16)
    steps = subsets * direction
    delta = np.stack([steps[:, a] - steps[:, b] for a, b in cons], axis=1) if cons else None

    dominated = np.zeros(len(uniq), dtype=bool)
    for start in range(0, len(uniq), chunk):
        u = uniq[start:start + chunk]
        mov = u[:, :n].astype(bool)
        ok = ~np.any(subsets[None, :, :].astype(bool) & ~mov[:, None, :], axis=2)
        if cons:
            gap = u[:, n:]
            ok &= np.all(gap[:, None, :] + delta[None, :, :] >= 0, axis=2)
        dominated[start:start + chunk] = ok.any(axis=1)
    return ~dominated[inverse]


def face_mask(face: ParetoFace, points: np.ndarray, k: int) -> np.ndarray:
    """Rows of ``points`` lying on ``face`` (numerator form)."""
    ok = np.ones(points.shape[0], dtype=bool)
    value: dict[str, np.ndarray] = {}
    for a in face.aggregates:
        cols = [i - 1 for i in a.indices]
        v = points[:, cols[0]]
        ok &= np.all(points[:, cols] == v[:, None], axis=1)
        if a.binding is Binding.ZERO:
            ok &= v == 0
        elif a.binding is Binding.ONE:
            ok &= v == k
        else:
            value[a.param] = v
    for p, q in face.param_constraints:
        ok &= value[p] >= value[q]
    return ok


def face_points(face: ParetoFace, n: int, k: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Every lattice point of a face (all admissible parameter assignments)."""
    free = face.free()
    pos = {a.param: c for c, a in enumerate(free)}
    # parameters in an order compatible with the constraints
    cons = [(pos[p], pos[q]) for p, q in face.param_constraints]
    order = _topo(len(free), cons)
    rank = {c: r for r, c in enumerate(order)}
    params = _extend(len(free), [(rank[a], rank[b]) for a, b in cons], k, budget)
    pts = np.zeros((params.shape[0], n), dtype=np.int16)
    for a in face.aggregates:
        cols = [i - 1 for i in a.indices]
        if a.binding is Binding.ONE:
            pts[:, cols] = k
        elif a.binding is Binding.FREE:
            pts[:, cols] = params[:, rank[pos[a.param]]][:, None]
    return pts


def _topo(m: int, edges: list[tuple[int, int]]) -> list[int]:
    indeg = [0] * m
    for _, b in edges:
        indeg[b] += 1
    ready = [c for c in range(m) if indeg[c] == 0]
    out = []
    while ready:
        c = ready.pop(0)
        out.append(c)
        for a, b in edges:
            if a == c:
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
    if len(out) != m:
        raise ValueError("parameter constraints are cyclic")
    return out


def _codes(points: np.ndarray, k: int) -> np.ndarray:
    base = (k + 1) ** np.arange(points.shape[1], dtype=np.int64)
    return points.astype(np.int64) @ base


@dataclass
class VerifyReport:
    passed: bool
    n_points: int
    n_pareto: int
    n_faces: int
    k: int
    failure: str | None = None
    witness: tuple[Fraction, ...] | None = None

    def text(self) -> str:
        lines = [
            f"lattice step 1/{self.k}: {self.n_points} feasible points, "
            f"{self.n_pareto} non-dominated, {self.n_faces} faces"
        ]
        if self.passed:
            lines.append("PASS")
        else:
            lines.append(f"FAIL: {self.failure}")
            lines.append("witness=(" + ", ".join(str(c) for c in self.witness) + ")")
        return "\n".join(lines) + "\n"


def verify_front(
    instance: Instance,
    front: FrontRepresentation | Sequence[ParetoFace],
    k: int = 10,
    budget: int = DEFAULT_BUDGET,
) -> VerifyReport:
    """Compare a face list with the lattice Pareto set, both directions."""
    faces = list(front.faces if isinstance(front, FrontRepresentation) else front)
    widest = max((len(f.aggregates) for f in faces), default=0)
    if k < widest:
        raise ValueError(f"k={k} is below the aggregate count {widest} of some face")
    pts = grid_enumerate(instance, k, budget)
    par = pts[grid_pareto(pts, instance, k)]
    report = VerifyReport(True, len(pts), len(par), len(faces), k)

    def frac(row) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(v), k) for v in row)

    covered = np.zeros(len(par), dtype=bool)
    for f in faces:
        covered |= face_mask(f, par, k)
    if not covered.all():
        report.passed = False
        report.failure = "non-dominated lattice point lies on no face"
        report.witness = frac(par[np.argmin(covered)])
        return report

    par_codes = np.sort(_codes(par, k))
    for j, f in enumerate(faces):
        fp = face_points(f, instance.n, k, budget)
        codes = _codes(fp, k)
        pos = np.clip(np.searchsorted(par_codes, codes), 0, len(par_codes) - 1)
        bad = par_codes[pos] != codes if len(par_codes) else np.ones(len(codes), dtype=bool)
        if bad.any():
            report.passed = False
            report.failure = f"face {j} ({f}) contains a dominated or infeasible point"
            report.witness = frac(fp[np.argmax(bad)])
            return report
    return report
