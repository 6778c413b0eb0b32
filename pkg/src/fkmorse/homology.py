"""Integer homology of truncated Morse complexes via Smith normal form.

Slices hold the Morse boundary between critical cells of adjacent degrees,
restricted to word length <= L.  The boundary never increases word length,
so each truncation is honestly closed under the boundary; the stability
scan probes how the answer depends on L.

Slice bases use the nondegenerate critical cells: the degenerate cells form
an acyclic subcomplex the flow never moves, so dropping them changes no
homology and keeps the low-degree boundary matrices identically zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .chains import Chain, boundary, inner
from .errors import SelfCheckError
from .flow import FlowContext
from .pairing import (CriticalReport, DEFAULT_FLAGS, Matching, PairingFlags,
                      Scope, build_matching)
from .simplicial import Simplex, simplex_text, sort_key

Matrix = list[list[int]]


# --- exact Smith normal form ----------------------------------------------------

@dataclass(frozen=True)
class SnfResult:
    rank: int
    invariant_factors: list[int]
    diagonal: Matrix
    left: Optional[Matrix] = None
    right: Optional[Matrix] = None


def _identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Matrix, transforms: bool = False) -> SnfResult:
    """Diagonalize over the integers; factors form a divisibility chain.

    With transforms=True the result carries unimodular certificates with
    left * matrix * right equal to the diagonal, exactly.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if any(len(r) != cols for r in matrix):
        raise ValueError("ragged matrix")
    a = [[int(v) for v in row] for row in matrix]
    left = _identity_matrix(rows) if transforms else None
    right = _identity_matrix(cols) if transforms else None

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        if left is not None:
            left[i], left[j] = left[j], left[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        if right is not None:
            for row in right:
                row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, q: int) -> None:
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        if left is not None:
            left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(src: int, dst: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        if right is not None:
            for row in right:
                row[dst] += q * row[src]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        if left is not None:
            left[i] = [-x for x in left[i]]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            # clear column t, then row t; smaller remainders become pivots
            dirty = False
            for i in range(rows):
                if i != t and a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(cols):
                if j != t and a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # divisibility: the pivot must divide the rest of the submatrix
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return SnfResult(rank=t,
                     invariant_factors=[a[k][k] for k in range(t)],
                     diagonal=a, left=left, right=right)


# --- Morse slices ----------------------------------------------------------------

@dataclass(frozen=True)
class MorseSlice:
    """The Morse boundary from critical degree-d cells to degree d-1.

    matrix[row][col] is the entry of basis_hi[row] against basis_lo[col];
    bases are sorted by word length then lexicographically.
    """

    degree: int
    basis_lo: list[Simplex]
    basis_hi: list[Simplex]
    matrix: Matrix
    scope: Scope

    def to_json(self) -> str:
        return json.dumps(
            {"degree": self.degree,
             "scope": self.scope.to_json_dict(),
             "rows": [simplex_text(x) for x in self.basis_hi],
             "cols": [simplex_text(x) for x in self.basis_lo],
             "matrix": self.matrix},
            separators=(",", ":"))

    def to_csv(self) -> str:
        header = "simplex," + ",".join(simplex_text(x) for x in self.basis_lo)
        lines = [header]
        for x, row in zip(self.basis_hi, self.matrix):
            lines.append(simplex_text(x) + "," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"


def critical_basis(report: CriticalReport, dim: int, max_length: int) \
        -> list[Simplex]:
    """Nondegenerate critical cells of one dimension, in stratum order."""
    cells: list[Simplex] = []
    for length in range(max_length + 1):
        if dim == 0 and length > 0:
            break
        cells.extend(report.unmatched_nondegenerate(dim, length))
    return sorted(cells, key=sort_key)


def build_slice(ctx: FlowContext, report: CriticalReport, degree: int) \
        -> MorseSlice:
    """All entries of one boundary degree, with the exchange check per cell."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    scope = ctx.scope
    hi = critical_basis(report, degree, scope.max_length)
    lo = critical_basis(report, degree - 1, scope.max_length) if degree else []
    matrix: Matrix = []
    for cell in hi:
        if degree == 0:
            matrix.append([])
            continue
        stable_dc, _ = ctx.stabilize(boundary(Chain.unit(cell), ctx.mode))
        stable_c, _ = ctx.stabilize(Chain.unit(cell))
        d_stable_c = boundary(stable_c, ctx.mode)
        row = []
        for low in lo:
            via_boundary = inner(stable_dc, low)
            via_flow = inner(d_stable_c, low)
            if via_boundary != via_flow:
                raise SelfCheckError(
                    f"flow/boundary exchange failed at ({cell}, {low}): "
                    f"{via_boundary} vs {via_flow}")
            ctx.dual_route_checks += 1
            row.append(via_boundary)
        matrix.append(row)
    return MorseSlice(degree=degree, basis_lo=lo, basis_hi=hi,
                      matrix=matrix, scope=scope)


# --- homology ---------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyResult:
    degree: int
    max_length: int
    betti: int
    torsion: list[int]

    def to_json(self) -> str:
        return json.dumps(
            {"degree": self.degree,
             "scope": {"max_length": self.max_length},
             "betti": self.betti,
             "torsion": self.torsion},
            separators=(",", ":"))


def _compose_is_zero(lo: MorseSlice, hi: MorseSlice) -> bool:
    # rows of hi are (d+1)-cells; composing means boundary twice
    row_of = {x: lo.matrix[k] for k, x in enumerate(lo.basis_hi)}
    for row in hi.matrix:
        acc = [0] * len(lo.basis_lo)
        for mid, coef in zip(hi.basis_lo, row):
            if not coef:
                continue
            acc = [x + coef * y for x, y in zip(acc, row_of[mid])]
        if any(acc):
            return False
    return True


def homology_of_slices(lo: MorseSlice, hi: MorseSlice) -> HomologyResult:
    """H_d from the slice below (degree d) and above (degree d+1)."""
    if hi.degree != lo.degree + 1:
        raise ValueError("slices must sit at consecutive degrees")
    if hi.scope != lo.scope:
        raise ValueError("slices were built under different scopes")
    if hi.basis_lo != lo.basis_hi:
        raise ValueError("slices disagree on the middle critical basis")
    if lo.degree > 0 and not _compose_is_zero(lo, hi):
        raise SelfCheckError(
            f"boundary squared is nonzero between degrees {hi.degree} and "
            f"{lo.degree - 1}")
    rank_lo = smith_normal_form(lo.matrix).rank
    snf_hi = smith_normal_form(hi.matrix)
    betti = len(lo.basis_hi) - rank_lo - snf_hi.rank
    torsion = [f for f in snf_hi.invariant_factors if f not in (0, 1)]
    return HomologyResult(degree=lo.degree, max_length=lo.scope.max_length,
                          betti=betti, torsion=torsion)


def morse_context(degree: int, max_length: int,
                  flags: PairingFlags = DEFAULT_FLAGS,
                  mode: str = "unnormalized") \
        -> tuple[FlowContext, CriticalReport, Matching]:
    """Matching plus flow context wide enough for degree-d homology."""
    max_dim = degree + 2
    matching, report = build_matching(max_dim, max_length, flags)
    ctx = FlowContext(matching, Scope(max_dim, max_length), mode,
                      validate=False)  # build_matching validated already
    return ctx, report, matching


def compute_homology(degree: int, max_length: int,
                     flags: PairingFlags = DEFAULT_FLAGS,
                     mode: str = "unnormalized") -> HomologyResult:
    if degree < 0:
        raise ValueError("degree must be >= 0")
    ctx, report, _ = morse_context(degree, max_length, flags, mode)
    lo = build_slice(ctx, report, degree)
    hi = build_slice(ctx, report, degree + 1)
    return homology_of_slices(lo, hi)


@dataclass(frozen=True)
class StabilityScan:
    degree: int
    results: list[HomologyResult] = field(default_factory=list)
    stable_from: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(
            {"degree": self.degree,
             "results": [json.loads(r.to_json()) for r in self.results],
             "stable_from": self.stable_from},
            separators=(",", ":"))


def stability_scan(degree: int, length_lo: int, length_hi: int,
                   flags: PairingFlags = DEFAULT_FLAGS,
                   mode: str = "unnormalized") -> StabilityScan:
    """Homology at every bound in the range; smallest bound after which the
    (betti, torsion) answer stays constant through the end of the range."""
    results = [compute_homology(degree, L, flags, mode)
               for L in range(length_lo, length_hi + 1)]
    stable_from: Optional[int] = None
    if results:
        last = (results[-1].betti, tuple(results[-1].torsion))
        stable_from = length_hi
        for k in range(len(results) - 1, -1, -1):
            if (results[k].betti, tuple(results[k].torsion)) != last:
                break
            stable_from = length_lo + k
    return StabilityScan(degree=degree, results=results,
                         stable_from=stable_from)
