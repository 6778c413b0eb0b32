"""Steepness pairing restricted to word-length strata, and matching validation.

A cell sigma pairs with the lex-least same-length coface tau in which sigma
sits as a regular face, provided sigma is the largest face of tau.  Quantifier
scopes are configurable: by default coface-minimality ranges over REGULAR
same-length cofaces and face-maximality ranges over ALL same-length faces
(so degenerate faces can block a pair).  Degenerate cells are left critical
by default; the "allow" policy lets them pair, for diagnostics.

Pairs never cross word-length strata and faces never increase word length,
so cycle checking reduces to the same-length sub-digraph of each stratum;
validate_matching records that reduction in its verdict.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import SelfCheckError, TruncationError
from .simplicial import (
    Simplex,
    StratumKey,
    _face_letter,
    enumerate_stratum,
    face,
    is_degenerate,
    simplex_text,
    sort_key,
    stratum_size,
)

FACE_QUANTIFIERS = ("all", "regular")
COFACE_QUANTIFIERS = ("regular", "any")
DEGENERATE_POLICIES = ("critical", "allow")


@dataclass(frozen=True, slots=True)
class PairingFlags:
    """Quantifier scopes and degeneracy policy of the steepness rule.

    Defaults give the pairing every recorded value in this repository
    uses; other combinations are diagnostic only.
    """

    face_quantifier: str = "all"
    coface_quantifier: str = "regular"
    degenerate_policy: str = "critical"

    def __post_init__(self) -> None:
        if self.face_quantifier not in FACE_QUANTIFIERS:
            raise ValueError(f"face_quantifier must be one of {FACE_QUANTIFIERS}")
        if self.coface_quantifier not in COFACE_QUANTIFIERS:
            raise ValueError(
                f"coface_quantifier must be one of {COFACE_QUANTIFIERS}")
        if self.degenerate_policy not in DEGENERATE_POLICIES:
            raise ValueError(
                f"degenerate_policy must be one of {DEGENERATE_POLICIES}")

    def to_json_dict(self) -> dict:
        return {"face_quantifier": self.face_quantifier,
                "coface_quantifier": self.coface_quantifier,
                "degenerate_policy": self.degenerate_policy}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PairingFlags":
        return cls(face_quantifier=data["face_quantifier"],
                   coface_quantifier=data["coface_quantifier"],
                   degenerate_policy=data["degenerate_policy"])


DEFAULT_FLAGS = PairingFlags()


@dataclass(frozen=True, slots=True)
class Scope:
    """Truncation bounds: cells with dim <= max_dim and length <= max_length."""

    max_dim: int
    max_length: int

    def __post_init__(self) -> None:
        if self.max_dim < 1 or self.max_length < 1:
            raise ValueError("scope bounds must be >= 1")

    def covers(self, x: Simplex) -> bool:
        return x.dim <= self.max_dim and x.length <= self.max_length

    def covers_stratum(self, dim: int, length: int) -> bool:
        return dim <= self.max_dim and length <= self.max_length

    def to_json_dict(self) -> dict:
        return {"max_dim": self.max_dim, "max_length": self.max_length}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Scope":
        return cls(int(data["max_dim"]), int(data["max_length"]))


# --- coface inversion --------------------------------------------------------
#
# A letter g in dimension n lifts, under d_i, only to g or g+1 in dimension
# n+1.  Same-length cofaces are exactly the positionwise products of these
# letter preimages; no letter may be dropped or the length would shrink.

def letter_coface_preimages(n: int, i: int, g: int) -> tuple[int, ...]:
    """Letters h in dimension n+1 with d_i(a_h) = a_g in dimension n."""
    out = []
    if i <= n + 1 - g:
        out.append(g)
    if i >= n + 1 - g:
        out.append(g + 1)
    return tuple(out)


def coface_occurrences(sigma: Simplex) -> dict[Simplex, tuple[int, ...]]:
    """Same-length cofaces tau, each with all indices i where d_i(tau) = sigma."""
    n = sigma.dim
    found: dict[tuple[int, ...], list[int]] = {}
    for i in range(n + 2):
        per_letter = [letter_coface_preimages(n, i, g) for g in sigma.word]
        if any(not p for p in per_letter):
            continue
        words = [()]
        for choices in per_letter:
            words = [w + (h,) for w in words for h in choices]
        for w in words:
            found.setdefault(w, []).append(i)
    return {Simplex(n + 1, w): tuple(ix) for w, ix in sorted(found.items())}


def regular_cofaces(sigma: Simplex) -> list[tuple[Simplex, int]]:
    """Same-length cofaces holding sigma as a regular face, with the index."""
    return [(tau, ix[0]) for tau, ix in coface_occurrences(sigma).items()
            if len(ix) == 1]


# --- the single-cell steepness rule -----------------------------------------

def _same_length_faces(tau: Simplex) -> list[tuple[Simplex, int]]:
    out = []
    for i in range(tau.dim + 1):
        f = face(tau, i)
        if f.length == tau.length:
            out.append((f, i))
    return out


def _face_max_ok(tau: Simplex, sigma: Simplex, flags: PairingFlags) -> bool:
    # sigma must be the largest face of tau; shorter faces are always smaller
    faces = _same_length_faces(tau)
    if flags.face_quantifier == "regular":
        counts: dict[Simplex, int] = {}
        for f, _ in faces:
            counts[f] = counts.get(f, 0) + 1
        faces = [(f, i) for f, i in faces if counts[f] == 1]
    key = sort_key(sigma)
    return all(sort_key(f) <= key for f, _ in faces)


def steepness_pair_reason(
        sigma: Simplex,
        flags: PairingFlags = DEFAULT_FLAGS) -> tuple[Optional[Simplex], str]:
    """The partner of sigma, or None with the reason it stays unmatched."""
    if flags.degenerate_policy == "critical" and is_degenerate(sigma):
        return None, "degenerate"
    occ = coface_occurrences(sigma)
    if flags.coface_quantifier == "regular":
        candidates = [t for t, ix in occ.items() if len(ix) == 1]
    else:
        candidates = list(occ)
    if not candidates:
        return None, "no-regular-coface"
    tau = min(candidates, key=sort_key)
    if flags.degenerate_policy == "critical" and is_degenerate(tau):
        return None, "coface-degenerate"
    if not _face_max_ok(tau, sigma, flags):
        return None, "not-max-in-min-coface"
    return tau, "paired"


def steepness_pair(sigma: Simplex,
                   flags: PairingFlags = DEFAULT_FLAGS) -> Optional[Simplex]:
    return steepness_pair_reason(sigma, flags)[0]


def _pair_down(tau: Simplex, flags: PairingFlags) -> Optional[Simplex]:
    """The sigma with steepness_pair(sigma) = tau, computed from tau's side."""
    if tau.dim == 0:
        return None
    faces = _same_length_faces(tau)
    if not faces:
        return None
    counts: dict[Simplex, int] = {}
    for f, _ in faces:
        counts[f] = counts.get(f, 0) + 1
    if flags.face_quantifier == "regular":
        pool = [f for f, _ in faces if counts[f] == 1]
    else:
        pool = [f for f, _ in faces]
    if not pool:
        return None
    sigma = max(pool, key=sort_key)
    # the winner must occupy a single face index regardless of quantifier
    if counts[sigma] != 1:
        return None
    if steepness_pair(sigma, flags) == tau:
        return sigma
    return None


class SteepnessRule:
    """Lazy, memoized pairing oracle; needs no global enumeration.

    Equivalent on every stratum to build_matching (tested), but usable at
    dimensions where enumerating strata is infeasible.
    """

    def __init__(self, flags: PairingFlags = DEFAULT_FLAGS) -> None:
        self.flags = flags
        self._up: dict[Simplex, Optional[Simplex]] = {}
        self._down: dict[Simplex, Optional[Simplex]] = {}

    def pair_up(self, x: Simplex) -> Optional[Simplex]:
        if x not in self._up:
            self._up[x] = steepness_pair(x, self.flags)
        return self._up[x]

    def pair_down(self, x: Simplex) -> Optional[Simplex]:
        if x not in self._down:
            self._down[x] = _pair_down(x, self.flags)
        return self._down[x]

    def is_matched(self, x: Simplex) -> bool:
        return self.pair_up(x) is not None or self.pair_down(x) is not None

    def is_critical(self, x: Simplex) -> bool:
        return not self.is_matched(x)


# --- explicit matchings over a truncation ------------------------------------

class Matching:
    """A finite set of steepness pairs built under a truncation scope."""

    def __init__(self, pairs: Iterable[tuple[Simplex, Simplex]], scope: Scope,
                 flags: PairingFlags) -> None:
        self.scope = scope
        self.flags = flags
        self.pairs: list[tuple[Simplex, Simplex]] = sorted(
            pairs, key=lambda p: (p[0].dim, sort_key(p[0])))
        self._up: dict[Simplex, Simplex] = {}
        self._down: dict[Simplex, Simplex] = {}
        for sigma, tau in self.pairs:
            if tau.dim != sigma.dim + 1:
                raise ValueError(
                    f"pair ({sigma}, {tau}) does not span adjacent dimensions")
            if tau.length != sigma.length:
                raise ValueError(
                    f"pair ({sigma}, {tau}) crosses word-length strata")
            self._up[sigma] = tau
            self._down[tau] = sigma

    def __len__(self) -> int:
        return len(self.pairs)

    def pair_up(self, x: Simplex) -> Optional[Simplex]:
        return self._up.get(x)

    def pair_down(self, x: Simplex) -> Optional[Simplex]:
        return self._down.get(x)

    def is_matched(self, x: Simplex) -> bool:
        return x in self._up or x in self._down

    def is_critical(self, x: Simplex) -> bool:
        """Unmatched within scope; undecidable at dim = max_dim (no coface data)."""
        if not self.scope.covers(x):
            raise ValueError(f"{x} (dim {x.dim}) lies outside {self.scope}")
        if x.dim >= self.scope.max_dim and x not in self._down:
            raise ValueError(
                f"criticality of {x} at dim {x.dim} is undecided: the scope "
                f"holds no dimension-{x.dim + 1} cofaces")
        return not self.is_matched(x)

    def pairs_for_stratum(self, dim: int, length: int) \
            -> list[tuple[Simplex, Simplex]]:
        return [(s, t) for s, t in self.pairs
                if s.dim == dim and s.length == length]

    def to_json(self) -> str:
        return json.dumps(
            {"scope": self.scope.to_json_dict(),
             "flags": self.flags.to_json_dict(),
             "pairs": [{"sigma": {"dim": s.dim, "word": list(s.word)},
                        "tau": {"dim": t.dim, "word": list(t.word)},
                        "stratum": {"dim": s.dim, "length": s.length}}
                       for s, t in self.pairs]},
            separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Matching":
        data = json.loads(text)
        pairs = []
        for entry in data["pairs"]:
            s = Simplex(int(entry["sigma"]["dim"]),
                        tuple(int(k) for k in entry["sigma"]["word"]))
            t = Simplex(int(entry["tau"]["dim"]),
                        tuple(int(k) for k in entry["tau"]["word"]))
            pairs.append((s, t))
        return cls(pairs, Scope.from_json_dict(data["scope"]),
                   PairingFlags.from_json_dict(data["flags"]))


@dataclass
class CriticalReport:
    """Critical cells per stratum, split degenerate-by-fiat vs unmatched.

    would_pair lists degenerate cells that satisfy the steepness conditions
    and were kept critical only by policy; reasons maps each unmatched
    nondegenerate cell to why the rule skipped it.
    """

    strata: dict[StratumKey, tuple[list[Simplex], list[Simplex]]] = \
        field(default_factory=dict)
    would_pair: list[tuple[Simplex, Simplex]] = field(default_factory=list)
    reasons: dict[Simplex, str] = field(default_factory=dict)

    def degenerate_by_fiat(self, dim: int, length: int) -> list[Simplex]:
        return self.strata.get(StratumKey(dim, length), ([], []))[0]

    def unmatched_nondegenerate(self, dim: int, length: int) -> list[Simplex]:
        return self.strata.get(StratumKey(dim, length), ([], []))[1]

    def critical_cells(self, dim: int, length: int) -> list[Simplex]:
        deg, unm = self.strata.get(StratumKey(dim, length), ([], []))
        return sorted(deg + unm, key=sort_key)

    def to_csv(self) -> str:
        lines = ["dim,length,simplex,degenerate,reason"]
        for key in sorted(self.strata, key=lambda k: (k.dim, k.length)):
            deg, unm = self.strata[key]
            for x in sorted(deg, key=sort_key):
                lines.append(
                    f"{key.dim},{key.length},{simplex_text(x)},true,degenerate")
            for x in sorted(unm, key=sort_key):
                reason = self.reasons.get(x, "unmatched")
                lines.append(
                    f"{key.dim},{key.length},{simplex_text(x)},false,{reason}")
        return "\n".join(lines) + "\n"


def build_matching(max_dim: int, max_length: int,
                   flags: PairingFlags = DEFAULT_FLAGS,
                   validate: bool = True,
                   max_stratum_cells: int = 2_000_000) \
        -> tuple[Matching, CriticalReport]:
    """Steepness pairs for every stratum with sigma.dim < max_dim.

    Sweeps each coface stratum once, bucketing same-length faces, so the
    cost is linear in the number of enumerated cells.  Cells at max_dim are
    classified only by their downward status (their cofaces are unseen).
    """
    if max_dim < 1 or max_length < 1:
        raise ValueError("build_matching needs max_dim >= 1 and max_length >= 1")
    for n in range(1, max_dim + 1):
        for length in range(max_length + 1):
            size = stratum_size(n, length)
            if size > max_stratum_cells:
                raise TruncationError(
                    f"stratum (dim {n}, length {length}) holds {size} cells, "
                    f"over the limit of {max_stratum_cells}",
                    dim=n, length=length)

    flags_allow = flags.degenerate_policy == "allow"
    diag_flags = PairingFlags(flags.face_quantifier, flags.coface_quantifier,
                              "allow")
    pairs: list[tuple[Simplex, Simplex]] = []
    report = CriticalReport()
    matched_down: set[Simplex] = set()

    for length in range(max_length + 1):
        for n in range(0, max_dim):
            lo_dim = n
            hi_dim = n + 1
            if lo_dim == 0 and length > 0:
                continue
            # face sweep of the coface stratum: word -> list of (tau_word, i)
            hi_tables = [[_face_letter(hi_dim, g, i) for g in range(hi_dim + 1)]
                         for i in range(hi_dim + 2)]
            cofaces: dict[tuple[int, ...], dict[tuple[int, ...], int]] = {}
            tau_faces: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
            for tau in enumerate_stratum(hi_dim, length):
                tw = tau.word
                same: list[tuple[int, ...]] = []
                for i in range(hi_dim + 2):
                    row = hi_tables[i]
                    fw = tuple(row[g] for g in tw if row[g] is not None)
                    if len(fw) == length:
                        same.append(fw)
                        bucket = cofaces.setdefault(fw, {})
                        bucket[tw] = bucket.get(tw, 0) + 1
                tau_faces[tw] = same

            for sigma in enumerate_stratum(lo_dim, length):
                sigma_deg = is_degenerate(sigma)
                if sigma_deg and not flags_allow:
                    # policy keeps it critical; still record what the rule
                    # alone would have done with it
                    diag = _sweep_pair(sigma, cofaces, tau_faces, diag_flags)
                    if diag is not None:
                        report.would_pair.append((sigma, diag))
                    continue
                tau = _sweep_pair(sigma, cofaces, tau_faces, flags)
                if tau is not None:
                    pairs.append((sigma, tau))
                    matched_down.add(tau)

    _fill_report(report, pairs, matched_down, max_dim, max_length, flags)

    matching = Matching(pairs, Scope(max_dim, max_length), flags)
    if validate:
        verdict = validate_matching(matching)
        if not verdict.ok:
            raise SelfCheckError(
                "build_matching produced an invalid matching: "
                + "; ".join(verdict.errors))
    return matching, report


def _sweep_pair(sigma: Simplex,
                cofaces: dict[tuple[int, ...], dict[tuple[int, ...], int]],
                tau_faces: dict[tuple[int, ...], list[tuple[int, ...]]],
                flags: PairingFlags) -> Optional[Simplex]:
    """steepness_pair against precomputed stratum tables (policy gate applied
    to the coface only; the caller decides what a degenerate sigma means)."""
    occ = cofaces.get(sigma.word)
    if not occ:
        return None
    if flags.coface_quantifier == "regular":
        candidates = [w for w, count in occ.items() if count == 1]
    else:
        candidates = list(occ)
    if not candidates:
        return None
    tw = min(candidates)
    tau = Simplex(sigma.dim + 1, tw)
    if flags.degenerate_policy == "critical" and is_degenerate(tau):
        return None
    same = tau_faces[tw]
    if flags.face_quantifier == "regular":
        counts: dict[tuple[int, ...], int] = {}
        for fw in same:
            counts[fw] = counts.get(fw, 0) + 1
        pool = [fw for fw in same if counts[fw] == 1]
    else:
        pool = same
    if any(fw > sigma.word for fw in pool):
        return None
    return tau


def _fill_report(report: CriticalReport, pairs: list[tuple[Simplex, Simplex]],
                 matched_down: set[Simplex], max_dim: int, max_length: int,
                 flags: PairingFlags) -> None:
    matched_up = {s for s, _ in pairs}
    for n in range(0, max_dim + 1):
        for length in range(max_length + 1):
            if n == 0 and length > 0:
                continue
            deg: list[Simplex] = []
            unm: list[Simplex] = []
            for x in enumerate_stratum(n, length):
                if x in matched_up or x in matched_down:
                    continue
                if is_degenerate(x) and flags.degenerate_policy == "critical":
                    deg.append(x)
                    continue
                unm.append(x)
                if n >= max_dim:
                    report.reasons[x] = "upward-undecided"
                else:
                    _, reason = steepness_pair_reason(x, flags)
                    report.reasons[x] = reason
            if deg or unm:
                report.strata[StratumKey(n, length)] = (deg, unm)


# --- validation ---------------------------------------------------------------

@dataclass
class Verdict:
    ok: bool
    errors: list[str]
    cycle: Optional[list[Simplex]]
    strata_checked: list[StratumKey]
    note: str


_REDUCTION_NOTE = (
    "pairs stay inside one word-length stratum and faces never increase "
    "word length, so any alternating cycle preserves length and dimension; "
    "acyclicity of each same-length stratum digraph implies global "
    "acyclicity, and finiteness of strata rules out infinite descending "
    "paths")


def validate_matching(m: Matching, scope: Optional[Scope] = None) -> Verdict:
    """Regularity, injectivity, and per-stratum acyclicity with witnesses."""
    scope = scope or m.scope
    errors: list[str] = []
    seen: dict[Simplex, str] = {}
    strata: dict[tuple[int, int], list[tuple[Simplex, Simplex]]] = {}

    for sigma, tau in m.pairs:
        if not scope.covers(sigma) or not scope.covers(tau):
            raise ValueError(
                f"pair ({sigma}, {tau}) lies outside scope {scope}")
        hits = [i for i in range(tau.dim + 1) if face(tau, i) == sigma]
        if len(hits) != 1:
            errors.append(
                f"regularity: {simplex_text(sigma)} occurs in faces of "
                f"{simplex_text(tau)} at indices {hits}, not exactly once")
        if m.flags.degenerate_policy == "critical":
            if is_degenerate(sigma) or is_degenerate(tau):
                errors.append(
                    f"policy: pair ({simplex_text(sigma)}, {simplex_text(tau)}) "
                    f"contains a degenerate cell under the critical policy")
        for cell, role in ((sigma, "lower"), (tau, "upper")):
            if cell in seen:
                errors.append(
                    f"injectivity: {simplex_text(cell)} used as {role} after "
                    f"already appearing as {seen[cell]}")
            else:
                seen[cell] = role
        strata.setdefault((sigma.dim, sigma.length), []).append((sigma, tau))

    cycle: Optional[list[Simplex]] = None
    checked: list[StratumKey] = []
    for (dim, length) in sorted(strata):
        checked.append(StratumKey(dim, length))
        found = _stratum_cycle(strata[(dim, length)])
        if found and cycle is None:
            cycle = found
            errors.append(
                f"acyclicity: stratum (dim {dim}, length {length}) carries an "
                f"alternating cycle "
                + " > ".join(simplex_text(x) for x in found))

    return Verdict(ok=not errors, errors=errors, cycle=cycle,
                   strata_checked=checked, note=_REDUCTION_NOTE)


def _stratum_cycle(pairs: list[tuple[Simplex, Simplex]]) \
        -> Optional[list[Simplex]]:
    """A cycle sigma_0, tau_0, sigma_1, ..., sigma_0 if one exists."""
    partner = dict(pairs)
    succ: dict[Simplex, list[Simplex]] = {}
    for sigma, tau in pairs:
        succ[sigma] = [f for f, _ in _same_length_faces(tau)
                       if f != sigma and f in partner]

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {s: WHITE for s in partner}
    for root in partner:
        if color[root] != WHITE:
            continue
        stack: list[tuple[Simplex, int]] = [(root, 0)]
        trail: list[Simplex] = [root]
        color[root] = GRAY
        while stack:
            node, idx = stack[-1]
            if idx < len(succ[node]):
                stack[-1] = (node, idx + 1)
                nxt = succ[node][idx]
                if color[nxt] == GRAY:
                    at = trail.index(nxt)
                    loop = trail[at:] + [nxt]
                    out: list[Simplex] = []
                    for s in loop[:-1]:
                        out.extend((s, partner[s]))
                    out.append(loop[-1])
                    return out
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
                    trail.append(nxt)
            else:
                color[node] = BLACK
                stack.pop()
                trail.pop()
    return None


# --- exports -------------------------------------------------------------------

def matching_to_dot(m: Matching) -> str:
    """Per-stratum modified Hasse diagrams; meant for small scopes only.

    Same-length face edges run downward tau -> sigma in gray; matched pairs
    are reversed (sigma -> tau, red).  Degenerate cells are dashed.
    """
    lines = ["digraph steepness {", "  rankdir=BT;",
             '  node [shape=box, fontname="monospace"];']
    strata = sorted({(s.dim, s.length) for s, _ in m.pairs})
    for dim, length in strata:
        lines.append(f"  subgraph cluster_{dim}_{length} {{")
        lines.append(f'    label="stratum (dim {dim}, length {length})";')
        cells = list(enumerate_stratum(dim, length)) + \
            list(enumerate_stratum(dim + 1, length))
        pair_set = {(s, t) for s, t in m.pairs_for_stratum(dim, length)}
        up = dict(pair_set)
        for x in cells:
            style = ', style=dashed' if is_degenerate(x) else ''
            lines.append(
                f'    "d{x.dim}:{simplex_text(x)}" '
                f'[label="{simplex_text(x)}"{style}];')
        for tau in enumerate_stratum(dim + 1, length):
            for f, _ in _same_length_faces(tau):
                if up.get(f) == tau:
                    continue
                lines.append(
                    f'    "d{tau.dim}:{simplex_text(tau)}" -> '
                    f'"d{f.dim}:{simplex_text(f)}" [color=gray];')
        for sigma, tau in sorted(pair_set, key=lambda p: sort_key(p[0])):
            lines.append(
                f'    "d{sigma.dim}:{simplex_text(sigma)}" -> '
                f'"d{tau.dim}:{simplex_text(tau)}" [color=red, penwidth=2];')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
