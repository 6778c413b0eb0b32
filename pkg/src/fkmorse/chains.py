"""Integer chains on monoid words and the alternating-sum boundary.

A chain in dimension n is a finite integer combination of words.  The
boundary of a word is sum_i (-1)^i d_i over all n+1 faces.  Two modes:

* "unnormalized": every face term is kept.  Degenerate words are honest
  basis elements here; they span a subcomplex the flow never moves.
* "normalized": face terms that land on degenerate words are dropped,
  i.e. the boundary in the quotient by the degenerate subcomplex.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator

from .simplicial import Simplex, face, is_degenerate, sort_key

Mode = str
MODES = ("unnormalized", "normalized")


class Chain:
    """Immutable integer combination of same-dimension simplices."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Iterable[tuple[Simplex, int]] = ()) -> None:
        merged: dict[Simplex, int] = {}
        for x, c in terms:
            if x.dim != dim:
                raise ValueError(
                    f"term {x} has dimension {x.dim}, chain has {dim}")
            c = int(c)
            if c:
                merged[x] = merged.get(x, 0) + c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(
            self, "_terms",
            {x: c for x, c in merged.items() if c})

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Chain is immutable")

    @classmethod
    def zero(cls, dim: int) -> "Chain":
        return cls(dim)

    @classmethod
    def unit(cls, x: Simplex, coef: int = 1) -> "Chain":
        return cls(x.dim, [(x, coef)])

    def items(self) -> list[tuple[Simplex, int]]:
        """Terms sorted by (length, word)."""
        return sorted(self._terms.items(), key=lambda t: sort_key(t[0]))

    def support(self) -> list[Simplex]:
        return [x for x, _ in self.items()]

    def coefficient(self, x: Simplex) -> int:
        return self._terms.get(x, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Simplex, int]]:
        return iter(self.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self._terms.items())))

    def __add__(self, other: "Chain") -> "Chain":
        if not isinstance(other, Chain):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(
                f"cannot add chains of dimensions {self.dim} and {other.dim}")
        return Chain(self.dim,
                     list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-1) * other

    def __neg__(self) -> "Chain":
        return (-1) * self

    def __rmul__(self, scalar: int) -> "Chain":
        if not isinstance(scalar, int):
            return NotImplemented
        return Chain(self.dim, [(x, scalar * c) for x, c in self._terms.items()])

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return _join_terms(self.items())

    def __repr__(self) -> str:
        return f"Chain({self.dim}, {self.items()!r})"

    def to_json(self) -> str:
        return json.dumps(
            {"dim": self.dim,
             "terms": [{"word": list(x.word), "coef": c}
                       for x, c in self.items()]},
            separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Chain":
        data = json.loads(text)
        dim = int(data["dim"])
        return cls(dim, [(Simplex(dim, tuple(int(k) for k in t["word"])),
                          int(t["coef"])) for t in data["terms"]])


def _join_terms(items: list[tuple[Simplex, int]]) -> str:
    parts: list[str] = []
    for x, c in items:
        mag = abs(c)
        body = str(x) if mag == 1 else f"{mag}*{x}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def boundary_simplex(x: Simplex, mode: Mode = "unnormalized") -> Chain:
    if mode not in MODES:
        raise ValueError(f"unknown boundary mode {mode!r}")
    if x.dim == 0:
        raise ValueError("dimension-0 chains have no boundary")
    terms = []
    for i in range(x.dim + 1):
        fx = face(x, i)
        if mode == "normalized" and is_degenerate(fx):
            continue
        terms.append((fx, -1 if i % 2 else 1))
    return Chain(x.dim - 1, terms)


def boundary(c: Chain, mode: Mode = "unnormalized") -> Chain:
    if c.dim == 0:
        raise ValueError("dimension-0 chains have no boundary")
    out = Chain.zero(c.dim - 1)
    for x, coef in c.items():
        out = out + coef * boundary_simplex(x, mode)
    return out


def inner(c: Chain, x: Simplex) -> int:
    """Coefficient of the word x in the chain c."""
    if c.dim != x.dim:
        raise ValueError(
            f"cannot pair a dimension-{c.dim} chain with a "
            f"dimension-{x.dim} simplex")
    return c.coefficient(x)


def incidence(tau: Simplex, sigma: Simplex, mode: Mode = "unnormalized") -> int:
    """<boundary of tau, sigma>."""
    if tau.dim != sigma.dim + 1:
        raise ValueError(
            f"incidence needs dimensions to differ by 1, got {tau.dim} and {sigma.dim}")
    return inner(boundary_simplex(tau, mode), sigma)
