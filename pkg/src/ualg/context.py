"""Context structures: which contexts govern which words of typed letters.

A context is a repetition-free word of letters.  Each of the eight modelable
structures is a decidable relation holds(R, c, v); the parametric variant
checks letter multiplicities against a structure monoid.  Terminal contexts
and the correspondence with finite-ordinal function families live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .finord import FinFn, StructureMonoid, monoid_contains

Word = tuple["Letter", ...]


class ContextError(ValueError):
    """Raised on malformed contexts or misuse of a structure."""


class Letter:
    """A typed variable; identity is the (sort, name) pair."""

    __slots__ = ("sort", "name", "_hash")

    def __init__(self, sort: str, name: str):
        self.sort = sort
        self.name = name
        self._hash = hash((sort, name))

    def __eq__(self, other: object) -> bool:
        return (self is other
                or (isinstance(other, Letter)
                    and self.name == other.name and self.sort == other.sort))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Letter({self.sort!r}, {self.name!r})"

    def __str__(self) -> str:
        return self.name


TRIVIAL_KIND = "trivial"
BIJECTIVE_KIND = "bijective"
STRICT_INCREASING_KIND = "strict-increasing"
INJECTIVE_KIND = "injective"
SURJECTIVE_KIND = "surjective"
LEFT_SURJECTIVE_KIND = "left-surjective"
RIGHT_SURJECTIVE_KIND = "right-surjective"
CARTESIAN_KIND = "cartesian"
R_UPPER_KIND = "r-upper"

MODELABLE_KINDS = (
    TRIVIAL_KIND, BIJECTIVE_KIND, STRICT_INCREASING_KIND, INJECTIVE_KIND,
    SURJECTIVE_KIND, LEFT_SURJECTIVE_KIND, RIGHT_SURJECTIVE_KIND,
    CARTESIAN_KIND,
)

# Structures where context validity only depends on the *set* of context
# letters, so any reordering of a context is derivable from any other.
ORDER_FREE_KINDS = (
    BIJECTIVE_KIND, INJECTIVE_KIND, SURJECTIVE_KIND, CARTESIAN_KIND,
)

# Structures where governed words never introduce or drop letters.
BALANCED_KINDS = (
    TRIVIAL_KIND, BIJECTIVE_KIND, SURJECTIVE_KIND, LEFT_SURJECTIVE_KIND,
    RIGHT_SURJECTIVE_KIND,
)


@dataclass(frozen=True)
class ContextStructure:
    kind: str
    monoid: Optional[StructureMonoid] = None

    def __post_init__(self) -> None:
        if self.kind in MODELABLE_KINDS:
            if self.monoid is not None:
                raise ContextError(f"{self.kind} takes no monoid")
        elif self.kind == R_UPPER_KIND:
            if self.monoid is None:
                raise ContextError("r-upper requires a monoid")
        else:
            raise ContextError(f"unknown context structure {self.kind!r}")

    @property
    def modelable(self) -> bool:
        return self.kind in MODELABLE_KINDS

    @property
    def order_free(self) -> bool:
        return self.kind in ORDER_FREE_KINDS

    @property
    def balanced(self) -> bool:
        return self.kind in BALANCED_KINDS

    def __str__(self) -> str:
        if self.monoid is None:
            return self.kind
        return f"{self.kind}:{self.monoid}"


TRIVIAL = ContextStructure(TRIVIAL_KIND)
BIJECTIVE = ContextStructure(BIJECTIVE_KIND)
STRICT_INCREASING = ContextStructure(STRICT_INCREASING_KIND)
INJECTIVE = ContextStructure(INJECTIVE_KIND)
SURJECTIVE = ContextStructure(SURJECTIVE_KIND)
LEFT_SURJECTIVE = ContextStructure(LEFT_SURJECTIVE_KIND)
RIGHT_SURJECTIVE = ContextStructure(RIGHT_SURJECTIVE_KIND)
CARTESIAN = ContextStructure(CARTESIAN_KIND)

_BY_TOKEN = {s.kind: s for s in (
    TRIVIAL, BIJECTIVE, STRICT_INCREASING, INJECTIVE, SURJECTIVE,
    LEFT_SURJECTIVE, RIGHT_SURJECTIVE, CARTESIAN)}


def parse_structure(token: str) -> ContextStructure:
    try:
        return _BY_TOKEN[token]
    except KeyError:
        raise ContextError(f"unknown structure token {token!r}") from None


def r_upper(m: StructureMonoid) -> ContextStructure:
    return ContextStructure(R_UPPER_KIND, m)


def check_context(c: Word) -> Word:
    if len(set(c)) != len(c):
        raise ContextError(
            "context letters must be distinct: " + " ".join(map(str, c)))
    return c


def word_str(w: Word) -> str:
    return " ".join(x.name for x in w) if w else "()"


def _is_subsequence(v: Word, c: Word) -> bool:
    it = iter(c)
    return all(x in it for x in v)


def _first_occurrence_order(v: Word) -> Word:
    return tuple(dict.fromkeys(v))


def _last_occurrence_order(v: Word) -> Word:
    seen = dict.fromkeys(reversed(v))
    return tuple(reversed(tuple(seen)))


def holds(R: ContextStructure, c: Word, v: Word) -> bool:
    """Decide whether context c governs the word v under R."""
    check_context(c)
    kind = R.kind
    if kind == TRIVIAL_KIND:
        return v == c
    if kind == BIJECTIVE_KIND:
        return sorted(v, key=_letter_key) == sorted(c, key=_letter_key)
    if kind == STRICT_INCREASING_KIND:
        return len(set(v)) == len(v) and _is_subsequence(v, c)
    if kind == INJECTIVE_KIND:
        return len(set(v)) == len(v) and set(v) <= set(c)
    if kind == SURJECTIVE_KIND:
        return set(v) == set(c)
    if kind == LEFT_SURJECTIVE_KIND:
        return set(v) == set(c) and _first_occurrence_order(v) == c
    if kind == RIGHT_SURJECTIVE_KIND:
        return set(v) == set(c) and _last_occurrence_order(v) == c
    if kind == CARTESIAN_KIND:
        return set(v) <= set(c)
    assert R.monoid is not None
    if not set(v) <= set(c):
        return False
    for x in c:
        if not monoid_contains(R.monoid, sum(1 for y in v if y == x)):
            return False
    return True


def _letter_key(x: Letter) -> tuple[str, str]:
    return (x.sort, x.name)


def terminal_context(R: ContextStructure, v: Word) -> Optional[Word]:
    """The canonical context c with (for all w) holds(w, c) iff holds(w, v).

    Returns None when v is not governed by any context (a repeated letter
    under the four substitution-free structures).  The canonical choice is
    first-occurrence order, except last-occurrence for right-surjective.
    """
    if not R.modelable:
        raise ContextError(f"terminal contexts undefined for {R}")
    kind = R.kind
    if kind in (TRIVIAL_KIND, BIJECTIVE_KIND, STRICT_INCREASING_KIND,
                INJECTIVE_KIND):
        return v if len(set(v)) == len(v) else None
    if kind == RIGHT_SURJECTIVE_KIND:
        return _last_occurrence_order(v)
    return _first_occurrence_order(v)


def modelable_decompose(
        R: ContextStructure, c: Word, vs: Sequence[Word]
) -> Optional[list[Word]]:
    """Split a governed concatenation into per-component terminal contexts."""
    flat = tuple(x for v in vs for x in v)
    if not holds(R, c, flat):
        raise ContextError(
            f"context {word_str(c)} does not govern {word_str(flat)} under {R}")
    out: list[Word] = []
    for v in vs:
        t = terminal_context(R, v)
        if t is None:
            return None
        out.append(t)
    if not holds(R, c, tuple(x for t in out for x in t)):
        return None
    return out


def delta_of(R: ContextStructure, theta: FinFn) -> bool:
    """Whether theta belongs to the function family matching R.

    Uses fresh letters c1..cn of a dummy sort and asks whether the context
    c1..cn governs the reindexed word c_{theta(1)}..c_{theta(m)}.
    """
    if not R.modelable:
        raise ContextError(f"delta_of requires a modelable structure, got {R}")
    letters = tuple(Letter("_s", f"_c{i}") for i in range(1, theta.cod + 1))
    image = tuple(letters[theta(i) - 1] for i in range(1, theta.dom + 1))
    return holds(R, letters, image)
