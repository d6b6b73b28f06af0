"""Functions between finite ordinals and the categories they generate.

The ordinal [n] is {1, .., n}.  A FinFn stores the images of 1..m under a
function [m] -> [n]; everything downstream (composition, coproducts,
similarity components, fiber analysis) is plain arithmetic on those tuples.
All interfaces are 1-based to match the usual ordinal convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence


class FinOrdError(ValueError):
    """Raised on malformed functions or mismatched (co)domains."""


@dataclass(frozen=True)
class FinFn:
    """A function [dom] -> [cod], given by the tuple of images of 1..dom."""

    dom: int
    cod: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dom < 0 or self.cod < 0:
            raise FinOrdError("ordinal sizes must be nonnegative")
        if len(self.images) != self.dom:
            raise FinOrdError(
                f"expected {self.dom} images, got {len(self.images)}")
        for e in self.images:
            if not 1 <= e <= self.cod:
                raise FinOrdError(f"image {e} outside 1..{self.cod}")

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.dom:
            raise FinOrdError(f"argument {i} outside 1..{self.dom}")
        return self.images[i - 1]

    def __str__(self) -> str:
        return f"{self.dom} {self.cod} : " + " ".join(map(str, self.images))

    def is_identity(self) -> bool:
        return self.dom == self.cod and all(
            e == i for i, e in enumerate(self.images, start=1))


def fn(images: Sequence[int], cod: int) -> FinFn:
    """Shorthand constructor: fn((2, 1), 3) is the map 1->2, 2->1 into [3]."""
    return FinFn(len(images), cod, tuple(images))


def identity(n: int) -> FinFn:
    return FinFn(n, n, tuple(range(1, n + 1)))


def compose(g: FinFn, f: FinFn) -> FinFn:
    """g after f.  Requires f.cod = g.dom."""
    if f.cod != g.dom:
        raise FinOrdError(f"cannot compose: f.cod={f.cod} != g.dom={g.dom}")
    return FinFn(f.dom, g.cod, tuple(g.images[e - 1] for e in f.images))


def coproduct(fs: Sequence[FinFn]) -> FinFn:
    """Block sum f1 + .. + fk; the empty sum is the empty function [0]->[0]."""
    images: list[int] = []
    offset = 0
    for f in fs:
        images.extend(offset + e for e in f.images)
        offset += f.cod
    return FinFn(sum(f.dom for f in fs), offset, tuple(images))


def similarity_component(theta: FinFn, ks: Sequence[int]) -> FinFn:
    """Blow-up of theta replacing target point j by a block of size ks[j-1].

    With L_i = k_{theta(1)} + .. + k_{theta(i)} and K_j = k_1 + .. + k_j, the
    component maps L_{i-1} + x to K_{theta(i)-1} + x.  ks entries may be 0.
    """
    if len(ks) != theta.cod:
        raise FinOrdError(
            f"expected {theta.cod} block sizes, got {len(ks)}")
    for k in ks:
        if k < 0:
            raise FinOrdError("block sizes must be nonnegative")
    prefix = [0]
    for k in ks:
        prefix.append(prefix[-1] + k)  # prefix[j] = K_j
    images: list[int] = []
    for i in range(1, theta.dom + 1):
        j = theta(i)
        base = prefix[j - 1]
        images.extend(base + x for x in range(1, ks[j - 1] + 1))
    return FinFn(len(images), prefix[-1], tuple(images))


def fiber_sizes(f: FinFn) -> tuple[int, ...]:
    """|f^-1{j}| for each j in 1..cod; the entries sum to dom."""
    counts = [0] * f.cod
    for e in f.images:
        counts[e - 1] += 1
    return tuple(counts)


def fiber(f: FinFn, j: int) -> tuple[int, ...]:
    return tuple(i for i in range(1, f.dom + 1) if f.images[i - 1] == j)


# ---------------------------------------------------------------------------
# Structure monoids


@dataclass(frozen=True)
class StructureMonoid:
    """Subset of N containing 1, closed under k-fold sums with k a member.

    Represented by generators plus a closure horizon; membership is decided
    by saturating the closure rule up to `bound` and is an error beyond it.
    """

    generators: frozenset[int]
    bound: int = 32
    _members: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.bound < 1:
            raise FinOrdError("closure bound must be >= 1")
        for g in self.generators:
            if g < 0:
                raise FinOrdError("generators must be nonnegative")
            if g > self.bound:
                raise FinOrdError(f"generator {g} exceeds bound {self.bound}")
        object.__setattr__(self, "_members", self._saturate())

    def _saturate(self) -> frozenset[int]:
        members = set(g for g in self.generators) | {1}
        everything = set(range(self.bound + 1))
        changed = True
        while changed and not members >= everything:
            changed = False
            for k in sorted(members):
                if k == 0 or k == 1:
                    continue
                for s in _sums_of(sorted(members), k, self.bound):
                    if s not in members:
                        members.add(s)
                        changed = True
        return frozenset(members)

    def __str__(self) -> str:
        return "gen{" + ",".join(map(str, sorted(self.generators))) + "}"


def _sums_of(values: list[int], k: int, bound: int) -> set[int]:
    """All sums of exactly k values (with repetition) that stay <= bound."""
    reachable = {0}
    for _ in range(k):
        reachable = {s + v for s in reachable for v in values if s + v <= bound}
    return reachable


def monoid(*generators: int, bound: int = 32) -> StructureMonoid:
    return StructureMonoid(frozenset(generators), bound)


def monoid_contains(m: StructureMonoid, n: int) -> bool:
    if n < 0:
        return False
    if n > m.bound:
        raise FinOrdError(f"query {n} beyond closure bound {m.bound}")
    return n in m._members


# ---------------------------------------------------------------------------
# Families of functions closed (or not) under the category operations


IDENTITIES = "identities"
BIJECTIONS = "bijections"
STRICTLY_INCREASING = "strict-increasing"
INJECTIONS = "injections"
SURJECTIONS = "surjections"
LEFT_SURJECTIONS = "left-surjections"
RIGHT_SURJECTIONS = "right-surjections"
ALL_FUNCTIONS = "all"
INCREASING = "increasing"  # non-strict; fails the similarity closure
DELTA_UPPER = "delta-upper"
PSI_LOWER = "psi-lower"
PSI_UPPER = "psi-upper"

_NAMED_KINDS = (
    IDENTITIES, BIJECTIONS, STRICTLY_INCREASING, INJECTIONS, SURJECTIONS,
    LEFT_SURJECTIONS, RIGHT_SURJECTIONS, ALL_FUNCTIONS, INCREASING,
)
_MONOID_KINDS = (DELTA_UPPER, PSI_LOWER, PSI_UPPER)


@dataclass(frozen=True)
class DeltaFamily:
    """A wide family of finite-ordinal functions, selected by tag.

    The monoid-parametrized tags require a StructureMonoid; psi-lower and
    psi-upper additionally require 0 not to be a member.
    """

    kind: str
    monoid: Optional[StructureMonoid] = None

    def __post_init__(self) -> None:
        if self.kind in _NAMED_KINDS:
            if self.monoid is not None:
                raise FinOrdError(f"{self.kind} takes no monoid")
        elif self.kind in _MONOID_KINDS:
            if self.monoid is None:
                raise FinOrdError(f"{self.kind} requires a monoid")
            if self.kind in (PSI_LOWER, PSI_UPPER) and monoid_contains(self.monoid, 0):
                raise FinOrdError(f"{self.kind} requires 0 outside the monoid")
        else:
            raise FinOrdError(f"unknown family kind {self.kind!r}")

    def __str__(self) -> str:
        if self.monoid is None:
            return self.kind
        gens = ",".join(map(str, sorted(self.monoid.generators)))
        return f"{self.kind}:{gens}"


def _min_fibers_monotone(f: FinFn) -> bool:
    mins = [min(fiber(f, j), default=0) for j in range(1, f.cod + 1)]
    return all(a <= b for a, b in zip(mins, mins[1:]))


def _max_fibers_monotone(f: FinFn) -> bool:
    maxs = [max(fiber(f, j), default=0) for j in range(1, f.cod + 1)]
    return all(a <= b for a, b in zip(maxs, maxs[1:]))


def in_family(d: DeltaFamily, f: FinFn) -> bool:
    """Decide membership by the direct characterization of each tag."""
    if d.kind == ALL_FUNCTIONS:
        return True
    if d.kind == IDENTITIES:
        return f.is_identity()
    if d.kind == BIJECTIONS:
        return f.dom == f.cod and len(set(f.images)) == f.dom
    if d.kind == STRICTLY_INCREASING:
        return all(a < b for a, b in zip(f.images, f.images[1:]))
    if d.kind == INCREASING:
        return all(a <= b for a, b in zip(f.images, f.images[1:]))
    if d.kind == INJECTIONS:
        return len(set(f.images)) == f.dom
    sizes = fiber_sizes(f)
    if d.kind == SURJECTIONS:
        return all(s >= 1 for s in sizes)
    if d.kind == LEFT_SURJECTIONS:
        return all(s >= 1 for s in sizes) and _min_fibers_monotone(f)
    if d.kind == RIGHT_SURJECTIONS:
        return all(s >= 1 for s in sizes) and _max_fibers_monotone(f)
    assert d.monoid is not None
    if not all(monoid_contains(d.monoid, s) for s in sizes):
        return False
    if d.kind == PSI_LOWER:
        return _min_fibers_monotone(f)
    if d.kind == PSI_UPPER:
        return _max_fibers_monotone(f)
    return True  # delta-upper


def all_functions(max_n: int) -> Iterator[FinFn]:
    """Every function [m] -> [n] with m, n <= max_n, in a fixed order."""
    for n in range(max_n + 1):
        for m in range(max_n + 1):
            if n == 0 and m > 0:
                continue
            for images in itertools.product(range(1, n + 1), repeat=m):
                yield FinFn(m, n, images)


def family_members(d: DeltaFamily, max_n: int) -> list[FinFn]:
    return [f for f in all_functions(max_n) if in_family(d, f)]


@dataclass(frozen=True)
class CategoryCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class CategoryReport:
    family: DeltaFamily
    max_n: int
    member_count: int
    checks: tuple[CategoryCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        head = f"family {self.family} max {self.max_n}: " + (
            "pass" if self.passed else "FAIL")
        out = [head, f"  members (dom,cod <= {self.max_n}): {self.member_count}"]
        for c in self.checks:
            out.append(f"  {c.name}: {'ok' if c.ok else 'FAIL'}")
            if c.detail:
                out.extend("    " + line for line in c.detail.splitlines())
        return out


def verify_structure_category(d: DeltaFamily, max_n: int) -> CategoryReport:
    """Exhaustively check the closure properties over members of bounded size.

    Checks identities, composition, binary coproducts, and similarity
    components (block sizes 0..max_n).  A failing family produces a report
    carrying the first counterexample, not an exception.
    """
    if max_n < 1:
        raise FinOrdError("max_n must be >= 1")
    members = family_members(d, max_n)
    by_dom: dict[int, list[FinFn]] = {}
    for f in members:
        by_dom.setdefault(f.dom, []).append(f)
    checks: list[CategoryCheck] = []

    missing = [n for n in range(max_n + 1) if not in_family(d, identity(n))]
    checks.append(CategoryCheck(
        "identities", not missing,
        "" if not missing else f"id on [{missing[0]}] not in family"))

    comp_bad = None
    for f in members:
        for g in by_dom.get(f.cod, ()):
            h = compose(g, f)
            if not in_family(d, h):
                comp_bad = (f, g, h)
                break
        if comp_bad:
            break
    checks.append(CategoryCheck(
        "composition", comp_bad is None,
        "" if comp_bad is None else
        f"f = {comp_bad[0]}\ng = {comp_bad[1]}\ng.f = {comp_bad[2]}  (not in family)"))

    cop_bad = None
    for f in members:
        for g in members:
            h = coproduct([f, g])
            if not in_family(d, h):
                cop_bad = (f, g, h)
                break
        if cop_bad:
            break
    checks.append(CategoryCheck(
        "coproduct", cop_bad is None,
        "" if cop_bad is None else
        f"f = {cop_bad[0]}\ng = {cop_bad[1]}\nf+g = {cop_bad[2]}  (not in family)"))

    sim_bad = None
    for theta in members:
        for ks in itertools.product(range(max_n + 1), repeat=theta.cod):
            comp = similarity_component(theta, ks)
            if not in_family(d, comp):
                sim_bad = (theta, ks, comp)
                break
        if sim_bad:
            break
    checks.append(CategoryCheck(
        "similarity", sim_bad is None,
        "" if sim_bad is None else
        f"theta = {sim_bad[0]}\nks = {' '.join(map(str, sim_bad[1]))}\n"
        f"component = {sim_bad[2]}  (not in family)"))

    return CategoryReport(d, max_n, len(members), tuple(checks))


def parse_family(token: str, *, bound: int = 64) -> DeltaFamily:
    """Parse a CLI family token, e.g. 'bijections' or 'delta-upper:0,1'."""
    if ":" in token:
        kind, _, gens = token.partition(":")
        if kind not in _MONOID_KINDS:
            raise FinOrdError(f"unknown family token {token!r}")
        try:
            generators = frozenset(int(g) for g in gens.split(",") if g != "")
        except ValueError as exc:
            raise FinOrdError(f"bad generator list in {token!r}") from exc
        return DeltaFamily(kind, StructureMonoid(generators, bound))
    if token not in _NAMED_KINDS:
        raise FinOrdError(f"unknown family token {token!r}")
    return DeltaFamily(token)
