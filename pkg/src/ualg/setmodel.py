"""Finite-set models: dense tuple-indexed tables and brute-force search.

A MultiMap is a total function from a cartesian product of finite carriers
(identified by their sizes) into a carrier, stored as a dense row-major table
(first coordinate most significant).  Carriers may be empty: a product with
an empty factor has no rows and the table is the empty tuple.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

from .context import ContextStructure, Letter, Word, terminal_context
from .finord import FinFn
from .syntax import (
    App, Equation, Signature, Term, Theory, TheoryError, Var, is_r_context,
    tau, term_str,
)


class ModelError(TheoryError):
    pass


@dataclass(frozen=True)
class MultiMap:
    doms: tuple[int, ...]
    cod: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        size = 1
        for d in self.doms:
            if d < 0:
                raise ModelError("carrier sizes must be nonnegative")
            size *= d
        if self.cod < 0:
            raise ModelError("carrier sizes must be nonnegative")
        if len(self.table) != size:
            raise ModelError(
                f"table has {len(self.table)} entries, product needs {size}")
        for e in self.table:
            if not 0 <= e < self.cod:
                raise ModelError(f"table entry {e} outside carrier of size {self.cod}")

    def index(self, args: Sequence[int]) -> int:
        idx = 0
        for a, d in zip(args, self.doms):
            idx = idx * d + a
        return idx

    def __call__(self, *args: int) -> int:
        if len(args) != len(self.doms):
            raise ModelError(
                f"expected {len(self.doms)} arguments, got {len(args)}")
        for a, d in zip(args, self.doms):
            if not 0 <= a < d:
                raise ModelError(f"argument {a} outside carrier of size {d}")
        return self.table[self.index(args)]


def table_from(doms: Sequence[int], cod: int, fn) -> MultiMap:
    rows = itertools.product(*(range(d) for d in doms))
    return MultiMap(tuple(doms), cod, tuple(fn(*r) for r in rows))


def identity_map(k: int) -> MultiMap:
    return MultiMap((k,), k, tuple(range(k)))


def theta_action(f: MultiMap, theta: FinFn,
                 target: Sequence[int]) -> MultiMap:
    """Reindex a multimap along theta: result(x1..xn) = f(x_theta(1)..x_theta(m)).

    `target` gives the carrier sizes of the result's domain word; position i
    of f's domain must match target[theta(i)-1].
    """
    target = tuple(target)
    if len(f.doms) != theta.dom:
        raise ModelError(
            f"map has {len(f.doms)} arguments but theta.dom = {theta.dom}")
    if len(target) != theta.cod:
        raise ModelError(
            f"target word has {len(target)} carriers but theta.cod = {theta.cod}")
    for i in range(1, theta.dom + 1):
        if f.doms[i - 1] != target[theta(i) - 1]:
            raise ModelError(
                f"carrier mismatch at position {i}: {f.doms[i - 1]} vs "
                f"{target[theta(i) - 1]}")
    return table_from(
        target, f.cod,
        lambda *xs: f(*(xs[theta(i) - 1] for i in range(1, theta.dom + 1))))


def compose_multi(g: MultiMap, fs: Sequence[MultiMap]) -> MultiMap:
    """Pointwise composite g(f1(..), .., fn(..)) on the concatenated domains."""
    if len(fs) != len(g.doms):
        raise ModelError(f"g expects {len(g.doms)} inner maps, got {len(fs)}")
    for f, d in zip(fs, g.doms):
        if f.cod != d:
            raise ModelError(f"inner codomain {f.cod} does not match {d}")
    doms = tuple(d for f in fs for d in f.doms)

    def run(*xs: int) -> int:
        vals = []
        pos = 0
        for f in fs:
            k = len(f.doms)
            vals.append(f(*xs[pos:pos + k]))
            pos += k
        return g(*vals)

    return table_from(doms, g.cod, run)


# ---------------------------------------------------------------------------
# Models


@dataclass(frozen=True)
class FinSetModel:
    """Carriers per sort (size k means {0..k-1}) plus one table per op.

    The signature and context structure ride along so terms can be
    interpreted without extra arguments.
    """

    signature: Signature
    structure: ContextStructure
    carriers: Mapping[str, int]
    op_tables: Mapping[str, MultiMap]

    def __post_init__(self) -> None:
        for s in self.signature.sorts:
            if s not in self.carriers or self.carriers[s] < 0:
                raise ModelError(f"missing or negative carrier for sort {s}")
        for name, decl in self.signature.ops.items():
            t = self.op_tables.get(name)
            if t is None:
                raise ModelError(f"missing table for op {name}")
            want = tuple(self.carriers[s] for s in decl.arity)
            if t.doms != want or t.cod != self.carriers[decl.result]:
                raise ModelError(f"table for op {name} has the wrong shape")

    def carrier_word(self, v: Word) -> tuple[int, ...]:
        return tuple(self.carriers[x.sort] for x in v)


def eval_term(m: FinSetModel, v: Word, t: Term) -> MultiMap:
    """The table of t in context v, built by the three-case recursion with
    terminal contexts for subterms and reindexing along the unique embedding."""
    R = m.structure
    if not is_r_context(R, v, t):
        raise ModelError(
            f"[{' '.join(x.name for x in v)}] is not a context for "
            f"{term_str(t)} under {R}")
    return _eval(m, v, t)


def _embedding(v: Word, w: Word) -> FinFn:
    """The function with w = v o theta; contexts have distinct letters."""
    pos = {x: i for i, x in enumerate(v, start=1)}
    return FinFn(len(w), len(v), tuple(pos[x] for x in w))


def _eval(m: FinSetModel, v: Word, t: Term) -> MultiMap:
    target = m.carrier_word(v)
    if isinstance(t, Var):
        theta = _embedding(v, (t.letter,))
        return theta_action(identity_map(m.carriers[t.sort]), theta, target)
    assert isinstance(t, App)
    if not t.args:
        theta = FinFn(0, len(v), ())
        return theta_action(m.op_tables[t.op], theta, target)
    subs: list[MultiMap] = []
    concat: list[Letter] = []
    for child in t.args:
        w_i = terminal_context(m.structure, tau(child))
        if w_i is None:
            raise ModelError(f"subterm {term_str(child)} has no context")
        subs.append(_eval(m, w_i, child))
        concat.extend(w_i)
    inner = compose_multi(m.op_tables[t.op], subs)
    return theta_action(inner, _embedding(v, tuple(concat)), target)


def satisfies(m: FinSetModel, eq: Equation) -> bool:
    return eval_term(m, eq.ctx, eq.lhs) == eval_term(m, eq.ctx, eq.rhs)


def satisfies_theory(m: FinSetModel, E: Theory) -> bool:
    return all(satisfies(m, eq) for eq in E.equations)


# ---------------------------------------------------------------------------
# Morphisms


@dataclass(frozen=True)
class ModelMorphism:
    maps: Mapping[str, tuple[int, ...]]  # per sort: image of each element


def check_morphism(f: ModelMorphism, m: FinSetModel, n: FinSetModel) -> bool:
    """Does f commute with every op table?  Checked by full enumeration."""
    if m.signature is not n.signature and m.signature != n.signature:
        raise ModelError("morphism endpoints use different signatures")
    for s in m.signature.sorts:
        fs = f.maps.get(s)
        if fs is None or len(fs) != m.carriers[s]:
            raise ModelError(f"morphism component for sort {s} has wrong size")
        if any(not 0 <= e < n.carriers[s] for e in fs):
            raise ModelError(f"morphism component for sort {s} out of range")
    for name, decl in m.signature.ops.items():
        mt = m.op_tables[name]
        nt = n.op_tables[name]
        fb = f.maps[decl.result]
        comps = [f.maps[s] for s in decl.arity]
        for args in itertools.product(*(range(m.carriers[s]) for s in decl.arity)):
            if fb[mt(*args)] != nt(*(c[a] for c, a in zip(comps, args))):
                return False
    return True


# ---------------------------------------------------------------------------
# Brute-force model search


def _size_vectors(sorts: Sequence[str], max_size: int) -> Iterator[tuple[int, ...]]:
    yield from itertools.product(range(max_size + 1), repeat=len(sorts))


def _tables_for(sig: Signature, sizes: Mapping[str, int]
                ) -> Iterator[dict[str, MultiMap]]:
    names = list(sig.ops)
    spaces = []
    for name in names:
        decl = sig.op(name)
        doms = tuple(sizes[s] for s in decl.arity)
        cod = sizes[decl.result]
        cells = 1
        for d in doms:
            cells *= d
        if cod == 0 and cells > 0:
            return  # no total map into an empty carrier
        spaces.append([MultiMap(doms, cod, tbl)
                       for tbl in itertools.product(range(cod), repeat=cells)])
    for combo in itertools.product(*spaces):
        yield dict(zip(names, combo))


def iter_models(E: Theory, max_size: int,
                avoid: Optional[Equation] = None) -> Iterator[FinSetModel]:
    """All models of E with carriers of size <= max_size, in the fixed order:
    size vectors ascending lexicographically, then tables row-major."""
    sorts = E.signature.sorts
    for sizes_vec in _size_vectors(sorts, max_size):
        sizes = dict(zip(sorts, sizes_vec))
        for tables in _tables_for(E.signature, sizes):
            m = FinSetModel(E.signature, E.structure, sizes, tables)
            if not satisfies_theory(m, E):
                continue
            if avoid is not None and satisfies(m, avoid):
                continue
            yield m


def find_model(E: Theory, max_size: int, avoid: Optional[Equation] = None,
               workers: int = 1) -> Optional[FinSetModel]:
    """First model in the fixed enumeration order, or None within the bound.

    With workers > 1 the size vectors are scanned in deterministic chunks on
    a thread pool; the earliest hit wins, so the witness does not depend on
    the worker count.
    """
    if max_size < 0:
        raise ModelError("max_size must be >= 0")
    vectors = list(_size_vectors(E.signature.sorts, max_size))

    def scan(vec: tuple[int, ...]) -> Optional[FinSetModel]:
        sizes = dict(zip(E.signature.sorts, vec))
        for tables in _tables_for(E.signature, sizes):
            m = FinSetModel(E.signature, E.structure, sizes, tables)
            if satisfies_theory(m, E) and (
                    avoid is None or not satisfies(m, avoid)):
                return m
        return None

    if workers <= 1:
        for vec in vectors:
            hit = scan(vec)
            if hit is not None:
                return hit
        return None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for hit in pool.map(scan, vectors):
            if hit is not None:
                return hit
    return None


def format_model(m: FinSetModel) -> str:
    lines = []
    for s in m.signature.sorts:
        lines.append(f"carrier {s} = {m.carriers[s]}")
    for name in m.signature.ops:
        row = " ".join(map(str, m.op_tables[name].table))
        lines.append(f"table {name} : {row}".rstrip())
    return "\n".join(lines)
