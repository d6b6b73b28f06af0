"""Bounded forward saturation for the context-structure deduction relation.

Derived equations carry replayable proof objects built from five rule nodes:
axiom, reflexivity, symmetry, transitivity, and guarded substitution.  The
engine keeps one union-find per canonical context (context letters renamed to
_v1.._vn in order), so symmetry and transitivity are free, and grows the set
by two rule-5 moves per round:

  * instantiation: substitute universe terms for the context letters of a
    known equation, emitting the result at every context the relation admits
    over the letters of the substituted word;
  * congruence: replace a direct child of a known term by something provably
    equal to it, when per-child contexts exist that the parent context
    governs.

Instantiation targets are tiered (the Herbrand-style truncation): axioms
take every registered term up to the starting material's depth at 1-letter
contexts and depth-2 terms at 2-letter contexts; derived equations and longer
contexts take variables and constants, with a per-equation budget that falls
back to constants alone.  Anything the tiers or the depth/context caps skip
sets the truncation flag, so a missing goal is reported inconclusive rather
than refuted.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .context import Letter, Word, holds, terminal_context
from .syntax import (
    App, Equation, Term, Theory, TheoryError, Var, app, apply_renaming,
    const, ctx_str, equation, is_r_context, is_r_renaming, tau, term_depth,
    term_str, term_vars, var,
)


class DeductionError(TheoryError):
    pass


class ProofError(DeductionError):
    pass


@dataclass(frozen=True)
class Bounds:
    max_term_depth: int
    max_ctx_len: int
    max_rounds: int

    def __post_init__(self) -> None:
        if min(self.max_term_depth, self.max_ctx_len, self.max_rounds) < 1:
            raise DeductionError("all bounds must be >= 1")


# ---------------------------------------------------------------------------
# Proof objects


class Proof:
    __slots__ = ()


@dataclass(frozen=True)
class Axiom(Proof):
    """An axiom of the theory, stated up to a bijective context renaming."""
    name: str
    concluded: Equation


@dataclass(frozen=True)
class Refl(Proof):
    term: Term
    ctx: Word


@dataclass(frozen=True)
class Sym(Proof):
    premise: Proof


@dataclass(frozen=True)
class Trans(Proof):
    left: Proof
    right: Proof


@dataclass(frozen=True)
class Subst(Proof):
    """Rule-5 node: premise t1 ~ t2 in context v, two renamings sharing the
    target context w and per-letter contexts ws, one side premise per letter."""
    s1: tuple[tuple[Letter, Term], ...]
    s2: tuple[tuple[Letter, Term], ...]
    w: Word
    ws: tuple[Word, ...]
    premise: Proof
    sides: tuple[Proof, ...]


def check_proof(E: Theory, p: Proof) -> Equation:
    """Replay a proof against a theory; returns the equation it concludes."""
    R = E.structure
    if isinstance(p, Axiom):
        ax = E.axiom(p.name)
        if _canonical_ordered(ax.ctx, ax.lhs, ax.rhs) != _canonical_ordered(
                p.concluded.ctx, p.concluded.lhs, p.concluded.rhs):
            raise ProofError(
                f"axiom node {p.name}: stated equation is not a context "
                f"renaming of the axiom")
        return p.concluded
    if isinstance(p, Refl):
        if not is_r_context(R, p.ctx, p.term):
            raise ProofError(
                f"refl node: [{ctx_str(p.ctx)}] does not govern "
                f"{term_str(p.term)}")
        return Equation("", p.term, p.term, p.ctx)
    if isinstance(p, Sym):
        e = check_proof(E, p.premise)
        return Equation("", e.rhs, e.lhs, e.ctx)
    if isinstance(p, Trans):
        e1 = check_proof(E, p.left)
        e2 = check_proof(E, p.right)
        if e1.ctx != e2.ctx:
            raise ProofError("trans node: premises use different contexts")
        if e1.rhs is not e2.lhs:
            raise ProofError("trans node: middle terms differ")
        return Equation("", e1.lhs, e2.rhs, e1.ctx)
    if isinstance(p, Subst):
        e = check_proof(E, p.premise)
        v = e.ctx
        s1 = dict(p.s1)
        s2 = dict(p.s2)
        if not is_r_renaming(R, s1, v, p.w, p.ws):
            raise ProofError("subst node: first renaming violates the guard")
        if not is_r_renaming(R, s2, v, p.w, p.ws):
            raise ProofError("subst node: second renaming violates the guard")
        if len(p.sides) != len(v):
            raise ProofError("subst node: need one side premise per letter")
        for x, wi, side in zip(v, p.ws, p.sides):
            se = check_proof(E, side)
            if se.ctx != wi or se.lhs is not s1[x] or se.rhs is not s2[x]:
                raise ProofError(
                    f"subst node: side premise for {x.name} does not conclude "
                    f"s1({x.name}) ~ s2({x.name}) in its stated context")
        return Equation("", apply_renaming(s1, e.lhs),
                        apply_renaming(s2, e.rhs), p.w)
    raise ProofError(f"unknown proof node {type(p).__name__}")


def proof_lines(p: Proof, indent: int = 0) -> list[str]:
    """Serialize a proof as an indented rule tree, one rule per line."""
    pad = "  " * indent
    if isinstance(p, Axiom):
        return [f"{pad}axiom {p.name}: {p.concluded}"]
    if isinstance(p, Refl):
        return [f"{pad}refl {term_str(p.term)} ctx [{ctx_str(p.ctx)}]"]
    if isinstance(p, Sym):
        return [f"{pad}sym"] + proof_lines(p.premise, indent + 1)
    if isinstance(p, Trans):
        return ([f"{pad}trans"] + proof_lines(p.left, indent + 1)
                + proof_lines(p.right, indent + 1))
    if isinstance(p, Subst):
        s1 = ", ".join(f"{x.name}->{term_str(t)}" for x, t in p.s1)
        s2 = ", ".join(f"{x.name}->{term_str(t)}" for x, t in p.s2)
        out = [f"{pad}subst w=[{ctx_str(p.w)}] s1={{{s1}}} s2={{{s2}}}"]
        out.extend(proof_lines(p.premise, indent + 1))
        for side in p.sides:
            out.extend(proof_lines(side, indent + 1))
        return out
    raise ProofError(f"unknown proof node {type(p).__name__}")


def proof_size(p: Proof) -> int:
    if isinstance(p, (Axiom, Refl)):
        return 1
    if isinstance(p, Sym):
        return 1 + proof_size(p.premise)
    if isinstance(p, Trans):
        return 1 + proof_size(p.left) + proof_size(p.right)
    if isinstance(p, Subst):
        return 1 + proof_size(p.premise) + sum(map(proof_size, p.sides))
    raise ProofError(f"unknown proof node {type(p).__name__}")


# ---------------------------------------------------------------------------
# Canonical form: context letters become _v1.._vn in context order


def _pool_letter(sort: str, i: int) -> Letter:
    return Letter(sort, f"_v{i}")


def _canonicalize(ctx: Word, terms: Sequence[Term]
                  ) -> tuple[Word, list[Term], dict[Letter, Letter]]:
    mapping = {x: _pool_letter(x.sort, i) for i, x in enumerate(ctx, start=1)}
    canon_ctx = tuple(mapping[x] for x in ctx)
    sub = {x: var(y) for x, y in mapping.items()}
    return canon_ctx, [apply_renaming(sub, t) for t in terms], mapping


def _canonical_triple(ctx: Word, a: Term, b: Term):
    canon_ctx, (ca, cb), _ = _canonicalize(ctx, [a, b])
    key_a, key_b = _term_key(ca), _term_key(cb)
    if key_b < key_a:
        ca, cb = cb, ca
    return (canon_ctx, ca, cb)


def _canonical_ordered(ctx: Word, a: Term, b: Term):
    canon_ctx, (ca, cb), _ = _canonicalize(ctx, [a, b])
    return (canon_ctx, ca, cb)


def _term_key(t: Term) -> tuple[int, str]:
    return (term_depth(t), repr(t))


def _canon_alone(t: Term) -> tuple[str, dict[Letter, Letter]]:
    """Relabel a single term's letters by first occurrence; key plus map.
    The key carries the letter sorts so same-named letters of different
    sorts never collide."""
    mapping: dict[Letter, Letter] = {}
    for x in tau(t):
        if x not in mapping:
            mapping[x] = _pool_letter(x.sort, len(mapping) + 1)
    sub = {x: var(y) for x, y in mapping.items()}
    sorts = ";".join(x.sort for x in mapping)
    return f"{sorts}|{apply_renaming(sub, t)!r}", mapping


# ---------------------------------------------------------------------------
# Saturation state


class _Space:
    """All equalities known at one canonical context."""

    __slots__ = ("ctx", "parent", "edges", "members", "class_min")

    def __init__(self, ctx: Word):
        self.ctx = ctx
        self.parent: dict[Term, Term] = {}
        self.edges: dict[Term, list[tuple[Term, Proof, bool]]] = {}
        self.members: list[Term] = []
        self.class_min: dict[Term, Term] = {}

    def add(self, t: Term) -> None:
        if t not in self.parent:
            self.parent[t] = t
            self.edges[t] = []
            self.members.append(t)
            self.class_min[t] = t

    def find(self, t: Term) -> Term:
        root = t
        while self.parent[root] is not root:
            root = self.parent[root]
        while self.parent[t] is not root:
            self.parent[t], t = root, self.parent[t]
        return root

    def union(self, a: Term, b: Term, proof: Proof) -> bool:
        self.add(a)
        self.add(b)
        ra, rb = self.find(a), self.find(b)
        if ra is rb:
            return False
        best = min(self.class_min.pop(rb), self.class_min[ra], key=_term_key)
        self.parent[rb] = ra
        self.class_min[ra] = best
        self.edges[a].append((b, proof, False))
        self.edges[b].append((a, proof, True))
        return True

    def smallest(self, t: Term) -> Term:
        return self.class_min[self.find(t)]

    def same(self, a: Term, b: Term) -> bool:
        if a not in self.parent or b not in self.parent:
            return False
        return self.find(a) is self.find(b)

    def explain(self, a: Term, b: Term) -> Proof:
        if a is b:
            return Refl(a, self.ctx)
        prev: dict[Term, tuple[Term, Proof, bool]] = {}
        queue = deque([a])
        seen = {a}
        while queue:
            x = queue.popleft()
            if x is b:
                break
            for y, proof, flipped in self.edges[x]:
                if y not in seen:
                    seen.add(y)
                    prev[y] = (x, proof, flipped)
                    queue.append(y)
        if b not in prev:
            raise DeductionError("no recorded path between equal terms")
        steps: list[Proof] = []
        node = b
        while node is not a:
            x, proof, flipped = prev[node]
            steps.append(Sym(proof) if flipped else proof)
            node = x
        steps.reverse()
        out = steps[0]
        for step in steps[1:]:
            out = Trans(out, step)
        return out

    def classes(self) -> list[list[Term]]:
        groups: dict[Term, list[Term]] = {}
        for t in self.members:
            groups.setdefault(self.find(t), []).append(t)
        return [sorted(g, key=_term_key) for g in groups.values()]


@dataclass
class SaturationResult:
    theory: Theory
    bounds: Bounds
    equations: list[Equation]
    truncated: bool
    truncated_by: tuple[str, ...]
    rounds_used: int
    _engine: "_Saturator" = field(repr=False)

    def proof_of(self, eq: Equation) -> Proof:
        return self._engine.proof_of(eq)

    def classes(self) -> dict[Word, list[list[Term]]]:
        out = {}
        for key, space in self._engine.spaces.items():
            groups = space.classes()
            if any(len(c) > 1 for c in groups):
                out[key] = groups
        return out


@dataclass
class ProveResult:
    proof: Optional[Proof]
    truncated: bool
    truncated_by: tuple[str, ...]

    @property
    def proved(self) -> bool:
        return self.proof is not None


_CONG_TIER_DEPTH = 2  # instantiation target depth for 2-letter contexts
_INST_BUDGET = 20000  # per-equation cap on renaming combinations


class _Saturator:
    def __init__(self, E: Theory, bounds: Bounds,
                 extra_terms: Sequence[tuple[Word, Term]] = (),
                 inst_filter: Optional[Callable[[Term], bool]] = None,
                 inst_budget: int = _INST_BUDGET):
        self.E = E
        self.R = E.structure
        self.sig = E.signature
        self.bounds = bounds
        self.inst_filter = inst_filter
        self.inst_budget = inst_budget
        self.spaces: dict[Word, _Space] = {}
        self.universe: list[Term] = []
        self.in_universe: set[Term] = set()
        self.by_sort: dict[str, list[Term]] = {}
        self._tier_cache: dict[tuple[str, str], list[Term]] = {}
        self._sweep_seen: set[tuple[Term, int, Term]] = set()
        self.seen_merges: set[tuple] = set()
        self.truncated_by: set[str] = set()
        self.events: list[tuple[Word, Term, Term]] = []
        self.rounds_used = 0
        self.depth_cap = bounds.max_term_depth
        self.frontier: list[tuple[Word, Term, Term]] = []
        self.new_terms: list[Term] = []

        for sort in self.sig.sorts:
            for i in range(1, bounds.max_ctx_len + 1):
                self._register(var(_pool_letter(sort, i)))
        for name in self.sig.constants():
            self._register(const(self.sig, name))

        seeds: list[tuple[Word, Term, Term, Proof]] = []
        self.axiom_seeds: set[tuple[Word, Term, Term]] = set()
        for ax in E.equations:
            canon_ctx, (a, b), mapping = _canonicalize(ax.ctx, [ax.lhs, ax.rhs])
            base = Axiom(ax.name, ax)
            proof = self._reletter(base, ax.ctx, mapping)
            seeds.append((canon_ctx, a, b, proof))
            self.axiom_seeds.add((canon_ctx, a, b))
            self.axiom_seeds.add((canon_ctx, b, a))
        for ctx, t in extra_terms:
            canon_ctx, (ct,), _ = _canonicalize(ctx, [t])
            self.depth_cap = max(self.depth_cap, term_depth(ct))
            self._space(canon_ctx).add(ct)
            self._register(ct)

        for canon_ctx, a, b, proof in seeds:
            self.depth_cap = max(self.depth_cap, term_depth(a), term_depth(b))
            self._apply_merge(canon_ctx, a, b, proof)
        # Rich instantiation reaches no deeper than the starting material;
        # anything it skips is reported through the truncation flag.
        self.rich_depth = max(
            [_CONG_TIER_DEPTH] + [term_depth(t) for t in self.universe])

    # -- registration ------------------------------------------------------

    def _register(self, t: Term) -> None:
        if t in self.in_universe:
            return
        if isinstance(t, App):
            for a in t.args:
                self._register(a)
        self.in_universe.add(t)
        self.universe.append(t)
        self.by_sort.setdefault(t.sort, []).append(t)
        self.new_terms.append(t)

    def _space(self, canon_ctx: Word) -> _Space:
        sp = self.spaces.get(canon_ctx)
        if sp is None:
            sp = self.spaces[canon_ctx] = _Space(canon_ctx)
        return sp

    def _reletter(self, proof: Proof, ctx: Word,
                  mapping: Mapping[Letter, Letter]) -> Proof:
        """Wrap a proof of an equation at ctx into its letter-renamed form."""
        if all(mapping[x] == x for x in ctx):
            return proof
        s = tuple((x, var(mapping[x])) for x in ctx)
        w = tuple(mapping[x] for x in ctx)
        ws = tuple((mapping[x],) for x in ctx)
        sides = tuple(Refl(var(mapping[x]), (mapping[x],)) for x in ctx)
        return Subst(s, s, w, ws, proof, sides)

    # -- public knobs ------------------------------------------------------

    def run(self) -> None:
        rounds = 0
        while (self.frontier or self.new_terms) and rounds < self.bounds.max_rounds:
            rounds += 1
            frontier = self.frontier
            fresh = self.new_terms
            self.frontier = []
            self.new_terms = []
            if rounds > 1 and fresh:
                # Equations already instantiated never revisit these targets.
                self.truncated_by.add("instantiation")
            self._tier_cache = {}
            candidates = self._round_candidates(frontier)
            for canon_ctx, a, b, proof in candidates:
                self._apply_merge(canon_ctx, a, b, proof)
        self.rounds_used = rounds
        if self.frontier or self.new_terms:
            self.truncated_by.add("rounds")

    def proof_of(self, eq: Equation) -> Proof:
        canon_ctx, (a, b), mapping = _canonicalize(eq.ctx, [eq.lhs, eq.rhs])
        sp = self.spaces.get(canon_ctx)
        if sp is None or not sp.same(a, b):
            raise DeductionError(f"equation not derived: {eq}")
        proof = sp.explain(a, b)
        back = {y: x for x, y in mapping.items()}
        return self._reletter(proof, canon_ctx, back)

    def holds_canonically(self, ctx: Word, a: Term, b: Term) -> bool:
        canon_ctx, (ca, cb), _ = _canonicalize(ctx, [a, b])
        sp = self.spaces.get(canon_ctx)
        return sp is not None and sp.same(ca, cb)

    # -- merge bookkeeping -------------------------------------------------

    def _apply_merge(self, canon_ctx: Word, a: Term, b: Term,
                     proof: Proof) -> None:
        if a is b:
            return
        sp = self._space(canon_ctx)
        self._register(a)
        self._register(b)
        if sp.union(a, b, proof):
            self.events.append((canon_ctx, a, b))
            self.frontier.append((canon_ctx, a, b))

    # -- one round ---------------------------------------------------------

    def _round_candidates(self, frontier):
        out: list[tuple[Word, Term, Term, Proof]] = []
        for ctx, a, b in frontier:
            axiom_level = (ctx, a, b) in self.axiom_seeds
            if axiom_level or max(term_depth(a), term_depth(b)) <= _CONG_TIER_DEPTH:
                self._instantiate(ctx, a, b, axiom_level, out)
            else:
                self.truncated_by.add("instantiation")
        self._congruence_sweep(out)
        return out

    # -- rule 5, instantiation flavour --------------------------------------

    def _targets_for(self, n: int, sort: str, axiom_level: bool) -> list[Term]:
        if axiom_level and n <= 1:
            tier = "rich"
        elif axiom_level and n == 2:
            tier = "mid"
        else:
            tier = "atomic"
        cached = self._tier_cache.get((tier, sort))
        if cached is not None:
            return cached
        pool = self.by_sort.get(sort, [])
        if tier == "rich":
            chosen = [t for t in pool if term_depth(t) <= self.rich_depth]
        elif tier == "mid":
            chosen = [t for t in pool if term_depth(t) <= _CONG_TIER_DEPTH]
        else:
            chosen = [t for t in pool
                      if isinstance(t, Var) or (isinstance(t, App) and not t.args)]
        if self.inst_filter is not None:
            chosen = [t for t in chosen if self.inst_filter(t)]
        if len(chosen) < len(pool):
            self.truncated_by.add("instantiation")
        self._tier_cache[(tier, sort)] = chosen
        return chosen

    def _instantiate(self, ctx: Word, a: Term, b: Term, axiom_level: bool,
                     out: list) -> None:
        n = len(ctx)
        if n == 0:
            return
        target_lists = [self._targets_for(n, x.sort, axiom_level) for x in ctx]
        if any(not lst for lst in target_lists):
            return
        total = 1
        for lst in target_lists:
            total *= len(lst)
        if total > self.inst_budget:
            # Long contexts over rich pools blow up combinatorially; keep the
            # closed instances (constants only) and flag the rest as skipped.
            self.truncated_by.add("instantiation")
            target_lists = [
                [t for t in lst if isinstance(t, App) and not t.args]
                for lst in target_lists]
            if any(not lst for lst in target_lists):
                return
            total = 1
            for lst in target_lists:
                total *= len(lst)
            if total > self.inst_budget:
                return
        for combo in itertools.product(*target_lists):
            s_map = dict(zip(ctx, combo))
            ws: list[Word] = []
            ok = True
            for x in ctx:
                w_i = terminal_context(self.R, tau(s_map[x]))
                if w_i is None:
                    ok = False
                    break
                ws.append(w_i)
            if not ok:
                continue
            u_cat = tuple(y for w_i in ws for y in w_i)
            self._conclude(ctx, a, b, s_map, s_map, tuple(ws), u_cat, None, out)

    def _conclude(self, ctx: Word, a: Term, b: Term, s1: Mapping[Letter, Term],
                  s2: Mapping[Letter, Term], ws: tuple[Word, ...], u_cat: Word,
                  side_proofs: Optional[list[Proof]], out: list) -> None:
        """Emit one rule-5 conclusion at every admissible target context."""
        distinct = tuple(dict.fromkeys(u_cat))
        if len(distinct) > self.bounds.max_ctx_len:
            self.truncated_by.add("ctx")
            return
        lhs = apply_renaming(s1, a)
        rhs = apply_renaming(s2, b)
        if lhs is rhs:
            return
        if max(term_depth(lhs), term_depth(rhs)) > self.depth_cap:
            self.truncated_by.add("depth")
            return
        if len(distinct) <= 4:
            orders = itertools.permutations(distinct)
        else:
            # Beyond four letters the factorial spread of context orders is
            # all twist variants; keep first-occurrence order only.
            self.truncated_by.add("ctx")
            orders = [distinct]
        for perm in orders:
            w = perm
            if not holds(self.R, w, u_cat):
                continue
            canon_ctx, (ca, cb), mapping = _canonicalize(w, [lhs, rhs])
            key = (canon_ctx, ca, cb) if _term_key(ca) <= _term_key(cb) \
                else (canon_ctx, cb, ca)
            if key in self.seen_merges:
                continue
            self.seen_merges.add(key)
            sp = self.spaces.get(canon_ctx)
            if sp is not None and sp.same(ca, cb):
                continue
            if side_proofs is None:
                sides = tuple(Refl(s1[x], wi) for x, wi in zip(ctx, ws))
            else:
                sides = tuple(side_proofs)
            premise = self._premise_proof(ctx, a, b)
            node = Subst(tuple(sorted(s1.items(), key=_letter_sort_key)),
                         tuple(sorted(s2.items(), key=_letter_sort_key)),
                         w, ws, premise, sides)
            proof = self._reletter(node, w, mapping)
            out.append((canon_ctx, ca, cb, proof))

    def _premise_proof(self, ctx: Word, a: Term, b: Term) -> Proof:
        if a is b:
            return Refl(a, ctx)
        sp = self.spaces[ctx]
        return sp.explain(a, b)

    # -- rule 5, congruence flavour ------------------------------------------

    def _congruence_sweep(self, out: list) -> None:
        """Rewrite every argument position toward its class's smallest
        member; iterated over rounds this is congruence closure with
        explicit representative terms."""
        for parent in list(self.universe):
            if not isinstance(parent, App) or not parent.args:
                continue
            for pos, child in enumerate(parent.args):
                mate = self._smallest_mate(child)
                if mate is None:
                    continue
                memo_key = (parent, pos, mate)
                if memo_key in self._sweep_seen:
                    continue
                self._sweep_seen.add(memo_key)
                self._swap_child(parent, pos, mate, out)

    def _smallest_mate(self, u: Term) -> Optional[Term]:
        """The least term provably equal to u, if smaller than u itself."""
        best: Optional[Term] = None
        distinct = tuple(dict.fromkeys(tau(u)))
        for perm in itertools.permutations(distinct):
            if not holds(self.R, perm, tau(u)):
                continue
            canon_ctx, (cu,), mapping = _canonicalize(perm, [u])
            sp = self.spaces.get(canon_ctx)
            if sp is None or cu not in sp.parent:
                continue
            small = sp.smallest(cu)
            if small is cu:
                continue
            back = {y: x for x, y in mapping.items()}
            if not set(tau(small)) <= set(back):
                continue
            sub = {x: var(y) for x, y in back.items()}
            cand = apply_renaming(sub, small)
            if _term_key(cand) < _term_key(u) and (
                    best is None or _term_key(cand) < _term_key(best)):
                best = cand
        return best

    def _swap_child(self, parent: App, pos: int, replacement: Term,
                    out: list) -> None:
        old = parent.args[pos]
        if old is replacement or old.sort != replacement.sort:
            return
        # Rewrite children downward only; the upward direction would pad
        # every parent with unit-style wrappers and never terminate.
        if not _term_key(replacement) < _term_key(old):
            return
        found = self._known_equal(old, replacement)
        if found is None:
            return
        w_i, side_proof = found
        ws: list[Word] = []
        sides: list[Proof] = []
        ok = True
        for j, child in enumerate(parent.args):
            if j == pos:
                ws.append(w_i)
                sides.append(side_proof)
            else:
                w_j = terminal_context(self.R, tau(child))
                if w_j is None:
                    ok = False
                    break
                ws.append(w_j)
                sides.append(Refl(child, w_j))
        if not ok:
            return
        u_cat = tuple(y for w_j in ws for y in w_j)
        template_ctx = tuple(
            Letter(c.sort, f"_p{j + 1}") for j, c in enumerate(parent.args))
        template = app(self.sig, parent.op, [var(x) for x in template_ctx])
        s1 = dict(zip(template_ctx, parent.args))
        s2 = dict(s1)
        s2[template_ctx[pos]] = replacement
        self._conclude(template_ctx, template, template, s1, s2,
                       tuple(ws), u_cat, sides, out)

    def _known_equal(self, u: Term, v: Term
                     ) -> Optional[tuple[Word, Proof]]:
        """A context at which u ~ v is already derived, with its proof."""
        if u is v:
            w = terminal_context(self.R, tau(u))
            if w is None:
                return None
            return w, Refl(u, w)
        distinct = tuple(dict.fromkeys(tau(u) + tau(v)))
        for perm in itertools.permutations(distinct):
            if not holds(self.R, perm, tau(u)) or not holds(self.R, perm, tau(v)):
                continue
            canon_ctx, (cu, cv), mapping = _canonicalize(perm, [u, v])
            sp = self.spaces.get(canon_ctx)
            if sp is not None and sp.same(cu, cv):
                back = {y: x for x, y in mapping.items()}
                return perm, self._reletter(sp.explain(cu, cv), canon_ctx, back)
        return None


def _letter_sort_key(item: tuple[Letter, Term]) -> tuple[str, str]:
    return (item[0].sort, item[0].name)


# ---------------------------------------------------------------------------
# Public entry points


def saturate(E: Theory, bounds: Bounds,
             extra_terms: Sequence[tuple[Word, Term]] = (),
             inst_filter: Optional[Callable[[Term], bool]] = None
             ) -> SaturationResult:
    """Forward-close a theory under the five deduction rules, within bounds.

    The result lists every non-reflexive derived equation in canonical form
    (context letters _v1.._vn); proofs are recoverable per equation.
    """
    engine = _Saturator(E, bounds, extra_terms, inst_filter)
    engine.run()
    eqs = [equation("", a, b, ctx) for ctx, a, b in engine.events]
    return SaturationResult(
        E, bounds, eqs,
        truncated=bool(engine.truncated_by),
        truncated_by=tuple(sorted(engine.truncated_by)),
        rounds_used=engine.rounds_used,
        _engine=engine)


def _weakening_proof(E: Theory, engine: _Saturator,
                     goal: Equation) -> Optional[Proof]:
    vars_needed = term_vars(goal.lhs) | term_vars(goal.rhs)
    letters = tuple(goal.ctx)
    for size in range(len(vars_needed), len(letters) + 1):
        for subset in itertools.combinations(letters, size):
            if not vars_needed <= set(subset):
                continue
            for perm in itertools.permutations(subset):
                if not holds(E.structure, goal.ctx, perm):
                    continue
                if not engine.holds_canonically(perm, goal.lhs, goal.rhs):
                    continue
                inner = engine.proof_of(
                    equation("", goal.lhs, goal.rhs, perm))
                if perm == goal.ctx:
                    return inner
                s = tuple((x, var(x)) for x in perm)
                ws = tuple((x,) for x in perm)
                sides = tuple(Refl(var(x), (x,)) for x in perm)
                return Subst(s, s, goal.ctx, ws, inner, sides)
    return None


def prove(E: Theory, goal: Equation, bounds: Bounds) -> ProveResult:
    """Search for the goal in the bounded closure; absence may be truncated."""
    from .syntax import validate_equation

    validate_equation(E.structure, goal)
    seeds = [(goal.ctx, goal.lhs), (goal.ctx, goal.rhs)]
    engine = _Saturator(E, bounds, extra_terms=seeds)
    engine.run()
    proof = _weakening_proof(E, engine, goal)
    return ProveResult(proof,
                       truncated=bool(engine.truncated_by),
                       truncated_by=tuple(sorted(engine.truncated_by)))


# ---------------------------------------------------------------------------
# The refutation invariant for the two substitution-free structures


_INVARIANT_KINDS = ("injective", "strict-increasing")


def _in_invariant_family(eq: Equation) -> bool:
    ctx_vars = set(eq.ctx)
    for side in (eq.lhs, eq.rhs):
        if set(term_vars(side)) == ctx_vars and eq.lhs is not eq.rhs:
            return False
    return True


def refute_by_invariant(E: Theory, goal: Equation) -> bool:
    """Soundly refute derivability under the injective or strictly increasing
    structure: the set of equations whose full-context sides are syntactically
    equal is closed under all five rules, so a goal outside it is underivable
    whenever every axiom is inside it."""
    if E.structure.kind not in _INVARIANT_KINDS:
        raise DeductionError(
            f"invariant refuter needs an injective or strict-increasing "
            f"theory, got {E.structure}")
    for ax in E.equations:
        if not _in_invariant_family(ax):
            raise DeductionError(
                f"axiom {ax.name} lies outside the invariant family; "
                f"the refuter proves nothing for this theory")
    return not _in_invariant_family(goal)
