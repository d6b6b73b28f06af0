"""Term algebras with provability quotients and the universal-model build.

The extended signature has one sort per (argument word, result sort) pair and
four symbol families: composition, identities, reindexing actions for every
admitted finite-ordinal function within bounds, and the original ops as
constants.  The categorization axioms make those symbols behave like a
multicategory; internalizing a theory adds one closed equation per axiom.
The initial model is then a congruence quotient of closed terms, which the
shared saturation engine computes at bounded depth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .context import (
    CARTESIAN, ContextStructure, Letter, Word, delta_of, holds,
    terminal_context,
)
from .finord import (
    FinFn, compose as fn_compose, coproduct, identity as fn_identity,
    similarity_component,
)
from .setmodel import (
    FinSetModel, MultiMap, compose_multi, identity_map, theta_action,
)
from .syntax import (
    App, Equation, OpDecl, Signature, Term, Theory, TheoryError, Var, app,
    equation, tau, term_depth, term_str, var,
)
from .deduction import Bounds, _Saturator, prove


class UniversalError(TheoryError):
    pass


# ---------------------------------------------------------------------------
# Term algebras over a signature


BALANCED_R = "balanced-r"
PLAIN_R = "plain-r"
BALANCED_E = "balanced-e"
PLAIN_E = "plain-e"


def term_algebra_eval(kind: str, E: Theory, t: Term, v: Word, args: Sequence):
    """Evaluate t in the term algebra at the point given by args (one entry
    per context letter).  Plain algebras take terms; balanced ones take
    (word, term) pairs and thread the words along variable occurrences."""
    if kind in (PLAIN_R, PLAIN_E):
        assignment = dict(zip(v, args))

        def ev(u: Term) -> Term:
            if isinstance(u, Var):
                try:
                    return assignment[u.letter]
                except KeyError:
                    raise UniversalError(
                        f"no argument for variable {u.letter.name}") from None
            assert isinstance(u, App)
            if not u.args:
                return u
            return app(E.signature, u.op, [ev(x) for x in u.args])

        return ev(t)
    if kind in (BALANCED_R, BALANCED_E):
        assignment = dict(zip(v, args))

        def evb(u: Term) -> tuple[Word, Term]:
            if isinstance(u, Var):
                try:
                    w, inner = assignment[u.letter]
                except KeyError:
                    raise UniversalError(
                        f"no argument for variable {u.letter.name}") from None
                return tuple(w), inner
            assert isinstance(u, App)
            if not u.args:
                return (), u
            parts = [evb(x) for x in u.args]
            word = tuple(x for w, _ in parts for x in w)
            return word, app(E.signature, u.op, [inner for _, inner in parts])

        return evb(t)
    raise UniversalError(f"unknown term algebra kind {kind!r}")


@dataclass(frozen=True)
class SatisfactionResult:
    value: bool
    truncated: bool
    truncated_by: tuple[str, ...] = ()


def term_model_satisfies(kind: str, E: Theory, eq: Equation,
                         bounds: Bounds) -> SatisfactionResult:
    """Whether the quotient term model satisfies eq, decided by bounded
    saturation.  The plain model quotients by derivability under the maximal
    structure; the balanced one needs a shared terminal context first."""
    if kind == PLAIN_E:
        from .context import CARTESIAN

        cart = Theory(E.name, E.signature, CARTESIAN, E.equations)
        letters = tuple(dict.fromkeys(tau(eq.lhs) + tau(eq.rhs)))
        goal = equation("", eq.lhs, eq.rhs, letters)
        res = prove(cart, goal, bounds)
        return SatisfactionResult(res.proved, res.truncated, res.truncated_by)
    if kind == BALANCED_E:
        w1 = terminal_context(E.structure, tau(eq.lhs))
        w2 = terminal_context(E.structure, tau(eq.rhs))
        if w1 is None or w2 is None:
            return SatisfactionResult(False, False)
        if not (holds(E.structure, w1, w2) and holds(E.structure, w2, w1)):
            return SatisfactionResult(False, False)
        goal = equation("", eq.lhs, eq.rhs, w1)
        res = prove(E, goal, bounds)
        return SatisfactionResult(res.proved, res.truncated, res.truncated_by)
    raise UniversalError(
        f"term_model_satisfies expects a quotient algebra kind, got {kind!r}")


# ---------------------------------------------------------------------------
# The extended signature


def _hom_sort(a: Sequence[str], b: str) -> str:
    return f"[{' '.join(a)}=>{b}]" if a else f"[=>{b}]"


def _theta_tag(theta: FinFn) -> str:
    return ",".join(map(str, theta.images)) + f"->{theta.cod}"


@dataclass(frozen=True)
class SigmaSignature:
    base: Signature
    structure: ContextStructure
    max_arity: int
    max_theta: int
    signature: Signature = field(compare=False)
    hom_sorts: tuple[tuple[tuple[str, ...], str], ...] = field(compare=False)
    sym_info: Mapping[str, tuple] = field(compare=False)
    thetas: tuple[FinFn, ...] = field(compare=False)

    def hom_sort_name(self, a: Sequence[str], b: str) -> str:
        name = _hom_sort(a, b)
        if name not in self.signature.sorts:
            raise UniversalError(f"hom sort {name} outside bounds")
        return name

    def id_name(self, c: str) -> str:
        return f"id[{c}]"

    def op_name(self, f: str) -> str:
        return f"op:{f}"

    def act_name(self, theta: FinFn, b: Sequence[str], c: str) -> str:
        name = f"act[{_theta_tag(theta)}]{{{' '.join(b)}|{c}}}"
        if name not in self.signature.ops:
            raise UniversalError(
                f"action symbol for {_theta_tag(theta)} on {' '.join(b) or '()'} "
                f"outside bounds")
        return name

    def comp_name(self, a_words: Sequence[tuple[str, ...]],
                  bs: Sequence[str], c: str) -> str:
        name = (f"comp{{{'|'.join(' '.join(a) for a in a_words)};"
                f"{' '.join(bs)};{c}}}")
        if name not in self.signature.ops:
            raise UniversalError("composition symbol outside bounds")
        return name


def _words(sorts: Sequence[str], max_len: int):
    for k in range(max_len + 1):
        yield from itertools.product(sorts, repeat=k)


def build_sigma(base: Signature, R: ContextStructure, max_arity: int,
                max_theta: int) -> SigmaSignature:
    """Generate the extended signature within the given bounds."""
    if max_arity < 1 or max_theta < 1:
        raise UniversalError("bounds must be >= 1")
    S = base.sorts
    hom_sorts = [(tuple(a), b) for a in _words(S, max_arity) for b in S]
    sort_names = tuple(_hom_sort(a, b) for a, b in hom_sorts)
    ops: dict[str, OpDecl] = {}
    sym_info: dict[str, tuple] = {}

    for c in S:
        name = f"id[{c}]"
        ops[name] = OpDecl((), _hom_sort((c,), c))
        sym_info[name] = ("id", c)
    for f, decl in base.ops.items():
        if len(decl.arity) > max_arity:
            raise UniversalError(
                f"op {f} has arity {len(decl.arity)} beyond bound {max_arity}")
        name = f"op:{f}"
        ops[name] = OpDecl((), _hom_sort(decl.arity, decl.result))
        sym_info[name] = ("op", f)

    thetas = [theta for theta in _all_fns(max_theta) if delta_of(R, theta)]
    for theta in thetas:
        if theta.dom > max_arity or theta.cod > max_arity:
            continue
        for b in itertools.product(S, repeat=theta.cod):
            b_theta = tuple(b[theta(i) - 1] for i in range(1, theta.dom + 1))
            for c in S:
                name = f"act[{_theta_tag(theta)}]{{{' '.join(b)}|{c}}}"
                ops[name] = OpDecl((_hom_sort(b_theta, c),), _hom_sort(b, c))
                sym_info[name] = ("act", theta, b, c)

    for n in range(max_arity + 1):
        for bs in itertools.product(S, repeat=n):
            for c in S:
                for a_words in _arg_splits(S, n, max_arity):
                    flat = tuple(x for a in a_words for x in a)
                    name = (f"comp{{{'|'.join(' '.join(a) for a in a_words)};"
                            f"{' '.join(bs)};{c}}}")
                    arity = (_hom_sort(bs, c),) + tuple(
                        _hom_sort(a, b) for a, b in zip(a_words, bs))
                    ops[name] = OpDecl(arity, _hom_sort(flat, c))
                    sym_info[name] = ("comp", a_words, bs, c)

    sig = Signature(sort_names, ops)
    return SigmaSignature(base, R, max_arity, max_theta, sig,
                          tuple(hom_sorts), sym_info, tuple(thetas))


def _all_fns(max_n: int):
    for n in range(max_n + 1):
        for m in range(max_n + 1):
            if n == 0 and m > 0:
                continue
            for images in itertools.product(range(1, n + 1), repeat=m):
                yield FinFn(m, n, images)


def _arg_splits(S: Sequence[str], n: int, max_total: int):
    """All n-tuples of sort words with total length <= max_total."""
    if n == 0:
        yield ()
        return
    for first_len in range(max_total + 1):
        for first in itertools.product(S, repeat=first_len):
            for rest in _arg_splits(S, n - 1, max_total - first_len):
                yield (tuple(first),) + rest


# ---------------------------------------------------------------------------
# Categorization axioms


def _hvar(S: SigmaSignature, name: str, a: Sequence[str], b: str) -> Var:
    return var(Letter(S.hom_sort_name(a, b), name))


def _comp(S: SigmaSignature, head: Term, args: Sequence[Term]) -> Term:
    a_words = []
    bs = []
    for g in args:
        sort = g.sort  # "[a1 .. ak=>b]"
        inner = sort[1:-1]
        left, _, b = inner.partition("=>")
        a_words.append(tuple(left.split()))
        bs.append(b)
    head_inner = head.sort[1:-1]
    _, _, c = head_inner.partition("=>")
    name = S.comp_name(a_words, bs, c)
    return app(S.signature, name, [head] + list(args))


def _act(S: SigmaSignature, theta: FinFn, b: Sequence[str], c: str,
         arg: Term) -> Term:
    return app(S.signature, S.act_name(theta, b, c), [arg])


def categorization_axioms(S: SigmaSignature) -> list[Equation]:
    """Every in-bound instance of the seven multicategory schemas.

    Each instance uses pairwise distinct variables; contexts list them in
    written order.  Reindexing along a non-surjective function drops
    variables from the right-hand side, so the extended theory lives under
    the maximal structure, matching plain equational deduction over sets."""
    out: list[Equation] = []
    base_sorts = S.base.sorts
    A = S.max_arity
    # Shapes with several composition slots grow factorially in the arity
    # bound; cap them at three while the identity and unit-action laws keep
    # the full bound (they are what strips the wrappers off internalized
    # equation sides).
    A3 = min(A, 3)
    counter = itertools.count()

    def emit(tag: str, lhs: Term, rhs: Term, ctx: Sequence[Letter]) -> None:
        out.append(equation(f"cat:{tag}:{next(counter)}", lhs, rhs,
                            tuple(ctx), CARTESIAN))

    # identity laws and the unit action
    for a, d in S.hom_sorts:
        h = _hvar(S, "h", a, d)
        try:
            lhs = _comp(S, app(S.signature, S.id_name(d)), [h])
        except UniversalError:
            lhs = None
        if lhs is not None:
            emit("idl", lhs, h, (h.letter,))
        try:
            ids = [app(S.signature, S.id_name(c)) for c in a]
            lhs = _comp(S, h, ids)
        except UniversalError:
            lhs = None
        if lhs is not None:
            emit("idr", lhs, h, (h.letter,))
        theta = fn_identity(len(a))
        try:
            lhs = _act(S, theta, a, d, h)
        except UniversalError:
            lhs = None
        if lhs is not None:
            emit("actid", lhs, h, (h.letter,))

    # action composition: (phi . theta)* h = phi* (theta* h)
    for phi in S.thetas:
        if phi.cod > A3:
            continue
        for theta in S.thetas:
            if theta.cod != phi.dom or theta.dom > A3:
                continue
            comp_fn = fn_compose(phi, theta)
            for b in itertools.product(base_sorts, repeat=phi.cod):
                b_phi = tuple(b[phi(i) - 1] for i in range(1, phi.dom + 1))
                dom_word = tuple(b_phi[theta(i) - 1]
                                 for i in range(1, theta.dom + 1))
                for c in base_sorts:
                    h = _hvar(S, "h", dom_word, c)
                    try:
                        lhs = _act(S, comp_fn, b, c, h)
                        rhs = _act(S, phi, b, c, _act(S, theta, b_phi, c, h))
                    except UniversalError:
                        continue
                    emit("actcomp", lhs, rhs, (h.letter,))

    # interchange of action and composition, outer side:
    #   comp(theta* h, g_1..g_n) = theta'* comp(h, g_theta(1)..g_theta(m))
    for theta in S.thetas:
        n, mlen = theta.cod, theta.dom
        if n > A3 or mlen > A3:
            continue
        for cs in itertools.product(base_sorts, repeat=n):
            cs_theta = tuple(cs[theta(i) - 1] for i in range(1, mlen + 1))
            for d in base_sorts:
                for b_words in _arg_splits(base_sorts, n, A3):
                    ks = tuple(len(b) for b in b_words)
                    sim = similarity_component(theta, ks)
                    h = _hvar(S, "h", cs_theta, d)
                    gs = [_hvar(S, f"g{i + 1}", b_words[i], cs[i])
                          for i in range(n)]
                    flat = tuple(x for b in b_words for x in b)
                    try:
                        lhs = _comp(S, _act(S, theta, cs, d, h), gs)
                        inner = _comp(S, h, [gs[theta(i) - 1]
                                             for i in range(1, mlen + 1)])
                        rhs = _act(S, sim, flat, d, inner)
                    except UniversalError:
                        continue
                    emit("actout", lhs, rhs,
                         (h.letter,) + tuple(g.letter for g in gs))

    # interchange, inner side:
    #   comp(h, theta1* g1, .., thetan* gn) = (theta1+..+thetan)* comp(h, g..)
    for n in range(A3 + 1):
        for cs in itertools.product(base_sorts, repeat=n):
            for d in base_sorts:
                for b_words in _arg_splits(base_sorts, n, A3):
                    theta_lists = []
                    for b in b_words:
                        options = [t for t in S.thetas if t.cod == len(b)]
                        theta_lists.append(options)
                    for thetas in itertools.product(*theta_lists):
                        total = coproduct(list(thetas)) if thetas else None
                        h = _hvar(S, "h", cs, d)
                        gs = []
                        for i, (b, th) in enumerate(zip(b_words, thetas)):
                            dom_word = tuple(b[th(j) - 1]
                                             for j in range(1, th.dom + 1))
                            gs.append(_hvar(S, f"g{i + 1}", dom_word, cs[i]))
                        if all(t.is_identity() for t in thetas):
                            continue  # degenerate: both sides identical
                        try:
                            lhs = _comp(S, h, [
                                _act(S, th, b, cs[i], gs[i])
                                for i, (b, th) in enumerate(
                                    zip(b_words, thetas))])
                            inner = _comp(S, h, gs)
                            rhs = (_act(S, total, tuple(
                                x for b in b_words for x in b), d, inner)
                                if total is not None else inner)
                        except UniversalError:
                            continue
                        emit("actin", lhs, rhs,
                             (h.letter,) + tuple(g.letter for g in gs))

    # associativity (bounded shapes)
    for n in range(1, A3 + 1):
        for cs in itertools.product(base_sorts, repeat=n):
            for d in base_sorts:
                for m_vec in itertools.product(range(A3 + 1), repeat=n):
                    if sum(m_vec) > A3:
                        continue
                    for b_words in _arg_splits(base_sorts, n, A3):
                        if tuple(len(b) for b in b_words) != m_vec:
                            continue
                        flat_b = tuple(x for b in b_words for x in b)
                        for a_words in _arg_splits(base_sorts, sum(m_vec), A3):
                            h = _hvar(S, "h", cs, d)
                            gs = [_hvar(S, f"g{i + 1}", b_words[i], cs[i])
                                  for i in range(n)]
                            flat_bs = [x for b in b_words for x in b]
                            fs = [_hvar(S, f"f{j + 1}", a_words[j], flat_bs[j])
                                  for j in range(sum(m_vec))]
                            try:
                                lhs = _comp(S, _comp(S, h, gs), fs)
                                pos = 0
                                inners = []
                                for i in range(n):
                                    k = m_vec[i]
                                    inners.append(
                                        _comp(S, gs[i], fs[pos:pos + k]))
                                    pos += k
                                rhs = _comp(S, h, inners)
                            except UniversalError:
                                continue
                            emit("assoc", lhs, rhs,
                                 (h.letter,) + tuple(g.letter for g in gs)
                                 + tuple(f.letter for f in fs))
    return out


# ---------------------------------------------------------------------------
# Internalization


def internalize_term(S: SigmaSignature, v: Word, t: Term) -> Term:
    """The closed extended-signature term denoting t as a multimorphism on
    the sorts of v."""
    v_sorts = tuple(x.sort for x in v)
    if isinstance(t, Var):
        w: Word = (t.letter,)
        inner = app(S.signature, S.id_name(t.sort))
        inner_sorts: tuple[str, ...] = (t.sort,)
    elif not t.args:
        w = ()
        inner = app(S.signature, S.op_name(t.op))
        inner_sorts = ()
    else:
        parts = []
        w_list: list[Letter] = []
        for child in t.args:
            w_i = terminal_context(S.structure, tau(child))
            if w_i is None:
                raise UniversalError(f"subterm {term_str(child)} has no context")
            parts.append(internalize_term(S, w_i, child))
            w_list.extend(w_i)
        w = tuple(w_list)
        head = app(S.signature, S.op_name(t.op))
        inner = _comp(S, head, parts)
        inner_sorts = tuple(x.sort for x in w)
    pos = {x: i for i, x in enumerate(v, start=1)}
    try:
        theta = FinFn(len(w), len(v), tuple(pos[x] for x in w))
    except KeyError:
        raise UniversalError(
            f"context does not cover {term_str(t)}") from None
    if not delta_of(S.structure, theta):
        raise UniversalError(
            f"embedding of {term_str(t)} not admitted by {S.structure}")
    return _act(S, theta, v_sorts, t.sort, inner)


def internalize(E: Theory, S: SigmaSignature) -> list[Equation]:
    """One closed equation per axiom, relating the internalized sides."""
    out = []
    for ax in E.equations:
        try:
            lhs = internalize_term(S, ax.ctx, ax.lhs)
            rhs = internalize_term(S, ax.ctx, ax.rhs)
        except UniversalError as exc:
            raise UniversalError(f"axiom {ax.name}: {exc}") from exc
        out.append(equation(f"int:{ax.name}", lhs, rhs, (), CARTESIAN))
    return out


def sigma_theory(S: SigmaSignature, E: Theory) -> Theory:
    eqs = tuple(categorization_axioms(S)) + tuple(internalize(E, S))
    return Theory(f"{E.name}^", S.signature, CARTESIAN, eqs)


# ---------------------------------------------------------------------------
# The bounded initial-model quotient


def enumerate_pure_terms(S: SigmaSignature, depth: int
                         ) -> dict[str, list[Term]]:
    """All closed extended-signature terms up to the given depth, per sort."""
    by_sort: dict[str, list[Term]] = {s: [] for s in S.signature.sorts}
    by_depth: dict[str, list[list[Term]]] = {
        s: [[] for _ in range(depth + 1)] for s in S.signature.sorts}
    for name, decl in S.signature.ops.items():
        if not decl.arity:
            t = app(S.signature, name)
            by_sort[decl.result].append(t)
            by_depth[decl.result][1].append(t)
    for d in range(2, depth + 1):
        for name, decl in S.signature.ops.items():
            if not decl.arity:
                continue
            pools = [
                [t for dd in range(1, d) for t in by_depth[s][dd]]
                for s in decl.arity]
            for combo in itertools.product(*pools):
                if max(term_depth(t) for t in combo) != d - 1:
                    continue
                t = app(S.signature, name, list(combo))
                by_sort[decl.result].append(t)
                by_depth[decl.result][d].append(t)
    return by_sort


@dataclass
class HomPartition:
    sigma: SigmaSignature
    hom: tuple[tuple[str, ...], str]
    classes: list[list[Term]]
    truncated: bool
    truncated_by: tuple[str, ...]
    _engine: _Saturator = field(repr=False)

    def merged(self, a: Term, b: Term) -> bool:
        return self._engine.holds_canonically((), a, b)

    def class_of(self, t: Term) -> Optional[list[Term]]:
        for cls in self.classes:
            if any(x is t for x in cls):
                return cls
        return None


def universal_hom(E: Theory, hom: tuple[Sequence[str], str], bounds: Bounds,
                  extra_terms: Sequence[Term] = (),
                  sigma: Optional[SigmaSignature] = None,
                  restrict_action_targets: bool = True,
                  enum_depth: Optional[int] = None) -> HomPartition:
    """Quotient the enumerated closed terms of one hom sort by the bounded
    congruence generated by the categorization and internalized axioms.

    Every equation of interest is closed, so instantiation targets are
    closed terms; reindexing towers are skipped as targets by default (their
    collapses arrive through the action-composition axioms instead).  The
    enumeration frontier defaults to depth 2 with deeper terms entering as
    axiom subterms and derived conclusions, which keeps the congruence
    universe at desk scale.
    """
    if sigma is None:
        sigma = default_sigma(E, hom)
    theory = sigma_theory(sigma, E)
    if enum_depth is None:
        enum_depth = min(2, bounds.max_term_depth)
    universe = enumerate_pure_terms(sigma, enum_depth)
    hom_name = sigma.hom_sort_name(tuple(hom[0]), hom[1])
    seeds: list[tuple[Word, Term]] = []
    for terms in universe.values():
        seeds.extend(((), t) for t in terms)
    for t in extra_terms:
        seeds.append(((), t))
    ctx_len = max([bounds.max_ctx_len]
                  + [len(ax.ctx) for ax in theory.equations])
    engine_bounds = Bounds(bounds.max_term_depth, ctx_len, bounds.max_rounds)

    def inst_filter(t: Term) -> bool:
        if tau(t):
            return False
        if restrict_action_targets and isinstance(t, App) and \
                t.op.startswith("act["):
            return False
        return True

    engine = _Saturator(theory, engine_bounds, extra_terms=seeds,
                        inst_filter=inst_filter, inst_budget=500)
    engine.run()
    space = engine.spaces.get((), None)
    classes: list[list[Term]] = []
    if space is not None:
        hom_terms = {t for t in universe[hom_name]}
        hom_terms.update(t for t in extra_terms if t.sort == hom_name)
        grouped: dict[Term, list[Term]] = {}
        for t in sorted(hom_terms, key=lambda t: (term_depth(t), repr(t))):
            if t in space.parent:
                grouped.setdefault(space.find(t), []).append(t)
            else:
                grouped.setdefault(t, []).append(t)
        classes = sorted(grouped.values(),
                         key=lambda c: (term_depth(c[0]), repr(c[0])))
    return HomPartition(sigma, (tuple(hom[0]), hom[1]), classes,
                        truncated=bool(engine.truncated_by),
                        truncated_by=tuple(sorted(engine.truncated_by)),
                        _engine=engine)


def default_sigma(E: Theory, hom: tuple[Sequence[str], str]
                  ) -> SigmaSignature:
    max_arity = max(
        [1, len(tuple(hom[0]))]
        + [len(d.arity) for d in E.signature.ops.values()]
        + [len(ax.ctx) for ax in E.equations])
    return build_sigma(E.signature, E.structure, max_arity, max_arity)


# ---------------------------------------------------------------------------
# Interpreting closed extended-signature terms in a finite-set model


def sigma_interpret(S: SigmaSignature, m: FinSetModel, t: Term) -> MultiMap:
    """Evaluate a closed extended-signature term to a concrete table."""
    if isinstance(t, Var):
        raise UniversalError("only closed terms can be interpreted")
    assert isinstance(t, App)
    info = S.sym_info.get(t.op)
    if info is None:
        raise UniversalError(f"unknown symbol {t.op}")
    kind = info[0]
    if kind == "id":
        return identity_map(m.carriers[info[1]])
    if kind == "op":
        return m.op_tables[info[1]]
    if kind == "act":
        _, theta, b, _c = info
        target = tuple(m.carriers[s] for s in b)
        return theta_action(sigma_interpret(S, m, t.args[0]), theta, target)
    if kind == "comp":
        head = sigma_interpret(S, m, t.args[0])
        inner = [sigma_interpret(S, m, g) for g in t.args[1:]]
        return compose_multi(head, inner)
    raise UniversalError(f"unknown symbol kind {kind}")


def sigma_term_str(t: Term) -> str:
    """Readable rendering: comp(...), id[S], act[images](...), op:<name>."""
    if isinstance(t, Var):
        return t.letter.name
    assert isinstance(t, App)
    op = t.op
    if op.startswith("comp{"):
        return "comp(" + ", ".join(sigma_term_str(a) for a in t.args) + ")"
    if op.startswith("act["):
        imgs = op[4:op.index("]")]
        imgs = imgs.split("->")[0]
        return f"act[{imgs}](" + ", ".join(
            sigma_term_str(a) for a in t.args) + ")"
    if op.startswith("id[") or op.startswith("op:"):
        return op
    if not t.args:
        return op
    return op + "(" + ", ".join(sigma_term_str(a) for a in t.args) + ")"
