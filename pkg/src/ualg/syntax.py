"""Multi-sorted signatures, terms, equations, theories, and their DSL.

Terms are interned: building the same tree twice yields the same object, so
equality and hashing stay cheap inside the saturation engine.  The DSL is
line-oriented; see `parse_theory` for the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

from .context import (
    ContextStructure, ContextError, Letter, Word, check_context, holds,
    parse_structure,
)


class TheoryError(ValueError):
    """Base class for everything a malformed theory can raise."""


class ParseError(TheoryError):
    def __init__(self, msg: str, line: int, col: int = 0):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


class TypingError(TheoryError):
    pass


class EquationContextError(TheoryError):
    pass


@dataclass(frozen=True)
class OpDecl:
    arity: tuple[str, ...]
    result: str


@dataclass(frozen=True)
class Signature:
    sorts: tuple[str, ...]
    ops: Mapping[str, OpDecl]

    def __post_init__(self) -> None:
        declared = set(self.sorts)
        if len(self.sorts) != len(declared):
            raise TypingError("duplicate sort declaration")
        for name, decl in self.ops.items():
            for s in decl.arity + (decl.result,):
                if s not in declared:
                    raise TypingError(f"op {name}: undeclared sort {s!r}")

    def op(self, name: str) -> OpDecl:
        try:
            return self.ops[name]
        except KeyError:
            raise TypingError(f"unknown op {name!r}") from None

    def constants(self) -> list[str]:
        return [n for n, d in self.ops.items() if not d.arity]


def signature(sorts: Sequence[str],
              ops: Mapping[str, tuple[Sequence[str], str]]) -> Signature:
    return Signature(tuple(sorts),
                     {n: OpDecl(tuple(a), r) for n, (a, r) in ops.items()})


# ---------------------------------------------------------------------------
# Terms (interned)


class Term:
    __slots__ = ("sort", "_hash", "_depth", "_tau", "_repr")
    sort: str

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return self._repr  # type: ignore[attr-defined]


class Var(Term):
    __slots__ = ("letter",)

    def __init__(self, letter: Letter):
        self.letter = letter
        self.sort = letter.sort
        self._hash = hash(("v", letter))
        self._depth = 1
        self._tau = (letter,)
        self._repr = letter.name


class App(Term):
    __slots__ = ("op", "args")

    def __init__(self, op: str, sort: str, args: tuple[Term, ...]):
        self.op = op
        self.sort = sort
        self.args = args
        self._hash = hash(("a", op, args))
        self._depth = 1 + max((a._depth for a in args), default=0)
        self._tau = tuple(x for a in args for x in a._tau)
        if args:
            self._repr = f"{op}({', '.join(a._repr for a in args)})"
        else:
            self._repr = op


_TERMS: dict[object, Term] = {}


def var(letter: Letter) -> Var:
    key = ("v", letter)
    t = _TERMS.get(key)
    if t is None:
        t = _TERMS[key] = Var(letter)
    return t  # type: ignore[return-value]


def app(sig: Signature, op: str, args: Sequence[Term] = ()) -> App:
    decl = sig.op(op)
    args = tuple(args)
    if len(args) != len(decl.arity):
        raise TypingError(
            f"op {op} expects {len(decl.arity)} arguments, got {len(args)}")
    for a, want in zip(args, decl.arity):
        if a.sort != want:
            raise TypingError(
                f"op {op}: argument {a!r} has sort {a.sort}, expected {want}")
    key = ("a", op, args)
    t = _TERMS.get(key)
    if t is None:
        t = _TERMS[key] = App(op, decl.result, args)
    return t  # type: ignore[return-value]


def const(sig: Signature, name: str) -> App:
    return app(sig, name, ())


def term_depth(t: Term) -> int:
    return t._depth


def tau(t: Term) -> Word:
    """The left-to-right word of variables of t; constants contribute nothing."""
    return t._tau


def term_vars(t: Term) -> frozenset[Letter]:
    return frozenset(t._tau)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def term_str(t: Term) -> str:
    return repr(t)


# ---------------------------------------------------------------------------
# Renaming


def apply_renaming(s: Mapping[Letter, Term], t: Term) -> Term:
    """Structural substitution; every variable of t must be mapped, sort-safe."""
    if not t._tau:
        return t
    if isinstance(t, Var):
        try:
            image = s[t.letter]
        except KeyError:
            raise TypingError(f"renaming misses variable {t.letter.name}") from None
        if image.sort != t.sort:
            raise TypingError(
                f"renaming maps {t.letter.name}:{t.sort} to a {image.sort} term")
        return image
    assert isinstance(t, App)
    if not t.args:
        return t
    new_args = tuple(apply_renaming(s, a) for a in t.args)
    if new_args == t.args:
        return t
    key = ("a", t.op, new_args)
    out = _TERMS.get(key)
    if out is None:
        out = _TERMS[key] = App(t.op, t.sort, new_args)
    return out


def is_r_context(R: ContextStructure, c: Word, t: Term) -> bool:
    return holds(R, c, tau(t))


def is_r_renaming(R: ContextStructure, s: Mapping[Letter, Term],
                  v: Word, w: Word, ws: Sequence[Word]) -> bool:
    """Check a substitution triple: w governs the concatenation of the ws and
    each ws[i] governs the variable word of s(v[i])."""
    check_context(v)
    if set(s.keys()) != set(v):
        raise TypingError("renaming domain must equal the context letters")
    if len(ws) != len(v):
        raise TypingError("need one target context per context letter")
    if not holds(R, w, tuple(x for wi in ws for x in wi)):
        return False
    for x, wi in zip(v, ws):
        if not holds(R, wi, tau(s[x])):
            return False
    return True


# ---------------------------------------------------------------------------
# Equations and theories


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: Term
    rhs: Term
    ctx: Word

    def __str__(self) -> str:
        return (f"{term_str(self.lhs)} ~ {term_str(self.rhs)} "
                f"ctx [{ctx_str(self.ctx)}]")


def ctx_str(c: Word) -> str:
    return " ".join(f"{x.name}:{x.sort}" for x in c)


def equation(name: str, lhs: Term, rhs: Term, ctx: Sequence[Letter],
             structure: Optional[ContextStructure] = None) -> Equation:
    ctx = check_context(tuple(ctx))
    if lhs.sort != rhs.sort:
        raise TypingError(
            f"equation {name or '<goal>'}: sides have sorts "
            f"{lhs.sort} and {rhs.sort}")
    eq = Equation(name, lhs, rhs, ctx)
    if structure is not None:
        validate_equation(structure, eq)
    return eq


def validate_equation(R: ContextStructure, eq: Equation) -> None:
    for side in (eq.lhs, eq.rhs):
        if not is_r_context(R, eq.ctx, side):
            raise EquationContextError(
                f"equation {eq.name or '<goal>'}: [{ctx_str(eq.ctx)}] is not a "
                f"valid context for {term_str(side)} under {R}")


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    structure: ContextStructure
    equations: tuple[Equation, ...]

    def __post_init__(self) -> None:
        seen = set()
        for eq in self.equations:
            if eq.name in seen:
                raise TheoryError(f"duplicate equation name {eq.name!r}")
            seen.add(eq.name)
            validate_equation(self.structure, eq)

    def axiom(self, name: str) -> Equation:
        for eq in self.equations:
            if eq.name == name:
                return eq
        raise TheoryError(f"no axiom named {name!r}")


# ---------------------------------------------------------------------------
# The DSL
#
#   theory <Name>
#   structure <structure-token>
#   sort <S> [<S> ...]
#   op <name> : [<S> ...] -> <S>
#   eq <name> : <term> ~ <term> ctx [ <var>:<S> ... ]
#
# '#' starts a comment.  A bare name in a term is a declared constant or a
# context variable; everything else is op(arg, ..., arg).


def _tokenize_term(text: str, line: int, col0: int) -> list[tuple[str, int]]:
    toks: list[tuple[str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "(),":
            toks.append((ch, col0 + i))
            i += 1
            continue
        j = i
        while j < len(text) and (text[j].isalnum() or text[j] in "_-.*'"):
            j += 1
        if j == i:
            raise ParseError(f"unexpected character {ch!r}", line, col0 + i)
        toks.append((text[i:j], col0 + i))
        i = j
    return toks


class _TermParser:
    def __init__(self, toks: list[tuple[str, int]], line: int,
                 sig: Signature, ctx_sorts: Mapping[str, str]):
        self.toks = toks
        self.pos = 0
        self.line = line
        self.sig = sig
        self.ctx_sorts = ctx_sorts

    def peek(self) -> Optional[tuple[str, int]]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self) -> tuple[str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of term", self.line,
                             self.toks[-1][1] if self.toks else 0)
        self.pos += 1
        return tok

    def parse(self) -> Term:
        t = self.parse_term()
        left = self.peek()
        if left is not None:
            raise ParseError(f"trailing input {left[0]!r}", self.line, left[1])
        return t

    def parse_term(self) -> Term:
        name, col = self.take()
        if name in "(),":
            raise ParseError(f"expected a name, got {name!r}", self.line, col)
        nxt = self.peek()
        if nxt is not None and nxt[0] == "(":
            self.take()
            args: list[Term] = []
            if self.peek() is not None and self.peek()[0] == ")":
                self.take()
            else:
                while True:
                    args.append(self.parse_term())
                    tok, tcol = self.take()
                    if tok == ")":
                        break
                    if tok != ",":
                        raise ParseError(
                            f"expected ',' or ')', got {tok!r}", self.line, tcol)
            try:
                return app(self.sig, name, args)
            except TypingError as exc:
                raise ParseError(str(exc), self.line, col) from exc
        if name in self.sig.ops:
            decl = self.sig.op(name)
            if decl.arity:
                raise ParseError(
                    f"op {name} expects {len(decl.arity)} arguments, got 0",
                    self.line, col)
            return const(self.sig, name)
        if name in self.ctx_sorts:
            return var(Letter(self.ctx_sorts[name], name))
        raise ParseError(
            f"{name!r} is neither a declared constant nor a context variable",
            self.line, col)


def _parse_ctx_block(text: str, line: int, sig: Signature) -> Word:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError("context must be bracketed: ctx [ x:S ... ]", line)
    entries = text[1:-1].split()
    letters: list[Letter] = []
    for entry in entries:
        name, sep, sort = entry.partition(":")
        if not sep or not name or not sort:
            raise ParseError(f"bad context entry {entry!r}", line)
        if sort not in sig.sorts:
            raise ParseError(f"undeclared sort {sort!r} in context", line)
        letters.append(Letter(sort, name))
    try:
        return check_context(tuple(letters))
    except ContextError as exc:
        raise ParseError(str(exc), line) from exc


def parse_equation_text(sig: Signature, text: str, *, name: str = "",
                        line: int = 1,
                        structure: Optional[ContextStructure] = None) -> Equation:
    """Parse '<term> ~ <term> ctx [ x:S ... ]' against a signature."""
    body, sep, ctx_part = text.partition(" ctx ")
    if not sep:
        raise ParseError("equation needs a 'ctx [ ... ]' part", line)
    lhs_text, sep, rhs_text = body.partition("~")
    if not sep:
        raise ParseError("equation needs '~' between its sides", line)
    ctx = _parse_ctx_block(ctx_part, line, sig)
    ctx_sorts = {x.name: x.sort for x in ctx}
    lhs = _TermParser(_tokenize_term(lhs_text, line, 0), line, sig, ctx_sorts).parse()
    rhs = _TermParser(_tokenize_term(rhs_text, line, 0), line, sig, ctx_sorts).parse()
    try:
        return equation(name, lhs, rhs, ctx, structure)
    except (TypingError, EquationContextError) as exc:
        raise type(exc)(f"line {line}: {exc}") from exc


def parse_theory(text: str) -> Theory:
    name = ""
    structure: Optional[ContextStructure] = None
    sorts: list[str] = []
    ops: dict[str, OpDecl] = {}
    raw_eqs: list[tuple[str, str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "theory":
            if not rest:
                raise ParseError("theory needs a name", lineno)
            name = rest
        elif head == "structure":
            try:
                structure = parse_structure(rest)
            except ContextError as exc:
                raise ParseError(str(exc), lineno) from exc
        elif head == "sort":
            if not rest:
                raise ParseError("sort needs at least one name", lineno)
            for s in rest.split():
                if s in sorts:
                    raise ParseError(f"duplicate sort {s!r}", lineno)
                sorts.append(s)
        elif head == "op":
            decl_name, sep, typing = rest.partition(":")
            decl_name = decl_name.strip()
            if not sep or not decl_name:
                raise ParseError("op syntax: op <name> : [<S> ...] -> <S>", lineno)
            if decl_name in ops:
                raise ParseError(f"duplicate op {decl_name!r}", lineno)
            arity_text, sep, result = typing.partition("->")
            if not sep:
                raise ParseError("op typing needs '->'", lineno)
            arity = tuple(arity_text.split())
            result = result.strip()
            for s in arity + (result,):
                if s not in sorts:
                    raise ParseError(f"undeclared sort {s!r}", lineno)
            ops[decl_name] = OpDecl(arity, result)
        elif head == "eq":
            eq_name, sep, body = rest.partition(":")
            eq_name = eq_name.strip()
            if not sep or not eq_name:
                raise ParseError("eq syntax: eq <name> : <t> ~ <t> ctx [...]",
                                 lineno)
            raw_eqs.append((eq_name, body.strip(), lineno))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    if structure is None:
        raise ParseError("theory is missing a 'structure' line", 1)
    sig = Signature(tuple(sorts), ops)
    eqs = tuple(
        parse_equation_text(sig, body, name=eq_name, line=lineno,
                            structure=structure)
        for eq_name, body, lineno in raw_eqs)
    return Theory(name, sig, structure, eqs)


def format_theory(t: Theory) -> str:
    out = [f"theory {t.name}", f"structure {t.structure.kind}"]
    if t.signature.sorts:
        out.append("sort " + " ".join(t.signature.sorts))
    for op_name, decl in t.signature.ops.items():
        arity = (" ".join(decl.arity) + " ") if decl.arity else ""
        out.append(f"op {op_name} : {arity}-> {decl.result}")
    for eq in t.equations:
        out.append(f"eq {eq.name} : {eq}")
    return "\n".join(out) + "\n"
