"""The bounded saturation engine, proof replay, and the refutation invariant."""

import pytest

from ualg.context import (
    BIJECTIVE, CARTESIAN, INJECTIVE, STRICT_INCREASING, SURJECTIVE, TRIVIAL,
    Letter,
)
from ualg.deduction import (
    Axiom, Bounds, DeductionError, ProofError, Refl, Subst, Sym, Trans,
    _canonical_triple, check_proof, proof_lines, prove, refute_by_invariant,
    saturate,
)
from ualg.selftest import (
    MONOID_TEXT, eckmann_hilton_theory, monoid_theory, projection_theory,
)
from ualg.syntax import (
    Theory, app, equation, parse_equation_text, parse_theory, var,
)

X, Y = Letter("M", "x"), Letter("M", "y")


@pytest.fixture(scope="module")
def monoid():
    return monoid_theory()


def canon(eq):
    return _canonical_triple(eq.ctx, eq.lhs, eq.rhs)


def test_bounds_validation():
    with pytest.raises(DeductionError):
        Bounds(0, 1, 1)


def test_empty_theory_derives_only_reflexivity(monoid):
    empty = Theory("Empty", monoid.signature, CARTESIAN, ())
    for structure in (CARTESIAN, BIJECTIVE, TRIVIAL):
        sat = saturate(Theory("E", monoid.signature, structure, ()),
                       Bounds(2, 2, 3))
        assert sat.equations == []
        assert not sat.truncated


def test_axiom_goal_has_axiom_leaf(monoid):
    goal = monoid.axiom("assoc")
    res = prove(monoid, goal, Bounds(3, 3, 2))
    assert res.proved
    concluded = check_proof(monoid, res.proof)
    assert canon(concluded) == canon(goal)
    text = "\n".join(proof_lines(res.proof))
    assert "axiom assoc" in text


def test_padded_context_collapse():
    cart = projection_theory(CARTESIAN)
    goal = parse_equation_text(cart.signature, "f(x,y) ~ x ctx [ x:A y:A ]",
                               structure=CARTESIAN)
    sat = saturate(cart, Bounds(2, 3, 3))
    assert any(canon(eq) == canon(goal) for eq in sat.equations)
    res = prove(cart, goal, Bounds(2, 3, 3))
    assert res.proved
    assert check_proof(cart, res.proof).lhs is goal.lhs


def test_injective_never_derives_collapse():
    goal_text = "f(x,y) ~ x ctx [ x:A y:A ]"
    for structure in (INJECTIVE, STRICT_INCREASING):
        theory = projection_theory(structure)
        goal = parse_equation_text(theory.signature, goal_text,
                                   structure=CARTESIAN)
        for depth in (2, 3, 4):
            sat = saturate(theory, Bounds(depth, 3, 4))
            assert not any(canon(eq) == canon(goal) for eq in sat.equations)
        assert not prove(theory, goal, Bounds(3, 3, 4)).proved
        assert refute_by_invariant(theory, goal)


def test_refute_by_invariant_cases():
    inj = projection_theory(INJECTIVE)
    sig = inj.signature
    x, y, z = (Letter("A", n) for n in "xyz")
    collapse = equation("", app(sig, "f", [var(x), var(y)]), var(x), (x, y))
    assert refute_by_invariant(inj, collapse)
    padded = equation("", app(sig, "f", [var(x), var(y)]), var(x), (x, y, z))
    assert not refute_by_invariant(inj, padded)
    with pytest.raises(DeductionError):
        refute_by_invariant(projection_theory(CARTESIAN), collapse)
    bad_axiom = equation("flat", app(sig, "f", [var(x), var(y)]), var(x),
                         (x, y))
    broken = Theory("Broken", sig, INJECTIVE, (bad_axiom,))
    with pytest.raises(DeductionError):
        refute_by_invariant(broken, collapse)


def test_prove_and_refute_never_both():
    theory = projection_theory(INJECTIVE)
    sig = theory.signature
    x, y, z = (Letter("A", n) for n in "xyz")
    goals = [
        equation("", app(sig, "f", [var(x), var(y)]), var(x), (x, y)),
        equation("", app(sig, "f", [var(x), var(y)]), var(x), (x, y, z)),
        equation("", var(x), var(x), (x, y)),
    ]
    for goal in goals:
        proved = prove(theory, goal, Bounds(3, 3, 4)).proved
        refuted = refute_by_invariant(theory, goal)
        assert not (proved and refuted)


def test_saturation_monotone_in_bounds(monoid):
    small = saturate(monoid, Bounds(2, 3, 3))
    bigger_depth = saturate(monoid, Bounds(3, 3, 3))
    more_rounds = saturate(monoid, Bounds(2, 3, 5))
    small_set = {canon(eq) for eq in small.equations}
    assert small_set <= {canon(eq) for eq in bigger_depth.equations}
    assert small_set <= {canon(eq) for eq in more_rounds.equations}


def test_every_output_replays(monoid):
    sat = saturate(monoid, Bounds(2, 3, 3))
    assert sat.equations
    for eq in sat.equations:
        proof = sat.proof_of(eq)
        concluded = check_proof(monoid, proof)
        assert canon(concluded) == canon(eq)


def test_canonical_identification(monoid):
    a = parse_equation_text(monoid.signature,
                            "mul(e,x) ~ x ctx [ x:M ]")
    b = parse_equation_text(monoid.signature,
                            "mul(e,q) ~ q ctx [ q:M ]")
    assert canon(a) == canon(b)
    # an axiom leaf may state any letter-renamed form of the axiom
    renamed = check_proof(monoid, Axiom("lunit", b))
    assert renamed == b


def test_check_proof_rejects_bad_nodes(monoid):
    sig = monoid.signature
    ax = monoid.axiom("lunit")
    assert check_proof(monoid, Axiom("lunit", ax)) == ax
    flipped = check_proof(monoid, Sym(Axiom("lunit", ax)))
    assert flipped.lhs is ax.rhs and flipped.rhs is ax.lhs
    with pytest.raises(ProofError):
        check_proof(monoid, Axiom("lunit", monoid.axiom("runit")))
    with pytest.raises(ProofError):
        check_proof(monoid, Refl(app(sig, "mul", [var(X), var(X)]), (Y,)))
    # the per-letter context fails to govern the substituted word
    bad_subst = Subst(
        s1=((X, app(sig, "mul", [var(X), var(X)])),),
        s2=((X, app(sig, "mul", [var(X), var(X)])),),
        w=(X,), ws=((Y,),),
        premise=Axiom("lunit", ax),
        sides=(Refl(app(sig, "mul", [var(X), var(X)]), (Y,)),))
    with pytest.raises(ProofError):
        check_proof(monoid, bad_subst)
    with pytest.raises(ProofError):
        check_proof(monoid, Trans(Axiom("lunit", ax), Axiom("runit",
                                                            monoid.axiom("runit"))))


def test_structure_ordering_on_projection_theory():
    goal_free = None
    derived = {}
    for structure in (STRICT_INCREASING, INJECTIVE, CARTESIAN):
        theory = projection_theory(structure)
        sat = saturate(theory, Bounds(2, 3, 3))
        derived[structure.kind] = {canon(eq) for eq in sat.equations}
    assert derived["strict-increasing"] <= derived["injective"]
    assert derived["injective"] <= derived["cartesian"]


def test_structure_ordering_on_monoid():
    base = parse_theory(MONOID_TEXT)
    derived = {}
    for structure in (TRIVIAL, BIJECTIVE, SURJECTIVE, CARTESIAN):
        theory = Theory(base.name, base.signature, structure, base.equations)
        sat = saturate(theory, Bounds(2, 3, 3))
        derived[structure.kind] = {canon(eq) for eq in sat.equations}
    assert derived["trivial"] <= derived["bijective"]
    assert derived["bijective"] <= derived["surjective"]
    assert derived["surjective"] <= derived["cartesian"]


def test_truncation_is_flagged(monoid):
    goal = parse_equation_text(monoid.signature,
                               "mul(x,y) ~ mul(y,x) ctx [ x:M y:M ]",
                               structure=monoid.structure)
    res = prove(monoid, goal, Bounds(3, 3, 4))
    assert not res.proved
    assert res.truncated and res.truncated_by


def test_eh_units_coincide():
    EH = eckmann_hilton_theory()
    goal = parse_equation_text(EH.signature, "e ~ u ctx [ ]",
                               structure=EH.structure)
    res = prove(EH, goal, Bounds(4, 4, 6))
    assert res.proved
    assert check_proof(EH, res.proof).ctx == ()
