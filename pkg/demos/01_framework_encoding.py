"""Encode a small annotated debate as an argumentation framework.

Walks through Phase I on a hand-written debate: inference/rephrase
relations group ADUs into abstract arguments, conflicts lift to
attacks, and the naive/preferred extensions fall out of the exact
enumerators (cross-checked against the brute-force oracle).

Run:  python demos/01_framework_encoding.py
"""

from arbiter import (
    ADU,
    Debate,
    Phase,
    Relation,
    RelationKind,
    Stance,
    af_summary,
    brute_force_extensions,
    encode_af,
    export_apx,
    naive_extensions,
    preferred_extensions,
)
from arbiter.semantics import Semantics

# ----------------------------------------------------------------------
# A miniature debate: the favour team chains two ADUs into one line of
# reasoning, the against team fields two independent counterpoints.
# ----------------------------------------------------------------------

D = "demo"


def adu(adu_id, text, stance, phase=Phase.ARGUMENTATION):
    return ADU(id=adu_id, text=text, stance=stance, phase=phase, debate_id=D)


debate = Debate(
    id=D,
    adus=(
        adu("f1", "School uniforms reduce visible inequality.", Stance.FAVOUR,
            Phase.INTRODUCTION),
        adu("f2", "Dress codes remove a daily source of social pressure.",
            Stance.FAVOUR),
        adu("a1", "Uniforms suppress personal identity.", Stance.AGAINST),
        adu("a2", "The cost burden lands on the same families anyway.",
            Stance.AGAINST),
    ),
    relations=(
        Relation("f2", "f1", RelationKind.INFERENCE),   # f2 supports f1
        Relation("a1", "f2", RelationKind.CONFLICT),
        Relation("a2", "f1", RelationKind.CONFLICT),
        Relation("f2", "a1", RelationKind.CONFLICT),    # the rebuttal
    ),
    winner=Stance.FAVOUR,
)

print("ADUs:")
for item in debate.adus:
    print(f"  [{item.stance.value}] {item.id}: {item.text}")

# ----------------------------------------------------------------------
# Phase I encoding: {f1, f2} collapse into one abstract argument, the
# two against ADUs stay singletons, and three conflicts become attacks.
# ----------------------------------------------------------------------

af = encode_af(debate)
print("\nframework summary:")
print(af_summary(af), end="")
print("arguments:")
for argument in af.arguments:
    members = ", ".join(sorted(argument.adu_ids))
    print(f"  #{argument.id} [{argument.stance.value}] {{{members}}}")
print("attacks:", sorted(af.attacks))

print("\nAPX export (feed this to any standard AF solver):")
print(export_apx(af), end="")

# ----------------------------------------------------------------------
# Extensions under both semantics.  Preferred is stricter: an argument
# must be defended against every attacker, not merely non-conflicting.
# ----------------------------------------------------------------------

for name, extensions in [
    ("naive", naive_extensions(af)),
    ("preferred", preferred_extensions(af)),
]:
    shown = [sorted(e.argument_ids) for e in extensions]
    print(f"\n{name} extensions: {shown}")

for semantics in (Semantics.NAIVE, Semantics.PREFERRED):
    fast = (naive_extensions if semantics is Semantics.NAIVE
            else preferred_extensions)(af)
    oracle = brute_force_extensions(af, semantics)
    agree = {e.argument_ids for e in fast} == {e.argument_ids for e in oracle}
    print(f"oracle agreement ({semantics.value}): {agree}")
