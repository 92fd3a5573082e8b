import random
from itertools import combinations

import pytest

from arbiter.semantics import (
    EnumerationCapError,
    Semantics,
    brute_force_extensions,
    is_admissible,
    is_conflict_free,
    naive_extensions,
    preferred_extensions,
)
from conftest import make_af, random_af

NAIVE, PREFERRED = Semantics.NAIVE, Semantics.PREFERRED


def ext_sets(extensions):
    return {e.argument_ids for e in extensions}


# ---------------------------------------------------------------- membership


def test_conflict_free_empty_set():
    assert is_conflict_free(make_af(3, {(0, 1)}), set())


def test_conflict_free_detects_internal_attack():
    assert not is_conflict_free(make_af(2, {(0, 1)}), {0, 1})


def test_conflict_free_detects_self_attack():
    assert not is_conflict_free(make_af(1, {(0, 0)}), {0})


def test_conflict_free_unknown_id():
    with pytest.raises(ValueError, match="unknown argument"):
        is_conflict_free(make_af(2), {5})


def test_admissible_empty_set():
    assert is_admissible(make_af(3, {(0, 1), (1, 2)}), set())


def test_admissible_undefended_member():
    af = make_af(3, {(0, 1), (1, 2)})
    assert not is_admissible(af, {2})


def test_admissible_defended_member():
    af = make_af(3, {(0, 1), (1, 2)})
    assert is_admissible(af, {0, 2})


def test_admissible_unknown_id():
    with pytest.raises(ValueError, match="unknown argument"):
        is_admissible(make_af(2), {9})


def test_self_defence_counts():
    af = make_af(2, {(0, 1), (1, 0)})
    assert is_admissible(af, {0})
    assert is_admissible(af, {1})


# ---------------------------------------------------------------- fixtures


def test_naive_no_attacks_is_everything():
    assert ext_sets(naive_extensions(make_af(3))) == {frozenset({0, 1, 2})}


def test_naive_chain():
    af = make_af(3, {(0, 1), (1, 2)})
    assert ext_sets(naive_extensions(af)) == {
        frozenset({0, 2}),
        frozenset({1}),
    }


def test_naive_self_attack_only():
    assert ext_sets(naive_extensions(make_af(1, {(0, 0)}))) == {frozenset()}


def test_naive_empty_af():
    assert ext_sets(naive_extensions(make_af(0))) == {frozenset()}


def test_preferred_mutual_attack():
    af = make_af(2, {(0, 1), (1, 0)})
    assert ext_sets(preferred_extensions(af)) == {
        frozenset({0}),
        frozenset({1}),
    }


def test_preferred_chain():
    af = make_af(3, {(0, 1), (1, 2)})
    assert ext_sets(preferred_extensions(af)) == {frozenset({0, 2})}


def test_preferred_no_attacks():
    assert ext_sets(preferred_extensions(make_af(4))) == {frozenset(range(4))}


def test_naive_mutual_attack_both_semantics():
    af = make_af(2, {(0, 1), (1, 0)})
    expected = {frozenset({0}), frozenset({1})}
    assert ext_sets(naive_extensions(af)) == expected
    assert ext_sets(preferred_extensions(af)) == expected


def test_brute_force_fixtures():
    af = make_af(2, {(0, 1), (1, 0)})
    assert ext_sets(brute_force_extensions(af, NAIVE)) == {
        frozenset({0}),
        frozenset({1}),
    }
    empty = make_af(0)
    assert ext_sets(brute_force_extensions(empty, NAIVE)) == {frozenset()}
    assert ext_sets(brute_force_extensions(empty, PREFERRED)) == {frozenset()}


def test_brute_force_cap():
    with pytest.raises(EnumerationCapError, match="brute force"):
        brute_force_extensions(make_af(21), NAIVE)


def test_canonical_ordering():
    af = make_af(3, {(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)})
    ordered = [sorted(e.argument_ids) for e in naive_extensions(af)]
    assert ordered == sorted(ordered)
    assert ordered == [[0], [1], [2]]


def test_extension_metadata():
    af = make_af(2, {(0, 1)}, debate_id="meta")
    extensions = naive_extensions(af)
    assert ext_sets(extensions) == {frozenset({0}), frozenset({1})}
    for ext in extensions:
        assert ext.debate_id == "meta"
        assert ext.semantics is NAIVE


# ---------------------------------------------------------------- properties


@pytest.mark.parametrize("density", [0.1, 0.3, 0.5])
def test_enumerators_match_brute_force(density):
    rng = random.Random(int(density * 100))
    for _ in range(60):
        af = random_af(rng, rng.randint(0, 12), density)
        assert ext_sets(naive_extensions(af)) == ext_sets(
            brute_force_extensions(af, NAIVE)
        )
        assert ext_sets(preferred_extensions(af)) == ext_sets(
            brute_force_extensions(af, PREFERRED)
        )


def test_preferred_extensions_are_conflict_free_and_maximal():
    rng = random.Random(99)
    for _ in range(40):
        af = random_af(rng, rng.randint(1, 10), 0.3)
        preferred = ext_sets(preferred_extensions(af))
        for ext in preferred:
            assert is_conflict_free(af, ext)
            assert is_admissible(af, ext)
        for a, b in combinations(preferred, 2):
            assert not a < b and not b < a


def test_naive_maximality_and_subset_monotonicity():
    rng = random.Random(5)
    for _ in range(40):
        af = random_af(rng, rng.randint(1, 10), 0.3)
        naive = ext_sets(naive_extensions(af))
        for a, b in combinations(naive, 2):
            assert not a < b and not b < a
        for ext in naive:
            assert is_conflict_free(af, ext)
            members = sorted(ext)
            for size in range(len(members)):
                subset = set(members[:size])
                assert is_conflict_free(af, subset)


def test_every_preferred_inside_some_naive():
    rng = random.Random(21)
    for _ in range(40):
        af = random_af(rng, rng.randint(0, 10), 0.3)
        naive = ext_sets(naive_extensions(af))
        for pref in ext_sets(preferred_extensions(af)):
            assert any(pref <= nv for nv in naive)


def test_unattacked_singleton_is_admissible_and_everywhere_preferred():
    rng = random.Random(42)
    for _ in range(40):
        af = random_af(rng, rng.randint(1, 10), 0.3)
        attacked = {t for _, t in af.attacks}
        unattacked = af.argument_ids - attacked
        preferred = ext_sets(preferred_extensions(af))
        for arg in unattacked:
            assert is_admissible(af, {arg})
            assert all(arg in ext for ext in preferred)


# ---------------------------------------------------------------- caps


def test_extension_count_cap():
    # 6 disjoint mutual-attack pairs -> 2^6 = 64 naive extensions
    attacks = set()
    for i in range(0, 12, 2):
        attacks |= {(i, i + 1), (i + 1, i)}
    af = make_af(12, attacks)
    assert len(naive_extensions(af)) == 64
    with pytest.raises(EnumerationCapError, match="extensions"):
        naive_extensions(af, max_extensions=10)


def test_time_limit_cap():
    attacks = set()
    for i in range(0, 24, 2):
        attacks |= {(i, i + 1), (i + 1, i)}
    af = make_af(24, attacks)
    with pytest.raises(EnumerationCapError, match="time limit"):
        naive_extensions(af, time_limit=0.0)


def test_preferred_propagates_cap():
    attacks = set()
    for i in range(0, 12, 2):
        attacks |= {(i, i + 1), (i + 1, i)}
    af = make_af(12, attacks)
    with pytest.raises(EnumerationCapError):
        preferred_extensions(af, max_extensions=10)


def test_enumerators_match_oracle_on_debate_derived_afs():
    # structured sparse frameworks, as produced by real annotation
    # topologies, rather than uniform-random attack matrices
    from arbiter.framework import StanceTieError, encode_af
    from conftest import random_debate

    rng = random.Random(8)
    checked = 0
    while checked < 40:
        debate = random_debate(rng)
        try:
            af = encode_af(debate)
        except StanceTieError:
            continue
        if len(af.arguments) > 14:
            continue
        checked += 1
        assert ext_sets(naive_extensions(af)) == ext_sets(
            brute_force_extensions(af, NAIVE)
        )
        assert ext_sets(preferred_extensions(af)) == ext_sets(
            brute_force_extensions(af, PREFERRED)
        )


def test_enumeration_at_corpus_scale_stays_fast():
    import time

    from arbiter.corpus import RelationKind, Stance
    from arbiter.framework import encode_af
    from conftest import make_debate

    rng = random.Random(0)
    n = 120
    specs = [
        (f"u{i:03d}", Stance.FAVOUR if i % 2 == 0 else Stance.AGAINST)
        for i in range(n)
    ]
    relations = []
    for i in range(1, n):
        if rng.random() < 0.75:
            j = rng.randrange(max(0, i - 6), i)
            if (i % 2) == (j % 2):
                relations.append(
                    (specs[i][0], specs[j][0], RelationKind.INFERENCE)
                )
    conflicts = 0
    while conflicts < 12:
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j and (i % 2) != (j % 2):
            relations.append((specs[i][0], specs[j][0], RelationKind.CONFLICT))
            conflicts += 1
    debate = make_debate(specs, relations, debate_id="big", winner=Stance.FAVOUR)
    af = encode_af(debate)
    assert len(af.arguments) > 50

    started = time.monotonic()
    naive = naive_extensions(af)
    preferred = preferred_extensions(af)
    assert time.monotonic() - started < 10.0
    assert naive
    for ext in preferred:
        assert is_admissible(af, ext.argument_ids)
