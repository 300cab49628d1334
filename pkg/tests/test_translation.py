import random

import pytest
from hypothesis import given, settings, strategies as st

from ntrans.algebra import graded_basis
from ntrans.corpus import random_quadratic
from ntrans.quiver import Element, opposite
from ntrans.translation import (TranslationError, arrow_translation, check_admissible,
                                check_n_translation, classify_path, infer_translation,
                                self_injective_test)
from conftest import fixed_corpus


def _ts(q, n, D=6):
    gb = graded_basis(q, D)
    return gb, infer_translation(gb, n)


def test_a4rad2_translation(a4rad2):
    gb, ts = _ts(a4rad2, 0)
    assert ts.tau == {"2": "1", "3": "2", "4": "3"}
    assert ts.P == ("1",) and ts.I == ("4",)
    rep = check_n_translation(gb, ts)
    assert rep["passes"] and not rep["stable"] and not rep["null"]
    assert rep["self_injective"] is False


def test_a4rad2_with_n_one_is_null(a4rad2):
    gb, ts = _ts(a4rad2, 1)
    assert ts.is_null
    assert ts.P == ts.I == ("1", "2", "3", "4")
    assert check_n_translation(gb, ts)["null"]


def test_a4rad2_with_too_small_n_rejected(a4rad2):
    q = a4rad2.with_(relations=a4rad2.relations[:1])
    gb = graded_basis(q, 5)
    with pytest.raises(TranslationError):
        infer_translation(gb, 0)


def test_tilde_is_stable_identity(tilde):
    gb, ts = _ts(tilde, 1)
    assert ts.tau == {v: v for v in tilde.vertices}
    rep = check_n_translation(gb, ts)
    assert rep["passes"] and rep["stable"]
    assert rep["self_injective"] is True


def test_free_a2(a2_free):
    gb, ts = _ts(a2_free, 0)
    assert ts.tau == {"2": "1"}
    assert ts.P == ("1",) and ts.I == ("2",)
    assert check_n_translation(gb, ts)["passes"]


def test_loop_stable(loop):
    gb, ts = _ts(loop, 0)
    assert ts.tau == {"1": "1"} and ts.is_stable


def test_arrow_translation_a4rad2(a4rad2):
    gb, ts = _ts(a4rad2, 0)
    assert arrow_translation(gb, ts, "a3") == Element.of_path(gb.path("a2"))
    assert arrow_translation(gb, ts, "a2") == Element.of_path(gb.path("a1"))
    with pytest.raises(TranslationError):
        arrow_translation(gb, ts, "a1")


def test_arrow_translation_tilde_is_identity(tilde):
    gb, ts = _ts(tilde, 1)
    for a in tilde.arrows:
        assert arrow_translation(gb, ts, a.name) == Element.of_path(gb.path(a.name))


def test_classify_path_a4rad2(a4rad2):
    gb, ts = _ts(a4rad2, 0)
    middle = classify_path(gb, ts, gb.path("a2"))
    assert middle["right_shiftable"] and middle["left_shiftable"]
    first = classify_path(gb, ts, gb.path("a1"))
    assert not first["right_shiftable"]
    assert first["left_shiftable"]
    assert classify_path(gb, ts, gb.path("a1"), endpoints=False)["right_shiftable"]
    with pytest.raises(TranslationError):
        classify_path(gb, ts, gb.path("a2.a1"))


def test_admissible_examples(a4rad2, tilde):
    for q, n in ((a4rad2, 0), (tilde, 1)):
        gb, ts = _ts(q, n)
        assert check_admissible(gb, ts)["pass"]


def test_free_a2_admissibility_depends_on_endpoint_reading(a2_free):
    # a1 runs from the projective vertex 1 to the injective vertex 2, so it is neither
    # left- nor right-shiftable once a path is taken to pass through its ends
    gb, ts = _ts(a2_free, 0)
    inclusive = check_admissible(gb, ts)
    assert not inclusive["pass"]
    assert inclusive["ii"] == {"pass": False, "witness": "a1"}
    assert check_admissible(gb, ts, endpoints=False)["pass"]


@pytest.mark.parametrize("name", ["a4rad2", "tilde_a4rad2", "loop_x2", "smash_v1", "smash_v2",
                                  "z_window_1_4", "q2"])
def test_corpus_admissible(name):
    q = fixed_corpus()[name]
    n = 0 if name in ("a4rad2", "loop_x2") else 1
    gb, ts = _ts(q, n, 8)
    assert check_n_translation(gb, ts)["passes"]
    assert check_admissible(gb, ts)["pass"]


def _random_translation(seed):
    q = random_quadratic(random.Random(seed))
    gb = graded_basis(q, 5)
    for n in range(0, 3):
        try:
            return q, gb, infer_translation(gb, n)
        except TranslationError:
            continue
    return q, gb, None


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_projective_and_injective_sets_empty_together(seed):
    q, gb, ts = _random_translation(seed)
    if ts is None:
        return
    assert len(ts.P) == len(ts.I)
    assert (not ts.P) == (not ts.I)
    rep = check_n_translation(gb, ts)
    if rep["passes"] and not rep["null"]:
        assert rep["stable"] == bool(rep["self_injective"])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_opposite_swaps_projective_and_injective(seed):
    q, gb, ts = _random_translation(seed)
    if ts is None:
        return
    og = graded_basis(opposite(q), 5)
    ots = infer_translation(og, ts.n)
    assert ots.tau == ts.tau_inv
    assert set(ots.P) == set(ts.I) and set(ots.I) == set(ts.P)


def test_opposite_a4rad2(a4rad2):
    og = graded_basis(opposite(a4rad2), 4)
    ots = infer_translation(og, 0)
    assert ots.tau == {"1": "2", "2": "3", "3": "4"}
    assert ots.P == ("4",) and ots.I == ("1",)


def test_self_injective_unknown_when_infinite():
    from ntrans.quiver import parse_quiver
    gb = graded_basis(parse_quiver("vertex 1\narrow x 1 1\n"), 3)
    assert self_injective_test(gb) is None
