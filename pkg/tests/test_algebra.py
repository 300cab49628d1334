import random

import pytest
from hypothesis import given, settings, strategies as st

from ntrans.algebra import (DegreeOverflowError, dims_table, graded_basis, loewy_length,
                            minimal_resolution)
from ntrans.corpus import random_quadratic
from ntrans.koszul import relation_space
from ntrans.quiver import Element, parse_quiver
from oracles import all_paths, brute_dim
from conftest import fixed_corpus


def test_a4rad2_dims(a4rad2):
    gb = graded_basis(a4rad2, 4)
    for i in a4rad2.vertices:
        for j in a4rad2.vertices:
            assert gb.dim(0, i, j) == (1 if i == j else 0)
    nonzero = {(i, j) for i, j in gb.components(1)}
    assert nonzero == {("1", "2"), ("2", "3"), ("3", "4")}
    assert all(gb.dim(1, i, j) == 1 for i, j in nonzero)
    assert all(not gb.components(t) for t in range(2, 5))


def test_free_a2_dims(a2_free):
    gb = graded_basis(a2_free, 3)
    assert dims_table(gb)["totals"] == [2, 1]
    assert gb.dim(1, "1", "2") == 1


def test_tilde_dims(tilde):
    gb = graded_basis(tilde, 4)
    # the stated 8 for Λ₂ overcounts; the quotient has one socle element per vertex
    assert [gb.dim_degree(t) for t in range(5)] == [4, 6, 4, 0, 0]
    for i in tilde.vertices:
        assert sum(gb.dim(2, i, j) for j in tilde.vertices) == 1


def test_loewy_lengths(a4rad2, tilde):
    assert loewy_length(graded_basis(a4rad2, 4)) == 2
    assert loewy_length(graded_basis(tilde, 4)) == 3
    assert loewy_length(graded_basis(parse_quiver("vertex 1\n"), 3)) == 1
    free_loop = parse_quiver("vertex 1\narrow x 1 1\n")
    assert loewy_length(graded_basis(free_loop, 3)) == ">3"


def test_multiply_examples(a4rad2, tilde):
    gb = graded_basis(a4rad2, 4)
    a1, a2 = (Element.of_path(gb.path(x)) for x in ("a1", "a2"))
    assert gb.multiply(a2, a1).is_zero()
    e2 = Element.of_path(gb.path("e2"))
    assert gb.multiply(e2, a1) == a1
    with pytest.raises(ValueError):
        gb.multiply(a1, a1)
    tg = graded_basis(tilde, 4)
    prod = tg.multiply(Element.of_path(tg.path("a1")), Element.of_path(tg.path("b2")))
    assert prod == Element.of_path(tg.path("b3.a2"))


def test_multiply_overflow(tilde):
    gb = graded_basis(tilde, 2)
    x = Element.of_path(gb.path("b2.a1"))
    with pytest.raises(DegreeOverflowError):
        gb.multiply(Element.of_path(gb.path("a1")), x)


def test_normal_form_of_basis_is_itself(tilde):
    gb = graded_basis(tilde, 4)
    for t in range(3):
        for i, j in gb.components(t):
            for b in gb.basis(t, i, j):
                assert gb.normal_form(Element.of_path(b)) == Element.of_path(b)


@pytest.mark.parametrize("name", ["a4rad2", "tilde_a4rad2", "loop_x2", "a2_free", "smash_v2", "q2"])
def test_dims_match_brute_force(name):
    q = fixed_corpus()[name]
    gb = graded_basis(q, 4)
    for t in range(5):
        for i in q.vertices:
            for j in q.vertices:
                assert gb.dim(t, i, j) == brute_dim(q, t, i, j), (t, i, j)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_dims_match_brute_force_random(seed):
    q = random_quadratic(random.Random(seed))
    gb = graded_basis(q, 3)
    for t in range(4):
        for i in q.vertices:
            for j in q.vertices:
                assert gb.dim(t, i, j) == brute_dim(q, t, i, j)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_multiply_associative_and_graded(seed, data):
    q = random_quadratic(random.Random(seed))
    gb = graded_basis(q, 4)
    paths = [p for t in range(2) for p in all_paths(q, t)]
    x = data.draw(st.sampled_from(paths))
    ys = [p for p in paths if p.target == x.source]
    y = data.draw(st.sampled_from(ys))
    zs = [p for p in paths if p.target == y.source]
    z = data.draw(st.sampled_from(zs))
    X, Y, Z = (gb.normal_form(Element.of_path(p)) for p in (x, y, z))
    left = gb.multiply(gb.multiply(X, Y), Z)
    right = gb.multiply(X, gb.multiply(Y, Z))
    assert left == right
    xy = gb.multiply(X, Y)
    if not xy.is_zero():
        assert xy.degree == x.length + y.length


def test_resolution_a4rad2(a4rad2):
    gb = graded_basis(a4rad2, 6)
    res = minimal_resolution(gb, "1", 4)
    assert res.as_lists() == [[(("1", 0), 1)], [(("2", 1), 1)], [(("3", 2), 1)], [(("4", 3), 1)], []]
    assert minimal_resolution(gb, "4", 2).as_lists() == [[(("4", 0), 1)], [], []]


def test_resolution_tilde(tilde):
    gb = graded_basis(tilde, 6)
    res = minimal_resolution(gb, "2", 3, 6)
    assert res.as_lists()[:3] == [[(("2", 0), 1)], [(("1", 1), 1), (("3", 1), 1)],
                                  [(("2", 2), 1), (("4", 2), 1)]]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_low_betti_numbers_quadratic(seed):
    q = random_quadratic(random.Random(seed))
    gb = graded_basis(q, 4)
    R = relation_space(q)
    for i in q.vertices:
        res = minimal_resolution(gb, i, 2, 3)
        step1 = res.counts(1)
        for j in q.vertices:
            arrows = sum(1 for a in q.arrows_from(i) if a.target == j)
            assert step1.get((j, 1), 0) == arrows
            assert res.counts(2).get((j, 2), 0) == len(R.get((i, j), []))
        assert all(d == 1 for (_, d) in step1)


def test_free_quiver_resolution_length():
    q = parse_quiver("vertex 1 2 3\narrow a 1 2\narrow b 2 3\narrow c 1 3\n")
    gb = graded_basis(q, 4)
    for i in q.vertices:
        res = minimal_resolution(gb, i, 4)
        assert all(not res.steps[s] for s in range(3, 5))
