import math
import random

import numpy as np
import pytest

from infhecke.groups import (
    GroupParams,
    GroupTooLarge,
    MonomialElement,
    construct,
    evaluate_word,
    reflections,
    sign_character,
    subgroup,
    word_factor,
)

SMALL = [(1, 1, 3), (1, 3, 3), (2, 2, 2), (1, 4, 2), (2, 1, 3), (1, 2, 4), (2, 3, 2), (3, 1, 2)]


def numeric(g: MonomialElement) -> np.ndarray:
    r = len(g.perm)
    M = np.zeros((r, r), dtype=complex)
    for i, (p, a) in enumerate(zip(g.perm, g.exps)):
        M[p, i] = np.exp(2j * np.pi * a / g.m)
    return M


@pytest.mark.parametrize("d,e,r,order", [(1, 1, 3, 6), (1, 3, 3, 54), (2, 2, 2, 16)])
def test_order_examples(d, e, r, order):
    assert construct(GroupParams(d, e, r)).order == order


@pytest.mark.parametrize("d,e,r", SMALL)
def test_order_formula(d, e, r):
    W = construct(GroupParams(d, e, r))
    assert W.order == math.factorial(r) * d**r * e ** (r - 1)
    assert len(set(W.elements)) == W.order


def test_excluded_and_cap():
    with pytest.raises(ValueError):
        GroupParams(1, 2, 2)
    with pytest.raises(GroupTooLarge):
        construct(GroupParams(1, 1, 9), cap=1000)


@pytest.mark.parametrize("d,e,r", SMALL)
def test_reflections_against_numeric_oracle(d, e, r):
    W = construct(GroupParams(d, e, r))
    R = reflections(W)
    brute = set()
    for i, g in enumerate(W.elements):
        M = numeric(g)
        if np.allclose(M @ M, np.eye(r)) and np.linalg.matrix_rank(M - np.eye(r)) == 1:
            brute.add(i)
    assert set(R.indices) == brute
    # conjugation-closed, classes are orbits
    idx = W.index
    classes = {}
    for k, s in enumerate(R.indices):
        classes[k] = R.class_of()[k]
    for k, s in enumerate(R.indices):
        for g in W.generators:
            t = idx[g * W.elements[s] * g.inverse()]
            assert t in brute
            assert classes[R.indices.index(t)] == classes[k]


@pytest.mark.parametrize("d,e,r,classes", [(1, 1, 3, 1), (1, 3, 3, 1), (1, 4, 2, 2), (1, 3, 2, 1), (2, 1, 3, 2)])
def test_reflection_classes(d, e, r, classes):
    assert reflections(construct(GroupParams(d, e, r))).num_classes == classes


def test_s3_reflections():
    R = reflections(construct(GroupParams(1, 1, 3)))
    assert len(R.indices) == 3 and R.num_classes == 1


@pytest.mark.parametrize("d,e,r", [(1, 3, 3), (1, 4, 3), (1, 2, 4), (2, 2, 3), (2, 3, 3)])
def test_at_most_two_classes_rank3(d, e, r):
    n = reflections(construct(GroupParams(d, e, r))).num_classes
    assert n == 1 if d == 1 else n <= 2


def test_sign_character():
    W = construct(GroupParams(1, 2, 4))
    eps = sign_character(W)
    assert eps[W.index[MonomialElement.identity(4, 2)]] == 1
    assert all(eps[s] == -1 for s in reflections(W).indices)
    rng = random.Random(1)
    idx = W.index
    for _ in range(200):
        a, b = rng.randrange(W.order), rng.randrange(W.order)
        assert eps[idx[W.elements[a] * W.elements[b]]] == eps[a] * eps[b]


@pytest.mark.parametrize("d,e,r", SMALL + [(1, 5, 3)])
def test_word_factor_round_trip(d, e, r):
    W = construct(GroupParams(d, e, r))
    rng = random.Random(0)
    sample = W.elements if W.order <= 500 else rng.sample(W.elements, 500)
    for g in sample:
        assert evaluate_word(word_factor(g), r, W.m) == g
    assert word_factor(MonomialElement.identity(r, W.m)) == []


def test_word_factor_t():
    t = evaluate_word(["t"], 3, 4)
    assert word_factor(t) == ["t"]


def test_subgroups():
    W = construct(GroupParams(1, 3, 3))
    W0 = subgroup(W, ["s1'", "s1"])
    assert W0.order == GroupParams(1, 3, 2).order()
    assert subgroup(W, []).order == 1
    big = construct(GroupParams(2, 3, 3))
    small = construct(GroupParams(1, 6, 3))
    assert big.order == 2 * small.order
    assert set(small.elements) <= set(big.elements)


@pytest.mark.parametrize("d,e,r", SMALL)
def test_group_law(d, e, r):
    W = construct(GroupParams(d, e, r))
    rng = random.Random(2)
    for _ in range(50):
        a, b, c = (rng.choice(W.elements) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert np.allclose(numeric(a * b), numeric(a) @ numeric(b))
        assert (a * a.inverse()).is_identity()
