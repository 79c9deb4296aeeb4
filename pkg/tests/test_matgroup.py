import numpy as np
import pytest

from wordlab.matgroup import (
    BudgetExceeded,
    bfs_distances,
    conjugacy_classes,
    cyclic_group,
    enumerate_group,
    generated_subgroup,
    group_order_formula,
    is_generating,
)

from conftest import group_and_classes


@pytest.mark.parametrize("kind", ["SL2", "GL2", "PGL2"])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_orders_and_closure(kind, p):
    G = enumerate_group(kind, p)
    assert G.order == group_order_formula(kind, p)
    rng = np.random.default_rng(p)
    a, b = G.random_elements(rng, 200), G.random_elements(rng, 200)
    ab = G.mul(a, b)
    assert np.all(G.mul(ab, G.inv(ab)) == G.identity)
    # associativity on random triples
    c = G.random_elements(rng, 200)
    assert np.array_equal(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)))


def test_matrix_product_matches_numpy():
    G = enumerate_group("GL2", 5)
    for i, j in [(3, 7), (10, 400), (479, 1)]:
        expected = G.element(i) @ G.element(j) % 5
        assert np.array_equal(G.element(G.mul(i, j)), expected)


def test_pgl2_normalization():
    G = enumerate_group("PGL2", 5)
    m = G.element(7)
    assert G.index_of(3 * m % 5) == 7


@pytest.mark.parametrize("p,k", [(3, 7), (5, 9), (7, 11), (13, 17)])
def test_sl2_class_numbers(p, k):
    G, cd = group_and_classes("SL2", p)
    assert cd.k == k == p + 4
    assert cd.sizes.sum() == G.order
    assert np.all(cd.sizes * cd.centralizer_sizes == G.order)
    assert cd.class_of[G.identity] == 0


def test_sl3_small():
    G = enumerate_group("SL3", 3)
    assert G.order == 5616
    assert conjugacy_classes(G).k == 12


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_group("SL2", 101)


def test_structure_constants_row_sums():
    G, cd = group_and_classes("SL2", 5)
    N = cd.structure_constants
    # for fixed i and target z, sum over j of N[i, j, s] = |C_i|
    assert np.all(N.sum(axis=1) == cd.sizes[:, None])


def test_cyclic_and_generation():
    C = cyclic_group(12)
    assert C.order == 12
    assert conjugacy_classes(C).k == 12
    assert is_generating([5], C) and not is_generating([4], C)
    assert len(generated_subgroup([4], C).nonzero()[0]) == 3
    d = bfs_distances([1], C)
    assert d.max() == 6  # generators and their inverses


def test_generating_pairs_sl2():
    G, _ = group_and_classes("SL2", 5)
    assert is_generating([np.array([[1, 1], [0, 1]]), np.array([[1, 0], [1, 1]])], G)
    assert not is_generating([np.array([[1, 1], [0, 1]])], G)
