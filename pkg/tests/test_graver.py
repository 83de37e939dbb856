import random

import pytest
from hypothesis import given, strategies as st

from ndsolve.errors import BudgetError, IncompleteBasisError
from ndsolve.graver import (
    augment_to_optimum,
    conformal,
    g1_norm,
    g_inf_norm,
    graver_basis,
    graver_best_step,
    kernel_lattice_basis,
    stacking_check,
)
from ndsolve.matrices import IntMatrix


vectors = st.lists(st.integers(min_value=-4, max_value=4), min_size=1, max_size=5)


class TestConformal:
    def test_zero_below_everything(self):
        assert conformal((0, 0), (5, -7))

    def test_componentwise(self):
        assert conformal((1, -1), (2, -3))

    def test_sign_clash(self):
        assert not conformal((1, 1), (2, -3))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            conformal((1,), (1, 2))

    @given(vectors)
    def test_reflexive(self, v):
        assert conformal(v, v)

    @given(st.data())
    def test_transitive(self, data):
        n = data.draw(st.integers(1, 4))
        elt = st.integers(-3, 3)
        x = data.draw(st.lists(elt, min_size=n, max_size=n))
        y = data.draw(st.lists(elt, min_size=n, max_size=n))
        z = data.draw(st.lists(elt, min_size=n, max_size=n))
        if conformal(x, y) and conformal(y, z):
            assert conformal(x, z)

    @given(st.data())
    def test_antisymmetric(self, data):
        n = data.draw(st.integers(1, 4))
        elt = st.integers(-3, 3)
        x = tuple(data.draw(st.lists(elt, min_size=n, max_size=n)))
        y = tuple(data.draw(st.lists(elt, min_size=n, max_size=n)))
        if conformal(x, y) and conformal(y, x):
            assert x == y


class TestKernelLattice:
    @pytest.mark.parametrize("seed", range(15))
    def test_basis_vectors_lie_in_kernel(self, seed):
        rng = random.Random(seed)
        m, n = rng.randint(1, 3), rng.randint(2, 5)
        a = IntMatrix.from_dict(
            m, n,
            {(i, j): rng.randint(-2, 2) for i in range(m) for j in range(n) if rng.random() < 0.7},
        )
        for v in kernel_lattice_basis(a):
            assert a.mul_vec(list(v)) == [0] * m

    def test_identity_has_trivial_kernel(self):
        a = IntMatrix.from_dict(3, 3, {(i, i): 1 for i in range(3)})
        assert kernel_lattice_basis(a) == []

    def test_zero_matrix_kernel_is_everything(self):
        a = IntMatrix.from_dict(1, 3, {})
        basis = kernel_lattice_basis(a)
        assert len(basis) == 3


class TestGraverBasis:
    def test_difference_matrix(self):
        b = graver_basis(IntMatrix.from_rows([[1, -1]]))
        assert b.elements == {(1, 1), (-1, -1)}
        assert g1_norm(b) == 2 and g_inf_norm(b) == 1

    def test_sum_matrix_enumeration_oracle(self):
        # independent oracle: kernel vectors up to norm 2, minimality filtered
        a = IntMatrix.from_rows([[1, 1, -1]])
        b = graver_basis(a, norm_cap=2)
        expected = {(1, 0, 1), (0, 1, 1), (1, -1, 0)}
        assert b.complete
        assert b.elements == expected | {tuple(-x for x in v) for v in expected}
        assert g1_norm(b) == 2 and g_inf_norm(b) == 1

    def test_completion_agrees_with_enumeration(self):
        a = IntMatrix.from_rows([[1, 1, -1]])
        assert graver_basis(a).elements == graver_basis(a, norm_cap=2).elements

    def test_chain_recurrence_block(self):
        # rows a1 = b1, a2 = a1 + b2; columns (a1, a2, b1, b2)
        l = IntMatrix.from_rows([[1, 0, -1, 0], [-1, 1, 0, -1]])
        b = graver_basis(l)
        expected = {(1, 1, 1, 0), (0, 1, 0, 1), (1, 0, 1, -1)}
        assert b.elements == expected | {tuple(-x for x in v) for v in expected}
        assert g1_norm(b) == 3  # K + 1 with K = 2

    def test_zero_row_matrix_gives_unit_vectors(self):
        b = graver_basis(IntMatrix.from_dict(1, 3, {}))
        assert b.elements == {
            (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
        }
        assert g1_norm(b) == 1

    def test_trivial_kernel_empty_basis(self):
        b = graver_basis(IntMatrix.from_rows([[1, 0], [0, 1]]))
        assert b.elements == frozenset() and b.complete
        assert g1_norm(b) == 0

    def test_low_cap_is_reported_incomplete(self):
        # kernel of [2 -3] is generated by (3, 2); cap 1 sees nothing
        b = graver_basis(IntMatrix.from_rows([[2, -3]]), norm_cap=1)
        assert not b.complete
        with pytest.raises(IncompleteBasisError):
            g1_norm(b)

    def test_budget_error(self):
        a = IntMatrix.from_dict(1, 4, {})
        with pytest.raises(BudgetError):
            graver_basis(a, max_elements=2)

    @pytest.mark.parametrize("seed", range(12))
    def test_invariants_and_route_agreement(self, seed):
        rng = random.Random(seed)
        m, n = rng.randint(1, 2), rng.randint(2, 4)
        a = IntMatrix.from_dict(
            m, n,
            {(i, j): rng.randint(-2, 2) for i in range(m) for j in range(n) if rng.random() < 0.8},
        )
        b = graver_basis(a)
        b.validate()
        cap = max(g_inf_norm(b), 1)
        b2 = graver_basis(a, norm_cap=cap)
        assert b2.complete and b2.elements == b.elements

    @pytest.mark.parametrize("seed", range(8))
    def test_conformal_decomposition_property(self, seed):
        from ndsolve.graver import _conformal_normal_form, _kernel_vectors_within

        rng = random.Random(100 + seed)
        a = IntMatrix.from_dict(
            1, 3, {(0, j): rng.randint(-2, 2) for j in range(3) if rng.random() < 0.9}
        )
        b = graver_basis(a)
        cap = max(g_inf_norm(b), 1) + 1
        elems = sorted(b.elements)
        for v in _kernel_vectors_within(a, cap, 10**6):
            assert not any(_conformal_normal_form(v, elems))

    def test_every_element_needed(self):
        from ndsolve.graver import _conformal_normal_form

        b = graver_basis(IntMatrix.from_rows([[1, 1, -1]]))
        elems = sorted(b.elements)
        for v in elems:
            rest = [u for u in elems if u != v]
            assert any(_conformal_normal_form(v, rest))


class TestAugmentation:
    def test_optimal_point_returns_none(self):
        a = IntMatrix.from_rows([[1, -1]])
        basis = graver_basis(a)
        f = lambda p: p[0] + p[1]
        assert graver_best_step(a, basis, (0, 0), f, ((0, 0), (5, 5))) is None

    def test_one_dim_quadratic_descent(self):
        a = IntMatrix.from_dict(1, 1, {})
        basis = graver_basis(a)
        f = lambda p: p[0] * p[0]
        res = augment_to_optimum(a, (3,), f, ((-5,), (5,)), basis=basis)
        assert res.point == (0,) and res.value == 0
        assert res.steps <= 2

    def test_step_respects_bounds(self):
        a = IntMatrix.from_dict(1, 1, {})
        basis = graver_basis(a)
        f = lambda p: -p[0]
        g, lam = graver_best_step(a, basis, (1,), f, ((0,), (4,)))
        assert g == (1,) and lam == 3

    def test_infeasible_point_rejected(self):
        a = IntMatrix.from_dict(1, 1, {})
        basis = graver_basis(a)
        with pytest.raises(ValueError):
            graver_best_step(a, basis, (9,), lambda p: 0, ((0,), (5,)))

    def test_incomplete_basis_propagates(self):
        a = IntMatrix.from_rows([[2, -3]])
        partial = graver_basis(a, norm_cap=1)
        with pytest.raises(IncompleteBasisError):
            augment_to_optimum(a, (0, 0), lambda p: 0, ((0, 0), (9, 9)), basis=partial)

    def test_tie_broken_by_lex_smallest_direction(self):
        a = IntMatrix.from_dict(1, 2, {})
        basis = graver_basis(a)  # unit vectors
        f = lambda p: -(p[0] + p[1])
        g, lam = graver_best_step(a, basis, (0, 0), f, ((0, 0), (1, 1)))
        assert g == (0, 1) and lam == 1  # (0,1) sorts before (1,0)


class TestStacking:
    def test_simple_pair_holds(self):
        rep = stacking_check(IntMatrix.from_rows([[1, 1]]), IntMatrix.from_rows([[1, -1]]))
        assert rep.holds
        assert rep.g1_stack == 0 and rep.bound == 4

    def test_zero_lower_block_reduces_to_upper_term(self):
        f = IntMatrix.from_rows([[1, -1]])
        l = IntMatrix.from_dict(1, 2, {})
        rep = stacking_check(f, l)
        assert rep.g1_lower == 1
        assert rep.bound == rep.g1_projected
        assert rep.holds

    @pytest.mark.parametrize("seed", range(10))
    def test_random_tiny_pairs(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 4)
        f = IntMatrix.from_dict(
            1, n, {(0, j): rng.randint(-2, 2) for j in range(n) if rng.random() < 0.8}
        )
        l = IntMatrix.from_dict(
            1, n, {(0, j): rng.randint(-2, 2) for j in range(n) if rng.random() < 0.8}
        )
        assert stacking_check(f, l).holds
