import copy
import random

import pytest

from koszulalg.ring import FieldSpec, RingSpec
from koszulalg.complexes import koszul, FreeComplex, canonical_augmentation
from koszulalg.linalg import PolyMatrix
from koszulalg.minimal import minimal_model
from koszulalg.filtration import compute_filtration, check_properties, bound_checks

from conftest import random_free_complex

Q = FieldSpec(0)
F2 = FieldSpec(2)


class TestComputeFiltration:
    def test_k3_m0_levels(self):
        K = koszul(RingSpec(Q, 3, 1), 0)
        F = compute_filtration(K.base)
        assert F.dims() == [1, 4, 7, 8]
        assert F.length == 4
        # F_1 is the span of the empty-set generator
        basis = F.basis(1)
        assert len(basis) == 1
        idx = K.subset_index[()]
        assert all(
            (not K.ring.field.is_zero(x)) == (i == idx)
            for i, x in enumerate(basis[0])
        )

    def test_k1_m0(self):
        K = koszul(RingSpec(Q, 1, 1), 0)
        F = compute_filtration(K.base)
        assert F.dims() == [1, 2]

    @pytest.mark.parametrize("field", [Q, F2], ids=["Q", "F2"])
    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_koszul_length_r_plus_1(self, field, r):
        K = koszul(RingSpec(field, r, 1), 0)
        assert compute_filtration(K.base).length == r + 1

    def test_zero_differential(self):
        ring = RingSpec(Q, 2, 1)
        C = FreeComplex(ring, [("a", 0), ("b", 2)], PolyMatrix(ring, 2, 2))
        F = compute_filtration(C)
        assert F.length == 1 and F.dims() == [2]

    def test_weight2_koszul(self):
        K = koszul(RingSpec(Q, 2, 2), 2)
        F = compute_filtration(K.base)
        assert F.length == 3 and F.dims() == [1, 3, 4]

    def test_rejects_non_minimal(self):
        ring = RingSpec(Q, 1, 1)
        D = PolyMatrix(ring, 2, 2)
        D.entries[(0, 1)] = ring.one()
        C = FreeComplex(ring, [("a", 1), ("b", 0)], D)
        with pytest.raises(ValueError):
            compute_filtration(C)

    def test_graded_basis_partitions_levels(self):
        K = koszul(RingSpec(Q, 3, 1), 1)
        F = compute_filtration(K.base)
        for i in range(1, F.length + 1):
            graded = F.graded_basis(i)
            assert sum(len(v) for v in graded.values()) == len(F.basis(i))
        assert {q: len(v) for q, v in F.graded_basis(4).items()} == {0: 1, 1: 3, 2: 3, 3: 1}

    def test_generator_permutation_invariance(self, rng):
        ring = RingSpec(F2, 2, 1)
        K = koszul(ring, 1)
        perm = list(range(K.n))
        rng.shuffle(perm)
        gens = [K.base.generators[p] for p in perm]
        D = PolyMatrix(ring, K.n, K.n)
        pos = {p: i for i, p in enumerate(perm)}
        for (i, j), v in K.base.differential.entries.items():
            D.entries[(pos[i], pos[j])] = v
        C = FreeComplex(ring, gens, D)
        F1 = compute_filtration(K.base)
        F2_ = compute_filtration(C)
        assert F1.dims() == F2_.dims()


class TestProperties:
    def test_koszul_all_pass(self):
        for r, m in [(2, 0), (3, 1)]:
            K = koszul(RingSpec(Q, r, 1), m)
            F = compute_filtration(K.base)
            rep = check_properties(F, canonical_augmentation(K))
            assert rep["passed"], rep["failures"]
            # property (d) witnesses exist for every consecutive quotient
            assert set(rep["quotient_witnesses"]) == set(range(2, F.length + 1))

    def test_corrupted_filtration_detected(self):
        K = koszul(RingSpec(Q, 3, 1), 0)
        F = compute_filtration(K.base)
        bad = copy.deepcopy(F)
        bad.subspaces[1] = bad.subspaces[1][:-1]
        rep = check_properties(bad)
        assert not rep["passed"]

    def test_augmentation_surjectivity_failure_detected(self):
        from koszulalg.complexes import Augmentation

        K = koszul(RingSpec(Q, 2, 1), 1)
        F = compute_filtration(K.base)
        zero_aug = Augmentation(K.base, [Q.zero] * K.n)
        rep = check_properties(F, zero_aug)
        assert any("(c)" in m for m in rep["failures"])

    def test_random_models(self, rng):
        for field in (Q, F2):
            ring = RingSpec(field, 2, 1)
            for _ in range(10):
                C, _ = random_free_complex(ring, rng, max_gens=8)
                mm = minimal_model(C)
                if mm.model.n == 0:
                    continue
                F = compute_filtration(mm)
                rep = check_properties(F)
                assert rep["passed"], rep["failures"]


class TestBounds:
    def test_k3_m0_values(self):
        K = koszul(RingSpec(Q, 3, 1), 0)
        F = compute_filtration(K.base)
        rep = bound_checks(K.base, F)
        assert rep["dim_H"] == 8
        assert rep["dim_vs_twice_length"] == (8, 6, True)
        assert rep["lambda_sum"] == 4
        assert rep["passed"]

    def test_k3_m1_degree_count(self):
        K = koszul(RingSpec(Q, 3, 1), 1)
        F = compute_filtration(K.base)
        rep = bound_checks(K.base, F)
        assert rep["lambda_trivial"]
        assert rep["nonzero_degrees"] == 4
        assert rep["degrees_vs_length"] == (4, 4, True)

    def test_random_models_satisfy_dim_bound(self, rng):
        for field in (Q, F2):
            ring = RingSpec(field, 3, 1)
            for _ in range(10):
                C, _ = random_free_complex(ring, rng)
                mm = minimal_model(C)
                if mm.model.n == 0:
                    continue
                F = compute_filtration(mm)
                rep = bound_checks(mm, F)
                assert rep["dim_vs_twice_length"][2]
                assert rep["passed"]
