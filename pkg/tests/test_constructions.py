import random
from fractions import Fraction
from math import comb, log

import pytest

from magball import (
    BallSpec,
    DomainError,
    GroupSpec,
    bch_code,
    behrend_ruzsa_splitter,
    behrend_sphere_sets,
    bose_chowla_s1,
    bose_chowla_s2,
    bt_pm1_splitter,
    bt_shift_to_splitter,
    check_complete_split,
    check_partial_split,
    code_lattice,
    covering_base_split,
    density,
    hamming_covering_baseline,
    is_bt_set,
    is_kfold_sidon,
    kernel_lattice,
    kfold_sidon_splitter,
    nonlinear_code_pack,
    product_splitter,
    sample_lambda_splitter,
    search_bt_set,
    search_kfold_sidon,
    subgroup_order,
    verify_covering_geometric,
    verify_packing_geometric,
)
from magball.constructions import LinearCode, min_distance


class TestBtSets:
    def test_s1_smallest_instance(self):
        bt = bose_chowla_s1(2, 2)
        assert bt.N == 3 and bt.elements == (1, 2)

    def test_s1_q3_verified(self):
        bt = bose_chowla_s1(3, 2)
        assert bt.N == 8 and len(bt.elements) == 3
        assert is_bt_set(bt.elements, bt.N, 2)[0]

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
    @pytest.mark.parametrize("t", [2, 3])
    def test_s1_family_is_always_bt(self, q, t):
        bt = bose_chowla_s1(q, t)
        assert len(bt.elements) == q
        assert bt.N == q**t - 1
        assert is_bt_set(bt.elements, bt.N, t)[0]

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
    @pytest.mark.parametrize("t", [2, 3])
    def test_s2_family_is_always_bt(self, q, t):
        data = bose_chowla_s2(q, t)
        assert len(data.bt.elements) == q + 1
        assert 0 in data.bt.elements
        assert data.N == (q ** (t + 1) - 1) // (q - 1)
        assert is_bt_set(data.bt.elements, data.N, t)[0]

    def test_s2_defining_identity(self):
        data = bose_chowla_s2(4, 2)
        f = data.field
        eta = f.gen()
        for alpha, s, beta in zip(data.alphas, data.svals, data.betas):
            assert f.mul(beta, f.pow(eta, s)) == f.add(eta, alpha)

    def test_is_bt_examples(self):
        assert is_bt_set([0, 1, 3], 8, 2) == (True, None)
        ok, witness = is_bt_set([0, 1, 2], 8, 2)
        assert not ok
        a, b = witness
        assert sum(a) % 8 == sum(b) % 8 and sorted(a) != sorted(b)
        assert is_bt_set([0], 11, 3) == (True, None)

    def test_search_finds_the_canonical_set(self):
        bt, reached = search_bt_set(8, 2, 3)
        assert reached and bt.elements == (0, 1, 3)


class TestBtSplitters:
    def test_shift_example(self):
        from magball.constructions import BtSet

        bt = BtSet(8, (0, 1, 3), 2, "search")
        s = bt_shift_to_splitter(bt)
        assert [e.residues[0] for e in s.elements] == [1, 3]
        assert check_partial_split(s).verified

    def test_shift_normalises_any_representative(self):
        from magball.constructions import BtSet

        bt = BtSet(8, (1, 2, 4), 2, "search")
        s = bt_shift_to_splitter(bt)
        assert [e.residues[0] for e in s.elements] == [1, 3]

    def test_shift_rejects_singletons(self):
        from magball.constructions import BtSet

        with pytest.raises(DomainError):
            bt_shift_to_splitter(BtSet(11, (0,), 2, "search"))

    def test_cor6_density_at_q4(self):
        s = bt_shift_to_splitter(bose_chowla_s1(4, 2))
        assert check_partial_split(s).verified
        frac = density(kernel_lattice(s), s.ball())
        assert frac == Fraction(sum(comb(3, i) for i in range(3)), (3 + 1) ** 2 - 1)
        assert frac == Fraction(7, 15)

    def test_second_variant_density_at_q4(self):
        # n = q = 4 over Z_{(q^3-1)/(q-1)} = Z_21: density sum C(4,i) / 21.
        s = bt_shift_to_splitter(bose_chowla_s2(4, 2).bt)
        assert s.group.moduli == (21,) and s.n == 4
        assert check_partial_split(s).verified
        frac = density(kernel_lattice(s), s.ball())
        assert frac == Fraction(sum(comb(4, i) for i in range(3)), 21)
        assert frac == Fraction(11, 21)

    def test_pm1_example(self):
        from magball.constructions import BtSet

        s = bt_pm1_splitter(BtSet(8, (0, 1, 3), 2, "search"), 2)
        assert s.group.moduli == (8, 5)
        assert [e.residues for e in s.elements] == [(0, 1), (1, 1), (3, 1)]
        assert check_partial_split(s).verified

    def test_cor7_density_at_q3(self):
        s = bt_pm1_splitter(bose_chowla_s1(3, 2), 2)
        assert check_partial_split(s).verified
        assert density(kernel_lattice(s), s.ball()) == Fraction(19, 40)

    def test_lagrange_for_constructed_splitters(self):
        for s in [
            bt_shift_to_splitter(bose_chowla_s1(4, 2)),
            bt_pm1_splitter(bose_chowla_s1(3, 2), 2),
        ]:
            assert s.group.order % subgroup_order(s.group, list(s.elements)) == 0


class TestKfoldSidon:
    def test_k1_is_plain_sidon(self):
        assert is_kfold_sidon([0, 1, 3], 7, 1)[0]
        ok, witness = is_kfold_sidon([0, 1, 2], 7, 1)
        assert not ok
        cs, xs = witness
        assert sum(cs) == 0
        assert sum(c * x for c, x in zip(cs, xs)) % 7 == 0

    def test_singletons_always_pass(self):
        assert is_kfold_sidon([5], 11, 2)[0]

    def test_gcd_gate(self):
        with pytest.raises(DomainError):
            is_kfold_sidon([0, 1], 10, 2)  # gcd(10, 2!) != 1

    def test_k1_agrees_with_b2_on_random_subsets(self):
        rng = random.Random(123)
        for _ in range(100):
            N = rng.choice([7, 9, 11, 15, 21, 25, 35, 45, 63, 81, 101])
            size = rng.randint(1, 6)
            subset = sorted(rng.sample(range(N), size))
            assert is_kfold_sidon(subset, N, 1)[0] == is_bt_set(subset, N, 2)[0]

    def test_search_examples(self):
        params, reached = search_kfold_sidon(7, 1, 3)
        assert reached and params.elements == (0, 1, 3)
        params, reached = search_kfold_sidon(11, 2, 1)
        assert reached and params.elements == (0,)

    def test_search_outputs_always_valid(self):
        for N, k in [(11, 2), (13, 2), (31, 2)]:
            params, _ = search_kfold_sidon(N, k, 4)
            assert is_kfold_sidon(params.elements, N, k)[0]

    def test_splitter_verified(self):
        params, _ = search_kfold_sidon(31, 2, 4)
        s = kfold_sidon_splitter(params, 2, 0)
        assert s.group.moduli == (5, 31)
        assert s.n == len(params.elements)
        assert check_partial_split(s).verified

    def test_parameter_gate(self):
        params, _ = search_kfold_sidon(11, 1, 3)
        with pytest.raises(DomainError):
            kfold_sidon_splitter(params, 2, 0)  # kplus exceeds the fold
        s = kfold_sidon_splitter(params, 1, 1)
        assert s.group.moduli == (5, 11)


class TestBehrend:
    def test_sphere_sets_example(self):
        sets = behrend_sphere_sets(2, 1, 3)
        assert sets == {0: (0,), 1: (1, 4), 2: (5,)}

    def test_partition_and_pigeonhole(self):
        for D, K, alpha in [(2, 1, 3), (2, 2, 3), (3, 1, 2), (3, 2, 8)]:
            sets = behrend_sphere_sets(D, K, alpha)
            assert sum(len(v) for v in sets.values()) == (K + 1) ** D
            assert max(len(v) for v in sets.values()) * (D * K * K + 1) >= (K + 1) ** D

    def test_instance_17(self):
        s = behrend_ruzsa_splitter(1, 0, 2, 1, 17)
        assert s.group.moduli == (4, 17, 17)
        assert [e.residues for e in s.elements] == [(1, 1, 1), (1, 4, 16)]
        assert check_partial_split(s).verified

    def test_kplus_gate(self):
        # kplus = 3 forces alpha = 18, so the prime must clear (18K+1)^D = 361.
        assert behrend_ruzsa_splitter(3, 0, 2, 1, 367) is not None
        with pytest.raises(DomainError):
            behrend_ruzsa_splitter(4, 0, 2, 1, 1093)

    def test_congruence_and_size_gates(self):
        with pytest.raises(DomainError):
            behrend_ruzsa_splitter(1, 0, 2, 1, 13)  # 13 = 1 mod 12
        with pytest.raises(DomainError):
            behrend_ruzsa_splitter(1, 0, 2, 1, 7)  # (3K+1)^2 = 16 > 7

    def test_larger_instance_verifies(self):
        s = behrend_ruzsa_splitter(2, 1, 2, 1, 101)  # alpha = 8, 81 <= 101
        assert s.group.moduli == (9, 101, 101)
        assert check_partial_split(s).verified


class TestBch:
    def test_ternary_instance(self):
        code = bch_code(3, 2, 5)
        assert (code.n, code.k) == (8, 2)
        assert min_distance(code) >= 5

    def test_binary_classic(self):
        code = bch_code(2, 4, 5)
        assert (code.n, code.k) == (15, 7)
        assert min_distance(code) == 5

    def test_dimension_formula(self):
        for p, m, d in [(3, 2, 5), (2, 4, 5), (5, 2, 5)]:
            code = bch_code(p, m, d)
            n = p**m - 1
            assert code.k == n - ((d - 1) - (d - 1) // p) * m

    def test_dimension_above_formula_is_flagged_not_failed(self):
        # For (2,4,7) the classical value 3 is not exactly reachable by whole
        # cosets, so the plain defining set (dimension 5) is kept and flagged.
        with pytest.warns(UserWarning, match="exceeds the classical value"):
            code = bch_code(2, 4, 7)
        assert code.k == 5
        assert min_distance(code) >= 7

    def test_parity_check_consistency(self):
        code = bch_code(3, 2, 5)
        for g in code.generator:
            for h in code.parity_check:
                assert sum(a * b for a, b in zip(g, h)) % 3 == 0

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            bch_code(3, 2, 1)
        with pytest.raises(DomainError):
            bch_code(4, 2, 5)  # p must be prime


class TestCodeLattice:
    def test_volume_is_p_power(self):
        assert code_lattice(bch_code(3, 2, 5), 1, 1).volume == 729

    def test_trivial_code_gives_unit_lattice(self):
        triv = LinearCode(3, 2, 2, ((1, 0), (0, 1)), (), 1)
        assert code_lattice(triv, 1, 1).volume == 1

    def test_magnitude_gate(self):
        with pytest.raises(DomainError):
            code_lattice(bch_code(3, 2, 5), 2, 1)  # 3 errors of magnitude >= p

    def test_packing_density(self):
        basis = code_lattice(bch_code(3, 2, 5), 1, 1)
        assert density(basis, BallSpec(8, 2, 1, 1)) == Fraction(129, 729)


class TestNonlinear:
    def test_repetition_code_tiles(self):
        words = [(0,) * 5, (1,) * 5]
        result = nonlinear_code_pack(words, 2, 1, 0, 2)
        assert result.verdict == "verified"
        assert result.density == 1

    def test_distance_gate(self):
        result = nonlinear_code_pack([(0, 0), (1, 1)], 2, 1, 0, 1)
        assert result.verdict == "refuted"
        assert result.witness == ((0, 0), (1, 1))

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            nonlinear_code_pack([], 2, 1, 0, 1)

    def test_magnitude_gate(self):
        with pytest.raises(DomainError):
            nonlinear_code_pack([(0,) * 5, (1,) * 5], 2, 1, 1, 2)


class TestCoveringFamilies:
    def test_base_split_z4(self):
        s = covering_base_split(2, 2, 1, 0)
        assert [e.residues[0] for e in s.elements] == [1, 2, 3]
        assert s.magnitudes.values() == (1,)
        assert check_complete_split(s).verified
        assert check_partial_split(s).verified  # tiling

    def test_base_split_z9(self):
        s = covering_base_split(3, 2, 1, 1)
        assert [e.residues[0] for e in s.elements] == [1, 3, 4, 7]
        assert s.magnitudes.values() == (-1, 1)
        assert check_complete_split(s).verified
        assert check_partial_split(s).verified

    def test_base_split_m1(self):
        s = covering_base_split(3, 1, 1, 1)
        assert [e.residues[0] for e in s.elements] == [1]
        assert check_complete_split(s).verified

    def test_prime_gate(self):
        with pytest.raises(DomainError):
            covering_base_split(4, 2, 2, 1)
        with pytest.raises(DomainError):
            covering_base_split(5, 2, 1, 0)  # p > kplus + kminus + 1

    def test_product_example_and_density(self):
        base = covering_base_split(2, 2, 1, 0)
        s = product_splitter(base, 2)
        assert [e.residues for e in s.elements] == [
            (1, 0), (2, 0), (3, 0), (0, 1), (0, 2), (0, 3),
        ]
        assert check_complete_split(s).verified
        frac = density(kernel_lattice(s), s.ball())
        assert frac == Fraction(22, 16)
        n, p, t = s.n, 2, 2
        assert (n * (p - 1) // t + 1) ** t == 16

    def test_product_identity_at_t1(self):
        base = covering_base_split(2, 2, 1, 0)
        assert product_splitter(base, 1) is base

    def test_product_larger_instance(self):
        base = covering_base_split(3, 1, 1, 1)
        s = product_splitter(base, 3)
        assert s.n == 3 and s.group.moduli == (3, 3, 3)
        assert check_complete_split(s).verified

    def test_product_with_multi_factor_base_group(self):
        from magball import GroupSpec, MagnitudeSet, SplitterSet

        g = GroupSpec((2, 2))
        base = SplitterSet(
            g,
            tuple(g.element(e) for e in [(0, 1), (1, 0), (1, 1)]),
            MagnitudeSet(1, 0),
            1,
        )
        assert check_complete_split(base).verified
        s = product_splitter(base, 2)
        assert s.group.moduli == (2, 2, 2, 2) and s.n == 6
        assert s.elements[0].residues == (0, 1, 0, 0)
        assert s.elements[3].residues == (0, 0, 0, 1)
        assert check_complete_split(s).verified

    def test_covering_density_at_least_one(self):
        for s in [
            product_splitter(covering_base_split(2, 2, 1, 0), 2),
            product_splitter(covering_base_split(3, 1, 1, 1), 2),
        ]:
            assert density(kernel_lattice(s), s.ball()) >= 1


class TestBaseline:
    def test_lower_bound(self):
        for n, t, kp, km, ell in [(6, 2, 1, 0, 2), (4, 2, 1, 1, 3)]:
            value = hamming_covering_baseline(n, t, kp, km, ell)
            assert value >= Fraction(n) * Fraction(int(log(ell) * 10**9), 10**9)

    def test_frozen_instance(self):
        # ceil(6 * 64 * ln_up(2) / 22) = 13 codewords; 13 * 22 / 64 = 143/32.
        assert hamming_covering_baseline(6, 2, 1, 0, 2) == Fraction(143, 32)

    def test_exactness_is_rational(self):
        value = hamming_covering_baseline(6, 2, 1, 0, 2)
        assert isinstance(value, Fraction)


class TestLambdaSampler:
    def test_reproducibility(self):
        a = sample_lambda_splitter(53, 2, 1, 0, 0.25, seed=1)
        b = sample_lambda_splitter(53, 2, 1, 0, 0.25, seed=1)
        assert a.splitter == b.splitter
        assert a.lambda_ == b.lambda_
        assert a.report.to_json() == b.report.to_json()

    def test_lambda_is_histogram_max(self):
        sample = sample_lambda_splitter(53, 2, 1, 0, 0.25, seed=1)
        assert sample.lambda_ == max(
            m for m, cnt in sample.report.histogram.items() if cnt
        )

    def test_lambda_one_iff_partial_verified(self):
        for seed in range(1, 8):
            try:
                sample = sample_lambda_splitter(53, 2, 1, 0, 0.25, seed=seed)
            except DomainError:
                continue
            partial = check_partial_split(sample.splitter)
            assert (sample.lambda_ == 1) == partial.verified

    def test_gcd_gate(self):
        with pytest.raises(DomainError):
            sample_lambda_splitter(54, 2, 2, 0, 0.25, seed=1)

    def test_epsilon_gate(self):
        with pytest.raises(DomainError):
            sample_lambda_splitter(53, 2, 1, 0, 0.75, seed=1)


class TestCrossOracle:
    def test_constructed_instances_agree_with_geometry(self):
        sidon, _ = search_kfold_sidon(31, 2, 4)
        instances = [
            ("packing", bt_shift_to_splitter(bose_chowla_s1(4, 2))),
            ("packing", bt_shift_to_splitter(bose_chowla_s2(4, 2).bt)),
            ("packing", bt_pm1_splitter(bose_chowla_s1(3, 2), 2)),
            ("packing", kfold_sidon_splitter(sidon, 2, 0)),
            ("packing", behrend_ruzsa_splitter(1, 0, 2, 1, 17)),
            ("covering", covering_base_split(2, 2, 1, 0)),
            ("covering", covering_base_split(3, 2, 1, 1)),
            ("covering", product_splitter(covering_base_split(2, 2, 1, 0), 2)),
        ]
        for kind, s in instances:
            basis = kernel_lattice(s)
            if kind == "packing":
                assert check_partial_split(s).verified
                assert verify_packing_geometric(basis, s.ball()).verified
            else:
                assert check_complete_split(s).verified
                assert basis.volume == s.group.order
                assert verify_covering_geometric(basis, s.ball()).verified
