import numpy as np
import pytest

from wtmac.errors import (
    DegenerateTypicalityError,
    ResourceBudgetError,
    ValidationError,
)
from wtmac.probkit import (
    AX_T,
    AX_U,
    AX_V1,
    AX_V2,
    AX_X,
    AX_Y,
    AX_Z,
    Channel,
    Dist,
    FactoredInput,
    WiretapMAC,
    all_sequences,
    entropy,
    joint_from_factors,
    mutual_information,
    n_fold,
    sample_typical,
    sequence_prob,
    truncated_typical_dist,
    typical_membership,
    variation_distance,
)

WB_62 = np.array([[0.6178, 0.3822], [0.0624, 0.9376],
                  [0.9350, 0.0650], [0.2353, 0.7647]])
WE_62 = np.array([[0.0729, 0.9271], [0.7264, 0.2736],
                  [0.3662, 0.6338], [0.4643, 0.5357]])


def example62_input():
    mac = WiretapMAC.from_marginals(WB_62, WE_62)
    return FactoredInput.independent(Dist.from_mass([0.6933, 0.3067]),
                                     Dist.from_mass([0.3151, 0.6849]), mac)


def random_mac(rng, x=2, y=2, t=2, z=2):
    rows = rng.dirichlet(np.ones(t * z), size=x * y)
    return WiretapMAC.from_rows(rows, x, y, t, z)


def random_factored(rng, mac, u=2, v1=2, v2=2):
    return FactoredInput(
        Dist.from_mass(rng.dirichlet(np.ones(u))),
        Channel.from_matrix(rng.dirichlet(np.ones(v1), size=u)),
        Channel.from_matrix(rng.dirichlet(np.ones(v2), size=u)),
        Channel.from_matrix(rng.dirichlet(np.ones(mac.x_alphabet.size), size=v1)),
        Channel.from_matrix(rng.dirichlet(np.ones(mac.y_alphabet.size), size=v2)),
        mac,
    )


class TestEntropy:
    def test_uniform_binary(self):
        assert entropy(Dist.uniform(2)) == pytest.approx(1.0, abs=1e-15)

    def test_dyadic(self):
        assert entropy(Dist.from_mass([0.5, 0.25, 0.25])) == pytest.approx(1.5, abs=1e-15)

    def test_worked_example_output_entropy(self):
        j = example62_input().joint
        assert j.entropy({AX_Z}) == pytest.approx(0.9999, abs=1e-3)

    def test_unnormalized_rejected(self):
        with pytest.raises(ValidationError):
            entropy(np.array([0.5, 0.4]))


class TestMutualInformation:
    def test_noiseless_channel(self):
        mac = WiretapMAC.from_marginals(np.array([[1.0, 0], [0, 1], [0, 1], [1, 0]]),
                                        np.full((4, 2), 0.5))
        p = FactoredInput.independent(Dist.uniform(2), Dist.point_mass(2, 0), mac)
        assert mutual_information(p.joint, {AX_X}, {AX_T}) == pytest.approx(1.0, abs=1e-12)

    def test_product_independence(self):
        rng = np.random.default_rng(0)
        p = FactoredInput.independent(Dist.from_mass(rng.dirichlet([1, 1])),
                                      Dist.from_mass(rng.dirichlet([1, 1])),
                                      random_mac(rng))
        assert mutual_information(p.joint, {AX_X}, {AX_Y}) == pytest.approx(0.0, abs=1e-12)

    def test_worked_example_value(self):
        j = example62_input().joint
        assert mutual_information(j, {AX_T}, {AX_Y}, {AX_X}) == pytest.approx(0.2847, abs=1e-3)

    def test_overlap_rejected(self):
        j = example62_input().joint
        with pytest.raises(ValidationError):
            mutual_information(j, {AX_T}, {AX_T, AX_X})

    def test_chain_rule(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            j = random_factored(rng, random_mac(rng)).joint
            lhs = mutual_information(j, {AX_Z}, {AX_V1, AX_V2})
            rhs = (mutual_information(j, {AX_Z}, {AX_V1})
                   + mutual_information(j, {AX_Z}, {AX_V2}, {AX_V1}))
            assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_nonnegativity(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            j = random_factored(rng, random_mac(rng)).joint
            assert mutual_information(j, {AX_T}, {AX_V1}, {AX_V2, AX_U}) >= -1e-12


class TestJointFromFactors:
    def test_deterministic_chain_is_point_mass(self):
        mac = WiretapMAC.from_marginals(np.array([[1.0, 0], [0, 1], [0, 1], [1, 0]]),
                                        np.array([[1.0, 0], [1, 0], [1, 0], [1, 0]]))
        p = FactoredInput.coupled(Dist.point_mass(2, 1), mac)
        mass = p.joint.mass
        assert np.count_nonzero(mass) == 1
        assert mass.max() == pytest.approx(1.0, abs=1e-15)

    def test_trivial_u_gives_independent_v(self):
        rng = np.random.default_rng(3)
        p = random_factored(rng, random_mac(rng), u=1)
        assert mutual_information(p.joint, {AX_V1}, {AX_V2}) == pytest.approx(0.0, abs=1e-12)

    def test_worked_example_leakage(self):
        j = example62_input().joint
        assert mutual_information(j, {AX_Z}, {AX_V1, AX_V2}) == pytest.approx(0.2147, abs=1e-3)

    def test_markov_structure(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            j = random_factored(rng, random_mac(rng)).joint
            assert mutual_information(j, {AX_V1}, {AX_V2}, {AX_U}) <= 1e-10
            assert mutual_information(j, {AX_T, AX_Z}, {AX_U, AX_V1, AX_V2},
                                      {AX_X, AX_Y}) <= 1e-10

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(5)
        mac = random_mac(rng)
        with pytest.raises(ValidationError):
            joint_from_factors(Dist.uniform(2),
                               Channel.from_matrix(rng.dirichlet([1, 1], size=3)),
                               Channel.identity(2), Channel.identity(2),
                               Channel.identity(2), mac)


class TestVariationDistance:
    def test_disjoint_point_masses(self):
        assert variation_distance(Dist.point_mass(2, 0), Dist.point_mass(2, 1)) == 2.0

    def test_identity(self):
        d = Dist.from_mass([0.3, 0.7])
        assert variation_distance(d, d) == 0.0

    def test_matches_direct_sum(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            m1 = rng.dirichlet(np.ones(5))
            m2 = rng.dirichlet(np.ones(5))
            direct = sum(abs(float(m1[i]) - float(m2[i])) for i in range(5))
            assert variation_distance(m1, m2) == pytest.approx(direct, abs=1e-15)

    def test_subnormalized_accepted(self):
        assert variation_distance(np.array([0.25, 0.25]), np.zeros(2)) == 0.5

    def test_triangle_inequality(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            m1, m2, m3 = (rng.dirichlet(np.ones(4)) for _ in range(3))
            assert (variation_distance(m1, m3)
                    <= variation_distance(m1, m2) + variation_distance(m2, m3) + 1e-12)


class TestNFold:
    def test_single_use_identity(self):
        ch = Channel.from_matrix([[0.9, 0.1], [0.2, 0.8]])
        assert np.allclose(n_fold(ch, 1).matrix, ch.matrix)

    def test_bsc_product_rule(self):
        eps = 0.1
        bsc = Channel.from_matrix([[1 - eps, eps], [eps, 1 - eps]])
        ext = n_fold(bsc, 2)
        assert ext.matrix[0, 0] == pytest.approx((1 - eps) ** 2, abs=1e-15)

    def test_rows_normalized(self):
        rng = np.random.default_rng(8)
        ch = Channel.from_matrix(rng.dirichlet(np.ones(3), size=2))
        ext = n_fold(ch, 3)
        assert np.allclose(ext.matrix.sum(axis=1), 1.0, atol=1e-12)

    def test_budget_guard(self):
        ch = Channel.from_matrix(np.full((8, 8), 1 / 8))
        with pytest.raises(ResourceBudgetError):
            n_fold(ch, 5)


class TestTypicality:
    def test_exact_type_sequence(self):
        d = Dist.from_mass([0.5, 0.5])
        seq = np.array([0, 1] * 10)
        assert typical_membership(d, seq, 0.05)

    def test_all_zeros_not_typical(self):
        d = Dist.uniform(2)
        assert not typical_membership(d, np.zeros(20, dtype=int), 0.1)

    def test_matches_exhaustive_counting(self):
        # independent oracle: raw python loops over symbol counts
        rng = np.random.default_rng(9)
        for n in (4, 7, 10):
            d = Dist.from_mass(rng.dirichlet([2, 2]))
            delta = rng.uniform(0.05, 0.4)
            for seq in all_sequences(2, n):
                counts = [0, 0]
                for s in seq:
                    counts[s] += 1
                expect = all(abs(counts[a] / n - d.mass[a]) <= delta for a in (0, 1))
                assert typical_membership(d, seq, delta) == expect

    def test_conditional_matches_counting(self):
        rng = np.random.default_rng(10)
        ch = Channel.from_matrix(rng.dirichlet([2, 2], size=2))
        n = 8
        ctx = rng.integers(0, 2, size=n)
        delta = 0.2
        for seq in all_sequences(2, n):
            ok = True
            for b in range(2):
                nb = int((ctx == b).sum())
                for aa in range(2):
                    nab = int(((ctx == b) & (seq == aa)).sum())
                    if abs(nab / n - ch.matrix[b, aa] * nb / n) > delta:
                        ok = False
            assert typical_membership(ch, seq, delta, ctx) == ok

    def test_length_mismatch(self):
        ch = Channel.identity(2)
        with pytest.raises(ValidationError):
            typical_membership(ch, np.zeros(4, dtype=int), 0.1, np.zeros(3, dtype=int))


class TestTruncatedTypical:
    def test_deterministic_point_mass(self):
        d = Dist.point_mass(2, 1)
        sd = truncated_typical_dist(d, 5, 0.3)
        assert sd.prob([1, 1, 1, 1, 1]) == pytest.approx(1.0, abs=1e-15)

    def test_large_delta_equals_product(self):
        d = Dist.uniform(2)
        sd = truncated_typical_dist(d, 4, 0.9)
        assert np.allclose(sd.mass, 1 / 16, atol=1e-15)

    def test_total_mass_one(self):
        rng = np.random.default_rng(11)
        for n in (6, 9, 12):
            d = Dist.from_mass(rng.dirichlet([3, 2]))
            sd = truncated_typical_dist(d, n, 0.2)
            assert float(sd.mass.sum()) == pytest.approx(1.0, abs=1e-10)

    def test_empty_typical_set(self):
        # n = 5, delta = 0.05 under fair coin: N(0) would have to sit in
        # [2.25, 2.75], which holds no integer
        with pytest.raises(DegenerateTypicalityError):
            truncated_typical_dist(Dist.uniform(2), 5, 0.05)

    def test_conditional_support(self):
        rng = np.random.default_rng(12)
        ch = Channel.from_matrix(rng.dirichlet([2, 2], size=2))
        ctx = np.array([0, 1, 0, 1, 0, 1])
        sd = truncated_typical_dist(ch, 6, 0.25, ctx)
        for seq in sd.support():
            assert typical_membership(ch, seq, 0.25, ctx)

    def test_rejection_sampler_matches(self):
        rng = np.random.default_rng(13)
        d = Dist.from_mass([0.6, 0.4])
        seq = sample_typical(d, 30, 0.15, rng)
        assert typical_membership(d, seq, 0.15)


class TestSerialization:
    def test_channel_json_roundtrip(self):
        rng = np.random.default_rng(14)
        mac = random_mac(rng, t=3, z=6)
        again = WiretapMAC.from_json(mac.to_json())
        assert np.allclose(again.channel.matrix, mac.channel.matrix, atol=0)

    def test_marginals(self):
        mac = WiretapMAC.from_marginals(WB_62, WE_62)
        assert np.allclose(mac.bob.matrix, WB_62, atol=1e-12)
        assert np.allclose(mac.eve.matrix, WE_62, atol=1e-12)

    def test_sequence_prob(self):
        d = Dist.from_mass([0.75, 0.25])
        assert sequence_prob(d, [0, 0, 1]) == pytest.approx(0.75 * 0.75 * 0.25)


class TestBudgets:
    def test_factored_joint_budget(self):
        big = 50
        mac = WiretapMAC.from_rows(np.full((big * big, 4), 0.25), big, big, 2, 2)
        uniform = Dist.uniform(big)
        ident = Channel.identity(big)
        with pytest.raises(ResourceBudgetError):
            joint_from_factors(uniform, ident, ident, ident, ident, mac)
