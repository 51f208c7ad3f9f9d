import math

import numpy as np
import pytest

from _support import constant_eve_mac, random_mac
from wtmac.codesim import (
    CodeChain,
    WiretapCode,
    average_error,
    build_wiretap_code,
    chernoff_bound,
    concentration_report,
    eavesdropper_conditionals,
    eve_map_error,
    exact_leakage,
    joint_typicality_decode,
    leakage_chain_check,
    mac_average_error,
    sample_codebook_family,
    secrecy_from_variation,
    simulate_report,
)
from wtmac.errors import (
    BlocklengthTooSmallError,
    PreconditionError,
)
from wtmac.probkit import (
    Channel,
    Dist,
    WiretapMAC,
    all_sequences,
    typical_membership,
)
from wtmac.regions import CaseLabel


def chain_for(mac, p_u=None, x_given_u=None, y_given_u=None):
    size = mac.x_alphabet.size
    return CodeChain(p_u or Dist.uniform(2),
                     x_given_u or Channel.identity(size),
                     y_given_u or Channel.identity(size), mac)


def noiseless_bob_mac(eve_rows=None):
    bob = np.eye(4)
    eve = np.full((4, 2), 0.5) if eve_rows is None else eve_rows
    return WiretapMAC.from_marginals(bob, eve)


def coupled_chain(mac, p0=0.5):
    return CodeChain(Dist.from_mass([p0, 1 - p0]), Channel.identity(2),
                     Channel.identity(2), mac)


class TestSampling:
    def test_deterministic_chain_constant(self):
        mac = noiseless_bob_mac()
        chain = CodeChain(Dist.point_mass(2, 1), Channel.identity(2),
                          Channel.identity(2), mac)
        fam = sample_codebook_family(chain, 6, (2, 1, 1), 0.2, seed=0)
        assert np.all(fam.u == 1) and np.all(fam.x == 1) and np.all(fam.y == 1)

    def test_all_sequences_typical(self):
        rng_seed = 3
        mac = random_mac(np.random.default_rng(1), bob_quality=0.5)
        chain = CodeChain(Dist.from_mass([0.6, 0.4]),
                          Channel.from_matrix([[0.8, 0.2], [0.3, 0.7]]),
                          Channel.from_matrix([[0.55, 0.45], [0.1, 0.9]]), mac)
        fam = sample_codebook_family(chain, 10, (2, 3, 2), 0.25, seed=rng_seed)
        for a in range(2):
            assert typical_membership(chain.p_u, fam.u[0, a], 0.25)
            for b in range(3):
                assert typical_membership(chain.x_given_u, fam.x[0, a, 0, b],
                                          0.25, fam.u[0, a])
            for c in range(2):
                assert typical_membership(chain.y_given_u, fam.y[0, a, 0, c],
                                          0.25, fam.u[0, a])

    def test_empirical_frequencies(self):
        mac = noiseless_bob_mac()
        chain = coupled_chain(mac, 0.5)
        fam = sample_codebook_family(chain, 50, (8, 1, 1), 0.1, seed=5)
        for a in range(8):
            freq = np.bincount(fam.u[0, a], minlength=2) / 50
            assert np.all(np.abs(freq - 0.5) <= 0.1)

    def test_seeded_reproducibility(self):
        mac = noiseless_bob_mac()
        chain = coupled_chain(mac)
        f1 = sample_codebook_family(chain, 8, (2, 2, 1), 0.3, seed=9)
        f2 = sample_codebook_family(chain, 8, (2, 2, 1), 0.3, seed=9)
        assert np.array_equal(f1.x, f2.x) and np.array_equal(f1.u, f2.u)

    def test_flat_csv_export(self):
        mac = noiseless_bob_mac()
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 4, (2, 2, 1), 0.3, seed=10,
                                     k_sizes=(1, 2, 1))
        csv = fam.to_csv()
        lines = csv.splitlines()
        assert lines[0] == "kind,k0,l0,k1_or_k2,l1_or_l2,sequence"
        # 2 shared + 2*(2*2) private-x + 2*1 private-y rows
        assert len(lines) == 1 + 2 + 8 + 2
        first_u = lines[1].split(",")
        assert first_u[0] == "u"
        assert first_u[-1] == " ".join(map(str, fam.u[0, 0]))


class TestBuild:
    def test_case3_constant_eve_window(self):
        rng = np.random.default_rng(2)
        mac = constant_eve_mac(rng, t=4)
        chain = chain_for(mac)
        slack = 0.25
        code = build_wiretap_code(chain, CaseLabel.CASE3, (0.0, 0.0, 0.0),
                                  hc=2.0, n=4, delta=0.3, slack=slack, seed=1)
        l0 = code.families[0].l_sizes[0]
        # leakage-free channel: the window floor is pure slack
        assert math.log2(l0) >= 4 * 2 * slack - 1e-9
        assert math.log2(l0) <= 4 * 3 * slack + 1e-9

    def test_case0_has_no_common_index(self):
        mac = noiseless_bob_mac()
        chain = chain_for(mac, p_u=Dist.uniform(2),
                          x_given_u=Channel.constant(2, Dist.uniform(2)),
                          y_given_u=Channel.constant(2, Dist.uniform(2)))
        code = build_wiretap_code(chain, CaseLabel.CASE0, (0.0, 0.1, 0.1),
                                  hc=0.0, n=4, delta=0.4, slack=0.3, seed=2,
                                  alpha=1.0)
        assert code.k_sizes[0] == 1
        assert code.families[0].l_sizes[0] == 1

    def test_case0_rejects_common_rate(self):
        mac = noiseless_bob_mac()
        chain = chain_for(mac)
        with pytest.raises(PreconditionError):
            build_wiretap_code(chain, CaseLabel.CASE0, (0.1, 0.0, 0.0),
                               hc=0.0, n=4, delta=0.3)

    def test_case1_randomness_within_bound(self):
        rng = np.random.default_rng(4)
        built = 0
        tries = 0
        while built < 3 and tries < 60:
            tries += 1
            mac = random_mac(rng, bob_quality=0.8)
            chain = CodeChain(Dist.from_mass(rng.dirichlet([2, 2])),
                              Channel.from_matrix(rng.dirichlet([2, 2], size=2)),
                              Channel.from_matrix(rng.dirichlet([2, 2], size=2)),
                              mac)
            prof = chain.profile
            if (prof.iz_v1_u > prof.it_v1_v2u or prof.iz_v2_u > prof.it_v2_v1u
                    or prof.iz_v12_u > prof.it_v1_v2u + prof.it_v2_v1u
                    or prof.iz_v12 > prof.it_v12):
                continue
            hc = prof.iz_u + 3.0
            try:
                code = build_wiretap_code(chain, CaseLabel.CASE1,
                                          (0.0, 0.0, 0.0), hc=hc, n=4,
                                          delta=0.35, slack=0.3, seed=tries,
                                          alpha=1.0)
            except (BlocklengthTooSmallError, PreconditionError):
                continue
            built += 1
            assert code.common_randomness_rate <= hc + 1e-12
        assert built >= 1

    def test_window_infeasible_reports_required_n(self):
        rng = np.random.default_rng(5)
        mac = constant_eve_mac(rng)
        chain = chain_for(mac)
        with pytest.raises(BlocklengthTooSmallError) as info:
            # slack 0.05: the pure-slack window needs roughly n >= 10
            build_wiretap_code(chain, CaseLabel.CASE3, (0.0, 0.0, 0.0),
                               hc=2.0, n=3, delta=0.3, slack=0.05)
        assert info.value.required_n is None or info.value.required_n > 3

    def test_case2_shapes_follow_alpha(self):
        rng = np.random.default_rng(7)
        mac = constant_eve_mac(rng)
        chain = chain_for(mac,
                          x_given_u=Channel.from_matrix([[0.8, 0.2], [0.3, 0.7]]),
                          y_given_u=Channel.from_matrix([[0.7, 0.3], [0.2, 0.8]]))
        only_g = build_wiretap_code(chain, CaseLabel.CASE2, (0, 0, 0), hc=1.0,
                                    n=4, delta=0.4, slack=0.25, seed=1,
                                    alpha=1.0)
        assert only_g.families[0].l_sizes[1] > 1
        assert only_g.families[0].l_sizes[2] == 1
        only_gp = build_wiretap_code(chain, CaseLabel.CASE2, (0, 0, 0), hc=1.0,
                                     n=4, delta=0.4, slack=0.25, seed=2,
                                     alpha=0.0)
        assert only_gp.families[0].l_sizes[1] == 1
        assert only_gp.families[0].l_sizes[2] > 1
        shared = build_wiretap_code(chain, CaseLabel.CASE2, (0, 0, 0), hc=1.0,
                                    n=4, n2=4, delta=0.4, slack=0.25, seed=3,
                                    alpha=0.5)
        assert shared.families[0].l_sizes[2] == 1
        assert shared.families[1].l_sizes[1] == 1

    def test_time_sharing_builds_two_families(self):
        mac = noiseless_bob_mac()
        chain = chain_for(mac, p_u=Dist.uniform(2),
                          x_given_u=Channel.constant(2, Dist.uniform(2)),
                          y_given_u=Channel.constant(2, Dist.uniform(2)))
        code = build_wiretap_code(chain, CaseLabel.CASE0, (0.0, 0.05, 0.05),
                                  hc=0.0, n=3, delta=0.4, slack=0.3, seed=3,
                                  alpha=0.5, n2=3)
        assert len(code.families) == 2
        assert code.n_total == 6

    def test_rate_targets_validated(self):
        rng = np.random.default_rng(6)
        mac = constant_eve_mac(rng)
        chain = chain_for(mac)
        with pytest.raises(PreconditionError):
            build_wiretap_code(chain, CaseLabel.CASE3, (9.0, 9.0, 9.0),
                               hc=3.0, n=4, delta=0.3, slack=0.25)


class TestDecode:
    @staticmethod
    def separated_family(mac, k0=1, l0=4):
        # balanced length-8 words with one-sided disagreement counts of at
        # least 2, so delta = 0.15 separates every pair
        words = np.array([
            [0, 0, 0, 0, 1, 1, 1, 1],
            [1, 1, 1, 1, 0, 0, 0, 0],
            [0, 0, 1, 1, 0, 0, 1, 1],
            [1, 1, 0, 0, 1, 1, 0, 0],
        ], dtype=np.int64)[:k0 * l0].reshape(k0, l0, 8)
        chain = coupled_chain(mac)
        from wtmac.codesim import CodebookFamily

        return CodebookFamily(chain, 8, (k0, 1, 1), (l0, 1, 1), 0.15, 0,
                              words, words[:, :, None, None, :],
                              words[:, :, None, None, :])

    def test_noiseless_separated_always_correct(self):
        mac = noiseless_bob_mac()
        fam = self.separated_family(mac)
        code = WiretapCode(CaseLabel.CASE3, 2.0, 0.15, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        for a in range(4):
            x = fam.x[0, a, 0, 0]
            y = fam.y[0, a, 0, 0]
            t = 2 * x + y  # noiseless pair output
            out = joint_typicality_decode(code, 0.15, t)
            assert out == ((0, 0, 0), ((a, 0, 0),))

    def test_duplicate_codewords_tie_to_failure(self):
        mac = noiseless_bob_mac()
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 8, (2, 1, 1), 0.25, seed=12)
        dup = CodeChain(chain.p_u, chain.x_given_u, chain.y_given_u, mac)
        u = fam.u.copy()
        u[0, 1] = u[0, 0]
        x = fam.x.copy()
        x[0, 1] = x[0, 0]
        y = fam.y.copy()
        y[0, 1] = y[0, 0]
        from wtmac.codesim import CodebookFamily

        forced = CodebookFamily(dup, 8, (1, 1, 1), (2, 1, 1), 0.25, 12, u, x, y)
        code = WiretapCode(CaseLabel.CASE3, 2.0, 0.25, 0.25, None, (forced,),
                           (0.0, 0.0, 0.0))
        t = 2 * x[0, 0, 0, 0] + y[0, 0, 0, 0]
        assert joint_typicality_decode(code, 0.25, t) is None

    def test_matches_bruteforce_enumeration(self):
        # independent oracle: raw-loop typicality over every candidate tuple
        rng = np.random.default_rng(13)
        mac = random_mac(rng, bob_quality=0.6)
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 5, (2, 2, 1), 0.4, seed=14)
        code = WiretapCode(CaseLabel.CASE2, 2.0, 0.4, 0.25, 0.5, (fam,),
                           (0.0, 0.0, 0.0))
        law = chain.decode_law
        sizes = [2, 2, 2, 2]
        delta = 0.4

        def oracle(t_seq):
            hits = []
            for k in code.messages():
                for ls in [((a, b, c),) for a in range(2) for b in range(2)
                           for c in range(1)]:
                    useq, xseq, yseq = fam.codeword(k, ls[0])
                    counts = {}
                    n = len(t_seq)
                    for i in range(n):
                        key = (useq[i], xseq[i], yseq[i], t_seq[i])
                        counts[key] = counts.get(key, 0) + 1
                    ok = True
                    for u_ in range(2):
                        for x_ in range(2):
                            for y_ in range(2):
                                for t_ in range(2):
                                    freq = counts.get((u_, x_, y_, t_), 0) / n
                                    idx = ((u_ * 2 + x_) * 2 + y_) * 2 + t_
                                    if abs(freq - law.mass[idx]) > delta:
                                        ok = False
                    if ok:
                        hits.append((k, ls))
            return hits[0] if len(hits) == 1 else None

        for t_seq in all_sequences(2, 5):
            assert joint_typicality_decode(code, delta, t_seq) == oracle(t_seq)


class TestAverageError:
    def build_tiny_code(self, seed=21, l0=3):
        mac = noiseless_bob_mac()
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 6, (l0, 1, 1), 0.25, seed=seed,
                                     k_sizes=(2, 1, 1))
        return WiretapCode(CaseLabel.CASE3, 2.0, 0.25, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))

    def test_noiseless_separated_zero_error(self):
        mac = noiseless_bob_mac()
        fam = TestDecode.separated_family(mac, k0=2, l0=2)
        code = WiretapCode(CaseLabel.CASE3, 2.0, 0.15, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        est = average_error(code, mode="exact")
        assert est.tuple_error <= 1e-12
        assert est.message_error <= 1e-12

    def test_constant_bob_blind_guessing(self):
        rng = np.random.default_rng(22)
        bob = np.tile(rng.dirichlet([1, 1]), (4, 1))
        eve = rng.dirichlet(np.ones(2), size=4)
        mac = WiretapMAC.from_marginals(bob, eve)
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 4, (1, 1, 1), 0.3, seed=23,
                                     k_sizes=(3, 1, 1))
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        est = average_error(code, mode="exact")
        assert est.message_error >= 1 - 1 / 3 - 1e-9

    def test_exact_matches_mc(self):
        rng = np.random.default_rng(24)
        mac = random_mac(rng, bob_quality=0.9)
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 6, (2, 1, 1), 0.3, seed=25,
                                     k_sizes=(2, 1, 1))
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        exact = average_error(code, mode="exact")
        mc = average_error(code, mode="mc", trials=1500, seed=26)
        lo, hi = mc.wilson_interval
        assert lo - 1e-9 <= exact.tuple_error <= hi + 1e-9

    def test_uniform_mixing_identity(self):
        code = self.build_tiny_code(seed=27, l0=4)
        est = average_error(code, mode="exact")
        assert est.tuple_error == pytest.approx(mac_average_error(code),
                                                abs=1e-12)


class TestLeakage:
    def test_constant_eve_zero(self):
        rng = np.random.default_rng(31)
        mac = constant_eve_mac(rng)
        chain = chain_for(mac)
        fam = sample_codebook_family(chain, 4, (2, 1, 1), 0.3, seed=32,
                                     k_sizes=(2, 1, 1))
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        assert exact_leakage(code) <= 1e-12

    def test_single_message_zero(self):
        rng = np.random.default_rng(33)
        mac = random_mac(rng)
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 4, (2, 1, 1), 0.3, seed=34)
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        assert exact_leakage(code) == pytest.approx(0.0, abs=1e-12)

    def test_matches_joint_mutual_information(self):
        # independent oracle: assemble the (message, output) joint and reuse
        # the generic mutual-information path
        rng = np.random.default_rng(35)
        mac = random_mac(rng)
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 5, (2, 1, 1), 0.3, seed=36,
                                     k_sizes=(2, 1, 1))
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        cond = eavesdropper_conditionals(code)
        from wtmac.probkit import Alphabet, JointDist, mutual_information

        joint = JointDist((Alphabet(cond.shape[0]), Alphabet(cond.shape[1])),
                          cond / cond.shape[0])
        oracle = mutual_information(joint, {0}, {1})
        assert exact_leakage(code) == pytest.approx(oracle, abs=1e-9)

    def test_chain_bound_holds(self):
        rng = np.random.default_rng(37)
        held = 0
        for trial in range(12):
            mac = random_mac(rng, bob_quality=0.5)
            chain = coupled_chain(mac)
            fam = sample_codebook_family(chain, 5, (4, 1, 1), 0.35,
                                         seed=38 + trial, k_sizes=(2, 1, 1))
            code = WiretapCode(CaseLabel.CASE3, 1.5, 0.35, 0.25, None, (fam,),
                               (0.0, 0.0, 0.0))
            rep = leakage_chain_check(code)
            if rep.premise_holds:
                held += 1
                assert rep.holds, rep
        assert held >= 3

    def test_variation_bound_formula(self):
        assert secrecy_from_variation(0.5, 2, 1) == pytest.approx(1.0, abs=1e-15)
        with pytest.raises(PreconditionError):
            secrecy_from_variation(0.6, 2, 4)
        # continuity toward zero
        assert secrecy_from_variation(1e-9, 2, 4) < 1e-7


class TestEveMapError:
    def test_constant_eve_blind_guessing(self):
        rng = np.random.default_rng(41)
        mac = constant_eve_mac(rng)
        chain = chain_for(mac)
        fam = sample_codebook_family(chain, 4, (1, 1, 1), 0.3, seed=42,
                                     k_sizes=(4, 1, 1))
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        assert eve_map_error(code) == pytest.approx(1 - 1 / 4, abs=1e-12)

    def test_noiseless_eve_decodes(self):
        eve = np.eye(4)
        bob = np.full((4, 3), 1 / 3)
        mac = WiretapMAC.from_marginals(bob, eve)
        fam = TestDecode.separated_family(mac, k0=2, l0=1)
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.15, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        assert eve_map_error(code) <= 1e-12

    def test_fano_consistency(self):
        rng = np.random.default_rng(44)
        for trial in range(8):
            mac = random_mac(rng, bob_quality=0.5)
            chain = coupled_chain(mac)
            fam = sample_codebook_family(chain, 5, (3, 1, 1), 0.35,
                                         seed=45 + trial, k_sizes=(2, 1, 1))
            code = WiretapCode(CaseLabel.CASE3, 1.5, 0.35, 0.25, None, (fam,),
                               (0.0, 0.0, 0.0))
            leak = exact_leakage(code)
            err = eve_map_error(code)
            k = code.message_count
            assert err >= 1 - (leak + 1) / math.log2(k) - 1e-9


class TestChernoff:
    def test_zero_count_vacuous(self):
        assert chernoff_bound(0, 0.25, 0.5, 1.0) == 1.0

    def test_direct_evaluation(self):
        val = chernoff_bound(64, 0.25, 1.0, 1.0)
        assert val == pytest.approx(math.exp(-64 * 0.0625 / (2 * math.log(2))),
                                    abs=1e-15)

    def test_parameter_validation(self):
        with pytest.raises(PreconditionError):
            chernoff_bound(8, 0.6, 0.5, 1.0)
        with pytest.raises(PreconditionError):
            chernoff_bound(8, 0.25, 2.0, 1.0)

    def test_empirical_bernoulli(self):
        rng = np.random.default_rng(46)
        for count, eps in ((32, 0.25), (128, 0.1)):
            mu = 0.5
            batches = rng.random((4000, count)) < mu
            means = batches.mean(axis=1)
            upper = float(np.mean(means > (1 + eps) * mu))
            lower = float(np.mean(means < (1 - eps) * mu))
            bound = chernoff_bound(count, eps, mu, 1.0)
            sigma = 3 * math.sqrt(bound * (1 - bound) / 4000 + 1e-12)
            assert upper <= bound + sigma
            assert lower <= bound + sigma


class TestConcentration:
    def chain(self, seed=51):
        rng = np.random.default_rng(seed)
        mac = random_mac(rng, bob_quality=0.5)
        return CodeChain(Dist.from_mass([0.55, 0.45]),
                         Channel.from_matrix([[0.8, 0.2], [0.25, 0.75]]),
                         Channel.from_matrix([[0.7, 0.3], [0.2, 0.8]]), mac)

    def test_vacuous_regime_flagged(self):
        chain = self.chain()
        fam = sample_codebook_family(chain, 4, (2, 2, 1), 0.4, seed=52)
        rep = concentration_report(fam, eps=0.45, resamples=20, seed=53)
        assert any(c.vacuous for c in rep.checks)
        assert rep.passed

    def test_constant_eve_mean_checks_never_fail(self):
        rng = np.random.default_rng(54)
        mac = constant_eve_mac(rng)
        chain = CodeChain(Dist.uniform(2),
                          Channel.from_matrix([[0.8, 0.2], [0.3, 0.7]]),
                          Channel.from_matrix([[0.6, 0.4], [0.25, 0.75]]), mac)
        fam = sample_codebook_family(chain, 5, (2, 3, 1), 0.35, seed=55)
        rep = concentration_report(fam, eps=0.3, resamples=40, seed=56)
        for check in rep.checks:
            if "corridor" in check.name:
                assert check.empirical == pytest.approx(0.0, abs=1e-12)

    def test_case3_shape(self):
        chain = self.chain(seed=57)
        fam = sample_codebook_family(chain, 5, (6, 1, 1), 0.35, seed=58)
        rep = concentration_report(fam, eps=0.3, resamples=60, seed=59)
        names = [c.name for c in rep.checks]
        assert any("typical-fraction" in n for n in names)
        assert any("family-mean" in n for n in names)
        assert rep.passed, [c.to_json_dict() for c in rep.checks if c.exceeded]

    def test_case1_shape_runs_all_lemmas(self):
        chain = self.chain(seed=60)
        fam = sample_codebook_family(chain, 4, (2, 2, 2), 0.45, seed=61)
        rep = concentration_report(fam, eps=0.35, resamples=25, seed=62)
        assert len(rep.checks) == 4
        assert rep.passed, [c.to_json_dict() for c in rep.checks if c.exceeded]

    def test_report_json(self):
        chain = self.chain(seed=63)
        fam = sample_codebook_family(chain, 4, (4, 1, 1), 0.4, seed=64)
        obj = concentration_report(fam, eps=0.3, resamples=15,
                                   seed=65).to_json_dict()
        assert obj["params"]["n"] == 4 and isinstance(obj["checks"], list)


class TestSimReport:
    def test_full_report(self):
        rng = np.random.default_rng(71)
        mac = random_mac(rng, bob_quality=0.8)
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 5, (2, 1, 1), 0.3, seed=72,
                                     k_sizes=(2, 1, 1))
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        rep = simulate_report(code)
        assert 0.0 <= rep.tuple_error <= 1.0
        assert rep.leakage_bits >= -1e-12
        assert rep.message_count == 2
        assert rep.to_json_dict()["n_total"] == 5

    def test_determinism(self):
        rng = np.random.default_rng(73)
        mac = random_mac(rng, bob_quality=0.8)
        chain = coupled_chain(mac)
        fam1 = sample_codebook_family(chain, 5, (2, 1, 1), 0.3, seed=74,
                                      k_sizes=(2, 1, 1))
        fam2 = sample_codebook_family(chain, 5, (2, 1, 1), 0.3, seed=74,
                                      k_sizes=(2, 1, 1))
        c1 = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam1,),
                         (0.0, 0.0, 0.0))
        c2 = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam2,),
                         (0.0, 0.0, 0.0))
        assert simulate_report(c1) == simulate_report(c2)


class TestBudgets:
    def test_exact_error_budget(self):
        rng = np.random.default_rng(81)
        mac = random_mac(rng, t=4)
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 12, (8, 2, 2), 0.45, seed=82)
        code = WiretapCode(CaseLabel.CASE3, 3.0, 0.45, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        from wtmac.errors import ResourceBudgetError

        with pytest.raises(ResourceBudgetError):
            average_error(code, mode="exact")

    def test_concentration_budget_partial_report(self):
        rng = np.random.default_rng(83)
        mac = random_mac(rng, z=6)
        chain = coupled_chain(mac)
        fam = sample_codebook_family(chain, 10, (1, 2, 1), 0.45, seed=84)
        rep = concentration_report(fam, eps=0.3, resamples=2, seed=85)
        assert rep.partial and not rep.checks
        assert any("budget" in n for n in rep.notes)


class TestTimeSharing:
    def two_family_code(self, seed=91):
        mac = noiseless_bob_mac()
        chain = coupled_chain(mac)
        fam1 = sample_codebook_family(chain, 4, (2, 1, 1), 0.3, seed=seed,
                                      k_sizes=(2, 1, 1))
        fam2 = sample_codebook_family(chain, 3, (1, 2, 1), 0.4, seed=seed + 1,
                                      k_sizes=(2, 1, 1))
        return WiretapCode(CaseLabel.CASE1, 2.0, 0.4, 0.25, 0.57,
                           (fam1, fam2), (0.0, 0.0, 0.0))

    def test_concatenated_codewords(self):
        code = self.two_family_code()
        assert code.n_total == 7
        (k, ls) = next(code.index_tuples())
        xseq, yseq = code.codeword_pair(k, ls)
        assert xseq.shape == (7,) and yseq.shape == (7,)
        assert np.array_equal(xseq[:4], code.families[0].codeword(k, ls[0])[1])
        assert np.array_equal(xseq[4:], code.families[1].codeword(k, ls[1])[1])

    def test_decode_requires_both_halves(self):
        code = self.two_family_code()
        k, ls = (0, 0, 0), ((0, 0, 0), (0, 0, 0))
        xseq, yseq = code.codeword_pair(k, ls)
        t = 2 * xseq + yseq  # noiseless pair output
        out = joint_typicality_decode(code, 0.4, t)
        if out is not None:
            assert out[0] == k
        # corrupt only the second half beyond the typicality slack
        t_bad = t.copy()
        t_bad[4:] = (t_bad[4:] + 2) % 4
        bad = joint_typicality_decode(code, 0.05, t_bad)
        assert bad is None or bad != (k, ls)

    def test_exact_error_and_leakage_run(self):
        code = self.two_family_code(seed=93)
        est = average_error(code, mode="exact")
        assert 0.0 <= est.tuple_error <= 1.0
        assert est.message_error <= est.tuple_error + 1e-12
        assert est.tuple_error == pytest.approx(mac_average_error(code),
                                                abs=1e-12)
        leak = exact_leakage(code)
        assert -1e-12 <= leak <= 1.0 + 1e-12  # one message bit

    def test_randomness_rate_sums_over_families(self):
        code = self.two_family_code()
        assert code.common_randomness_rate == pytest.approx(
            (math.log2(2) + math.log2(1)) / 7, abs=1e-15)


class TestBuiltCodeEndToEnd:
    def test_case1_build_and_simulate(self):
        # a full Case-1 build (shared randomness plus both private
        # randomizations) pushed through the complete audit
        rng = np.random.default_rng(95)
        mac = constant_eve_mac(rng, t=4)
        chain = chain_for(mac,
                          x_given_u=Channel.from_matrix([[0.85, 0.15],
                                                         [0.2, 0.8]]),
                          y_given_u=Channel.from_matrix([[0.75, 0.25],
                                                         [0.15, 0.85]]))
        code = build_wiretap_code(chain, CaseLabel.CASE1, (0.0, 0.0, 0.0),
                                  hc=2.0, n=3, delta=0.45, slack=0.3, seed=96,
                                  alpha=1.0)
        l0, l1, l2 = code.families[0].l_sizes
        assert l0 > 1 and l1 > 1 and l2 > 1
        rep = simulate_report(code)
        assert rep.leakage_bits <= 1e-12  # blind eavesdropper
        assert 0.0 <= rep.tuple_error <= 1.0
        assert rep.common_randomness_rate <= 2.0

    def test_mc_mode_from_cli_surface(self):
        rng = np.random.default_rng(97)
        mac = constant_eve_mac(rng)
        chain = chain_for(mac)
        fam = sample_codebook_family(chain, 4, (2, 1, 1), 0.3, seed=98,
                                     k_sizes=(2, 1, 1))
        code = WiretapCode(CaseLabel.CASE3, 1.0, 0.3, 0.25, None, (fam,),
                           (0.0, 0.0, 0.0))
        rep = simulate_report(code, mode="mc", trials=400, seed=5)
        assert rep.error_mode == "mc" and rep.wilson_interval is not None
