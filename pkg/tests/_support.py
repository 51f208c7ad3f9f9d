"""Shared generators for the test suite: channels, inputs, sampled profiles."""

import numpy as np

from wtmac.probkit import Channel, Dist, FactoredInput, WiretapMAC
from wtmac.regions import CaseLabel, classify_profile, info_profile

WB_62 = np.array([[0.6178, 0.3822], [0.0624, 0.9376],
                  [0.9350, 0.0650], [0.2353, 0.7647]])
WE_62 = np.array([[0.0729, 0.9271], [0.7264, 0.2736],
                  [0.3662, 0.6338], [0.4643, 0.5357]])


def example62_input():
    mac = WiretapMAC.from_marginals(WB_62, WE_62)
    return FactoredInput.independent(Dist.from_mass([0.6933, 0.3067]),
                                     Dist.from_mass([0.3151, 0.6849]), mac)


def random_mac(rng, x=2, y=2, t=2, z=2, bob_quality=0.0):
    """Random MAC; bob_quality > 0 mixes Bob's marginal toward a clean channel."""
    rows_b = rng.dirichlet(np.ones(t), size=x * y)
    if bob_quality > 0:
        clean = np.eye(t)[rng.integers(0, t, size=x * y)]
        rows_b = (1 - bob_quality) * rows_b + bob_quality * clean
    rows_e = rng.dirichlet(np.ones(z), size=x * y)
    rows = np.einsum("it,iz->itz", rows_b, rows_e).reshape(x * y, t * z)
    return WiretapMAC.from_rows(rows, x, y, t, z)


def constant_eve_mac(rng, t=2):
    rows_b = rng.dirichlet(np.ones(t), size=4)
    rows_e = np.tile(rng.dirichlet(np.ones(2)), (4, 1))
    rows = np.einsum("it,iz->itz", rows_b, rows_e).reshape(4, -1)
    return WiretapMAC.from_rows(rows, 2, 2, t, 2)


def random_factored(rng, mac, u=2, v1=2, v2=2):
    return FactoredInput(
        Dist.from_mass(rng.dirichlet(np.ones(u))),
        Channel.from_matrix(rng.dirichlet(np.ones(v1), size=u)),
        Channel.from_matrix(rng.dirichlet(np.ones(v2), size=u)),
        Channel.from_matrix(rng.dirichlet(np.ones(mac.x_alphabet.size), size=v1)),
        Channel.from_matrix(rng.dirichlet(np.ones(mac.y_alphabet.size), size=v2)),
        mac,
    )


def sample_case1_profiles(rng, count, require_case2=False,
                          sufficient_randomness=False):
    """Random (profile, hc) pairs landing in Case 1 (optionally also Case 2).

    With ``sufficient_randomness`` the bound is drawn above both
    single-sender-plus-shared leakages, the regime where the Case-2
    time-sharing window is not throttled by the randomness budget (nesting
    of the case regions holds there; below it, it can genuinely fail).
    """
    out = []
    while len(out) < count:
        mac = random_mac(rng, bob_quality=rng.uniform(0.3, 0.9))
        p = random_factored(rng, mac)
        prof = info_profile(p)
        if prof.iz_v12 > prof.it_v12:
            continue
        compi = (prof.iz_v1_u <= prof.it_v1_v2u
                 and prof.iz_v2_u <= prof.it_v2_v1u
                 and prof.iz_v12_u <= prof.it_v1_v2u + prof.it_v2_v1u)
        if not compi:
            continue
        if require_case2:
            low = min(prof.iz_v1u, prof.iz_v2u)
            if sufficient_randomness:
                low = max(prof.iz_v1u, prof.iz_v2u)
            if not low + 1e-9 < prof.iz_v12:
                continue
            hc = rng.uniform(low + 1e-9, prof.iz_v12)
            cls = classify_profile(prof, hc).cases
            if CaseLabel.CASE1 in cls and CaseLabel.CASE2 in cls:
                out.append((prof, hc))
        else:
            hc = prof.iz_u + rng.uniform(1e-6, 1.0)
            if CaseLabel.CASE1 in classify_profile(prof, hc).cases:
                out.append((prof, hc))
    return out


def sample_case_profiles(rng, count, case, bob_quality=(0.3, 0.9)):
    """Random (profile, hc) pairs classifying into the requested case."""
    out = []
    while len(out) < count:
        mac = random_mac(rng, bob_quality=rng.uniform(*bob_quality))
        p = random_factored(rng, mac)
        prof = info_profile(p)
        if prof.iz_v12 > prof.it_v12:
            continue
        if case == CaseLabel.CASE3:
            hc = prof.iz_v12 + rng.uniform(1e-6, 0.5)
        elif case == CaseLabel.CASE2:
            low = min(prof.iz_v1u, prof.iz_v2u)
            if not low + 1e-9 < prof.iz_v12:
                continue
            hc = rng.uniform(low + 1e-9, prof.iz_v12)
        else:
            hc = prof.iz_u + rng.uniform(1e-6, 1.0)
        if case in classify_profile(prof, hc, u_independent=p.u_independent()).cases:
            out.append((prof, hc, p))
    return out
