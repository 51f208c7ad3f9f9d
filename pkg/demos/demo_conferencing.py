#!/usr/bin/env python3
"""Conferencing end to end: regions, rate splitting, and the one-shot protocol.

Takes an input where the eavesdropper's leakage must be masked by shared
randomness, shows how rate-limited conferencing buys both a common message
and that randomness, and builds the explicit one-shot conference maps.
"""

import numpy as np

from wtmac import (
    CaseLabel,
    ConferencingCapacities,
    Channel,
    Dist,
    FactoredInput,
    WiretapMAC,
    beta_bounds,
    build_conference,
    info_profile,
    rate_split,
    region_common,
    region_conferencing,
)

rng = np.random.default_rng(23)
rows_b = 0.85 * np.eye(2)[rng.integers(0, 2, size=4)] \
    + 0.15 * rng.dirichlet(np.ones(2), size=4)
rows_e = rng.dirichlet(np.ones(2), size=4)
mac = WiretapMAC.from_marginals(rows_b, rows_e)
p = FactoredInput(
    Dist.from_mass([0.5, 0.5]),
    Channel.from_matrix([[0.85, 0.15], [0.2, 0.8]]),
    Channel.from_matrix([[0.75, 0.25], [0.1, 0.9]]),
    Channel.identity(2),
    Channel.identity(2),
    mac,
)
prof = info_profile(p)

# pick link capacities comfortably above the full-input leakage: Case 3
j0 = prof.iz_v12
c1, c2 = 0.7 * j0 + 0.05, 0.7 * j0 + 0.05
print(f"full-input leakage (randomness cost) = {j0:.4f} bits")
print(f"link capacities: C1 = {c1:.4f}, C2 = {c2:.4f}")

region = region_conferencing(prof, c1, c2, CaseLabel.CASE3)
for name, rhs in zip(region.polytope.names, region.polytope.rhs):
    print(f"  {name}: {rhs:.4f}")

# how the randomness cost may be split across the links
bb = beta_bounds(prof, CaseLabel.CASE3, 0.0, ConferencingCapacities(c1, c2))
print(f"feasible randomness split: beta in [{bb.beta0:.4f}, {bb.beta1:.4f}]")

beta = 0.5 * (bb.beta0 + bb.beta1)
point = region.polytope.sample(np.random.default_rng(1), 1)[0] * 0.9
split = rate_split(point[0], point[1], prof, CaseLabel.CASE3, 0.0, beta,
                   c1, c2)
print(f"\nrate pair ({point[0]:.4f}, {point[1]:.4f}) splits into "
      f"common {split.r0:.4f} + private ({split.r1:.4f}, {split.r2:.4f})")
target = region_common(prof, c1 + c2, CaseLabel.CASE3, check_membership=False)
print(f"split triple inside the common-message region: "
      f"{target.contains(split.triple, tol=1e-9)}")

# the explicit one-shot conference at blocklength 8
conf = build_conference(k1=2, k2=3, l0=6, beta=beta, c1=1.0, c2=1.0, n=8)
r1, r2 = conf.rate_per_use()
print(f"\none-shot conference: |J1| = {conf.j1_size}, |J2| = {conf.j2_size}, "
      f"rates ({r1:.4f}, {r2:.4f}) per use")
print(f"randomness pool {conf.l0} split as {conf.l0_part1} x {conf.l0_part2} "
      f"(requested beta {conf.requested_beta:.2f}, realized "
      f"{conf.realized_beta:.2f})")
joint = conf.joint(1, 2).reshape(conf.j1_size, conf.j2_size)
outer = np.outer(conf.link1[1], conf.link2[2])
print(f"joint map factorizes into the two marginals: "
      f"{np.allclose(joint, outer)}")
