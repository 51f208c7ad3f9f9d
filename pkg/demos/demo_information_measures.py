#!/usr/bin/env python3
"""Walk through the probability kernel on a small wiretap MAC.

Builds a two-sender channel with a legitimate and an eavesdropped output,
runs a factored input through it, and prints the information quantities the
rate bounds are made of.
"""

import numpy as np

from wtmac import (
    Channel,
    Dist,
    FactoredInput,
    WiretapMAC,
    info_profile,
    mutual_information,
    n_fold,
    truncated_typical_dist,
    typical_membership,
)
from wtmac.probkit import AX_T, AX_X, AX_Y, AX_Z

rng = np.random.default_rng(7)

# A random 2x2 -> (2, 2) wiretap MAC: Bob's and Eve's outputs conditionally
# independent given the inputs.
rows_b = rng.dirichlet(np.ones(2), size=4)
rows_e = rng.dirichlet(np.ones(2), size=4)
mac = WiretapMAC.from_marginals(rows_b, rows_e)
print("Bob's marginal rows:")
print(np.round(mac.bob.matrix, 4))
print("Eve's marginal rows:")
print(np.round(mac.eve.matrix, 4))

# Independent senders, then a correlated pair through a shared auxiliary.
independent = FactoredInput.independent(Dist.from_mass([0.7, 0.3]),
                                        Dist.from_mass([0.4, 0.6]), mac)
coupled = FactoredInput.coupled(Dist.uniform(2), mac)

for name, p in (("independent", independent), ("coupled", coupled)):
    j = p.joint
    print(f"\n{name} input:")
    print(f"  I(T ^ XY) = {mutual_information(j, {AX_T}, {AX_X, AX_Y}):.4f} bits")
    print(f"  I(Z ^ XY) = {mutual_information(j, {AX_Z}, {AX_X, AX_Y}):.4f} bits")
    prof = info_profile(p)
    print(f"  profile: I(T^V1|V2U) = {prof.it_v1_v2u:.4f}, "
          f"I(Z^V1|V2U) = {prof.iz_v1_v2u:.4f}")

# Sequence-level machinery: memoryless extension and typical sets.
bsc = Channel.from_matrix([[0.9, 0.1], [0.2, 0.8]])
ext = n_fold(bsc, 3)
print(f"\n3-fold extension of a binary channel: {ext.matrix.shape} matrix, "
      f"row sums {ext.matrix.sum(axis=1).round(12)}")

law = Dist.from_mass([0.75, 0.25])
seq = np.array([0, 0, 0, 1, 0, 0, 0, 1])
print(f"sequence {seq} typical at delta=0.1 under (0.75, 0.25): "
      f"{typical_membership(law, seq, 0.1)}")

trunc = truncated_typical_dist(law, 8, 0.1)
print(f"truncated typical law at n=8: {int((trunc.mass > 0).sum())} "
      f"sequences carry all the mass (total {trunc.mass.sum():.12f})")
