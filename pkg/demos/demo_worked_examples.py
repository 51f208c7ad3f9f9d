#!/usr/bin/env python3
"""The two worked example channels, end to end.

First the additive pair where coupling beats the eavesdropper, then the
explicit numeric pair whose time-sharing interval is strictly interior, and
finally a brute-force search re-finding channels of the second kind.
"""

from wtmac import (
    bruteforce_search,
    concavity_scan,
    discussion_channels,
    equal_input_witness,
    example62,
    lessnoisy_gap,
)

# -- additive example --------------------------------------------------------
mac = discussion_channels()
print("additive example: |X|=|Y|=2, |T|=3, |Z|=6, all marginal entries in "
      "{0, 1/2}")

witness = equal_input_witness()
print(f"coupled uniform input: legitimate rate {witness.i_t} bits, "
      f"eavesdropper rate {witness.i_z} bits "
      f"(maximizing bias {witness.best_p0})")

gap = lessnoisy_gap(0.5, 0.5)
print(f"independent-input gap at (1/2, 1/2): {gap.gap:.4f} bits, "
      f"second derivative {gap.d2_gap_dq2:.4f} < 0")

scan = concavity_scan(25, 25)
print(f"concavity scan on a 25x25 interior grid: passed = {scan.passed}, "
      f"smallest |margin| = {scan.min_margin:.4f}")

# -- explicit numeric example ------------------------------------------------
rep = example62()
print("\nexplicit numeric example (q = {0}, r = {1}):".format(rep.q, rep.r))
for key in ("H(T|XY)", "H(Z|XY)", "H(T)", "H(Z)"):
    print(f"  {key} = {rep.entropies[key]:.4f}")
for key in ("I(T^X|Y)", "I(Z^X|Y)", "I(T^Y|X)", "I(Z^Y|X)"):
    print(f"  {key} = {rep.mutual_informations[key]:.4f}")
print(f"zero-randomness conditions hold: {rep.hc01 and rep.hc02} "
      f"(the input classifies into the no-randomness case: {rep.case0})")
a1 = rep.alpha_first_sender
a2 = rep.alpha_second_sender
print(f"time-sharing interval, first sender leading:  "
      f"[{a1.alpha0:.4f}, {a1.alpha1:.4f}]")
print(f"time-sharing interval, second sender leading: "
      f"[{a2.alpha0:.4f}, {a2.alpha1:.4f}]  <- strictly interior on the "
      f"left, endpoint on the right")

# -- brute-force search ------------------------------------------------------
found = bruteforce_search(3000, seed=11, predicate="needs-time-sharing")
print(f"\nbrute-force search: {len(found)} channels out of 3000 samples need "
      f"time-sharing")
if found:
    hit = found[0]
    cert = hit.certificate
    print(f"first hit: input biases ({hit.q:.3f}, {hit.r:.3f}), assignment "
          f"{cert['assignment']}, interval [{cert['alpha0']:.4f}, "
          f"{cert['alpha1']:.4f}]")
