#!/usr/bin/env python3
"""Search the achievable regions of the additive example channels.

The channel pair is built so that independent senders never beat the
eavesdropper while coupled senders shut her out completely; the search
shows exactly that, and locates the half-bit secrecy capacity.
"""

from wtmac import (
    CommonMode,
    ConferencingMode,
    SearchConfig,
    achievable_region_estimate,
    discussion_channels,
    prefix_channel,
    single_sender_secrecy_capacity,
)
from wtmac.probkit import Channel

mac = discussion_channels()
print("legitimate output rows (ternary):")
print(mac.bob.matrix)
print("eavesdropper output rows (six-valued):")
print(mac.eve.matrix)

# independent senders, no shared randomness: nothing is achievable
cfg = SearchConfig(restarts=2000, refine_iters=0, directions=4, seed=1,
                   independent_only=True)
est = achievable_region_estimate(mac, CommonMode(0.0), cfg)
print(f"\nindependent inputs, H_C = 0: max coordinate "
      f"{est.max_coordinate():.2e} over {cfg.restarts} sampled inputs")

# tiny conferencing links already open a (tiny) region
cfg = SearchConfig(restarts=40, refine_iters=20, directions=8, seed=2,
                   u_size=2)
est = achievable_region_estimate(mac, ConferencingMode(0.01, 0.01), cfg)
print(f"conferencing links of 0.01 bits each: best sum rate "
      f"{est.max_sum_rate():.4f} (capped by C1 + C2)")

est = achievable_region_estimate(mac, ConferencingMode(0.3, 0.3), cfg)
print(f"conferencing links of 0.30 bits each: best sum rate "
      f"{est.max_sum_rate():.4f}")

cap = single_sender_secrecy_capacity(mac, cfg)
print(f"combined-sender secrecy capacity estimate: {cap:.6f} "
      f"(the coupled uniform input gives exactly 1/2)")

# channel prefixing: composing per-sender noise in front can only shrink
# what the same auxiliaries achieve
noisy = Channel.from_matrix([[0.9, 0.1], [0.1, 0.9]])
tilde = prefix_channel(mac, noisy, noisy)
cap2 = single_sender_secrecy_capacity(tilde, cfg)
print(f"after prefixing both senders with a 0.1-flip channel: {cap2:.6f}")
