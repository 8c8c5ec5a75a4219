"""
Convergence to the thermal limit
================================

As the probe squeezing grows, the relative entropy, its variance and the
fidelity between the two channel outputs approach those of the bare
environment states theta(N_1) and theta(N_2). The gap closes like 1/N_S.
"""

import numpy as np

from excessnoise import ChannelSpec, divergences, probe_output, thermal_divergences

n1, n2 = 0.1, 0.3
limit = thermal_divergences(n1, n2)
print(f"thermal limit: D = {limit.d:.6f}, V = {limit.v:.6f}, F = {limit.f:.6f}")

squeezing = np.logspace(1, 5, 5)
for label, make in [
    ("thermal loss, eta = 0.5", lambda nb: ChannelSpec.thermal(0.5, nb)),
    ("amplifier, G = 2", lambda nb: ChannelSpec.amplifier(2.0, nb)),
]:
    print(f"\n{label}")
    print(f"{'N_S':>8} {'|dD|':>10} {'|dV|':>10} {'|dF|':>10}")
    gaps = []
    for n_s in squeezing:
        r = divergences(probe_output(make(n1), n_s), probe_output(make(n2), n_s))
        gap = (abs(r.d - limit.d), abs(r.v - limit.v), abs(r.f - limit.f))
        gaps.append(gap)
        print(f"{n_s:8.0e} {gap[0]:10.2e} {gap[1]:10.2e} {gap[2]:10.2e}")
    # a straight line of slope -1 on a log-log plot
    slopes = np.polyfit(np.log(squeezing), np.log(np.array(gaps)), 1)[0]
    print("log-log slopes", np.round(slopes, 3))

# The same data is available from the command line:
#   python -m excessnoise sweep --eta 0.5 --nb1 0.1 --nb2 0.3 --ns 10,100,1000,10000
