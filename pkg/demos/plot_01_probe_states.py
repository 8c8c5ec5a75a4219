"""
Probe states and bosonic channels
=================================

A two-mode squeezed vacuum (TMSV) is split into an arm that passes through
the channel and a reference kept in the lab. This script builds the output
covariance for a thermal-loss channel and an amplifier and reads off its
symplectic spectrum.
"""

import numpy as np

from excessnoise import ChannelSpec, probe_output, tmsv, williamson

np.set_printoptions(precision=4, suppress=True)

# The TMSV is pure: both symplectic eigenvalues sit at the vacuum value 1/2.
probe = tmsv(2.0)
print("TMSV covariance (xxpp ordering)\n", probe.cov)
print("symplectic eigenvalues", probe.symplectic_eigenvalues())

# Send the arm through a thermal-loss channel with transmissivity 0.6 and
# excess noise 0.2. The output block has a = eta N_S + (1 - eta) N_B + 1/2 on
# the channel side, b = N_S + 1/2 on the reference and correlations
# c = sqrt(eta N_S (N_S + 1)).
loss = ChannelSpec.thermal(0.6, 0.2)
out = probe_output(loss, 2.0)
print("\nthermal-loss output\n", out.cov)

# The Williamson decomposition puts the state in normal form.
s, nu = williamson(out.cov)
print("symplectic eigenvalues", nu)
print("S V S^T\n", s.mat @ out.cov @ s.mat.T)

# An amplifier with gain 2 adds (G - 1)(N_B + 1/2) to each quadrature.
amp = probe_output(ChannelSpec.amplifier(2.0, 0.2), 2.0)
print("\namplifier output\n", amp.cov)
print("symplectic eigenvalues", amp.symplectic_eigenvalues())
