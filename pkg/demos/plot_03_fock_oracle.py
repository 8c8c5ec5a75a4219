"""
Cross-checking in the number basis
==================================

The Gaussian formulas are checked against an independent calculation: the
channel is dilated to a beamsplitter (or two-mode squeezer) acting on a
thermal environment, everything is written as truncated density matrices and
the divergences come from eigendecompositions.
"""

import numpy as np

from excessnoise import ChannelSpec, divergences, probe_output
from excessnoise.fock import TruncationConfig, dilation_output, moments_covariance, spectral_divergences

cfg = TruncationConfig(n_max=30)
n_s = 0.5
ch1, ch2 = ChannelSpec.thermal(0.6, 0.1), ChannelSpec.thermal(0.6, 0.3)

rho1 = dilation_output(ch1, n_s, cfg)
rho2 = dilation_output(ch2, n_s, cfg)
print(f"Hilbert space dimension {rho1.dm.shape[0]}, truncated tail mass {rho1.tail_mass:.1e}")

# Second moments of the truncated state reproduce the Gaussian covariance.
residual = np.abs(moments_covariance(rho1) - probe_output(ch1, n_s).cov).max()
print(f"covariance residual {residual:.1e}")

fock = spectral_divergences(rho1, rho2, alphas=(0.5, 2.0))
gauss = divergences(probe_output(ch1, n_s), probe_output(ch2, n_s))
for name in ("d", "v", "f"):
    a, b = getattr(fock, name), getattr(gauss, name)
    print(f"{name.upper()}: fock {a:.10f}  gaussian {b:.10f}  diff {abs(a - b):.1e}")

# The oracle also gives quantities the Gaussian path does not expose.
for alpha, (petz, sandwiched) in fock.renyi.items():
    print(f"Renyi alpha={alpha}: Petz {petz:.6f}, sandwiched {sandwiched:.6f}")
print(f"trace distance {fock.trace_distance:.6f}")
