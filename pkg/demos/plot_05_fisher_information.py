"""
Estimating the excess noise
===========================

The quantum Fisher information of the probe output with respect to N_B is
estimated from the curvature of the fidelity between neighbouring outputs.
At high squeezing it reaches 1/(N_B (N_B + 1)), the value for the thermal
state itself, which fixes the Cramer-Rao floor on the estimation variance.
"""

from excessnoise import ChannelSpec, probe_output, qfi_finite_difference
from excessnoise.bounds import cramer_rao
from excessnoise.thermal import qfi_thermal

n_b = 1.0
print(f"thermal-state QFI at N_B={n_b}: {qfi_thermal(n_b):.6f}")

for n_s in (1.0, 10.0, 100.0, 1e4):
    est = qfi_finite_difference(lambda x: probe_output(ChannelSpec.thermal(0.5, x), n_s), n_b, delta=1e-3)
    print(
        f"N_S={n_s:8.0f}: sqrt-fidelity form {est.sqrt_fidelity:.6f}, "
        f"log-fidelity form {est.log_fidelity:.6f}, extrapolated {est.value:.6f}"
    )

for m in (1, 10, 100):
    print(f"M={m:4d}: Var(N_B estimate) >= {cramer_rao(m, n_b):.4f}")
