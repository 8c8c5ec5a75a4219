"""
A photodetection strategy that reaches the environment bound
============================================================

After the channel, a fixed two-mode squeezer (the decoupler) turns the output
into a product of a thermal mode and a near-vacuum mode. Counting photons on
the thermal mode and running a Neyman-Pearson test on the total count over M
uses gives an error exponent that approaches the best possible one, obtained
as if one had direct access to the environment.
"""

from excessnoise import StrategySpec, bound_gap_report, exact_binary_test, monte_carlo_discrimination
from excessnoise.bounds import bound_report
from excessnoise.strategy import decoupler_weights, effective_thermal_mean

spec = StrategySpec.thermal(eta=0.7, n_b1=0.1, n_b2=0.3, m=100, epsilon=0.05)

wp, wm = decoupler_weights(spec.channel1, 100.0)
print(f"decoupler weights at N_S=100: omega+ = {wp:.4f}, omega- = {wm:.4f}")

print(f"\n{'N_S':>8} {'n_eff(N_1)':>11} {'D_H strategy':>13} {'D_H bound':>10} {'gap':>9}")
for n_s in (0.0, 1.0, 10.0, 100.0, 1000.0):
    r = bound_gap_report(spec, n_s)
    print(f"{n_s:8.0f} {r.n_eff_1:11.6f} {r.dh_strategy:13.5f} {r.dh_environment:10.5f} {r.gap:9.2e}")

# The second-order expansion M D + sqrt(M V) Phi^{-1}(eps) approximates the bound.
b = bound_report(spec.m, spec.epsilon, 0.1, 0.3)
print(f"\nsecond-order expansion {b.expansion:.5f}")

# Monte Carlo check of the exact test at the effective means.
n_eff_1 = effective_thermal_mean(spec.channel1, 1000.0)
n_eff_2 = effective_thermal_mean(spec.channel2, 1000.0)
test = exact_binary_test(spec.m, n_eff_1, n_eff_2, spec.epsilon)
mc = monte_carlo_discrimination(spec.m, n_eff_1, n_eff_2, spec.epsilon, trials=20_000, seed=1, test=test)
print(f"type-I  {mc.type1:.4f} (exact {mc.exact_type1:.4f} +- {mc.type1_sigma:.4f})")
print(f"type-II {mc.type2:.4f} (exact {mc.exact_type2:.4f} +- {mc.type2_sigma:.4f})")
