"""Steady-state estimation error versus neuron count, pooled over seeds.

More neurons refine the adaptive correction and tighten the
steady-state spread; the aggregate gain is fan-in normalized so the
comparison isolates the approximation quality.
"""

from attnnsf import SimConfig, monte_carlo

SEEDS = list(range(1, 11))

print(f"{'neurons':>8} {'pooled mean':>12} {'pooled std':>12}")
for q in (3, 10, 50):
    result = monte_carlo(SimConfig(neurons=q), SEEDS)
    print(f"{q:>8} {result.pooled.mean:>12.3e} {result.pooled.std:>12.3e}")
