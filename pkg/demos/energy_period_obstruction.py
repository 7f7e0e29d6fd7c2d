"""The energy-period obstruction: periods are diffeomorphism invariants,
so systems whose period functions differ cannot be smoothly equivalent.

The harmonic oscillator has the same period at every energy; the
quartic oscillator's period shrinks like 1/sqrt(E).  Sampling both and
comparing the period sets certifies that no diffeomorphism maps one
flow onto the other.
"""

import math

from geoham import catalog
from geoham.period import (
    FlowSystem,
    dependence_test,
    equivalence_obstruction,
    period_energy_scan,
)

chart = catalog.planar_chart()
harmonic = FlowSystem(chart, hamiltonian=catalog.harmonic_hamiltonian(chart))
quartic = FlowSystem(chart, hamiltonian=catalog.quartic_hamiltonian(chart))

print("harmonic oscillator scan (period should be 2*pi everywhere):")
harmonic_table = period_energy_scan(harmonic, [0.5, 2.0, 8.0], seeds_per_energy=3, seed=42)
for record in harmonic_table.records:
    print(f"  E = {record.energy:8.4f}  period = {record.period:.9f}")

print()
print("quartic oscillator scan (period = pi / (2 sqrt(E))):")
quartic_table = period_energy_scan(quartic, [0.25, 1.0, 4.0, 16.0], seeds_per_energy=3, seed=42)
for record in quartic_table.records:
    predicted = math.pi / (2.0 * math.sqrt(record.level))
    print(f"  E = {record.energy:8.4f}  period = {record.period:.9f}"
          f"  analytic = {predicted:.9f}")

print()
print("periods depend on the energy alone (spread across seeds per level):")
for label, table in (("harmonic", harmonic_table), ("quartic", quartic_table)):
    result = dependence_test(table, rel_tol=1e-6)
    print(f"  {label}: dependent = {result.dependent}, "
          f"max level spread = {max(result.level_spreads.values()):.2e}")

print()
verdict = equivalence_obstruction(harmonic_table, quartic_table, rel_tol=1e-4)
print("equivalence obstruction:", verdict.obstructed, "-", verdict.reason)
print("(the test is one-sided: matching period data would prove nothing)")
same = equivalence_obstruction(harmonic_table, harmonic_table, rel_tol=1e-4)
print("harmonic vs itself:", same.obstructed, "-", same.reason)
