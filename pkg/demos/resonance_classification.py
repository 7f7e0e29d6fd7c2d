"""Resonance lattices and the integrable / superintegrable / maximally
superintegrable trichotomy.

Frequencies are declared exactly as rational combinations of symbols
assumed independent over the rationals, so the resonance lattice is an
integer-kernel computation, not a floating-point guess.  The lattice
rank fixes the dimension of generic orbit closures on the invariant
torus.
"""

from fractions import Fraction

from geoham.torus import FrequencySpec, classify, resonance_lattice

examples = [
    ("(1, sqrt2)", FrequencySpec(["1", "sqrt2"], [[1, 0], [0, 1]])),
    ("(1, 1)", FrequencySpec.from_rationals([1, 1])),
    ("(1, 1, 1)", FrequencySpec.from_rationals([1, 1, 1])),
    ("(2, 4, 3)", FrequencySpec.from_rationals([2, 4, 3])),
    ("(1, 1, sqrt2)", FrequencySpec(["1", "sqrt2"], [[1, 0], [1, 0], [0, 1]])),
]

for label, spec in examples:
    lattice = resonance_lattice(spec)
    result = classify(spec)
    print(f"omega = {label}")
    print(f"  lattice rank {lattice.rank}, basis {list(lattice.basis)}")
    print(f"  closure dimension {result.closure_dimension} -> {result.kind}"
          f" ({result.extra_integrals} extra integrals)")
    print()

print("quartic-in-energy oscillators: frequencies depend on the initial condition")
print("(frequency of each block is proportional to that block's energy)")
for seed, energies in [
    ("equal block energies", (Fraction(1), Fraction(1))),
    ("2:1 block energies", (Fraction(2), Fraction(1))),
    ("7:3 block energies", (Fraction(7), Fraction(3))),
]:
    spec = FrequencySpec.from_rationals(energies)
    result = classify(spec)
    print(f"  {seed}: closure dim {result.closure_dimension} -> {result.kind}")
print("  an irrational energy ratio needs its own symbol:")
spec = FrequencySpec(["1", "sqrt5"], [[1, 0], [0, 1]])
print("  ratio sqrt5:", classify(spec).kind)
print()
print("note:", classify(spec).assumption)
