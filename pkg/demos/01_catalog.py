"""Tour of the Hamiltonian catalog.

Prints each entry at a few momenta, its metadata, and for the convex entries
the Lagrangian obtained by Legendre transform (closed form against a brute
force maximisation over momenta).
"""

import numpy as np

from hjrates.hamiltonians import CATALOG_IDS, get_hamiltonian, legendre_transform

p = np.array([-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0])
print("p".ljust(24), " ".join(f"{v:7.2f}" for v in p))
for name in CATALOG_IDS:
    spec = get_hamiltonian(name)
    print(name.ljust(24), " ".join(f"{v:7.3f}" for v in spec(0.0, p)))

print()
for name in CATALOG_IDS:
    spec = get_hamiltonian(name)
    flags = ",".join(sorted(spec.assumptions))
    print(f"{name:24s} |u|<={spec.value_bound:<5g} |u'|<={spec.gradient_bound:<4g} "
          f"dH/dp<={spec.lipschitz_p:<5g} convex={spec.is_convex_in_p!s:5s} {flags}")

# Legendre transforms: the optimal speeds all sit at |v| = 1
v = np.linspace(-1, 1, 5)
for name in ("control-eikonal", "shifted-eikonal", "pure-eikonal"):
    spec = get_hamiltonian(name)
    exact = legendre_transform(spec, 0.5, v)
    brute = legendre_transform(spec, 0.5, v, p_max=20.0, n_samples=40001, closed_form=False)
    print(f"\nL(0.5, v) for {name}")
    print("  v      ", np.round(v, 3))
    print("  closed ", np.round(exact, 6))
    print("  numeric", np.round(brute, 6))
