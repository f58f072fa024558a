"""Polarization states on the Poincare ball.

A polarization qubit is fixed by its Stokes vector s: pure states sit on the
unit sphere, mixtures inside. Purity, degree of polarization and the
concurrence of the purifying marker-environment entanglement are all simple
functions of |s|.
"""

import numpy as np

from wpdlab import polarization as pol

for name, s in [
    ("horizontal |H>", [0, 0, 1]),
    ("right circular", [0, 1, 0]),
    ("weakly polarized source", [-0.003, -0.004, 0.061]),
    ("completely unpolarized", [0, 0, 0]),
]:
    rho = pol.density_from_stokes(s)
    print(f"{name}: s = {np.round(pol.stokes_from_density(rho), 4)}")
    print(f"  purity                = {pol.purity(rho):.6f}")
    print(f"  degree of polarization = {pol.degree_of_polarization(rho):.6f}")
    print(f"  marker-env concurrence = {pol.concurrence_we(rho):.6f}")
    print(f"  fidelity to unpolarized = "
          f"{pol.fidelity(rho, np.eye(2, dtype=complex) / 2):.6f}")

# spectral decomposition: every mixture is a two-pure-state blend
rho = pol.density_from_stokes([0.6, 0, 0])
p1, v1, p2, v2 = pol.eigendecompose_pol(rho)
print(f"\ns = (0.6, 0, 0) decomposes as {p1:.2f} on {np.round(v1, 4)} "
      f"and {p2:.2f} on {np.round(v2, 4)}")
