"""Visibility against distinguishability as which-way marking grows.

The conventional measure Dc (trace distance of the conditional marker
states) obeys V^2 + Dc^2 <= 1 and collapses to zero for unpolarized light.
The generalized D also counts the which-path information shared with the
environment that purifies the mixture, and closes the duality relation
V^2 + D^2 = 1 for every input.
"""

import numpy as np

from wpdlab import duality as du, interferometer as itf

CASES = {
    "a (pure, s2=0)": [0, 0, 1],
    "b (pure, 0<|s2|<1)": list(np.array([0, 1, 1]) / np.sqrt(2)),
    "c (pure circular)": [0, 1, 0],
    "d (unpolarized)": [0, 0, 0],
    "e (mixed, 0<|s2|<|s|)": [0, 0.3, 0.3],
    "f (mixed, |s2|=|s|)": [0, 0.4, 0],
}

header = f"{'theta1':>7} {'V':>8} {'Dc':>8} {'D':>8} {'V^2+D^2':>9} {'V^2+Dc^2':>9}"
for label, s in CASES.items():
    assert du.classify_case(s) == label[0]
    print(f"\ncase {label}, s = {np.round(s, 4)}")
    print(header)
    for theta1 in (0.0, 15.0, 22.5, 30.0, 45.0):
        cfg = itf.InterferometerConfig(theta0_deg=0.0, theta1_deg=theta1)
        r = du.duality_report(cfg, s)
        print(f"{theta1:7.1f} {r.visibility:8.4f} {r.d_conventional:8.4f} "
              f"{r.d_general:8.4f} {r.sum_vd:9.6f} {r.sum_vdc:9.6f}")

# the likelihood oracle agrees with the analytic trace distance
from wpdlab import polarization as pol

s0, s1 = [0.1, 0.2, 0.3], [-0.4, 0.1, 0.2]
rho0, rho1 = (pol.density_from_stokes(s) for s in (s0, s1))
l_max, _ = du.max_likelihood_search(rho0, rho1, trials=10_000, seed=0)
print(f"\nrandomized which-way guessing: 2 L_max - 1 = {2 * l_max - 1:.6f}")
print(f"analytic half trace distance:             {du.dc_trace_distance(rho0, rho1):.6f}")
print(f"Helstrom minimum error probability:       "
      f"{du.helstrom_bound(du.dc_trace_distance(rho0, rho1)):.6f}")
