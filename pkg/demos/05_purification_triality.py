"""Purification bookkeeping behind the generalized distinguishability.

A mixed marker is the marker half of an entangled marker-environment pure
state. On the enlarged space the visibility / predictability / concurrence
triality holds exactly, the difference of the two conditional joint states
has eigenvalues +-D, and only environment bases with equal branch overlaps
let a separable measurement reach the full D.
"""

import math

import numpy as np

from wpdlab import duality as du, interferometer as itf, polarization as pol
from wpdlab import purification as pu

UNPOLARIZED = np.eye(2, dtype=complex) / 2

# triality on a generic entangled path state
state = pu.joint_state(0.8, 0.6, np.array([1, 0j]), np.array([0j, 1]))
rep = pu.triality_report(state)
print("path (0.8, 0.6) with orthogonal branches:")
print(f"  V = {rep.visibility:.4f}, Dp = {rep.predictability:.4f}, "
      f"C = {rep.concurrence:.4f}")
print(f"  V^2 + Dp^2 + C^2 = {rep.triality_sum:.12f}")

# purify the unpolarized marker against a qubit environment
cfg = itf.InterferometerConfig(theta0_deg=0.0, theta1_deg=22.5)
u = du.relative_rotation(cfg)
p = pu.purify(UNPOLARIZED, u)
v, c, d = pu.joint_vcd(p)
print(f"\nunpolarized marker, QWP1 at 22.5 deg:")
print(f"  V = {v:.4f}, C = D = {d:.4f}  (cos 45 = {math.cos(math.pi/4):.4f})")
d_eig, psi_plus, _ = pu.delta_eigensystem(p)
print(f"  D from the joint eigensystem: {d_eig:.4f}")
print(f"  projective route <psi+|pi0|psi+> + <psi-|pi1|psi-> - 1 = "
      f"{pu.projective_d_value(p):.4f}")

# separable (joint-operator) measurements: equality needs the right basis
rot = du.rotation_from_config(cfg)
dec = du.decompose_for_axis([0.0, 0.0, 0.0], rot.axis)
p_good = pu.purify_from_mixture(
    [dec.p_alpha, dec.p_beta],
    [pol.jones_from_stokes(dec.s_alpha), pol.jones_from_stokes(dec.s_beta)], u)
print(f"\nTr(M Delta) with the equal-overlap decomposition: "
      f"{pu.m_operator_value(p_good):.6f} (D = {d_eig:.6f})")

rng = np.random.default_rng(2)
z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
q, r = np.linalg.qr(z)
rot_e = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
p_bad = pu.purify(UNPOLARIZED, u, e_basis_rotation=rot_e)
print(f"Tr(M Delta) with a random environment basis:      "
      f"{pu.m_operator_value(p_bad):.6f} (< D)")
