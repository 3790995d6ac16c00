"""Generating isophotic curves on a parametric surface.

Pick an axis d and an angle phi; the isophote is the locus where the unit
normal satisfies <U, d> = cos(phi).  Its tangent direction solves a linear
constraint in the chart velocities, integrated here with fixed-step RK4.
"""

import math

import numpy as np

import darboux
from darboux.trace import TraceConfig, find_seed, trace_isophote

sphere = darboux.sphere(1.0)
d = np.array([0.0, 0.0, 1.0])
phi = math.pi / 4

# Snap a rough guess onto the exact level set first.
seed = find_seed(sphere, d, phi, (0.0, 0.6))
print("seed (u, v):", seed, " -> v = pi/4")

config = TraceConfig(step=1e-3, max_length=5.0)
res = trace_isophote(sphere, d, phi, seed, config)
print("termination:", res.termination, "after", res.n, "samples")
print("closure gap:", np.linalg.norm(res.points[-1] - res.points[0]))
print("max |<U,d> - cos(phi)|:", np.abs(res.angle_dot - math.cos(phi)).max())
print("max constraint residual:", np.abs(res.constraint_residual).max())

# On the sphere every curve is a line of curvature: tau_g vanishes.
print("max |tau_g| along trace:", np.abs(res.tg).max())

# The two sign branches traverse the same circle in opposite senses.
minus = trace_isophote(sphere, d, phi, seed,
                       TraceConfig(step=1e-3, max_length=5.0, branch="minus"))
print("branches opposite:", res.tangents[0] @ minus.tangents[0])

# A tilted axis gives a genuinely two-dimensional chart ODE (phi = pi/3
# keeps the circuit clear of the chart poles).
d_tilt = np.array([1.0, 0.0, 1.0]) / math.sqrt(2.0)
seed2 = find_seed(sphere, d_tilt, math.pi / 3, (0.9, 0.1))
res2 = trace_isophote(sphere, d_tilt, math.pi / 3, seed2,
                      TraceConfig(step=1e-3, max_length=6.0))
print("tilted-axis trace:", res2.termination, "drift:",
      np.abs(res2.angle_dot - math.cos(math.pi / 3)).max())

# Degenerate case: on a plane the normal never moves, so no isophote exists.
try:
    trace_isophote(darboux.plane(), d, 0.0, (0.0, 0.0), config)
except darboux.DarbouxError as exc:
    print("plane:", exc)
