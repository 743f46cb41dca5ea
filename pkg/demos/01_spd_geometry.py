"""SPD matrices, their logarithms, and the three kernels.

Run: python demos/01_spd_geometry.py
"""
import numpy as np

from spdc.kernels import KernelSpec, gram, kernel_euclidean_gaussian, kernel_log_euclidean_gaussian, kernel_stein
from spdc.spd import geodesic_airm, log_euclidean_distance, make_spd, spd_log, stein_divergence

# A singular sample covariance is lifted onto the SPD cone by flooring its spectrum
raw = np.array([[1.0, 2.0], [0.0, 1.0]])
X = make_spd(raw, floor=1e-6)
print("make_spd(raw):\n", X)
print("eigenvalues:", np.linalg.eigvalsh(X))

# Matrix log of a diagonal matrix is the elementwise log
print("log(diag(e^2, e)) =\n", spd_log(np.diag([np.e**2, np.e])))

A = np.diag([np.e**2, 1.0])
B = np.eye(2)
print("AIRM distance:", geodesic_airm(A, B))
print("Log-Euclidean distance:", log_euclidean_distance(A, B))
print("Stein divergence:", stein_divergence(A, B))

# The AIRM distance does not change under congruence X -> M X M^T
M = np.array([[2.0, 1.0], [0.5, 3.0]])
print("AIRM after congruence:", geodesic_airm(M @ A @ M.T, M @ B @ M.T))

for gamma in (0.1, 0.5, 2.0):
    print(f"gamma={gamma}: log-Euclidean {kernel_log_euclidean_gaussian(A, B, gamma):.4f}, "
          f"raw-entry {kernel_euclidean_gaussian(A, B, gamma):.4f}")
print("Stein kernel, beta=1:", kernel_stein(A, B, 1.0))

rng = np.random.default_rng(0)
data = [make_spd(G @ G.T, 1e-3) for G in rng.standard_normal((30, 4, 4))]
K = gram(data, KernelSpec("log_euclidean_gaussian", gamma=0.5))
print("Gram shape", K.shape, "smallest eigenvalue", np.linalg.eigvalsh(K)[0])
