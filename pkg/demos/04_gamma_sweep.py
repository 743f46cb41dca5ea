"""Accuracy as a function of the kernel width gamma.

Very small gamma rounds the Gram matrix to all ones and very large gamma
drives it to the identity; both erase the cluster structure.

Run: python demos/04_gamma_sweep.py
"""
from dataclasses import replace

from spdc import experiment as ex
from spdc.kernels import KernelSpec
from spdc.solver import SolverConfig
from spdc.synth import SynthSpec

base = ex.ExperimentConfig(
    synth=SynthSpec(clusters=4, points_per_cluster=20, dim=5, noise=0.3),
    kernel=KernelSpec("log_euclidean_gaussian", gamma=0.5),
    solver=SolverConfig(lam=0.04),
    trials=10,
    dump=False,
)

print(f"{'gamma':>8}  accuracy  NMI    iters")
for gamma in (1e-18, 1e-14, 1e-10, 1e-6, 1e-2, 0.1, 0.5, 1.0, 2.0, 1e2, 1e6):
    _, s, _ = ex.execute(replace(base, kernel=replace(base.kernel, gamma=gamma)))
    print(f"{gamma:8.0e}  {s['accuracy_mean']:.3f}     {s['nmi_mean']:.3f}  {s['iters_mean']:.0f}")
