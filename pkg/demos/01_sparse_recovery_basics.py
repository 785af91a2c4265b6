"""Recovering a sparse vector from a consistent linear system.

Builds a random instance A x = b with a 5-sparse ground truth and compares
three row-action solvers:

  RK    - classical randomized Kaczmarz (no sparsity prior),
  SRK   - sparse Kaczmarz: dual row steps followed by soft thresholding,
  SSKM  - SRK driven by greedy sampling: draw beta random rows, project onto
          the most violated one.

All methods stop once the relative squared error drops below 1e-6.
"""

import numpy as np

import sparsekaczmarz as sk

m, n, k = 300, 200, 5
lam = 1.0
beta = m // 2

rng = np.random.default_rng(0)
system, x_hat, _ = sk.gaussian_instance(m, n, k, rng)
print(f"instance: {m}x{n}, {k}-sparse truth, rows normalized")
print(f"smallest nonzero singular value: "
      f"{sk.smallest_nonzero_singular_value(system).smallest_nonzero:.4f}\n")

stop = sk.StoppingRule(max_iters=200_000, mse_target=1e-6)
specs = {
    "RK": sk.SolverSpec.rk(seed=1, stop=stop),
    "SRK (exact step)": sk.SolverSpec.srk(lam, sk.StepMode.EXACT, seed=1, stop=stop),
    "SSKM (exact step)": sk.SolverSpec.sskm(lam, beta, sk.StepMode.EXACT, seed=1, stop=stop),
    "SSKM (inexact step)": sk.SolverSpec.sskm(lam, beta, sk.StepMode.INEXACT, seed=1, stop=stop),
}

print(f"{'method':22s} {'iterations':>10s} {'final MSE':>12s} {'nnz(x)':>7s}")
for name, spec in specs.items():
    pair, trace = sk.run(system, spec, ground_truth=x_hat)
    nnz = int(np.count_nonzero(pair.primal))
    print(f"{name:22s} {trace.iterations:10d} {trace.final_mse:12.2e} {nnz:7d}")

print("\nGreedy subset sampling pays off: SSKM needs far fewer iterations than")
print("SRK because each step attacks the currently most violated row of a")
print(f"random size-{beta} sample instead of an arbitrary row.")
