"""Exact versus inexact steps, with and without measurement noise.

The exact step solves a one-dimensional dual line search and lands precisely
on the selected hyperplane; the inexact step just uses the row residual.
Noiseless data rewards the exact step. Noisy data punishes it: enforcing
corrupted hyperplanes exactly injects the corruption into the iterate, so
the inexact step ends up more accurate. The same effect shows in the noisy
error envelopes, where the exact-mode bound carries an extra factor.
"""

import numpy as np

import sparsekaczmarz as sk

m, n, k = 200, 100, 5
lam, beta = 1.0, m // 2
trials = 20
max_iters = 1500

medians = {}
for noise in (0.0, 0.1):
    finals = {"exact": [], "inexact": []}
    for t in range(trials):
        system, x_hat, _ = sk.gaussian_instance(m, n, k, sk.child_rng(7, t, 0))
        if noise > 0:
            b_noisy, _, _ = sk.add_noise(system.rhs, noise, sk.child_rng(7, t, 1))
            system = system.with_rhs(b_noisy)
        for mode_name, mode in (("exact", sk.StepMode.EXACT), ("inexact", sk.StepMode.INEXACT)):
            spec = sk.SolverSpec.sskm(
                lam, beta, mode,
                seed=sk.child_seed(7, t, 2, mode is sk.StepMode.EXACT),
                stop=sk.StoppingRule(max_iters=max_iters, mse_target=1e-6),
            )
            _, trace = sk.run(system, spec, ground_truth=x_hat)
            finals[mode_name].append(trace.final_mse)
    medians[noise] = {name: float(np.median(vals)) for name, vals in finals.items()}

print(f"median final MSE over {trials} trials ({max_iters} iteration budget):\n")
print(f"{'noise':>8s} {'exact step':>14s} {'inexact step':>14s}   better")
for noise, med in medians.items():
    better = "exact" if med["exact"] <= med["inexact"] else "inexact"
    print(f"{noise:8.0%} {med['exact']:14.2e} {med['inexact']:14.2e}   {better}")

# envelope factor: the exact-mode noise term is inflated by (1 + 4 lam ||A||_{1,2})
system, x_hat, _ = sk.gaussian_instance(m, n, k, sk.child_rng(7, 0, 0))
onetwo = sk.one_two_norm(system)
q = np.full(100, 0.995)
env_inexact = sk.noisy_envelope(q, lam, x_hat, 0.1, onetwo, sk.StepMode.INEXACT)
env_exact = sk.noisy_envelope(q, lam, x_hat, 0.1, onetwo, sk.StepMode.EXACT)
print(f"\nmax row 1-norm ||A||_(1,2): {onetwo:.2f}")
print(f"noise-term inflation for the exact step: {1 + 4 * lam * onetwo:.1f}x")
print(f"envelope at iterate 100: inexact {env_inexact[-1]:.2f}, exact {env_exact[-1]:.2f}")
