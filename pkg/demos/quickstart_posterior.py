"""Quickstart: simulate data, compute the conjugate posterior, and look at
the function-space reconstruction.

The model: the initial condition mu of a heated rod is observed through the
heat semigroup at time T = 0.1 in white noise of intensity 1/n.  Everything
happens in sine-basis coordinates, where both the forward operator and the
posterior are diagonal.
"""

import numpy as np

import heatbayes as hb

n = 1e4            # signal-to-noise: noise standard deviation is n^(-1/2)
N = 100            # coordinates kept

# the benchmark initial condition 4x(x-1)(8x-5) and its observation
kappa = hb.heat_eigenvalues(0.1, N)
mu0 = hb.true_signal_coefficients(N)
obs = hb.simulate_observations(mu0, kappa, n, seed=7)
print("first eigenvalues:", np.round(kappa.values[:4], 6))
print("first observations:", np.round(obs.y.values[:4], 4))

# a rough polynomial prior: lambda_i = i^(-3)
prior = hb.PriorSpec.polynomial(alpha=1.0)
summary = hb.compute_posterior(prior, kappa, n, obs)
print("posterior mean (first 4):", np.round(summary.mean.values[:4], 4))
print("true coefficients (first 4):", np.round(mu0.values[:4], 4))

# reconstruction on a grid, plus a posterior draw through the same basis
x = np.linspace(0, 1, 11)
mean_curve = hb.posterior_mean_function(summary, x)
draw = hb.posterior_draw(summary, seed=1)
draw_curve = hb.forward_solution(draw, 0.0, x)
truth = hb.true_signal_function(x)
print("\n   x     truth   post mean  one draw")
for k in range(11):
    print(f" {x[k]:5.2f}  {truth[k]:8.4f}  {mean_curve[k]:8.4f}  "
          f"{draw_curve[k]:8.4f}")

# the bias/variance/spread split of the risk, no data needed
dec = hb.risk_decomposition(prior, kappa, n, mu0)
print(f"\nsq bias {dec.sq_bias:.4f}  estimator var {dec.estimator_variance:.4f}"
      f"  spread {dec.posterior_spread:.4f}")
