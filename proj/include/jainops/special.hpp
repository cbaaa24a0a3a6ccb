#pragma once

// Saddle-point pieces for log-space evaluation of Poisson and negative
// binomial probabilities (C. Loader, "Fast and accurate computation of
// binomial probabilities", 2000).

namespace jainops::special {

/// log Γ(z+1) - [(z+1/2) log z - z + log √(2π)], for real z > 0.
double stirlerr(double z);

/// Deviance term x log(x/np) + np - x, free of cancellation when x ≈ np.
double bd0(double x, double np);

/// log of the Poisson pmf at integer v ≥ 0 with mean lambda > 0.
double log_poisson_pmf(double v, double lambda);

/// log Γ for real arguments, thread-safe.
double lgamma(double z);

}  // namespace jainops::special
