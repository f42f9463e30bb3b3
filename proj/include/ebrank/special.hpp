#pragma once

namespace ebrank {

// log Gamma(x), x > 0.
double log_gamma(double x);

// Digamma psi(x) = d log Gamma(x) / dx, x > 0.
// Upward recurrence to x >= 10, then the asymptotic Bernoulli series;
// absolute error below 1e-13 over the positive axis.
double digamma(double x);

// Trigamma psi'(x), x > 0. Same recurrence + asymptotic scheme.
double trigamma(double x);

}  // namespace ebrank
