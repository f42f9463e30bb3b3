#include "ebrank/special.hpp"

#include <cmath>

#include "ebrank/errors.hpp"

namespace ebrank {

double log_gamma(double x) {
    if (!(x > 0.0)) throw InputError("log_gamma: argument must be positive");
    return std::lgamma(x);
}

double digamma(double x) {
    if (!(x > 0.0)) throw InputError("digamma: argument must be positive");
    double result = 0.0;
    // psi(x) = psi(x+1) - 1/x
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic series: psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^2n)
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = inv2 * (1.0 / 12.0
                  - inv2 * (1.0 / 120.0
                  - inv2 * (1.0 / 252.0
                  - inv2 * (1.0 / 240.0
                  - inv2 * (1.0 / 132.0
                  - inv2 * (691.0 / 32760.0
                  - inv2 * (1.0 / 12.0)))))));
    return result + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
    if (!(x > 0.0)) throw InputError("trigamma: argument must be positive");
    double result = 0.0;
    // psi'(x) = psi'(x+1) + 1/x^2
    while (x < 10.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    // psi'(x) ~ 1/x + 1/(2x^2) + sum B_2n / x^(2n+1)
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 1.0 + inv * 0.5
                  + inv2 * (1.0 / 6.0
                  - inv2 * (1.0 / 30.0
                  - inv2 * (1.0 / 42.0
                  - inv2 * (1.0 / 30.0
                  - inv2 * (5.0 / 66.0
                  - inv2 * (691.0 / 2730.0
                  - inv2 * (7.0 / 6.0)))))));
    return result + inv * series;
}

}  // namespace ebrank
