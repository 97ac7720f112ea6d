#pragma once

#include <functional>
#include <limits>

#include "uavnet/types.hpp"

namespace uavnet {

/// Tolerances and limits for adaptive quadrature.
struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;
};

/// Gauss hypergeometric function 2F1(1, 1 - 2/eta; 2 - 2/eta; -t) for
/// eta > 2 and t >= 0. This is the interference kernel of the coverage
/// analysis: the value lies in (0, 1] and decreases strictly in t.
/// Relative accuracy is better than 1e-10 over the whole domain.
/// Throws std::domain_error for eta <= 2 or t < 0.
double hyp2f1_coverage(double eta, double t);

/// infinity marker for integrate()'s upper limit.
inline constexpr double kInfiniteLimit = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Kronrod integration of f over [a, b]. b may be
/// kInfiniteLimit; the tail is folded onto a finite interval with
/// x = a + t/(1 - t). Throws QuadratureError (carrying the best estimate and
/// the achieved bound) if the tolerance cannot be met within
/// spec.max_subdivisions panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

}  // namespace uavnet
