#include "uavnet/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace uavnet {

namespace {

// Series after the Pfaff transformation: with w = t/(1+t) in [0, 1),
//   2F1(1, 1-2/eta; 2-2/eta; -t) = (1+t)^-1 * sum_n n!/( (2-2/eta)_n ) w^n.
// All terms are positive and the term ratio is below w, so the remainder
// after term T_n is bounded by T_n * w/(1-w). Kahan compensation keeps the
// long sums near machine precision.
double hyp_pfaff(double eta, double t) {
    const double w = t / (1.0 + t);
    const double c = 2.0 - 2.0 / eta;
    double sum = 1.0, comp = 0.0, term = 1.0;
    for (int n = 0; n < 100000; ++n) {
        term *= (n + 1) * w / (c + n);
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if (term * w / (1.0 - w) < 1e-17 * sum) break;
    }
    return sum / (1.0 + t);
}

// Expansion about t = infinity, valid for t > 1:
//   g(t) := (t/(eta-2)) 2F1(...,-t) = K eta t^(2/eta) - sum_n (-1)^n t^-n/(n eta + 2)
// with K = (pi/eta)/sin(2 pi/eta). Converges geometrically with ratio 1/t.
double hyp_asymptotic(double eta, double t) {
    const double k = (M_PI / eta) / std::sin(2.0 * M_PI / eta);
    double g = k * std::pow(t, 2.0 / eta);
    double pw = 1.0;  // t^-n
    for (int n = 0; n < 10000; ++n) {
        const double term = pw / (n * eta + 2.0);
        g -= (n % 2 == 0) ? term : -term;
        pw /= t;
        if (term < 1e-17 * g) break;
    }
    return g * (eta - 2.0) / t;
}

}  // namespace

double hyp2f1_coverage(double eta, double t) {
    if (!(eta > 2.0)) {
        throw std::domain_error("hyp2f1_coverage: path loss exponent must exceed 2");
    }
    if (!(t >= 0.0)) {
        throw std::domain_error("hyp2f1_coverage: argument must be non-negative");
    }
    if (t == 0.0) return 1.0;
    return t <= 4.0 ? hyp_pfaff(eta, t) : hyp_asymptotic(eta, t);
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights (positive half, symmetric).
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double integral;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * kKronrodX[i]);
        fv[14 - i] = f(mid + half * kKronrodX[i]);
    }
    fv[7] = f(mid);

    double kron = 0.0, gauss = 0.0, resabs = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double pair =
            (i == 7) ? fv[7] : fv[i] + fv[14 - i];
        kron += kKronrodW[i] * pair;
        resabs += kKronrodW[i] *
                  ((i == 7) ? std::abs(fv[7])
                            : std::abs(fv[i]) + std::abs(fv[14 - i]));
    }
    // Gauss nodes sit at the odd Kronrod indices.
    for (int i = 0; i < 4; ++i) {
        const int j = 2 * i + 1;
        gauss += kGaussW[i] * ((j == 7) ? fv[7] : fv[j] + fv[14 - j]);
    }

    const double integral = kron * half;
    const double meanv = kron * 0.5;
    double resasc = 0.0;
    for (int i = 0; i < 8; ++i) {
        resasc += kKronrodW[i] *
                  ((i == 7) ? std::abs(fv[7] - meanv)
                            : std::abs(fv[i] - meanv) +
                                  std::abs(fv[14 - i] - meanv));
    }
    resasc *= std::abs(half);
    resabs *= std::abs(half);

    double err = std::abs((kron - gauss) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(err, 50.0 * eps * resabs);
    }
    return {integral, err};
}

struct Panel {
    double a, b, integral, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

double adapt(const std::function<double(double)>& f, double a, double b,
             const QuadratureSpec& spec) {
    std::priority_queue<Panel> queue;
    auto first = gk15(f, a, b);
    queue.push({a, b, first.integral, first.error});
    double total = first.integral;
    double total_err = first.error;

    int splits = 0;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (splits >= spec.max_subdivisions || queue.empty()) {
            throw QuadratureError(
                total, total_err,
                "quadrature did not converge: error bound " +
                    std::to_string(total_err) + " after " +
                    std::to_string(splits) + " subdivisions");
        }
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Panel is at rounding resolution; accept its contribution.
            total_err -= worst.error;
            continue;
        }
        auto left = gk15(f, worst.a, mid);
        auto right = gk15(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.integral, left.error});
        queue.push({mid, worst.b, right.integral, right.error});
        ++splits;
    }
    return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (std::isinf(b)) {
        // x = a + t/(1-t) maps [0,1) onto [a, inf); GK nodes avoid t = 1.
        auto g = [&f, a](double t) {
            const double om = 1.0 - t;
            const double x = a + t / om;
            return f(x) / (om * om);
        };
        return adapt(g, 0.0, 1.0, spec);
    }
    if (a == b) return 0.0;
    return adapt(f, a, b, spec);
}

}  // namespace uavnet
