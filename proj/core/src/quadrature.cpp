#include "certiq/quadrature.hpp"

#include "certiq/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace certiq {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void add_orbit_1(QuadratureRule& rule, double w) {
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(w);
}

// The three points (a, b, b), (b, a, b), (b, b, a) with b = (1 - a) / 2.
void add_orbit_3(QuadratureRule& rule, double a, double w) {
    const double b = 0.5 * (1.0 - a);
    rule.points.push_back({a, b, b});
    rule.points.push_back({b, a, b});
    rule.points.push_back({b, b, a});
    for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

QuadratureRule symmetric_rule(int degree) {
    QuadratureRule rule;
    rule.exactness = degree;
    switch (degree) {
    case 1:
        add_orbit_1(rule, 0.5);
        break;
    case 2:
        add_orbit_3(rule, 2.0 / 3.0, 1.0 / 6.0);
        break;
    case 4:
        add_orbit_3(rule, 1.0 - 2.0 * 0.4459484909159648863, 0.1116907948390057328);
        add_orbit_3(rule, 1.0 - 2.0 * 0.09157621350977074346, 0.05497587182766093382);
        break;
    case 5: {
        const double s15 = std::sqrt(15.0);
        add_orbit_1(rule, 9.0 / 80.0);
        add_orbit_3(rule, 1.0 - 2.0 * (6.0 - s15) / 21.0, (155.0 - s15) / 2400.0);
        add_orbit_3(rule, 1.0 - 2.0 * (6.0 + s15) / 21.0, (155.0 + s15) / 2400.0);
        break;
    }
    default:
        throw InvalidArgument("no symmetric rule of degree " + std::to_string(degree));
    }
    return rule;
}

// Square [0,1]^2 collapsed onto the triangle: x = s, y = t (1 - s).
QuadratureRule collapsed_rule(int degree) {
    const int n = (degree + 3) / 2;
    const GaussRule1D g = gauss_legendre_01(n);
    QuadratureRule rule;
    rule.exactness = degree;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double s = g.points[static_cast<std::size_t>(i)];
            const double t = g.points[static_cast<std::size_t>(j)];
            const double x = s;
            const double y = t * (1.0 - s);
            rule.points.push_back({1.0 - x - y, x, y});
            rule.weights.push_back(g.weights[static_cast<std::size_t>(i)] * g.weights[static_cast<std::size_t>(j)] *
                                   (1.0 - s));
        }
    }
    return rule;
}

void verify(const QuadratureRule& rule) {
    const int q = rule.exactness;
    for (int a = 0; a <= q; ++a) {
        for (int b = 0; a + b <= q; ++b) {
            for (int c = 0; a + b + c <= q; ++c) {
                double sum = 0.0;
                for (std::size_t k = 0; k < rule.size(); ++k) {
                    const Bary& l = rule.points[k];
                    sum += rule.weights[k] * std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], c);
                }
                const double exact = bary_monomial_integral(a, b, c);
                if (std::abs(sum - exact) > 1e-14 * exact) {
                    throw Error("quadrature rule of degree " + std::to_string(q) + " fails on monomial (" +
                                std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");
                }
            }
        }
    }
}

QuadratureRule make_rule(int exactness) {
    QuadratureRule rule;
    if (exactness <= 1) rule = symmetric_rule(1);
    else if (exactness == 2) rule = symmetric_rule(2);
    else if (exactness <= 4) rule = symmetric_rule(4);
    else if (exactness == 5) rule = symmetric_rule(5);
    else rule = collapsed_rule(exactness);
    verify(rule);
    return rule;
}

} // namespace

double bary_monomial_integral(int a, int b, int c) {
    return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

GaussRule1D gauss_legendre_01(int n) {
    if (n < 1) throw InvalidArgument("gauss_legendre_01: n must be positive");
    GaussRule1D rule;
    rule.points.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const auto idx = static_cast<std::size_t>(i);
        rule.points[idx] = 0.5 * (1.0 - x);
        rule.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const QuadratureRule& quad_rule(int exactness) {
    if (exactness < 0 || exactness > kMaxQuadratureExactness)
        throw InvalidArgument("quad_rule: exactness " + std::to_string(exactness) + " not in [0, 20]");
    static const std::array<QuadratureRule, kMaxQuadratureExactness + 1> rules = [] {
        std::array<QuadratureRule, kMaxQuadratureExactness + 1> all;
        for (int q = 0; q <= kMaxQuadratureExactness; ++q) all[static_cast<std::size_t>(q)] = make_rule(q);
        return all;
    }();
    return rules[static_cast<std::size_t>(exactness)];
}

} // namespace certiq
