#include "certiq/raviart_thomas.hpp"

#include "certiq/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace certiq {

namespace {

struct Monomial {
    int a;  // power of x
    int b;  // power of y
};

std::vector<Monomial> monomials_up_to(int degree) {
    std::vector<Monomial> out;
    for (int d = 0; d <= degree; ++d)
        for (int a = d; a >= 0; --a) out.push_back({a, d - a});
    return out;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double mono_value(const Monomial& m, const Vec2& x) { return ipow(x.x, m.a) * ipow(x.y, m.b); }
double mono_dx(const Monomial& m, const Vec2& x) { return m.a == 0 ? 0.0 : m.a * ipow(x.x, m.a - 1) * ipow(x.y, m.b); }
double mono_dy(const Monomial& m, const Vec2& x) { return m.b == 0 ? 0.0 : m.b * ipow(x.x, m.a) * ipow(x.y, m.b - 1); }

const std::array<Vec2, 3> kRefVertices{Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};

Vec2 ref_point(const Bary& l) { return {l[1], l[2]}; }

} // namespace

double shifted_legendre(int k, double t) {
    const double x = 2.0 * t - 1.0;
    double p0 = 1.0;
    if (k == 0) return p0;
    double p1 = x;
    for (int n = 2; n <= k; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

RTBasis::RTBasis(int p) : p_(p) {
    if (p < 1 || p > kMaxRtDegree) throw InvalidArgument("rt_basis: degree " + std::to_string(p) + " not in [1, 3]");
    const std::size_t n = size();

    // DOF matrix A(dof, spanning function); the dual basis is A^{-1}.
    DenseMatrix a(n, n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto column = apply_dofs_impl(s);
        for (std::size_t d = 0; d < n; ++d) a(d, s) = column[d];
    }
    const LuFactorization lu(a);
    coeffs_ = DenseMatrix(n, n);
    Vector e(n);
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        coeffs_.set_column(j, lu.solve(e));
    }
}

void RTBasis::evaluate_span(const Vec2& x, std::vector<Vec2>& values, std::vector<double>& divergences) const {
    const auto monos = monomials_up_to(p_);
    const std::size_t nm = monos.size();
    values.assign(num_span(), Vec2{});
    divergences.assign(num_span(), 0.0);
    for (std::size_t m = 0; m < nm; ++m) {
        const double v = mono_value(monos[m], x);
        values[m] = {v, 0.0};
        divergences[m] = mono_dx(monos[m], x);
        values[nm + m] = {0.0, v};
        divergences[nm + m] = mono_dy(monos[m], x);
    }
    for (int a = 0; a <= p_; ++a) {
        const Monomial h{a, p_ - a};
        const double hv = mono_value(h, x);
        const std::size_t s = 2 * nm + static_cast<std::size_t>(a);
        values[s] = {x.x * hv, x.y * hv};
        divergences[s] = (p_ + 2) * hv;  // div(x h) = 2 h + x . grad h = (2 + p) h
    }
}

Vector RTBasis::apply_dofs_impl(std::size_t span_index) const {
    std::vector<Vec2> vals;
    std::vector<double> divs;
    return apply_dofs([&](const Vec2& x) {
        evaluate_span(x, vals, divs);
        return vals[span_index];
    });
}

Vector RTBasis::apply_dofs(const std::function<Vec2(const Vec2&)>& field) const {
    Vector dofs(size(), 0.0);
    const GaussRule1D g = gauss_legendre_01(p_ + 3);
    for (int i = 0; i < 3; ++i) {
        const Vec2& from = kRefVertices[static_cast<std::size_t>((i + 1) % 3)];
        const Vec2& to = kRefVertices[static_cast<std::size_t>((i + 2) % 3)];
        const Vec2 t = to - from;
        const Vec2 n_scaled{t.y, -t.x};  // outward normal times edge length
        for (std::size_t q = 0; q < g.points.size(); ++q) {
            const double s = g.points[q];
            const double flux = dot(field(from + s * t), n_scaled) * g.weights[q];
            for (int k = 0; k <= p_; ++k) dofs[edge_dof(i, k)] += flux * shifted_legendre(k, s);
        }
    }
    const auto inner = monomials_up_to(p_ - 1);
    const QuadratureRule& rule = quad_rule(2 * p_);
    const std::size_t base = num_edge_dofs();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 x = ref_point(rule.points[q]);
        const Vec2 w = field(x);
        for (std::size_t m = 0; m < inner.size(); ++m) {
            const double mv = mono_value(inner[m], x) * rule.weights[q];
            dofs[base + m] += w.x * mv;
            dofs[base + inner.size() + m] += w.y * mv;
        }
    }
    return dofs;
}

void RTBasis::evaluate(const Vec2& xhat, std::vector<Vec2>& values, std::vector<double>& divergences) const {
    std::vector<Vec2> sv;
    std::vector<double> sd;
    evaluate_span(xhat, sv, sd);
    const std::size_t n = size();
    values.assign(n, Vec2{});
    divergences.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = coeffs_(s, j);
            if (c == 0.0) continue;
            values[j] += c * sv[s];
            divergences[j] += c * sd[s];
        }
    }
}

const RTBasis& rt_basis(int p) {
    if (p < 1 || p > kMaxRtDegree) throw InvalidArgument("rt_basis: degree " + std::to_string(p) + " not in [1, 3]");
    static const auto bases = [] {
        std::vector<RTBasis> all;
        for (int d = 1; d <= kMaxRtDegree; ++d) all.emplace_back(d);
        return all;
    }();
    return bases[static_cast<std::size_t>(p - 1)];
}

int rt_edge_sign(const Triangle& t, int edge, int k) noexcept {
    const std::size_t from = t[static_cast<std::size_t>((edge + 1) % 3)];
    const std::size_t to = t[static_cast<std::size_t>((edge + 2) % 3)];
    if (from < to) return 1;
    // Reversed traversal flips the normal and maps l_k(t) to (-1)^k l_k(t).
    return k % 2 == 0 ? -1 : 1;
}

const RTTable& rt_table(int p, int exactness) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<RTTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{p, exactness}];
    if (!slot) {
        auto table = std::make_unique<RTTable>();
        table->basis = &rt_basis(p);
        table->rule = &quad_rule(exactness);
        for (const Bary& pt : table->rule->points) {
            std::vector<Vec2> vals;
            std::vector<double> divs;
            table->basis->evaluate(ref_point(pt), vals, divs);
            table->values.push_back(std::move(vals));
            table->divergences.push_back(std::move(divs));
        }
        slot = std::move(table);
    }
    return *slot;
}

} // namespace certiq
