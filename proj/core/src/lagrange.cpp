#include "certiq/lagrange.hpp"

#include "certiq/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace certiq {

namespace {

double one_norm(const DenseMatrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

} // namespace

LagrangeBasis::LagrangeBasis(int q) : q_(q) {
    if (q < 1 || q > kMaxLagrangeDegree)
        throw InvalidArgument("p_basis: degree " + std::to_string(q) + " not in [1, 4]");
    const auto& idx = multi_indices(q);
    const std::size_t n = idx.size();
    for (const MultiIndex& a : idx)
        nodes_.push_back({static_cast<double>(a[0]) / q, static_cast<double>(a[1]) / q, static_cast<double>(a[2]) / q});

    // V(i, m) = monomial m at node i; basis coefficients are the columns of V^{-1}.
    DenseMatrix v(n, n);
    for (std::size_t m = 0; m < n; ++m) {
        BaryPoly mono(q);
        mono.coefficients()[m] = 1.0;
        for (std::size_t i = 0; i < n; ++i) v(i, m) = mono(nodes_[i]);
    }
    const LuFactorization lu(v);
    coeffs_ = DenseMatrix(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        coeffs_.set_column(j, lu.solve(e));
    }
    vandermonde_condition_ = one_norm(v) * one_norm(coeffs_);
}

BaryPoly LagrangeBasis::function(std::size_t j) const {
    return BaryPoly(q_, coeffs_.column(j));
}

BaryPoly LagrangeBasis::from_nodal(std::span<const double> values) const {
    if (values.size() != size()) throw InvalidArgument("from_nodal: wrong number of nodal values");
    return BaryPoly(q_, multiply(coeffs_, values));
}

Vector LagrangeBasis::to_nodal(const BaryPoly& poly) const {
    Vector out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = poly(nodes_[i]);
    return out;
}

const LagrangeBasis& p_basis(int q) {
    if (q < 1 || q > kMaxLagrangeDegree)
        throw InvalidArgument("p_basis: degree " + std::to_string(q) + " not in [1, 4]");
    static const auto bases = [] {
        std::vector<LagrangeBasis> all;
        for (int d = 1; d <= kMaxLagrangeDegree; ++d) all.emplace_back(d);
        return all;
    }();
    return bases[static_cast<std::size_t>(q - 1)];
}

BaryPoly lagrange_reduce(const BaryPoly& poly, int p) {
    const LagrangeBasis& basis = p_basis(p);
    return basis.from_nodal(basis.to_nodal(poly));
}

const LagrangeTable& lagrange_table(int q, int exactness) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<LagrangeTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{q, exactness}];
    if (!slot) {
        auto table = std::make_unique<LagrangeTable>();
        table->basis = &p_basis(q);
        table->rule = &quad_rule(exactness);
        std::vector<BaryPoly> fns;
        for (std::size_t j = 0; j < table->basis->size(); ++j) fns.push_back(table->basis->function(j));
        for (const Bary& pt : table->rule->points) {
            Vector vals(fns.size());
            std::vector<std::array<double, 3>> grads(fns.size());
            for (std::size_t j = 0; j < fns.size(); ++j) {
                vals[j] = fns[j](pt);
                grads[j] = fns[j].bary_gradient(pt);
            }
            table->values.push_back(std::move(vals));
            table->bary_grads.push_back(std::move(grads));
        }
        slot = std::move(table);
    }
    return *slot;
}

} // namespace certiq
