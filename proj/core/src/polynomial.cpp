#include "certiq/polynomial.hpp"

#include "certiq/error.hpp"

#include <string>

namespace certiq {

namespace {

std::vector<MultiIndex> make_multi_indices(int q) {
    std::vector<MultiIndex> out;
    out.reserve(num_monomials(q));
    for (int a0 = q; a0 >= 0; --a0)
        for (int a1 = q - a0; a1 >= 0; --a1) out.push_back({a0, a1, q - a0 - a1});
    return out;
}

constexpr int kMaxDegree = 16;

using PowerTable = std::array<std::array<double, kMaxDegree + 1>, 3>;

// Powers l_i^k for k <= q.
PowerTable powers(const Bary& l, int q) {
    PowerTable pw;
    for (std::size_t i = 0; i < 3; ++i) {
        pw[i][0] = 1.0;
        for (int k = 1; k <= q; ++k) pw[i][static_cast<std::size_t>(k)] = pw[i][static_cast<std::size_t>(k - 1)] * l[i];
    }
    return pw;
}

} // namespace

const std::vector<MultiIndex>& multi_indices(int q) {
    if (q < 0 || q > kMaxDegree)
        throw InvalidArgument("multi_indices: degree " + std::to_string(q) + " out of range");
    static const auto table = [] {
        std::array<std::vector<MultiIndex>, kMaxDegree + 1> all;
        for (int d = 0; d <= kMaxDegree; ++d) all[static_cast<std::size_t>(d)] = make_multi_indices(d);
        return all;
    }();
    return table[static_cast<std::size_t>(q)];
}

std::size_t multi_index_position(const MultiIndex& alpha) noexcept {
    const int q = alpha[0] + alpha[1] + alpha[2];
    const int s = q - alpha[0];
    return static_cast<std::size_t>(s * (s + 1) / 2 + (s - alpha[1]));
}

BaryPoly::BaryPoly(int degree, std::vector<double> coeffs) : degree_(degree), coeffs_(std::move(coeffs)) {
    if (degree < 0 || coeffs_.size() != num_monomials(degree))
        throw InvalidArgument("BaryPoly: coefficient count does not match degree " + std::to_string(degree));
}

BaryPoly BaryPoly::barycentric(int i) {
    BaryPoly p(1);
    p.coeffs_[static_cast<std::size_t>(i)] = 1.0;  // order (1,0,0), (0,1,0), (0,0,1)
    return p;
}

double BaryPoly::operator()(const Bary& l) const {
    const auto pw = powers(l, degree_);
    const auto& idx = multi_indices(degree_);
    double sum = 0.0;
    for (std::size_t m = 0; m < idx.size(); ++m) {
        if (coeffs_[m] == 0.0) continue;
        const MultiIndex& a = idx[m];
        sum += coeffs_[m] * pw[0][static_cast<std::size_t>(a[0])] * pw[1][static_cast<std::size_t>(a[1])] *
               pw[2][static_cast<std::size_t>(a[2])];
    }
    return sum;
}

std::array<double, 3> BaryPoly::bary_gradient(const Bary& l) const {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    if (degree_ == 0) return g;
    const auto pw = powers(l, degree_);
    const auto& idx = multi_indices(degree_);
    for (std::size_t m = 0; m < idx.size(); ++m) {
        if (coeffs_[m] == 0.0) continue;
        const MultiIndex& a = idx[m];
        for (std::size_t i = 0; i < 3; ++i) {
            if (a[i] == 0) continue;
            double term = coeffs_[m] * a[i];
            for (std::size_t j = 0; j < 3; ++j)
                term *= pw[j][static_cast<std::size_t>(j == i ? a[j] - 1 : a[j])];
            g[i] += term;
        }
    }
    return g;
}

BaryPoly BaryPoly::elevated(int degree) const {
    if (degree < degree_) throw InvalidArgument("BaryPoly::elevated: cannot lower the degree");
    BaryPoly out = *this;
    const BaryPoly one_form(1, {1.0, 1.0, 1.0});
    while (out.degree_ < degree) out = out * one_form;
    return out;
}

BaryPoly& BaryPoly::operator+=(const BaryPoly& other) {
    if (other.degree_ > degree_) *this = elevated(other.degree_);
    const BaryPoly rhs = other.degree_ < degree_ ? other.elevated(degree_) : other;
    for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += rhs.coeffs_[m];
    return *this;
}

BaryPoly& BaryPoly::operator-=(const BaryPoly& other) {
    BaryPoly neg = other;
    neg *= -1.0;
    return *this += neg;
}

BaryPoly& BaryPoly::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

BaryPoly operator*(const BaryPoly& a, const BaryPoly& b) {
    BaryPoly out(a.degree() + b.degree());
    const auto& ia = multi_indices(a.degree());
    const auto& ib = multi_indices(b.degree());
    auto oc = out.coefficients();
    const auto ac = a.coefficients();
    const auto bc = b.coefficients();
    for (std::size_t i = 0; i < ia.size(); ++i) {
        if (ac[i] == 0.0) continue;
        for (std::size_t j = 0; j < ib.size(); ++j) {
            if (bc[j] == 0.0) continue;
            const MultiIndex sum{ia[i][0] + ib[j][0], ia[i][1] + ib[j][1], ia[i][2] + ib[j][2]};
            oc[multi_index_position(sum)] += ac[i] * bc[j];
        }
    }
    return out;
}

BaryPoly operator+(BaryPoly a, const BaryPoly& b) { return a += b; }
BaryPoly operator-(BaryPoly a, const BaryPoly& b) { return a -= b; }
BaryPoly operator*(double s, BaryPoly a) { return a *= s; }

} // namespace certiq
