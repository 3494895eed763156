#include "certiq/linalg.hpp"

#include "certiq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace certiq {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector DenseMatrix::column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double DenseMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double DenseMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("multiply: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto brow = b.row(k);
            auto crow = c.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw InvalidArgument("multiply: vector length differs");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

DenseMatrix congruence(const DenseMatrix& p, const DenseMatrix& a) {
    return multiply(transpose(p), multiply(a, p));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double quadratic_form(const DenseMatrix& a, std::span<const double> x) {
    const Vector ax = multiply(a, x);
    return dot(x, ax);
}

namespace {

void require_square_finite(const DenseMatrix& a, const char* who) {
    if (a.rows() != a.cols()) throw InvalidArgument(std::string(who) + ": matrix is not square");
    if (!a.all_finite()) throw InvalidArgument(std::string(who) + ": matrix has non-finite entries");
}

} // namespace

CholeskyFactorization::CholeskyFactorization(const DenseMatrix& a) : l_(a.rows(), a.cols()) {
    require_square_finite(a, "cholesky");
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
        if (!(d > 0.0)) throw NotSpdError("cholesky: non-positive pivot at row " + std::to_string(j));
        const double ljj = std::sqrt(d);
        l_(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
            l_(i, j) = s / ljj;
        }
    }
}

Vector CholeskyFactorization::solve(std::span<const double> b) const {
    const std::size_t n = l_.rows();
    Vector y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) y[i] -= l_(i, k) * y[k];
        y[i] /= l_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= l_(k, ii) * y[k];
        y[ii] /= l_(ii, ii);
    }
    return y;
}

LuFactorization::LuFactorization(const DenseMatrix& a) : lu_(a), perm_(a.rows()) {
    require_square_finite(a, "lu");
    const std::size_t n = a.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double threshold = 1e-14 * a.max_abs();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                piv = i;
            }
        }
        if (!(best > threshold) || best == 0.0)
            throw SingularMatrixError("lu: numerically singular at column " + std::to_string(k));
        if (piv != k) {
            std::swap(perm_[k], perm_[piv]);
            auto rk = lu_.row(k);
            auto rp = lu_.row(piv);
            std::swap_ranges(rk.begin(), rk.end(), rp.begin());
        }
        const double pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / pivot;
            lu_(i, k) = f;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

Vector LuFactorization::solve(std::span<const double> b) const {
    const std::size_t n = lu_.rows();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) x[i] -= lu_(i, k) * x[k];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= lu_(ii, k) * x[k];
        x[ii] /= lu_(ii, ii);
    }
    return x;
}

Vector cholesky_solve(const DenseMatrix& a, std::span<const double> b) {
    return CholeskyFactorization(a).solve(b);
}

Vector lu_solve(const DenseMatrix& a, std::span<const double> b) { return LuFactorization(a).solve(b); }

SymmetricEigen symmetric_eigen(const DenseMatrix& input) {
    require_square_finite(input, "symmetric_eigen");
    const std::size_t n = input.rows();
    DenseMatrix a = input;
    // Symmetrize against assembly round-off.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
    DenseMatrix v = DenseMatrix::identity(n);

    const double scale = a.frobenius_norm();
    int sweep = 0;
    constexpr int max_sweeps = 100;
    for (; sweep < max_sweeps && scale > 0.0; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= 1e-16 * scale) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymmetricEigen result;
    result.sweeps = sweep;
    result.values.resize(n);
    result.vectors = DenseMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        result.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) result.vectors(i, k) = v(i, order[k]);
    }
    return result;
}

GenEigResult gen_eig_max(const DenseMatrix& a, const DenseMatrix& b, const GenEigOptions& options) {
    require_square_finite(a, "gen_eig_max");
    require_square_finite(b, "gen_eig_max");
    if (a.rows() != b.rows()) throw InvalidArgument("gen_eig_max: A and B differ in size");
    const std::size_t n = a.rows();

    GenEigResult result;
    if (n == 0) return result;

    const SymmetricEigen eb = symmetric_eigen(b);
    const double bmax = std::max(0.0, eb.values.back());
    const double threshold = options.kernel_rel_tol * bmax;
    const double anorm = a.frobenius_norm();

    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < n; ++k) {
        const Vector vk = eb.vectors.column(k);
        if (eb.values[k] > threshold && bmax > 0.0) {
            kept.push_back(k);
            continue;
        }
        ++result.kernel_dim;
        if (anorm > 0.0) {
            const double residual = norm2(multiply(a, vk)) / anorm;
            result.max_kernel_residual = std::max(result.max_kernel_residual, residual);
        }
    }
    result.retained_dim = kept.size();
    if (result.max_kernel_residual > options.kernel_check_tol) {
        throw QuotientUnboundedError("gen_eig_max: numerator does not vanish on the denominator kernel (residual " +
                                     std::to_string(result.max_kernel_residual) + ")");
    }
    if (kept.empty()) {
        result.maximizer.assign(n, 0.0);
        return result;
    }

    // Columns of W are retained eigenvectors scaled by S^{-1/2}, so W^T B W = I.
    const std::size_t m = kept.size();
    DenseMatrix w(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        const std::size_t k = kept[c];
        const double scale = 1.0 / std::sqrt(eb.values[k]);
        for (std::size_t i = 0; i < n; ++i) w(i, c) = eb.vectors(i, k) * scale;
    }
    const DenseMatrix reduced = congruence(w, a);
    const SymmetricEigen er = symmetric_eigen(reduced);
    result.mu_max = er.values.back();
    const Vector y = er.vectors.column(m - 1);
    result.maximizer = multiply(w, y);
    return result;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets,
                                         bool symmetric) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& l, const Triplet& r) {
        return l.row != r.row ? l.row < r.row : l.col < r.col;
    });
    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.symmetric_ = symmetric;
    m.offsets_.assign(rows + 1, 0);
    std::size_t last_row = rows;
    std::size_t last_col = cols;
    for (const Triplet& t : triplets) {
        if (t.row >= rows || t.col >= cols) throw InvalidArgument("sparse: triplet index out of range");
        if (!std::isfinite(t.value)) throw InvalidArgument("sparse: non-finite entry");
        if (t.row == last_row && t.col == last_col) {
            m.values_.back() += t.value;
            continue;
        }
        m.columns_.push_back(t.col);
        m.values_.push_back(t.value);
        ++m.offsets_[t.row + 1];
        last_row = t.row;
        last_col = t.col;
    }
    for (std::size_t i = 1; i <= rows; ++i) m.offsets_[i] += m.offsets_[i - 1];

    if (symmetric) {
        if (rows != cols) throw InvalidArgument("sparse: symmetric matrix must be square");
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t k = m.offsets_[i]; k < m.offsets_[i + 1]; ++k) {
                const std::size_t j = m.columns_[k];
                const auto begin = m.columns_.begin() + static_cast<std::ptrdiff_t>(m.offsets_[j]);
                const auto end = m.columns_.begin() + static_cast<std::ptrdiff_t>(m.offsets_[j + 1]);
                if (!std::binary_search(begin, end, i))
                    throw InvalidArgument("sparse: matrix flagged symmetric is not structurally symmetric");
            }
        }
    }
    return m;
}

Vector SparseMatrix::multiply(std::span<const double> x) const {
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += values_[k] * x[columns_[k]];
        y[i] = s;
    }
    return y;
}

Vector SparseMatrix::diagonal() const {
    Vector d(std::min(rows_, cols_), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
            if (columns_[k] == i) d[i] += values_[k];
    return d;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) d(i, columns_[k]) += values_[k];
    return d;
}

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double rel_tol) {
    if (a.rows() != a.cols() || a.rows() != b.size()) throw InvalidArgument("cg_solve: dimension mismatch");
    const std::size_t n = b.size();
    CgResult result;
    result.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return result;

    Vector inv_diag = a.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) throw NotSpdError("cg_solve: non-positive diagonal entry");
        d = 1.0 / d;
    }

    Vector r(b.begin(), b.end());
    Vector z(n), p(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    const std::size_t cap = 10 * n;
    double rel = 1.0;
    for (std::size_t it = 1; it <= cap; ++it) {
        const Vector ap = a.multiply(p);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) {
            if (dot(p, p) == 0.0) break;  // stagnated below round-off
            throw NotSpdError("cg_solve: matrix is not positive definite");
        }
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            result.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rel = norm2(r) / bnorm;
        result.iterations = it;
        if (rel <= rel_tol) {
            // Confirm against the true residual, not the recursively updated one.
            const Vector ax = a.multiply(result.x);
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += (b[i] - ax[i]) * (b[i] - ax[i]);
            rel = std::sqrt(s) / bnorm;
            if (rel <= rel_tol) {
                result.relative_residual = rel;
                return result;
            }
            for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NonConvergenceError("cg_solve: no convergence after " + std::to_string(cap) + " iterations", rel);
}

} // namespace certiq
