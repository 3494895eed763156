#pragma once

// Small dense factorizations, a Jacobi-preconditioned conjugate gradient, and
// a symmetric generalized eigensolver that deflates a shared kernel. Matrices
// here are patch sized (at most a few hundred rows) except SparseMatrix.

#include <cstddef>
#include <span>
#include <vector>

namespace certiq {

using Vector = std::vector<double>;

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);

    bool all_finite() const noexcept;
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
Vector multiply(const DenseMatrix& a, std::span<const double> x);
/// Returns P^T A P.
DenseMatrix congruence(const DenseMatrix& p, const DenseMatrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// x^T A x.
double quadratic_form(const DenseMatrix& a, std::span<const double> x);

class CholeskyFactorization {
public:
    /// Throws NotSpdError on a non-positive pivot.
    explicit CholeskyFactorization(const DenseMatrix& a);

    Vector solve(std::span<const double> b) const;
    std::size_t size() const noexcept { return l_.rows(); }

private:
    DenseMatrix l_;
};

class LuFactorization {
public:
    /// Partial pivoting. Throws SingularMatrixError when a pivot falls below
    /// 1e-14 times the largest entry of `a`.
    explicit LuFactorization(const DenseMatrix& a);

    Vector solve(std::span<const double> b) const;
    std::size_t size() const noexcept { return lu_.rows(); }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

Vector cholesky_solve(const DenseMatrix& a, std::span<const double> b);
Vector lu_solve(const DenseMatrix& a, std::span<const double> b);

struct SymmetricEigen {
    Vector values;          ///< ascending
    DenseMatrix vectors;    ///< column k is the unit eigenvector of values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix.
SymmetricEigen symmetric_eigen(const DenseMatrix& a);

struct GenEigOptions {
    /// Eigenvalues of B below kernel_rel_tol * max eig(B) are treated as kernel.
    double kernel_rel_tol = 1e-10;
    /// Kernel directions v of B must satisfy |A v| <= kernel_check_tol * |A|_F.
    double kernel_check_tol = 1e-6;
};

struct GenEigResult {
    double mu_max = 0.0;
    Vector maximizer;       ///< x with A x = mu_max B x, normalized to x^T B x = 1
    std::size_t kernel_dim = 0;
    std::size_t retained_dim = 0;
    double max_kernel_residual = 0.0;  ///< max |A v| / |A|_F over discarded v
};

/// Largest eigenvalue of A x = mu B x for symmetric positive semidefinite A, B
/// whose kernels are nested (ker B inside ker A). Throws QuotientUnboundedError
/// when A does not vanish on the deflated kernel of B.
GenEigResult gen_eig_max(const DenseMatrix& a, const DenseMatrix& b, const GenEigOptions& options = {});

/// Compressed sparse row matrix.
class SparseMatrix {
public:
    struct Triplet {
        std::size_t row;
        std::size_t col;
        double value;
    };

    SparseMatrix() = default;

    /// Duplicate entries are summed. `symmetric` records that the caller
    /// assembled a structurally symmetric matrix; it is verified.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets,
                                      bool symmetric = false);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nonzeros() const noexcept { return values_.size(); }
    bool is_symmetric() const noexcept { return symmetric_; }

    Vector multiply(std::span<const double> x) const;
    Vector diagonal() const;
    DenseMatrix to_dense() const;

    std::span<const std::size_t> row_offsets() const noexcept { return offsets_; }
    std::span<const std::size_t> column_indices() const noexcept { return columns_; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    bool symmetric_ = false;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> columns_;
    std::vector<double> values_;
};

struct CgResult {
    Vector x;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients until |Ax - b| <= rel_tol |b|.
/// Gives up after 10 * dim iterations with NonConvergenceError.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double rel_tol);

} // namespace certiq
