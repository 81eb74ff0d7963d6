#include "sns/markov.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "sns/error.hpp"

namespace sns {

namespace {

void require_stochastic(const Matrix& P) {
    if (P.rows() == 0 || P.rows() != P.cols()) {
        throw ValidationError("transition matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        if ((P.row(i).array() < 0.0).any() || !P.row(i).allFinite() ||
            std::abs(P.row(i).sum() - 1.0) > kProbabilityTolerance) {
            throw ValidationError("matrix is not row-stochastic at row " + std::to_string(i));
        }
    }
}

// Square boolean matrix with bit-packed rows.
class SupportMatrix {
public:
    explicit SupportMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

    static SupportMatrix of(const Matrix& P) {
        SupportMatrix m(static_cast<std::size_t>(P.rows()));
        for (Eigen::Index i = 0; i < P.rows(); ++i)
            for (Eigen::Index j = 0; j < P.cols(); ++j)
                if (P(i, j) > 0.0) m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        return m;
    }

    void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
    bool get(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U; }

    SupportMatrix operator*(const SupportMatrix& rhs) const {
        SupportMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            std::uint64_t* dst = &out.bits_[i * words_];
            for (std::size_t k = 0; k < n_; ++k) {
                if (!get(i, k)) continue;
                const std::uint64_t* src = &rhs.bits_[k * words_];
                for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
            }
        }
        return out;
    }

    bool all_set() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (!get(i, j)) return false;
        return true;
    }

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

}  // namespace

double stationary_residual(const Matrix& P, const Distribution& pi) {
    return (P.transpose() * pi - pi).lpNorm<Eigen::Infinity>();
}

Distribution stationary_distribution(const Matrix& P) {
    require_stochastic(P);
    const Eigen::Index n = P.rows();
    Matrix A = P.transpose() - Matrix::Identity(n, n);
    A.row(n - 1).setOnes();
    Vector b = Vector::Zero(n);
    b(n - 1) = 1.0;

    Eigen::PartialPivLU<Matrix> lu(A);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot >= kSingularPivot)) {
        throw NumericalError("stationary distribution: singular system (pivot " + std::to_string(min_pivot) + ")");
    }
    Distribution pi = lu.solve(b);
    const double residual = stationary_residual(P, pi);
    if (!(residual < 1e-12) || std::abs(pi.sum() - 1.0) > kProbabilityTolerance) {
        throw NumericalError("stationary distribution: residual " + std::to_string(residual) + " above tolerance");
    }
    return pi;
}

PowerIterationResult stationary_distribution_power(const Matrix& P, std::size_t max_iters, double tol) {
    require_stochastic(P);
    const Eigen::Index n = P.rows();
    PowerIterationResult result;
    result.pi = Distribution::Constant(n, 1.0 / static_cast<double>(n));
    const Matrix Pt = P.transpose();
    for (std::size_t it = 1; it <= max_iters; ++it) {
        Distribution next = Pt * result.pi;
        next /= next.sum();
        const double change = (next - result.pi).lpNorm<Eigen::Infinity>();
        result.pi = std::move(next);
        result.iterations = it;
        if (change < tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

bool check_irreducible_aperiodic(const Matrix& P) {
    require_stochastic(P);
    const std::size_t n = static_cast<std::size_t>(P.rows());
    // Wielandt: a primitive n x n pattern has a positive power at (n-1)^2 + 1,
    // and every later power stays positive.
    std::size_t exponent = (n - 1) * (n - 1) + 1;
    SupportMatrix base = SupportMatrix::of(P);
    SupportMatrix acc = base;
    --exponent;
    while (exponent > 0) {
        if (exponent & 1U) acc = acc * base;
        exponent >>= 1U;
        if (exponent > 0) base = base * base;
    }
    return acc.all_set();
}

}  // namespace sns
