#include <fsuq/stochastic_field.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsuq {

double covariance(double x1, double x2, const CovarianceSpec& spec) {
    double d = std::abs(x1 - x2);
    double l2 = spec.correlation_length * spec.correlation_length;
    return std::exp(-std::pow(d, spec.exponent) / (2.0 * l2));
}

KLExpansion kl_decompose(const std::vector<double>& grid, const CovarianceSpec& spec) {
    const int n = static_cast<int>(grid.size());
    if (n < 2) throw std::invalid_argument("kl_decompose needs at least 2 grid points");
    const double h = grid[1] - grid[0];
    if (h <= 0.0) throw std::invalid_argument("grid must be strictly ascending");
    for (int i = 1; i < n; ++i) {
        double hi = grid[i] - grid[i - 1];
        if (std::abs(hi - h) > 1e-9 * h)
            throw std::invalid_argument("grid spacing must be uniform");
    }

    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            A(i, j) = A(j, i) = h * covariance(grid[i], grid[j], spec);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("covariance eigendecomposition failed");

    KLExpansion kl;
    kl.grid = grid;
    kl.spacing = h;
    kl.eigenvalues.resize(n);
    kl.eigenvectors.resize(n, n);
    const double inv_sqrt_h = 1.0 / std::sqrt(h);
    const double lambda_max = es.eigenvalues()(n - 1);
    for (int j = 0; j < n; ++j) {
        double lambda = es.eigenvalues()(n - 1 - j);  // descending
        if (lambda < 0.0) {
            if (lambda < -1e-12 * lambda_max)
                throw std::runtime_error(
                    "covariance matrix has a significantly negative eigenvalue");
            lambda = 0.0;
        }
        kl.eigenvalues[j] = lambda;
        kl.eigenvectors.col(j) = es.eigenvectors().col(n - 1 - j) * inv_sqrt_h;
    }
    return kl;
}

int kl_truncation_order(const KLExpansion& kl, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("fraction must lie in (0, 1]");
    int positive = 0;
    double total = 0.0;
    for (double l : kl.eigenvalues) {
        if (l > 0.0) ++positive;
        total += l;
    }
    if (fraction == 1.0) return positive;
    double partial = 0.0;
    for (int m = 1; m <= positive; ++m) {
        partial += kl.eigenvalues[m - 1];
        if (partial >= fraction * total) return m;
    }
    return positive;
}

std::vector<double> evaluate_field(const KLExpansion& kl, int m,
                                   const std::vector<double>& y) {
    const int n = static_cast<int>(kl.grid.size());
    if (m < 0 || m > n) throw std::invalid_argument("truncation order out of range");
    if (static_cast<int>(y.size()) != m)
        throw std::invalid_argument("draw vector length must equal the truncation order");

    Eigen::VectorXd w(m);
    for (int j = 0; j < m; ++j) w(j) = std::sqrt(kl.eigenvalues[j]) * y[j];
    Eigen::VectorXd g = kl.eigenvectors.leftCols(m) * w;
    return std::vector<double>(g.data(), g.data() + n);
}

std::size_t nearest_cell(const KLExpansion& kl, double x) {
    double left_edge = kl.grid.front() - 0.5 * kl.spacing;
    auto idx = static_cast<long>(std::floor((x - left_edge) / kl.spacing));
    idx = std::clamp<long>(idx, 0, static_cast<long>(kl.grid.size()) - 1);
    return static_cast<std::size_t>(idx);
}

}  // namespace fsuq
