#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace fsuq {

// exp(-|x1-x2|^exponent / (2 * correlation_length^2)), unit variance
struct CovarianceSpec {
    double exponent = 2.0;
    double correlation_length = 20.0;
};

double covariance(double x1, double x2, const CovarianceSpec& spec);

// Discrete Karhunen-Loeve expansion of the kernel on a uniform midpoint
// grid.  Eigenpairs come from the symmetric Nystrom matrix h*C; eigenvalues
// are descending, eigenvector columns orthonormal under the weight h, so
// sum_j lambda_j phi_j(x_i) phi_j(x_k) reconstructs C(x_i, x_k).
struct KLExpansion {
    std::vector<double> grid;
    double spacing = 0.0;
    std::vector<double> eigenvalues;
    Eigen::MatrixXd eigenvectors;  // column j = phi_j on the grid
};

KLExpansion kl_decompose(const std::vector<double>& grid, const CovarianceSpec& spec);

// smallest m whose leading eigenvalues capture `fraction` of the total
int kl_truncation_order(const KLExpansion& kl, double fraction);

// G(x_i) = sum_{j<m} sqrt(lambda_j) phi_j(x_i) y_j on the whole grid
std::vector<double> evaluate_field(const KLExpansion& kl, int m,
                                   const std::vector<double>& y);

// index of the grid cell containing x (cells are midpoint-centered, width
// spacing), clamped to the first/last cell for x beyond the grid
std::size_t nearest_cell(const KLExpansion& kl, double x);

}  // namespace fsuq
