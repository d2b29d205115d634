#pragma once

#include <fsuq/extension.hpp>
#include <fsuq/fuzzy_variable.hpp>
#include <fsuq/fuzzy_vector.hpp>
#include <fsuq/interval.hpp>
#include <fsuq/sampler.hpp>
#include <fsuq/stochastic_field.hpp>
#include <fsuq/translation.hpp>

#include <memory>
#include <stdexcept>
#include <vector>

namespace fsuq {

// Mesh for the two-point boundary value problem -(a u')' = 0 on [0, L] with
// u(0) = 0 and unit flux a u' = 1 at the right end: u(x) is the integral of
// the compliance 1/a from 0 to x, evaluated by the midpoint rule on n_h
// uniform cells.
struct SolveConfig {
    double L = 1.0;
    int n_h = 100;
};

inline SolveConfig lognormal_bar_config() { return {2.0, 200}; }
inline SolveConfig composite_bar_config() { return {1.7e-3, 170}; }

struct NonPositiveCoefficient : std::runtime_error {
    NonPositiveCoefficient(double x, double value);
    double node;   // quadrature node where positivity failed
    double value;  // offending compliance value
};

class BoundModel;

// Material model a(x, y, z) with noise vector y and fuzzy parameter point z.
// Implementations expose the compliance 1/a directly so that models defined
// through a compliance field never invert twice.
class CoefficientModel {
  public:
    virtual ~CoefficientModel() = default;

    virtual int y_dim() const = 0;

    // 1/a at one point; must be strictly positive on the declared domain.
    virtual double compliance(double x, const std::vector<double>& y,
                              const std::vector<double>& z) const = 0;

    // Fixes the mesh and a flat row-major draw block (m_s rows of y_dim) and
    // returns an engine that evaluates all retained samples per call. The
    // model must outlive the returned engine. The base implementation loops
    // solve_displacement; subclasses install vectorized paths.
    virtual std::unique_ptr<BoundModel> bind(const SolveConfig& config,
                                             std::vector<double> draws,
                                             int m_s) const;
};

// Sample-batched displacement evaluator over one frozen draw set. Calls are
// const and thread-safe; scratch lives on the stack of each call.
class BoundModel {
  public:
    virtual ~BoundModel() = default;

    virtual int sample_count() const = 0;

    // u(x, y_i, z) for every retained draw, out resized to sample_count().
    virtual void displacement_samples(const std::vector<double>& z, double x,
                                      std::vector<double>& out) const = 0;

    // Sample mean of u(x_k, y_i, z) for each requested station.
    virtual void mean_displacement(const std::vector<double>& z,
                                   const std::vector<double>& xs,
                                   std::vector<double>& out) const;
};

// Lognormal coefficient on a sinusoidally modulated profile:
// a = (2 + sin(2 pi x / L)) * exp(z1 + y * z2) with scalar noise y.
class Example1Model : public CoefficientModel {
  public:
    explicit Example1Model(double length) : length_(length) {}

    int y_dim() const override { return 1; }
    double compliance(double x, const std::vector<double>& y,
                      const std::vector<double>& z) const override;
    std::unique_ptr<BoundModel> bind(const SolveConfig& config,
                                     std::vector<double> draws,
                                     int m_s) const override;

    double length() const { return length_; }

  private:
    double length_;
};

// Compliance taken from the translated Gaussian field: b(x, y, z) with z the
// moment point (mean, std, skewness, excess kurtosis) of the pointwise beta
// marginal. Solver coordinates are meters; the field grid is micrometers,
// bridged by unit_scale. Off-grid points clamp to the nearest field cell.
class Example2Model : public CoefficientModel {
  public:
    Example2Model(KLExpansion kl, int modes, double unit_scale = 1e6);

    int y_dim() const override { return modes_; }
    double compliance(double x, const std::vector<double>& y,
                      const std::vector<double>& z) const override;
    std::unique_ptr<BoundModel> bind(const SolveConfig& config,
                                     std::vector<double> draws,
                                     int m_s) const override;

    const KLExpansion& expansion() const { return kl_; }
    int modes() const { return modes_; }
    double unit_scale() const { return unit_scale_; }

  private:
    KLExpansion kl_;
    int modes_;
    double unit_scale_;
};

// Midpoint-rule displacement h * sum_{x_j <= x} 1/a(x_j, y, z); a partial
// final cell contributes its covered fraction times that cell's midpoint
// compliance. Throws NonPositiveCoefficient when positivity fails at a node.
double solve_displacement(const CoefficientModel& coef, double x,
                          const std::vector<double>& y,
                          const std::vector<double>& z,
                          const SolveConfig& config);

// [min, max] of the displacement over the discretized joint alpha-cut at
// fixed (x, y).
Interval solution_alpha_cut(const CoefficientModel& coef, double x,
                            const std::vector<double>& y,
                            const FuzzyVector& fvec, double alpha,
                            int resolution, const SolveConfig& config);

// Fuzzy Monte Carlo expectation of u(x, ., .) over a shared draw set.
FuzzyVariable expected_displacement(const CoefficientModel& coef, double x,
                                    const FuzzyVector& fvec, Sampler& sampler,
                                    int m_s, const std::vector<double>& levels,
                                    int m_f, const SolveConfig& config,
                                    int workers = 1);

}  // namespace fsuq
