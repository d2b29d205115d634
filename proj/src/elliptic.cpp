#include <fsuq/elliptic.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

namespace fsuq {

namespace {

struct MeshSplit {
    int full = 0;       // complete cells covered by [0, x]
    double frac = 0.0;  // covered fraction of the next cell
    double h = 0.0;
};

MeshSplit split_mesh(double x, const SolveConfig& config) {
    if (!std::isfinite(config.L) || !(config.L > 0.0))
        throw std::invalid_argument("domain length must be positive");
    if (config.n_h < 1)
        throw std::invalid_argument("cell count must be at least 1");
    if (!(x >= 0.0) || x > config.L * (1.0 + 1e-12))
        throw std::invalid_argument("evaluation point outside [0, L]");
    MeshSplit m;
    m.h = config.L / config.n_h;
    double t = std::min(x / m.h, static_cast<double>(config.n_h));
    m.full = static_cast<int>(t);
    if (m.full == config.n_h)
        m.frac = 0.0;
    else
        m.frac = t - m.full;
    return m;
}

double checked_compliance(const CoefficientModel& coef, double node,
                          const std::vector<double>& y,
                          const std::vector<double>& z) {
    double b = coef.compliance(node, y, z);
    if (!std::isfinite(b) || b <= 0.0) throw NonPositiveCoefficient(node, b);
    return b;
}

std::vector<double> validated_draws(std::vector<double> draws, int m_s,
                                    int y_dim) {
    if (m_s < 1) throw std::invalid_argument("sample count must be positive");
    if (draws.size() != static_cast<std::size_t>(m_s) * y_dim)
        throw std::invalid_argument("draw block does not hold m_s rows of y_dim");
    return draws;
}

MomentSet moment_point(const std::vector<double>& z) {
    if (z.size() != 4)
        throw std::invalid_argument(
            "compliance moment point needs (mean, std, skewness, excess kurtosis)");
    return {z[0], z[1], z[2], z[3]};
}

// fallback engine: one full quadrature pass per retained sample
class LoopBound : public BoundModel {
  public:
    LoopBound(const CoefficientModel& coef, const SolveConfig& config,
              std::vector<double> draws, int m_s)
        : coef_(coef), config_(config), draws_(std::move(draws)), m_s_(m_s) {}

    int sample_count() const override { return m_s_; }

    void displacement_samples(const std::vector<double>& z, double x,
                              std::vector<double>& out) const override {
        int d = coef_.y_dim();
        out.resize(m_s_);
        std::vector<double> y;
        for (int i = 0; i < m_s_; ++i) {
            y.assign(draws_.begin() + static_cast<std::ptrdiff_t>(i) * d,
                     draws_.begin() + static_cast<std::ptrdiff_t>(i + 1) * d);
            out[i] = solve_displacement(coef_, x, y, z, config_);
        }
    }

  private:
    const CoefficientModel& coef_;
    SolveConfig config_;
    std::vector<double> draws_;
    int m_s_;
};

// the sinusoidal profile factors out of the lognormal model, so one prefix
// sum of 1/(2 + sin) serves every sample and every fuzzy point
class Example1Bound : public BoundModel {
  public:
    Example1Bound(const Example1Model& model, const SolveConfig& config,
                  std::vector<double> draws)
        : config_(config), draws_(std::move(draws)) {
        int n = config.n_h;
        double h = config.L / n;
        inv_profile_.resize(n);
        prefix_.assign(n + 1, 0.0);
        for (int j = 1; j <= n; ++j) {
            double node = (j - 0.5) * h;
            inv_profile_[j - 1] =
                1.0 / (2.0 + std::sin(2.0 * std::numbers::pi * node / model.length()));
            prefix_[j] = prefix_[j - 1] + inv_profile_[j - 1];
        }
    }

    int sample_count() const override { return static_cast<int>(draws_.size()); }

    void displacement_samples(const std::vector<double>& z, double x,
                              std::vector<double>& out) const override {
        check_point(z);
        double sx = profile_integral(x);
        out.resize(draws_.size());
        for (std::size_t i = 0; i < draws_.size(); ++i)
            out[i] = std::exp(-z[0] - draws_[i] * z[1]) * sx;
    }

    void mean_displacement(const std::vector<double>& z,
                           const std::vector<double>& xs,
                           std::vector<double>& out) const override {
        check_point(z);
        double acc = 0.0;
        for (double yi : draws_) acc += std::exp(-z[0] - yi * z[1]);
        double rbar = acc / static_cast<double>(draws_.size());
        out.resize(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k)
            out[k] = rbar * profile_integral(xs[k]);
    }

  private:
    static void check_point(const std::vector<double>& z) {
        if (z.size() != 2)
            throw std::invalid_argument("lognormal model expects z = (z1, z2)");
    }

    double profile_integral(double x) const {
        MeshSplit m = split_mesh(x, config_);
        double s = m.h * prefix_[m.full];
        if (m.frac > 0.0) s += m.frac * m.h * inv_profile_[m.full];
        return s;
    }

    SolveConfig config_;
    std::vector<double> draws_;
    std::vector<double> inv_profile_;
    std::vector<double> prefix_;
};

// caches the gaussian field on every data cell for the whole draw block;
// each call then fits one beta law, tabulates the translation map, and
// accumulates translated rows cell by cell
class Example2Bound : public BoundModel {
  public:
    Example2Bound(const Example2Model& model, const SolveConfig& config,
                  std::vector<double> draws, int m_s)
        : config_(config), m_s_(m_s) {
        const KLExpansion& kl = model.expansion();
        int m = model.modes();
        int n = config.n_h;
        double h = config.L / n;
        cell_of_node_.resize(n);
        for (int j = 1; j <= n; ++j)
            cell_of_node_[j - 1] = static_cast<Eigen::Index>(
                nearest_cell(kl, (j - 0.5) * h * model.unit_scale()));

        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
            ymat(draws.data(), m_s, m);
        Eigen::VectorXd scale(m);
        for (int j = 0; j < m; ++j) scale[j] = std::sqrt(kl.eigenvalues[j]);
        gcell_ = kl.eigenvectors.leftCols(m) * (scale.asDiagonal() * ymat.transpose());
    }

    int sample_count() const override { return m_s_; }

    void displacement_samples(const std::vector<double>& z, double x,
                              std::vector<double>& out) const override {
        auto shared = table_for(z);
        const TranslationTable& table = *shared;
        MeshSplit m = split_mesh(x, config_);
        out.assign(m_s_, 0.0);
        std::vector<double> row(m_s_);
        Eigen::Index last = -1;
        for (int j = 1; j <= m.full; ++j) {
            refresh_row(table, cell_of_node_[j - 1], (j - 0.5) * m.h, last, row);
            for (int i = 0; i < m_s_; ++i) out[i] += row[i];
        }
        for (int i = 0; i < m_s_; ++i) out[i] *= m.h;
        if (m.frac > 0.0) {
            refresh_row(table, cell_of_node_[m.full], (m.full + 0.5) * m.h, last, row);
            for (int i = 0; i < m_s_; ++i) out[i] += m.frac * m.h * row[i];
        }
    }

    void mean_displacement(const std::vector<double>& z,
                           const std::vector<double>& xs,
                           std::vector<double>& out) const override {
        auto shared = table_for(z);
        const TranslationTable& table = *shared;
        // the sample mean is linear in the per-node compliance, so per-cell
        // means carry all the information the stations need
        int n = config_.n_h;
        double h = config_.L / n;
        std::vector<double> node_mean(n, 0.0);
        std::vector<double> prefix(n + 1, 0.0);
        std::vector<double> row(m_s_);
        Eigen::Index last = -1;
        double cell_mean = 0.0;
        for (int j = 1; j <= n; ++j) {
            Eigen::Index cell = cell_of_node_[j - 1];
            if (cell != last) {
                refresh_row(table, cell, (j - 0.5) * h, last, row);
                double acc = 0.0;
                for (double b : row) acc += b;
                cell_mean = acc / static_cast<double>(m_s_);
            }
            node_mean[j - 1] = cell_mean;
            prefix[j] = prefix[j - 1] + cell_mean;
        }
        out.resize(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) {
            MeshSplit m = split_mesh(xs[k], config_);
            double u = h * prefix[m.full];
            if (m.frac > 0.0) u += m.frac * h * node_mean[m.full];
            out[k] = u;
        }
    }

  private:
    // Repeated cut points hit the same moment fit; the solve that builds a
    // translation table dwarfs everything else, so share tables across
    // calls.  Values do not depend on who builds first, which keeps results
    // deterministic under any worker interleaving.
    std::shared_ptr<const TranslationTable> table_for(
        const std::vector<double>& z) const {
        {
            std::lock_guard<std::mutex> lock(table_mutex_);
            auto it = tables_.find(z);
            if (it != tables_.end()) return it->second;
        }
        auto fresh = std::make_shared<const TranslationTable>(
            fit_beta_from_moments(moment_point(z)));
        std::lock_guard<std::mutex> lock(table_mutex_);
        if (tables_.size() >= 8192) tables_.clear();  // keep the memo bounded
        return tables_.emplace(z, std::move(fresh)).first->second;
    }

    void refresh_row(const TranslationTable& table, Eigen::Index cell,
                     double node, Eigen::Index& last,
                     std::vector<double>& row) const {
        if (cell == last) return;
        for (int i = 0; i < m_s_; ++i) {
            double b = table(gcell_(cell, i));
            if (!std::isfinite(b) || b <= 0.0) throw NonPositiveCoefficient(node, b);
            row[i] = b;
        }
        last = cell;
    }

    SolveConfig config_;
    int m_s_;
    std::vector<Eigen::Index> cell_of_node_;
    Eigen::MatrixXd gcell_;  // field value per (data cell, sample)
    mutable std::mutex table_mutex_;
    mutable std::map<std::vector<double>, std::shared_ptr<const TranslationTable>>
        tables_;
};

}  // namespace

NonPositiveCoefficient::NonPositiveCoefficient(double x, double v)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "nonpositive coefficient: compliance " << v
             << " at quadrature node x = " << x;
          return os.str();
      }()),
      node(x),
      value(v) {}

double solve_displacement(const CoefficientModel& coef, double x,
                          const std::vector<double>& y,
                          const std::vector<double>& z,
                          const SolveConfig& config) {
    MeshSplit m = split_mesh(x, config);
    double acc = 0.0;
    for (int j = 1; j <= m.full; ++j)
        acc += checked_compliance(coef, (j - 0.5) * m.h, y, z);
    double u = m.h * acc;
    if (m.frac > 0.0)
        u += m.frac * m.h * checked_compliance(coef, (m.full + 0.5) * m.h, y, z);
    return u;
}

std::unique_ptr<BoundModel> CoefficientModel::bind(const SolveConfig& config,
                                                   std::vector<double> draws,
                                                   int m_s) const {
    split_mesh(0.0, config);
    return std::make_unique<LoopBound>(
        *this, config, validated_draws(std::move(draws), m_s, y_dim()), m_s);
}

void BoundModel::mean_displacement(const std::vector<double>& z,
                                   const std::vector<double>& xs,
                                   std::vector<double>& out) const {
    out.assign(xs.size(), 0.0);
    std::vector<double> samples;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        displacement_samples(z, xs[k], samples);
        double acc = 0.0;
        for (double u : samples) acc += u;
        out[k] = acc / static_cast<double>(samples.size());
    }
}

double Example1Model::compliance(double x, const std::vector<double>& y,
                                 const std::vector<double>& z) const {
    if (y.size() != 1 || z.size() != 2)
        throw std::invalid_argument(
            "lognormal model expects scalar y and z = (z1, z2)");
    double profile = 2.0 + std::sin(2.0 * std::numbers::pi * x / length_);
    return std::exp(-z[0] - y[0] * z[1]) / profile;
}

std::unique_ptr<BoundModel> Example1Model::bind(const SolveConfig& config,
                                                std::vector<double> draws,
                                                int m_s) const {
    split_mesh(0.0, config);
    return std::make_unique<Example1Bound>(
        *this, config, validated_draws(std::move(draws), m_s, 1));
}

Example2Model::Example2Model(KLExpansion kl, int modes, double unit_scale)
    : kl_(std::move(kl)), modes_(modes), unit_scale_(unit_scale) {
    if (modes_ < 1 || modes_ > static_cast<int>(kl_.eigenvalues.size()))
        throw std::invalid_argument("mode count outside the expansion range");
    if (!std::isfinite(unit_scale_) || !(unit_scale_ > 0.0))
        throw std::invalid_argument("unit scale must be positive");
}

double Example2Model::compliance(double x, const std::vector<double>& y,
                                 const std::vector<double>& z) const {
    if (static_cast<int>(y.size()) != modes_)
        throw std::invalid_argument("noise vector length does not match mode count");
    BetaParams params = fit_beta_from_moments(moment_point(z));
    auto cell = static_cast<Eigen::Index>(nearest_cell(kl_, x * unit_scale_));
    double g = 0.0;
    for (int j = 0; j < modes_; ++j)
        g += std::sqrt(kl_.eigenvalues[j]) * kl_.eigenvectors(cell, j) * y[j];
    return translate(g, params);
}

std::unique_ptr<BoundModel> Example2Model::bind(const SolveConfig& config,
                                                std::vector<double> draws,
                                                int m_s) const {
    split_mesh(0.0, config);
    return std::make_unique<Example2Bound>(
        *this, config, validated_draws(std::move(draws), m_s, modes_), m_s);
}

Interval solution_alpha_cut(const CoefficientModel& coef, double x,
                            const std::vector<double>& y,
                            const FuzzyVector& fvec, double alpha,
                            int resolution, const SolveConfig& config) {
    auto points = discretize(fvec.joint_alpha_cut(alpha), resolution);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& z : points) {
        double u = solve_displacement(coef, x, y, z, config);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    return {lo, hi};
}

FuzzyVariable expected_displacement(const CoefficientModel& coef, double x,
                                    const FuzzyVector& fvec, Sampler& sampler,
                                    int m_s, const std::vector<double>& levels,
                                    int m_f, const SolveConfig& config,
                                    int workers) {
    if (m_s < 1) throw std::invalid_argument("sample count must be positive");
    std::vector<double> draws =
        standard_normal(sampler, static_cast<std::size_t>(m_s) * coef.y_dim());
    auto bound = coef.bind(config, std::move(draws), m_s);
    std::vector<double> station = {x};
    CrispMap q = [&](const std::vector<double>& z) {
        std::vector<double> mean(1);
        bound->mean_displacement(z, station, mean);
        return mean[0];
    };
    return extend(q, fvec, levels, m_f, workers);
}

}  // namespace fsuq
