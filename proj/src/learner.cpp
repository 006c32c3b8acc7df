#include "dpca/learner.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "dpca/errors.hpp"

namespace dpca {

LearnedValuation::LearnedValuation(int items, std::vector<std::optional<double>> lookup,
                                   std::vector<double> weights, double bias)
        : items_(items), lookup_(std::move(lookup)), weights_(std::move(weights)), bias_(bias) {
    if (lookup_.size() != bundle_count(items) || static_cast<int>(weights_.size()) != items) {
        throw ParameterError("learned valuation dimensions do not match item count");
    }
}

double LearnedValuation::linear(const Bundle& bundle) const {
    double raw = bias_;
    for (int j = 0; j < items_; ++j) {
        if (bundle.contains(j)) raw += weights_[j];
    }
    return raw;
}

double LearnedValuation::predict(const Bundle& bundle) const {
    if (bundle.width() != items_) {
        throw ParameterError("bundle width " + std::to_string(bundle.width()) +
                             " does not match model over " + std::to_string(items_) + " items");
    }
    if (bundle.is_empty()) return 0.0;
    if (const auto& hit = lookup_[bundle.mask()]) return *hit;
    return std::clamp(linear(bundle), 0.0, 1.0);
}

LearnedValuation train(const ReportSet& reports, const LearnerConfig& config) {
    if (reports.empty()) {
        throw ParameterError("cannot train on an empty report set");
    }
    if (!(config.ridge >= 0.0)) {
        throw ParameterError("ridge coefficient must be nonnegative");
    }
    const int m = reports.reports().front().bundle.width();
    if (m < 1) {
        throw ParameterError("reports must be over at least one item");
    }

    std::vector<std::optional<double>> lookup(bundle_count(m));
    // Normal equations for features (indicator_0..indicator_{m-1}, 1).
    const int dim = m + 1;
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd row(dim);
    for (const auto& r : reports) {
        const double target = r.bundle.is_empty() ? 0.0 : r.value;
        lookup[r.bundle.mask()] = target;
        for (int j = 0; j < m; ++j) row[j] = r.bundle.contains(j) ? 1.0 : 0.0;
        row[m] = 1.0;
        gram.noalias() += row * row.transpose();
        rhs.noalias() += target * row;
    }
    for (int j = 0; j < m; ++j) gram(j, j) += config.ridge;

    // Minimum-norm solution, so a rank-deficient system with ridge = 0 still
    // yields a deterministic fit.
    const Eigen::VectorXd solution = gram.completeOrthogonalDecomposition().solve(rhs);
    std::vector<double> weights(solution.data(), solution.data() + m);
    return LearnedValuation(m, std::move(lookup), std::move(weights), solution[m]);
}

double predict(const ValueModel& model, const Bundle& bundle) {
    return model.predict(bundle);
}

Learner ridge_learner(LearnerConfig config) {
    return [config](const ReportSet& reports) -> std::unique_ptr<ValueModel> {
        return std::make_unique<LearnedValuation>(train(reports, config));
    };
}

std::vector<double> tabulate(const ValueModel& model) {
    std::vector<double> table(bundle_count(model.items()));
    for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
        table[mask] = model.predict(Bundle(model.items(), mask));
    }
    return table;
}

}  // namespace dpca
