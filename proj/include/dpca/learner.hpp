#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "dpca/bundle.hpp"
#include "dpca/reports.hpp"

namespace dpca {

/// An estimated valuation v-hat produced from one bidder's reports.
class ValueModel {
public:
    virtual ~ValueModel() = default;
    virtual int items() const = 0;
    /// Estimated value in [0,1]; the empty bundle is always 0.
    virtual double predict(const Bundle& bundle) const = 0;
};

struct LearnerConfig {
    /// Ridge penalty on the per-item weights. The bias is not penalized.
    double ridge = 1e-6;
};

/// Exact lookup on the queried bundles backed by a ridge-regularized linear
/// fit on item indicators for everything else.
class LearnedValuation final : public ValueModel {
public:
    LearnedValuation(int items, std::vector<std::optional<double>> lookup,
                     std::vector<double> weights, double bias);

    int items() const override { return items_; }
    double predict(const Bundle& bundle) const override;

    /// Unclamped linear prediction.
    double linear(const Bundle& bundle) const;
    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

private:
    int items_;
    std::vector<std::optional<double>> lookup_;
    std::vector<double> weights_;
    double bias_;
};

/// Fits a LearnedValuation. A report on the empty bundle is read as 0
/// whatever it says. Throws ParameterError on an empty report set or a
/// negative ridge.
LearnedValuation train(const ReportSet& reports, const LearnerConfig& config = {});

double predict(const ValueModel& model, const Bundle& bundle);

using Learner = std::function<std::unique_ptr<ValueModel>(const ReportSet&)>;

Learner ridge_learner(LearnerConfig config = {});

/// Predictions of one model on every bundle, indexed by mask.
std::vector<double> tabulate(const ValueModel& model);

}  // namespace dpca
