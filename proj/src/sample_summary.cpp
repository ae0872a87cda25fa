#include "hetclust/sample_summary.hpp"

#include <cmath>
#include <utility>

#include "hetclust/errors.hpp"

namespace hetclust {

SampleSummary summarize_samples(std::span<const double> samples) {
    // Welford's accumulator: numerically stable in one pass.
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    for (double x : samples) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    SampleSummary out;
    out.count = n;
    out.mean = mean;
    out.variance = n >= 2 ? m2 / static_cast<double>(n - 1) : 0.0;
    return out;
}

GroupMetric welch_summary(std::string group_id, const SampleSummary& treatment,
                          const SampleSummary& control) {
    if (treatment.count < 2 || control.count < 2) {
        throw InsufficientDataError(
            "welch_summary: each arm needs at least two observations (group '" +
            group_id + "')");
    }
    if (!std::isfinite(treatment.variance) || treatment.variance < 0.0 ||
        !std::isfinite(control.variance) || control.variance < 0.0) {
        throw InputError("welch_summary: variances must be finite and nonnegative");
    }
    const double se2 = treatment.variance / static_cast<double>(treatment.count) +
                       control.variance / static_cast<double>(control.count);
    if (se2 <= 0.0) {
        throw DegenerateVarianceError(
            "welch_summary: zero standard error, the normal model is undefined "
            "(group '" + group_id + "')");
    }
    GroupMetric metric;
    metric.group_id = std::move(group_id);
    metric.estimate = treatment.mean - control.mean;
    metric.sd = std::sqrt(se2);
    return metric;
}

}  // namespace hetclust
