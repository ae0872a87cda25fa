#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "hetclust/group_metric.hpp"

namespace hetclust {

/// Count, mean and unbiased (n-1) sample variance of one experiment arm.
struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;
};

/// Summarizes raw observations with Welford's single-pass accumulator.
SampleSummary summarize_samples(std::span<const double> samples);

/// Difference-of-means effect estimate with its large-sample standard
/// error: estimate = treatment.mean - control.mean,
/// sd = sqrt(treatment.variance/treatment.count + control.variance/control.count).
///
/// The returned standard error treats the per-arm variances as known,
/// which is the usual large-sample approximation; no small-sample t
/// correction is applied. Throws InsufficientDataError if either arm
/// has fewer than two observations, DegenerateVarianceError if the
/// combined standard error is zero.
GroupMetric welch_summary(std::string group_id, const SampleSummary& treatment,
                          const SampleSummary& control);

}  // namespace hetclust
