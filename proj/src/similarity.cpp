#include "hetclust/similarity.hpp"

#include <cmath>
#include <utility>

#include "hetclust/errors.hpp"

namespace hetclust {

namespace {

// Core statistic without the disjointness scan; the engine guarantees
// disjoint clusters and calls this O(K^2) times per run.
double lr_statistic_unchecked(const ClusterStats& a, const ClusterStats& b) {
    const double sa = a.precision_sum();
    const double sb = b.precision_sum();
    const double diff = a.mle_mean() - b.mle_mean();
    return (sa * sb / (sa + sb)) * diff * diff;
}

void require_disjoint(const ClusterStats& a, const ClusterStats& b) {
    if (!disjoint(a, b)) {
        throw OverlappingClustersError(
            "likelihood-ratio statistic requires disjoint clusters");
    }
}

}  // namespace

double lr_statistic(const ClusterStats& a, const ClusterStats& b) {
    require_disjoint(a, b);
    return lr_statistic_unchecked(a, b);
}

PValue lr_pvalue(const ClusterStats& a, const ClusterStats& b) {
    require_disjoint(a, b);
    return chi2_sf_1df(lr_statistic_unchecked(a, b));
}

PValue LikelihoodRatioNotion::pairwise_pvalue(const ClusterStats& a,
                                              const ClusterStats& b) const {
    return chi2_sf_1df(lr_statistic_unchecked(a, b));
}

GroupMetric classifier_rate_metric(std::string group_id,
                                   std::span<const PredictionRecord> predictions,
                                   RateMetric kind) {
    for (const auto& record : predictions) {
        if (record.label > 1 || record.classification > 1) {
            throw InputError("classifier records must be strictly binary (group '" +
                             group_id + "')");
        }
    }

    std::size_t relevant = 0;
    std::size_t hits = 0;
    for (const auto& record : predictions) {
        switch (kind) {
            case RateMetric::FalsePositiveRate:
                if (record.label == 0) {
                    ++relevant;
                    hits += record.classification;
                }
                break;
            case RateMetric::TruePositiveRate:
                if (record.label == 1) {
                    ++relevant;
                    hits += record.classification;
                }
                break;
            case RateMetric::PositiveRate:
                ++relevant;
                hits += record.classification;
                break;
            case RateMetric::MisclassificationRate:
                ++relevant;
                hits += record.classification != record.label ? 1 : 0;
                break;
        }
    }

    if (relevant == 0) {
        throw InsufficientDataError(
            "no rows relevant to the requested rate for group '" + group_id + "'");
    }
    const double rate =
        static_cast<double>(hits) / static_cast<double>(relevant);
    if (rate == 0.0 || rate == 1.0) {
        throw DegenerateRateError("empirical rate for group '" + group_id +
                                  "' is exactly " + (rate == 0.0 ? "0" : "1") +
                                  "; its standard error would be zero");
    }

    GroupMetric metric;
    metric.group_id = std::move(group_id);
    metric.estimate = rate;
    metric.sd = std::sqrt(rate * (1.0 - rate) / static_cast<double>(relevant));
    return metric;
}

}  // namespace hetclust
