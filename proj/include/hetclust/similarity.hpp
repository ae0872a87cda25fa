#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "hetclust/cluster_stats.hpp"
#include "hetclust/pvalue.hpp"
#include "hetclust/special_functions.hpp"

namespace hetclust {

/// A notion of similarity between clusters: anything that can produce a
/// valid p-value for the hypothesis "these two clusters are similar".
///
/// Implementations must be merge-invariant: whenever clusters A, B, C
/// are all similar, A must remain similar to the union of B and C.
/// Without that property the sequential test loses its error control.
/// Callers guarantee the two clusters are disjoint.
class SimilarityNotion {
public:
    virtual ~SimilarityNotion() = default;

    virtual PValue pairwise_pvalue(const ClusterStats& a,
                                   const ClusterStats& b) const = 0;
};

/// Equal-mean similarity via the generalized likelihood-ratio test of
/// the normal model. Merge invariance holds because equal means compose:
/// if A, B, C share a common true mean, so does the union of B and C.
/// The statistic is chi-square with one degree of freedom under the
/// null, so the p-value is its upper tail.
class LikelihoodRatioNotion final : public SimilarityNotion {
public:
    PValue pairwise_pvalue(const ClusterStats& a,
                           const ClusterStats& b) const override;
};

/// Likelihood-ratio statistic for equality of two cluster means,
/// computed in the product-of-precisions form
///
///   LR = (S_a * S_b / (S_a + S_b)) * (mean_a - mean_b)^2
///
/// which avoids the catastrophic cancellation the square-root form
/// suffers when S_a/S_b is extreme. For singletons this reduces to
/// (estimate_a - estimate_b)^2 / (sd_a^2 + sd_b^2).
/// Throws OverlappingClustersError if the clusters share a member.
double lr_statistic(const ClusterStats& a, const ClusterStats& b);

/// chi2_sf_1df of the likelihood-ratio statistic; strictly decreasing
/// in the statistic.
PValue lr_pvalue(const ClusterStats& a, const ClusterStats& b);

/// One scored observation: the model's binary classification and the
/// true binary label.
struct PredictionRecord {
    std::uint8_t classification = 0;
    std::uint8_t label = 0;
};

enum class RateMetric {
    FalsePositiveRate,      // P[c = 1 | label = 0]
    TruePositiveRate,       // P[c = 1 | label = 1]
    PositiveRate,           // P[c = 1]
    MisclassificationRate,  // P[c != label]
};

/// Empirical classifier rate for one group with its binomial standard
/// error sqrt(r(1-r)/m), where m is the size of the relevant subset.
/// Label-conditional fairness checks (equalized odds) are obtained by
/// running the procedure once per label stratum, e.g. once with
/// FalsePositiveRate and once with TruePositiveRate.
/// Throws InsufficientDataError when the relevant subset is empty and
/// DegenerateRateError when the rate is exactly 0 or 1.
GroupMetric classifier_rate_metric(std::string group_id,
                                   std::span<const PredictionRecord> predictions,
                                   RateMetric kind);

}  // namespace hetclust
