#pragma once

#include <string>
#include <vector>

#include "hetclust/group_metric.hpp"

namespace hetclust {

/// A cluster of groups carrying the two additive sufficient statistics
/// of the normal model:
///
///   precision_sum  = sum over members of 1/sd^2
///   weighted_sum   = sum over members of estimate/sd^2
///
/// Both are exactly additive under disjoint union, which is what makes
/// the O(K^2) agglomerative loop possible. The maximum-likelihood mean
/// of the cluster is weighted_sum / precision_sum. Instances are
/// immutable after construction and safe to share across threads.
class ClusterStats {
public:
    /// Member group ids, sorted ascending, unique.
    const std::vector<std::string>& members() const noexcept { return members_; }

    double precision_sum() const noexcept { return precision_sum_; }
    double weighted_sum() const noexcept { return weighted_sum_; }
    double mle_mean() const noexcept { return weighted_sum_ / precision_sum_; }

    /// Smallest member id; used by deterministic tie-breaking.
    const std::string& min_member() const noexcept { return members_.front(); }

    friend ClusterStats make_cluster(const GroupMetric& metric);
    friend ClusterStats merge_clusters(const ClusterStats& a, const ClusterStats& b);

private:
    ClusterStats(std::vector<std::string> members, double precision_sum,
                 double weighted_sum)
        : members_(std::move(members)),
          precision_sum_(precision_sum),
          weighted_sum_(weighted_sum) {}

    std::vector<std::string> members_;
    double precision_sum_;
    double weighted_sum_;
};

/// Singleton cluster for one group: precision_sum = 1/sd^2,
/// weighted_sum = estimate/sd^2. Validates the metric.
ClusterStats make_cluster(const GroupMetric& metric);

/// Union of two disjoint clusters; the sufficient statistics are the
/// plain sums of the inputs', so the operation is commutative and
/// associative. Throws OverlappingClustersError if the member sets
/// intersect.
ClusterStats merge_clusters(const ClusterStats& a, const ClusterStats& b);

/// True when the two clusters share no member.
bool disjoint(const ClusterStats& a, const ClusterStats& b);

}  // namespace hetclust
