#include "hetclust/cluster_stats.hpp"

#include <algorithm>
#include <cmath>

#include "hetclust/errors.hpp"

namespace hetclust {

ClusterStats make_cluster(const GroupMetric& metric) {
    validate(metric);
    const double precision = 1.0 / (metric.sd * metric.sd);
    const double weighted = metric.estimate * precision;
    // 1/sd^2 must stay a normal positive double or every downstream
    // ratio degenerates.
    if (!std::isfinite(precision) || precision <= 0.0 || !std::isfinite(weighted)) {
        throw InputError("group '" + metric.group_id +
                         "': sd is outside the representable precision range");
    }
    return ClusterStats({metric.group_id}, precision, weighted);
}

ClusterStats merge_clusters(const ClusterStats& a, const ClusterStats& b) {
    const auto& lhs = a.members();
    const auto& rhs = b.members();
    std::vector<std::string> merged;
    merged.reserve(lhs.size() + rhs.size());

    // Single pass over both sorted member lists; equal keys mean overlap.
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < lhs.size() && j < rhs.size()) {
        const int cmp = lhs[i].compare(rhs[j]);
        if (cmp == 0) {
            throw OverlappingClustersError(
                "merge_clusters: clusters share member '" + lhs[i] + "'");
        }
        merged.push_back(cmp < 0 ? lhs[i++] : rhs[j++]);
    }
    merged.insert(merged.end(), lhs.begin() + i, lhs.end());
    merged.insert(merged.end(), rhs.begin() + j, rhs.end());

    return ClusterStats(std::move(merged), a.precision_sum() + b.precision_sum(),
                        a.weighted_sum() + b.weighted_sum());
}

bool disjoint(const ClusterStats& a, const ClusterStats& b) {
    const auto& lhs = a.members();
    const auto& rhs = b.members();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < lhs.size() && j < rhs.size()) {
        const int cmp = lhs[i].compare(rhs[j]);
        if (cmp == 0) {
            return false;
        }
        (cmp < 0 ? i : j) += 1;
    }
    return true;
}

}  // namespace hetclust
