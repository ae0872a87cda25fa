#include "hetclust/engine.hpp"

#include <algorithm>
#include <string_view>
#include <unordered_set>
#include <utility>

#include "hetclust/errors.hpp"

namespace hetclust {

namespace {

// Ranking of a candidate pair: maximal p-value first, ties resolved by
// the lexicographically smallest sorted pair of smallest member ids.
// Minimal member ids are unique across disjoint clusters, so the order
// is total and deterministic.
struct PairRank {
    double p = -1.0;
    const std::string* lo = nullptr;
    const std::string* hi = nullptr;
};

PairRank make_rank(double p, const std::string& a, const std::string& b) {
    const bool ordered = a < b;
    return {p, ordered ? &a : &b, ordered ? &b : &a};
}

bool outranks(const PairRank& candidate, const PairRank& incumbent) {
    if (candidate.p != incumbent.p) {
        return candidate.p > incumbent.p;
    }
    if (incumbent.lo == nullptr) {
        return true;
    }
    const int c = candidate.lo->compare(*incumbent.lo);
    if (c != 0) {
        return c < 0;
    }
    return candidate.hi->compare(*incumbent.hi) < 0;
}

}  // namespace

double rejection_threshold(const ClusteringConfig& config, std::size_t n_groups) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw InputError("alpha must lie strictly between 0 and 1");
    }
    if (n_groups == 0) {
        throw InputError("threshold undefined for zero groups");
    }
    const double k = static_cast<double>(n_groups);
    switch (config.policy) {
        case ThresholdPolicy::PerIterationK:
            return config.alpha / k;
        case ThresholdPolicy::BonferroniK2:
            return config.alpha / (k * k);
    }
    throw InputError("unknown threshold policy");
}

PairwisePValues::PairwisePValues(std::size_t n_clusters,
                                 std::vector<double> upper,
                                 std::vector<std::string> tie_keys)
    : n_(n_clusters), upper_(std::move(upper)), tie_keys_(std::move(tie_keys)) {
    if (upper_.size() != n_ * (n_ - 1) / 2 || tie_keys_.size() != n_) {
        throw InputError("pairwise table: inconsistent sizes");
    }
}

PValue PairwisePValues::p(std::size_t i, std::size_t j) const {
    if (i == j || i >= n_ || j >= n_) {
        throw InputError("pairwise table: invalid pair index");
    }
    if (i > j) {
        std::swap(i, j);
    }
    return PValue(upper_[n_ * i - i * (i + 1) / 2 + (j - i - 1)]);
}

PairwisePValues pairwise_pvalue_table(std::span<const ClusterStats> clusters,
                                      const SimilarityNotion& notion) {
    const std::size_t n = clusters.size();
    if (n < 2) {
        throw InputError("pairwise_pvalue_table: need at least two clusters");
    }
    // An id seen twice across the list means two clusters overlap.
    std::unordered_set<std::string_view> seen;
    for (const auto& cluster : clusters) {
        for (const auto& id : cluster.members()) {
            if (!seen.insert(id).second) {
                throw OverlappingClustersError(
                    "pairwise_pvalue_table: clusters overlap on member '" + id + "'");
            }
        }
    }

    std::vector<double> upper;
    upper.reserve(n * (n - 1) / 2);
    std::vector<std::string> keys;
    keys.reserve(n);
    for (const auto& cluster : clusters) {
        keys.push_back(cluster.min_member());
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            upper.push_back(notion.pairwise_pvalue(clusters[i], clusters[j]).value());
        }
    }
    return PairwisePValues(n, std::move(upper), std::move(keys));
}

ArgmaxPair argmax_pair(const PairwisePValues& table) {
    if (table.n_pairs() == 0) {
        throw InputError("argmax_pair: empty table");
    }
    PairRank top;
    ArgmaxPair out;
    const std::size_t n = table.n_clusters();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const PairRank cand =
                make_rank(table.p(i, j).value(), table.tie_key(i), table.tie_key(j));
            if (outranks(cand, top)) {
                top = cand;
                out.i = i;
                out.j = j;
            }
        }
    }
    out.p = PValue(top.p);
    return out;
}

ClusteringResult run_clustering(std::span<const GroupMetric> metrics,
                                const SimilarityNotion& notion,
                                const ClusteringConfig& config) {
    const std::size_t k = metrics.size();
    if (k == 0) {
        throw InputError("run_clustering: need at least one group");
    }
    const double threshold = rejection_threshold(config, k);
    {
        std::unordered_set<std::string_view> seen;
        seen.reserve(k);
        for (const auto& metric : metrics) {
            if (!seen.insert(metric.group_id).second) {
                throw InputError("duplicate group id '" + metric.group_id + "'");
            }
        }
    }

    std::vector<ClusterStats> clusters;
    clusters.reserve(k);
    for (const auto& metric : metrics) {
        clusters.push_back(make_cluster(metric));
    }

    ClusteringResult result;
    result.threshold = threshold;

    if (k == 1) {
        result.final_clusters = std::move(clusters);
        return result;  // the global null is vacuous for one group
    }

    // Dense symmetric p-value matrix over cluster slots. A merged
    // cluster reuses the lower slot of its pair; the other slot dies.
    // Across the whole run the notion is evaluated K(K-1)/2 times up
    // front plus (live count - 1) times per merge, never more.
    std::vector<double> pmat(k * k, 0.0);
    std::vector<char> alive(k, 1);
    const auto pv = [&](std::size_t i, std::size_t j) -> double& {
        return pmat[i * k + j];
    };

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double p = notion.pairwise_pvalue(clusters[i], clusters[j]).value();
            pv(i, j) = p;
            pv(j, i) = p;
        }
    }

    // Cached best partner per live slot, kept consistent so each
    // iteration's global argmax is a linear scan.
    struct Best {
        double p = -1.0;
        std::size_t partner = 0;
    };
    std::vector<Best> best(k);
    const auto rescan_row = [&](std::size_t i) {
        PairRank incumbent;
        std::size_t partner = i;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i || !alive[j]) {
                continue;
            }
            const PairRank cand =
                make_rank(pv(i, j), clusters[i].min_member(), clusters[j].min_member());
            if (outranks(cand, incumbent)) {
                incumbent = cand;
                partner = j;
            }
        }
        best[i] = {incumbent.p, partner};
    };
    for (std::size_t i = 0; i < k; ++i) {
        rescan_row(i);
    }

    std::size_t n_alive = k;
    int iteration = 0;
    double last_pstar = 1.0;

    while (true) {
        PairRank top;
        std::size_t top_i = 0;
        std::size_t top_j = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!alive[i]) {
                continue;
            }
            const std::size_t j = best[i].partner;
            const PairRank cand = make_rank(best[i].p, clusters[i].min_member(),
                                            clusters[j].min_member());
            if (outranks(cand, top)) {
                top = cand;
                top_i = i;
                top_j = j;
            }
        }
        const double pstar = top.p;
        last_pstar = pstar;

        if (pstar < threshold) {
            result.rejected = true;
            break;
        }

        const std::size_t keep = std::min(top_i, top_j);
        const std::size_t drop = std::max(top_i, top_j);

        MergeStep step;
        step.iteration = iteration;
        step.left_members = clusters[keep].members();
        step.right_members = clusters[drop].members();
        step.max_pvalue = PValue(pstar);
        step.threshold_used = threshold;
        result.trace.push_back(std::move(step));

        clusters[keep] = merge_clusters(clusters[keep], clusters[drop]);
        alive[drop] = 0;
        --n_alive;
        ++iteration;

        if (n_alive == 1) {
            break;
        }

        for (std::size_t j = 0; j < k; ++j) {
            if (!alive[j] || j == keep) {
                continue;
            }
            const double p = notion.pairwise_pvalue(clusters[keep], clusters[j]).value();
            pv(keep, j) = p;
            pv(j, keep) = p;
        }
        rescan_row(keep);
        for (std::size_t j = 0; j < k; ++j) {
            if (!alive[j] || j == keep) {
                continue;
            }
            if (best[j].partner == keep || best[j].partner == drop) {
                // Cached best pointed at a slot whose p-values changed
                // or died; recompute from the cached row.
                rescan_row(j);
            } else {
                const PairRank cand = make_rank(pv(j, keep), clusters[j].min_member(),
                                                clusters[keep].min_member());
                const PairRank incumbent =
                    make_rank(best[j].p, clusters[j].min_member(),
                              clusters[best[j].partner].min_member());
                if (outranks(cand, incumbent)) {
                    best[j] = {cand.p, keep};
                }
            }
        }
    }

    std::vector<ClusterStats> finals;
    finals.reserve(n_alive);
    for (std::size_t i = 0; i < k; ++i) {
        if (alive[i]) {
            finals.push_back(std::move(clusters[i]));
        }
    }
    std::sort(finals.begin(), finals.end(),
              [](const ClusterStats& a, const ClusterStats& b) {
                  return a.min_member() < b.min_member();
              });
    result.final_clusters = std::move(finals);
    result.decision_pvalue = PValue(last_pstar);
    return result;
}

}  // namespace hetclust
