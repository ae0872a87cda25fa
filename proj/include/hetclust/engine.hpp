#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hetclust/group_metric.hpp"
#include "hetclust/pvalue.hpp"
#include "hetclust/similarity.hpp"

namespace hetclust {

/// How the per-iteration rejection threshold is derived from alpha.
/// K is always the initial number of groups.
enum class ThresholdPolicy {
    /// alpha / K. Valid when each iteration's p-values are computed on
    /// data independent of earlier merge decisions (data splitting,
    /// sequential batches). Not safe on a single reused dataset.
    PerIterationK,
    /// alpha / K^2. Bonferroni-style correction over the order-K^2
    /// pairwise hypotheses the whole run can touch; the safe default
    /// for single-dataset workflows.
    BonferroniK2,
};

enum class TieBreak {
    /// Among pairs with equal p-value, pick the pair whose (smallest
    /// member id of one side, smallest member id of the other), sorted,
    /// is lexicographically smallest.
    LexSmallestPair,
};

struct ClusteringConfig {
    double alpha = 0.05;
    ThresholdPolicy policy = ThresholdPolicy::BonferroniK2;
    TieBreak tie_break = TieBreak::LexSmallestPair;
};

/// The rejection threshold implied by a config for K initial groups.
double rejection_threshold(const ClusteringConfig& config, std::size_t n_groups);

/// One accepted merge: the two clusters that were joined (snapshotted
/// by member ids), the maximal p-value that triggered the merge, and
/// the threshold it was compared against. max_pvalue >= threshold_used
/// always, since a merge only happens on non-rejection.
struct MergeStep {
    int iteration = 0;
    std::vector<std::string> left_members;
    std::vector<std::string> right_members;
    PValue max_pvalue{1.0};
    double threshold_used = 0.0;
};

/// Outcome of a clustering run.
///
/// If rejected, final_clusters are the disparate clusters at the
/// stopping iteration: every pairwise p-value among them is below the
/// threshold. If not rejected, final_clusters is the single cluster
/// containing every group. decision_pvalue is the maximal pairwise
/// p-value examined at the stopping iteration (1.0 for a single input
/// group, where no pair was ever tested).
struct ClusteringResult {
    bool rejected = false;
    std::vector<ClusterStats> final_clusters;
    std::vector<MergeStep> trace;
    PValue decision_pvalue{1.0};
    double threshold = 0.0;
};

/// Symmetric table of pairwise p-values over a cluster list; entries
/// exist for every unordered pair, the diagonal is absent.
class PairwisePValues {
public:
    PairwisePValues(std::size_t n_clusters, std::vector<double> upper,
                    std::vector<std::string> tie_keys);

    std::size_t n_clusters() const noexcept { return n_; }
    std::size_t n_pairs() const noexcept { return upper_.size(); }

    /// p-value for the unordered pair {i, j}, i != j.
    PValue p(std::size_t i, std::size_t j) const;

    /// Smallest member id of cluster i (tie-breaking key).
    const std::string& tie_key(std::size_t i) const { return tie_keys_[i]; }

private:
    std::size_t n_;
    std::vector<double> upper_;  // row-major upper triangle, i < j
    std::vector<std::string> tie_keys_;
};

/// Evaluates the notion on every unordered pair. Throws InputError for
/// fewer than two clusters.
PairwisePValues pairwise_pvalue_table(std::span<const ClusterStats> clusters,
                                      const SimilarityNotion& notion);

struct ArgmaxPair {
    std::size_t i = 0;  // i < j
    std::size_t j = 0;
    PValue p{1.0};
};

/// The pair with the largest p-value; ties resolved by the
/// LexSmallestPair rule. Throws InputError on an empty table.
ArgmaxPair argmax_pair(const PairwisePValues& table);

/// Sequential test-and-merge loop over the given groups.
///
/// Each iteration evaluates the notion on all current pairs, finds the
/// maximal p-value p*, and either rejects (p* strictly below the
/// threshold) or merges the argmax pair and continues. Merging reuses
/// the additive sufficient statistics, so across a whole run the
/// notion is evaluated at most K(K-1)/2 + (K-1)(K-2)/2 times. A run
/// that merges down to one cluster stops without rejecting. K = 1 is
/// vacuous: not rejected, empty trace.
///
/// Throws InputError for an empty group list, duplicate group ids, or
/// alpha outside (0, 1).
ClusteringResult run_clustering(std::span<const GroupMetric> metrics,
                                const SimilarityNotion& notion,
                                const ClusteringConfig& config);

}  // namespace hetclust
