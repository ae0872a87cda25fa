#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hetclust/engine.hpp"
#include "hetclust/group_metric.hpp"
#include "hetclust/similarity.hpp"

namespace hetclust {

/// One row of a pre-summarized input file.
struct GroupSummaryRecord {
    std::string group_id;
    double estimate = 0.0;
    double sd = 0.0;
};

enum class Arm { Control, Treatment };

/// One member-level row of a raw A/B export.
struct RawExperimentRecord {
    std::string group_id;
    Arm arm = Arm::Control;
    double outcome = 0.0;
};

/// One scored-and-labeled row of a classifier evaluation export.
struct ClassifierRecord {
    std::string group_id;
    std::uint8_t label = 0;
    std::uint8_t classification = 0;
};

// Input files are UTF-8, comma-separated, with a mandatory header row
// naming the columns. Column order is free and unknown extra columns
// are permitted. Malformed rows raise ParseError naming the line;
// groups too degenerate to summarize raise errors naming every
// offending group id. Nothing is silently dropped.
//
// Expected columns per kind:
//   summary:    group_id, estimate, sd
//   raw_ab:     group_id, arm (control|treatment), outcome
//   classifier: group_id, label (0|1), classification (0|1)

std::vector<GroupSummaryRecord> parse_summary_csv(std::istream& in);
std::vector<RawExperimentRecord> parse_raw_ab_csv(std::istream& in);
std::vector<ClassifierRecord> parse_classifier_csv(std::istream& in);

std::vector<GroupSummaryRecord> parse_summary_file(const std::string& path);
std::vector<RawExperimentRecord> parse_raw_ab_file(const std::string& path);
std::vector<ClassifierRecord> parse_classifier_file(const std::string& path);

/// Summary rows used directly as metrics; duplicate ids are an error.
std::vector<GroupMetric> metrics_from_summary(
    const std::vector<GroupSummaryRecord>& records);

/// Per-group welch_summary over the raw rows. Group order follows first
/// appearance in the file.
std::vector<GroupMetric> metrics_from_raw_ab(
    const std::vector<RawExperimentRecord>& records);

/// Per-group classifier_rate_metric of the requested kind.
std::vector<GroupMetric> metrics_from_classifier(
    const std::vector<ClassifierRecord>& records, RateMetric kind);

/// Machine-readable clustering report: config echo, decision, final
/// clusters with their sufficient statistics, and the full merge trace.
/// Round-trips losslessly through JSON.
struct ResultDocument {
    struct Cluster {
        std::vector<std::string> members;
        double mle_mean = 0.0;
        double precision_sum = 0.0;
        double weighted_sum = 0.0;
        bool operator==(const Cluster&) const = default;
    };
    struct TraceEntry {
        int iteration = 0;
        std::vector<std::string> left_members;
        std::vector<std::string> right_members;
        double max_pvalue = 1.0;
        double threshold_used = 0.0;
        bool operator==(const TraceEntry&) const = default;
    };

    int schema_version = 1;
    double alpha = 0.05;
    ThresholdPolicy policy = ThresholdPolicy::BonferroniK2;
    TieBreak tie_break = TieBreak::LexSmallestPair;
    std::size_t n_groups = 0;
    double threshold = 0.0;
    bool rejected = false;
    double decision_pvalue = 1.0;
    std::vector<Cluster> clusters;
    std::vector<TraceEntry> trace;

    bool operator==(const ResultDocument&) const = default;
};

ResultDocument make_result_document(const ClusteringResult& result,
                                    const ClusteringConfig& config,
                                    std::size_t n_groups);

std::string to_json(const ResultDocument& doc);
ResultDocument result_document_from_json(const std::string& text);

const char* to_string(ThresholdPolicy policy);
const char* to_string(TieBreak rule);
const char* to_string(RateMetric kind);

ThresholdPolicy policy_from_string(const std::string& name);
RateMetric rate_metric_from_string(const std::string& name);

}  // namespace hetclust
