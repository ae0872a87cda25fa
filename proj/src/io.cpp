#include "hetclust/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <span>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "hetclust/sample_summary.hpp"

namespace hetclust {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, std::size_t line_no,
                    const char* column) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || field.empty()) {
        parse_fail(line_no, std::string("column '") + column +
                               "': not a number: '" + field + "'");
    }
    return value;
}

std::uint8_t parse_binary(const std::string& field, std::size_t line_no,
                          const char* column) {
    if (field == "0") {
        return 0;
    }
    if (field == "1") {
        return 1;
    }
    parse_fail(line_no, std::string("column '") + column +
                            "': expected 0 or 1, got '" + field + "'");
}

// Streams header + rows to `consume(fields, line_no)`; validates that
// all required columns are present and every data row is wide enough.
template <typename RowFn>
void for_each_row(std::istream& in, std::span<const char* const> required_columns,
                  std::vector<std::size_t>& column_indices, RowFn&& consume) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t min_width = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_csv(line);
        if (!have_header) {
            std::unordered_map<std::string, std::size_t> by_name;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (!by_name.emplace(fields[i], i).second) {
                    parse_fail(line_no, "duplicate column '" + fields[i] + "'");
                }
            }
            column_indices.clear();
            for (const char* name : required_columns) {
                const auto it = by_name.find(name);
                if (it == by_name.end()) {
                    parse_fail(line_no,
                               std::string("missing required column '") + name + "'");
                }
                column_indices.push_back(it->second);
                min_width = std::max(min_width, it->second + 1);
            }
            have_header = true;
            continue;
        }
        if (fields.size() < min_width) {
            parse_fail(line_no, "expected at least " + std::to_string(min_width) +
                                    " columns, got " + std::to_string(fields.size()));
        }
        consume(fields, line_no);
    }
    if (!have_header) {
        throw ParseError("input is empty; a header row is required");
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open input file '" + path + "'");
    }
    return in;
}

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) {
            out += ", ";
        }
        out += "'" + id + "'";
    }
    return out;
}

}  // namespace

std::vector<GroupSummaryRecord> parse_summary_csv(std::istream& in) {
    static constexpr const char* kColumns[] = {"group_id", "estimate", "sd"};
    std::vector<GroupSummaryRecord> records;
    std::vector<std::size_t> idx;
    std::unordered_set<std::string> seen;
    for_each_row(in, kColumns, idx, [&](const std::vector<std::string>& f,
                                        std::size_t line_no) {
        GroupSummaryRecord rec;
        rec.group_id = f[idx[0]];
        if (rec.group_id.empty()) {
            parse_fail(line_no, "empty group_id");
        }
        if (!seen.insert(rec.group_id).second) {
            parse_fail(line_no, "duplicate group_id '" + rec.group_id + "'");
        }
        rec.estimate = parse_double(f[idx[1]], line_no, "estimate");
        rec.sd = parse_double(f[idx[2]], line_no, "sd");
        if (!(rec.sd > 0.0)) {
            parse_fail(line_no, "sd must be strictly positive for group '" +
                                    rec.group_id + "'");
        }
        records.push_back(std::move(rec));
    });
    return records;
}

std::vector<RawExperimentRecord> parse_raw_ab_csv(std::istream& in) {
    static constexpr const char* kColumns[] = {"group_id", "arm", "outcome"};
    std::vector<RawExperimentRecord> records;
    std::vector<std::size_t> idx;
    for_each_row(in, kColumns, idx, [&](const std::vector<std::string>& f,
                                        std::size_t line_no) {
        RawExperimentRecord rec;
        rec.group_id = f[idx[0]];
        if (rec.group_id.empty()) {
            parse_fail(line_no, "empty group_id");
        }
        const std::string& arm = f[idx[1]];
        if (arm == "control") {
            rec.arm = Arm::Control;
        } else if (arm == "treatment") {
            rec.arm = Arm::Treatment;
        } else {
            parse_fail(line_no, "column 'arm': expected control or treatment, got '" +
                                    arm + "'");
        }
        rec.outcome = parse_double(f[idx[2]], line_no, "outcome");
        records.push_back(std::move(rec));
    });
    return records;
}

std::vector<ClassifierRecord> parse_classifier_csv(std::istream& in) {
    static constexpr const char* kColumns[] = {"group_id", "label", "classification"};
    std::vector<ClassifierRecord> records;
    std::vector<std::size_t> idx;
    for_each_row(in, kColumns, idx, [&](const std::vector<std::string>& f,
                                        std::size_t line_no) {
        ClassifierRecord rec;
        rec.group_id = f[idx[0]];
        if (rec.group_id.empty()) {
            parse_fail(line_no, "empty group_id");
        }
        rec.label = parse_binary(f[idx[1]], line_no, "label");
        rec.classification = parse_binary(f[idx[2]], line_no, "classification");
        records.push_back(std::move(rec));
    });
    return records;
}

std::vector<GroupSummaryRecord> parse_summary_file(const std::string& path) {
    auto in = open_input(path);
    return parse_summary_csv(in);
}

std::vector<RawExperimentRecord> parse_raw_ab_file(const std::string& path) {
    auto in = open_input(path);
    return parse_raw_ab_csv(in);
}

std::vector<ClassifierRecord> parse_classifier_file(const std::string& path) {
    auto in = open_input(path);
    return parse_classifier_csv(in);
}

std::vector<GroupMetric> metrics_from_summary(
    const std::vector<GroupSummaryRecord>& records) {
    std::vector<GroupMetric> metrics;
    metrics.reserve(records.size());
    for (const auto& rec : records) {
        GroupMetric metric{rec.group_id, rec.estimate, rec.sd};
        validate(metric);
        metrics.push_back(std::move(metric));
    }
    return metrics;
}

std::vector<GroupMetric> metrics_from_raw_ab(
    const std::vector<RawExperimentRecord>& records) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::pair<std::vector<double>, std::vector<double>>>
        arms;
    for (const auto& rec : records) {
        auto [it, inserted] = arms.try_emplace(rec.group_id);
        if (inserted) {
            order.push_back(rec.group_id);
        }
        auto& [control, treatment] = it->second;
        (rec.arm == Arm::Control ? control : treatment).push_back(rec.outcome);
    }

    std::vector<std::string> underpowered;
    for (const auto& id : order) {
        const auto& [control, treatment] = arms.at(id);
        if (control.size() < 2 || treatment.size() < 2) {
            underpowered.push_back(id);
        }
    }
    if (!underpowered.empty()) {
        throw InsufficientDataError(
            "groups with fewer than two observations in some arm: " +
            join_ids(underpowered));
    }

    std::vector<GroupMetric> metrics;
    std::vector<std::string> degenerate;
    for (const auto& id : order) {
        const auto& [control, treatment] = arms.at(id);
        try {
            metrics.push_back(welch_summary(id, summarize_samples(treatment),
                                            summarize_samples(control)));
        } catch (const DegenerateVarianceError&) {
            degenerate.push_back(id);
        }
    }
    if (!degenerate.empty()) {
        throw DegenerateVarianceError("groups with zero standard error: " +
                                      join_ids(degenerate));
    }
    return metrics;
}

std::vector<GroupMetric> metrics_from_classifier(
    const std::vector<ClassifierRecord>& records, RateMetric kind) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<PredictionRecord>> by_group;
    for (const auto& rec : records) {
        auto [it, inserted] = by_group.try_emplace(rec.group_id);
        if (inserted) {
            order.push_back(rec.group_id);
        }
        it->second.push_back({rec.classification, rec.label});
    }

    std::vector<GroupMetric> metrics;
    std::vector<std::string> insufficient;
    std::vector<std::string> degenerate;
    for (const auto& id : order) {
        try {
            metrics.push_back(classifier_rate_metric(id, by_group.at(id), kind));
        } catch (const InsufficientDataError&) {
            insufficient.push_back(id);
        } catch (const DegenerateRateError&) {
            degenerate.push_back(id);
        }
    }
    if (!insufficient.empty()) {
        throw InsufficientDataError(
            "groups with no rows relevant to the requested rate: " +
            join_ids(insufficient));
    }
    if (!degenerate.empty()) {
        throw DegenerateRateError("groups whose empirical rate is exactly 0 or 1: " +
                                  join_ids(degenerate));
    }
    return metrics;
}

const char* to_string(ThresholdPolicy policy) {
    switch (policy) {
        case ThresholdPolicy::PerIterationK:
            return "per-k";
        case ThresholdPolicy::BonferroniK2:
            return "bonferroni-k2";
    }
    throw InputError("unknown threshold policy");
}

const char* to_string(TieBreak rule) {
    switch (rule) {
        case TieBreak::LexSmallestPair:
            return "lex-smallest-pair";
    }
    throw InputError("unknown tie-break rule");
}

const char* to_string(RateMetric kind) {
    switch (kind) {
        case RateMetric::FalsePositiveRate:
            return "fpr";
        case RateMetric::TruePositiveRate:
            return "tpr";
        case RateMetric::PositiveRate:
            return "positive-rate";
        case RateMetric::MisclassificationRate:
            return "misclassification";
    }
    throw InputError("unknown rate metric");
}

ThresholdPolicy policy_from_string(const std::string& name) {
    if (name == "per-k") {
        return ThresholdPolicy::PerIterationK;
    }
    if (name == "bonferroni-k2") {
        return ThresholdPolicy::BonferroniK2;
    }
    throw InputError("unknown threshold policy '" + name +
                     "' (expected per-k or bonferroni-k2)");
}

RateMetric rate_metric_from_string(const std::string& name) {
    if (name == "fpr") {
        return RateMetric::FalsePositiveRate;
    }
    if (name == "tpr") {
        return RateMetric::TruePositiveRate;
    }
    if (name == "positive-rate") {
        return RateMetric::PositiveRate;
    }
    if (name == "misclassification") {
        return RateMetric::MisclassificationRate;
    }
    throw InputError("unknown rate metric '" + name +
                     "' (expected fpr, tpr, positive-rate or misclassification)");
}

ResultDocument make_result_document(const ClusteringResult& result,
                                    const ClusteringConfig& config,
                                    std::size_t n_groups) {
    ResultDocument doc;
    doc.alpha = config.alpha;
    doc.policy = config.policy;
    doc.tie_break = config.tie_break;
    doc.n_groups = n_groups;
    doc.threshold = result.threshold;
    doc.rejected = result.rejected;
    doc.decision_pvalue = result.decision_pvalue.value();
    for (const auto& cluster : result.final_clusters) {
        doc.clusters.push_back({cluster.members(), cluster.mle_mean(),
                                cluster.precision_sum(), cluster.weighted_sum()});
    }
    for (const auto& step : result.trace) {
        doc.trace.push_back({step.iteration, step.left_members, step.right_members,
                             step.max_pvalue.value(), step.threshold_used});
    }
    return doc;
}

std::string to_json(const ResultDocument& doc) {
    ordered_json j;
    j["schema_version"] = doc.schema_version;
    j["config"] = {{"alpha", doc.alpha},
                   {"policy", to_string(doc.policy)},
                   {"tie_break", to_string(doc.tie_break)},
                   {"n_groups", doc.n_groups},
                   {"threshold", doc.threshold}};
    j["rejected"] = doc.rejected;
    j["decision_pvalue"] = doc.decision_pvalue;
    ordered_json clusters = ordered_json::array();
    for (const auto& cluster : doc.clusters) {
        clusters.push_back({{"members", cluster.members},
                            {"mle_mean", cluster.mle_mean},
                            {"precision_sum", cluster.precision_sum},
                            {"weighted_sum", cluster.weighted_sum}});
    }
    j["final_clusters"] = std::move(clusters);
    ordered_json trace = ordered_json::array();
    for (const auto& step : doc.trace) {
        trace.push_back({{"iteration", step.iteration},
                         {"left_members", step.left_members},
                         {"right_members", step.right_members},
                         {"max_pvalue", step.max_pvalue},
                         {"threshold_used", step.threshold_used}});
    }
    j["trace"] = std::move(trace);
    return j.dump(2) + "\n";
}

ResultDocument result_document_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        ResultDocument doc;
        doc.schema_version = j.at("schema_version").get<int>();
        const auto& config = j.at("config");
        doc.alpha = config.at("alpha").get<double>();
        doc.policy = policy_from_string(config.at("policy").get<std::string>());
        const auto tie_break = config.at("tie_break").get<std::string>();
        if (tie_break != to_string(TieBreak::LexSmallestPair)) {
            throw ParseError("unknown tie-break rule '" + tie_break + "'");
        }
        doc.n_groups = config.at("n_groups").get<std::size_t>();
        doc.threshold = config.at("threshold").get<double>();
        doc.rejected = j.at("rejected").get<bool>();
        doc.decision_pvalue = j.at("decision_pvalue").get<double>();
        for (const auto& cluster : j.at("final_clusters")) {
            doc.clusters.push_back(
                {cluster.at("members").get<std::vector<std::string>>(),
                 cluster.at("mle_mean").get<double>(),
                 cluster.at("precision_sum").get<double>(),
                 cluster.at("weighted_sum").get<double>()});
        }
        for (const auto& step : j.at("trace")) {
            doc.trace.push_back(
                {step.at("iteration").get<int>(),
                 step.at("left_members").get<std::vector<std::string>>(),
                 step.at("right_members").get<std::vector<std::string>>(),
                 step.at("max_pvalue").get<double>(),
                 step.at("threshold_used").get<double>()});
        }
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("result document: ") + e.what());
    }
}

}  // namespace hetclust
