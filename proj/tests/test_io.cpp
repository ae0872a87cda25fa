#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "hetclust/cli.hpp"
#include "hetclust/errors.hpp"
#include "hetclust/io.hpp"
#include "test_util.hpp"

using namespace hetclust;

namespace {

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
    return path;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("summary parsing, header driven, any column order") {
    std::istringstream in(
        "sd,group_id,estimate,note\n"
        "0.1, us , 0.25, extra ignored\n"
        "0.2,uk,-0.1,x\n");
    const auto records = parse_summary_csv(in);
    REQUIRE(records.size() == 2);
    CHECK(records[0].group_id == "us");
    CHECK(records[0].estimate == 0.25);
    CHECK(records[0].sd == 0.1);
    CHECK(records[1].estimate == -0.1);
}

TEST_CASE("summary parse errors name the line") {
    std::istringstream bad_number(
        "group_id,estimate,sd\n"
        "us,0.25,0.1\n"
        "uk,oops,0.2\n");
    CHECK_THROWS_WITH_AS(parse_summary_csv(bad_number),
                         "line 3: column 'estimate': not a number: 'oops'",
                         ParseError);

    std::istringstream dup(
        "group_id,estimate,sd\n"
        "us,0.25,0.1\n"
        "us,0.3,0.1\n");
    CHECK_THROWS_WITH_AS(parse_summary_csv(dup),
                         "line 3: duplicate group_id 'us'", ParseError);

    std::istringstream missing("group_id,estimate\nus,0.25\n");
    CHECK_THROWS_AS(parse_summary_csv(missing), ParseError);

    std::istringstream zero_sd("group_id,estimate,sd\nus,0.25,0\n");
    CHECK_THROWS_AS(parse_summary_csv(zero_sd), ParseError);

    std::istringstream short_row(
        "group_id,estimate,sd\n"
        "us,0.25\n");
    CHECK_THROWS_AS(parse_summary_csv(short_row), ParseError);

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_summary_csv(empty), ParseError);
}

TEST_CASE("raw rows parse and reject unknown arms") {
    std::istringstream in(
        "group_id,arm,outcome\n"
        "us,control,1.5\n"
        "us,treatment,2.5\n");
    const auto records = parse_raw_ab_csv(in);
    REQUIRE(records.size() == 2);
    CHECK(records[0].arm == Arm::Control);
    CHECK(records[1].arm == Arm::Treatment);

    std::istringstream bad("group_id,arm,outcome\nus,holdout,1.0\n");
    CHECK_THROWS_WITH_AS(
        parse_raw_ab_csv(bad),
        "line 2: column 'arm': expected control or treatment, got 'holdout'",
        ParseError);
}

TEST_CASE("classifier rows parse strictly binary values") {
    std::istringstream in(
        "group_id,label,classification\n"
        "us,0,1\n"
        "us,1,1\n");
    const auto records = parse_classifier_csv(in);
    REQUIRE(records.size() == 2);
    CHECK(records[0].label == 0);
    CHECK(records[0].classification == 1);

    std::istringstream bad("group_id,label,classification\nus,2,1\n");
    CHECK_THROWS_AS(parse_classifier_csv(bad), ParseError);
}

TEST_CASE("raw metrics equal the summary route on the same data") {
    // Two groups, a handful of members each.
    std::istringstream raw(
        "group_id,arm,outcome\n"
        "us,control,1.0\n"
        "us,control,2.0\n"
        "us,control,1.4\n"
        "us,treatment,2.0\n"
        "us,treatment,2.6\n"
        "uk,control,0.0\n"
        "uk,control,0.8\n"
        "uk,treatment,0.1\n"
        "uk,treatment,0.9\n");
    const auto metrics = metrics_from_raw_ab(parse_raw_ab_csv(raw));
    REQUIRE(metrics.size() == 2);

    // Write the welch summaries out as a summary file and read them back.
    std::ostringstream summary;
    summary << "group_id,estimate,sd\n";
    summary.precision(17);
    for (const auto& m : metrics) {
        summary << m.group_id << "," << m.estimate << "," << m.sd << "\n";
    }
    std::istringstream summary_in(summary.str());
    const auto round_trip = metrics_from_summary(parse_summary_csv(summary_in));
    REQUIRE(round_trip.size() == metrics.size());

    const ClusteringConfig config;
    const LikelihoodRatioNotion notion;
    const auto direct = run_clustering(metrics, notion, config);
    const auto via_summary = run_clustering(round_trip, notion, config);
    CHECK(to_json(make_result_document(direct, config, 2)) ==
          to_json(make_result_document(via_summary, config, 2)));
}

TEST_CASE("raw metrics error lists every underpowered group") {
    std::istringstream raw(
        "group_id,arm,outcome\n"
        "us,control,1.0\n"
        "us,treatment,2.0\n"
        "us,treatment,2.5\n"
        "uk,control,0.0\n"
        "uk,control,0.4\n"
        "uk,treatment,1.0\n"
        "de,control,0.0\n"
        "de,control,0.4\n"
        "de,treatment,1.0\n"
        "de,treatment,1.2\n");
    try {
        metrics_from_raw_ab(parse_raw_ab_csv(raw));
        FAIL("expected InsufficientDataError");
    } catch (const InsufficientDataError& e) {
        const std::string what = e.what();
        CHECK(what.find("'us'") != std::string::npos);
        CHECK(what.find("'uk'") != std::string::npos);
        CHECK(what.find("'de'") == std::string::npos);
    }
}

TEST_CASE("classifier metrics error names groups without relevant rows") {
    std::istringstream rows(
        "group_id,label,classification\n"
        "us,0,1\n"
        "us,0,0\n"
        "uk,1,1\n"
        "uk,1,0\n");
    // FPR needs label=0 rows; uk has none.
    try {
        metrics_from_classifier(parse_classifier_csv(rows),
                                RateMetric::FalsePositiveRate);
        FAIL("expected InsufficientDataError");
    } catch (const InsufficientDataError& e) {
        CHECK(std::string(e.what()).find("'uk'") != std::string::npos);
    }
}

TEST_CASE("result document round-trips losslessly through JSON") {
    test::InstanceGen gen(3001);
    const auto metrics = gen.random_metrics(7, 1.5);
    const ClusteringConfig config{0.07, ThresholdPolicy::PerIterationK,
                                  TieBreak::LexSmallestPair};
    const auto result = run_clustering(metrics, LikelihoodRatioNotion{}, config);
    const auto doc = make_result_document(result, config, metrics.size());

    const std::string text = to_json(doc);
    const auto parsed = result_document_from_json(text);
    CHECK(parsed == doc);
    CHECK(to_json(parsed) == text);

    CHECK_THROWS_AS(result_document_from_json("{not json"), ParseError);
    CHECK_THROWS_AS(result_document_from_json("{}"), ParseError);
}

TEST_CASE("policy and metric names round-trip") {
    CHECK(policy_from_string(to_string(ThresholdPolicy::PerIterationK)) ==
          ThresholdPolicy::PerIterationK);
    CHECK(policy_from_string(to_string(ThresholdPolicy::BonferroniK2)) ==
          ThresholdPolicy::BonferroniK2);
    CHECK_THROWS_AS(policy_from_string("holm"), InputError);
    for (auto kind :
         {RateMetric::FalsePositiveRate, RateMetric::TruePositiveRate,
          RateMetric::PositiveRate, RateMetric::MisclassificationRate}) {
        CHECK(rate_metric_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(rate_metric_from_string("auc"), InputError);
}

TEST_CASE("cmd_cluster exit codes and output document") {
    const auto rejected_path = write_temp(
        "hetclust_reject.csv", "group_id,estimate,sd\na,0,0.01\nb,1,0.01\n");
    const auto merged_path = write_temp(
        "hetclust_merge.csv",
        "group_id,estimate,sd\na,0.1,0.1\nb,0.1,0.1\nc,0.1,0.1\n");

    cli::ClusterOptions options;
    options.input_path = rejected_path.string();
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_cluster(options, out, err) == cli::kExitRejected);
    const auto doc = result_document_from_json(out.str());
    CHECK(doc.rejected);
    CHECK(doc.n_groups == 2);
    CHECK(doc.clusters.size() == 2);

    options.input_path = merged_path.string();
    std::ostringstream out2;
    CHECK(cli::cmd_cluster(options, out2, err) == cli::kExitNotRejected);
    const auto doc2 = result_document_from_json(out2.str());
    CHECK_FALSE(doc2.rejected);
    CHECK(doc2.clusters.size() == 1);
    CHECK(doc2.trace.size() == 2);

    options.input_path = "/nonexistent/file.csv";
    std::ostringstream err3;
    CHECK(cli::cmd_cluster(options, out2, err3) == cli::kExitUsageError);
    CHECK(err3.str().find("error:") == 0);

    // Classifier input without a metric is a usage error.
    const auto classifier_path = write_temp(
        "hetclust_cls.csv",
        "group_id,label,classification\na,0,1\na,0,0\nb,0,1\nb,0,0\n");
    cli::ClusterOptions cls;
    cls.input_path = classifier_path.string();
    cls.kind = cli::InputKind::Classifier;
    std::ostringstream err4;
    CHECK(cli::cmd_cluster(cls, out2, err4) == cli::kExitUsageError);
    cls.metric = RateMetric::FalsePositiveRate;
    std::ostringstream out5;
    CHECK(cli::cmd_cluster(cls, out5, err4) == cli::kExitNotRejected);
}

TEST_CASE("cmd_power_curve writes a deterministic table") {
    cli::PowerCurveOptions options;
    options.mu_grid = {0.0};
    options.n_asia = 4;
    options.n_africa = 4;
    options.n_per_arm = 20;
    options.replications = 40;
    options.seed = 12345;

    std::ostringstream out1;
    std::ostringstream out2;
    std::ostringstream err;
    CHECK(cli::cmd_power_curve(options, out1, err) == 0);
    CHECK(cli::cmd_power_curve(options, out2, err) == 0);
    CHECK(out1.str() == out2.str());

    std::istringstream table(out1.str());
    std::string header;
    std::getline(table, header);
    CHECK(header ==
          "mu\texact_recovery_rate\trejection_rate\treplications\tmc_se");
    std::string row;
    std::getline(table, row);
    // Null point: recovery stays near zero.
    double mu = -1.0;
    double recovery = -1.0;
    CHECK(std::sscanf(row.c_str(), "%lf\t%lf", &mu, &recovery) == 2);
    CHECK(mu == 0.0);
    CHECK(recovery <= 0.1);
}

TEST_CASE("cmd_fpr_curve writes one row per alpha") {
    cli::FprCurveOptions options;
    options.alpha_grid = {0.05};
    options.n_groups = 6;
    options.replications = 100;
    options.seed = 2024;

    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_fpr_curve(options, out, err) == 0);
    std::istringstream table(out.str());
    std::string line;
    int rows = 0;
    std::getline(table, line);
    CHECK(line == "alpha\tfalse_rejection_rate\treplications\tmc_se");
    while (std::getline(table, line)) {
        ++rows;
    }
    CHECK(rows == 1);

    options.alpha_grid = {1.5};
    std::ostringstream err2;
    CHECK(cli::cmd_fpr_curve(options, out, err2) == cli::kExitUsageError);
    CHECK_FALSE(err2.str().empty());
}

TEST_CASE("default grids") {
    const auto mu = cli::default_mu_grid();
    REQUIRE(mu.size() == 20);
    CHECK(mu.front() == 0.0);
    CHECK(mu.back() == 1.0);
    for (std::size_t i = 1; i < mu.size(); ++i) {
        CHECK(mu[i] - mu[i - 1] == doctest::Approx(1.0 / 19.0));
    }
    const auto alpha = cli::default_alpha_grid();
    CHECK(alpha.size() >= 5);
    for (double a : alpha) {
        CHECK(a > 0.0);
        CHECK(a < 1.0);
    }
}

}  // TEST_SUITE
