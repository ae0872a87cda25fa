#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "hetclust/cli.hpp"
#include "hetclust/io.hpp"

namespace {

using hetclust::RateMetric;
using hetclust::ThresholdPolicy;
namespace cli = hetclust::cli;

const std::map<std::string, ThresholdPolicy> kPolicies{
    {"per-k", ThresholdPolicy::PerIterationK},
    {"bonferroni-k2", ThresholdPolicy::BonferroniK2},
};

const std::map<std::string, RateMetric> kMetrics{
    {"fpr", RateMetric::FalsePositiveRate},
    {"tpr", RateMetric::TruePositiveRate},
    {"positive-rate", RateMetric::PositiveRate},
    {"misclassification", RateMetric::MisclassificationRate},
};

const std::map<std::string, cli::InputKind> kInputKinds{
    {"summary", cli::InputKind::Summary},
    {"raw-ab", cli::InputKind::RawAb},
    {"classifier", cli::InputKind::Classifier},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Likelihood-ratio agglomerative clustering for detecting groups with "
        "heterogeneous treatment effects or disparate classifier rates"};
    app.require_subcommand(1);

    cli::ClusterOptions cluster_options;
    std::string metric_name;
    auto* cluster = app.add_subcommand(
        "cluster", "Cluster one dataset and report the test decision");
    cluster->add_option("--input", cluster_options.input_path, "Input CSV file")
        ->required();
    cluster
        ->add_option("--kind", cluster_options.kind,
                     "Input kind: summary, raw-ab, or classifier")
        ->transform(CLI::CheckedTransformer(kInputKinds))
        ->default_val("summary");
    cluster
        ->add_option("--metric", metric_name,
                     "Rate metric for classifier inputs: fpr, tpr, positive-rate, "
                     "misclassification")
        ->check(CLI::IsMember(kMetrics, CLI::ignore_case))
        ->envname("HETCLUST_METRIC");
    cluster
        ->add_option("--alpha", cluster_options.alpha,
                     "Significance level in (0, 1)")
        ->envname("HETCLUST_ALPHA");
    cluster
        ->add_option("--policy", cluster_options.policy,
                     "Threshold policy: per-k (alpha/K, requires independent "
                     "p-values, e.g. from data splitting) or bonferroni-k2 "
                     "(alpha/K^2, single-dataset default)")
        ->transform(CLI::CheckedTransformer(kPolicies))
        ->envname("HETCLUST_POLICY");
    cluster->add_option("--out", cluster_options.output_path,
                        "Output file for the JSON result (default: stdout)")
        ->envname("HETCLUST_OUT");

    cli::PowerCurveOptions power_options;
    auto* power = app.add_subcommand(
        "power-curve", "Two-continent synthetic power study over a mu grid");
    power->add_option("--mu", power_options.mu_grid,
                      "Explicit mu grid (default: 20 equispaced points on [0, 1])");
    power->add_option("--asia-groups", power_options.n_asia, "Groups in Asia");
    power->add_option("--africa-groups", power_options.n_africa,
                      "Groups in Africa");
    power->add_option("--members-per-arm", power_options.n_per_arm,
                      "Members sampled into each arm of each group");
    power->add_option("--noise-sd", power_options.noise_sd,
                      "Member-level outcome standard deviation");
    power
        ->add_option("--replications", power_options.replications,
                     "Monte Carlo replications per grid point")
        ->envname("HETCLUST_REPLICATIONS");
    power->add_option("--seed", power_options.seed, "Random seed")
        ->envname("HETCLUST_SEED");
    power->add_option("--alpha", power_options.alpha, "Significance level")
        ->envname("HETCLUST_ALPHA");
    power->add_option("--out", power_options.output_path,
                      "Output file for the table (default: stdout)")
        ->envname("HETCLUST_OUT");

    cli::FprCurveOptions fpr_options;
    auto* fpr = app.add_subcommand(
        "fpr-curve", "All-null false-positive-rate study over an alpha grid");
    fpr->add_option("--alpha-grid", fpr_options.alpha_grid,
                    "Explicit alpha grid (default ladder from 0.001 to 0.5)");
    fpr->add_option("--groups", fpr_options.n_groups, "Number of null groups");
    fpr->add_option("--replications", fpr_options.replications,
                    "Monte Carlo replications")
        ->envname("HETCLUST_REPLICATIONS");
    fpr->add_option("--seed", fpr_options.seed, "Random seed")
        ->envname("HETCLUST_SEED");
    fpr->add_option("--out", fpr_options.output_path,
                    "Output file for the table (default: stdout)")
        ->envname("HETCLUST_OUT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitUsageError;
    }

    if (cluster->parsed()) {
        if (!metric_name.empty()) {
            cluster_options.metric = hetclust::rate_metric_from_string(metric_name);
        }
        return cli::cmd_cluster(cluster_options, std::cout, std::cerr);
    }
    if (power->parsed()) {
        return cli::cmd_power_curve(power_options, std::cout, std::cerr);
    }
    return cli::cmd_fpr_curve(fpr_options, std::cout, std::cerr);
}
