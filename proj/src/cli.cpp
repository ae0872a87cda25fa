#include "hetclust/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hetclust/errors.hpp"
#include "hetclust/io.hpp"
#include "hetclust/simulation.hpp"

namespace hetclust::cli {

namespace {

void write_text(const std::string& text, const std::string& output_path,
                std::ostream& out) {
    if (output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(output_path);
    if (!file) {
        throw InputError("cannot open output file '" + output_path + "'");
    }
    file << text;
}

std::string format_row(std::initializer_list<double> values, int replications) {
    // Fixed six-decimal formatting keeps repeated runs byte-identical.
    std::string row;
    char buf[64];
    bool first = true;
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%s%.6f", first ? "" : "\t", v);
        row += buf;
        first = false;
    }
    std::snprintf(buf, sizeof buf, "\t%d", replications);
    row += buf;
    return row;
}

}  // namespace

std::vector<double> default_mu_grid() {
    std::vector<double> grid;
    grid.reserve(20);
    for (int i = 0; i < 20; ++i) {
        grid.push_back(i / 19.0);
    }
    return grid;
}

std::vector<double> default_alpha_grid() {
    return {0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5};
}

int cmd_cluster(const ClusterOptions& options, std::ostream& out,
                std::ostream& err) {
    try {
        std::vector<GroupMetric> metrics;
        switch (options.kind) {
            case InputKind::Summary:
                metrics = metrics_from_summary(parse_summary_file(options.input_path));
                break;
            case InputKind::RawAb:
                metrics = metrics_from_raw_ab(parse_raw_ab_file(options.input_path));
                break;
            case InputKind::Classifier:
                if (!options.metric) {
                    throw InputError("classifier inputs require a rate metric");
                }
                metrics = metrics_from_classifier(
                    parse_classifier_file(options.input_path), *options.metric);
                break;
        }

        const ClusteringConfig config{options.alpha, options.policy,
                                      TieBreak::LexSmallestPair};
        const auto result =
            run_clustering(metrics, LikelihoodRatioNotion{}, config);
        write_text(to_json(make_result_document(result, config, metrics.size())),
                   options.output_path, out);
        return result.rejected ? kExitRejected : kExitNotRejected;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsageError;
    }
}

int cmd_power_curve(const PowerCurveOptions& options, std::ostream& out,
                    std::ostream& err) {
    try {
        const auto spec = make_two_continent_spec(
            options.n_asia, options.n_africa, options.n_per_arm, 0.0,
            options.noise_sd, options.replications, options.seed, options.alpha);
        const auto grid =
            options.mu_grid.empty() ? default_mu_grid() : options.mu_grid;
        const auto points = power_curve(spec, grid);

        std::ostringstream table;
        table << "mu\texact_recovery_rate\trejection_rate\treplications\tmc_se\n";
        for (const auto& point : points) {
            const double se =
                rate_standard_error(point.exact_recovery_rate, point.replications);
            char buf[32];
            table << format_row({point.mu, point.exact_recovery_rate,
                                 point.rejection_rate},
                                point.replications);
            std::snprintf(buf, sizeof buf, "\t%.6f\n", se);
            table << buf;
        }
        write_text(table.str(), options.output_path, out);
        return kExitNotRejected;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsageError;
    }
}

int cmd_fpr_curve(const FprCurveOptions& options, std::ostream& out,
                  std::ostream& err) {
    try {
        const auto grid =
            options.alpha_grid.empty() ? default_alpha_grid() : options.alpha_grid;
        const auto points = fpr_curve(options.n_groups, grid, options.replications,
                                      options.seed);

        std::ostringstream table;
        table << "alpha\tfalse_rejection_rate\treplications\tmc_se\n";
        for (const auto& point : points) {
            const double se =
                rate_standard_error(point.false_rejection_rate, point.replications);
            char buf[32];
            table << format_row({point.alpha, point.false_rejection_rate},
                                point.replications);
            std::snprintf(buf, sizeof buf, "\t%.6f\n", se);
            table << buf;
        }
        write_text(table.str(), options.output_path, out);
        return kExitNotRejected;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsageError;
    }
}

}  // namespace hetclust::cli
