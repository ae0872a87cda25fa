#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hetclust/engine.hpp"
#include "hetclust/similarity.hpp"

namespace hetclust::cli {

// Process exit codes, stable for scripting.
inline constexpr int kExitNotRejected = 0;
inline constexpr int kExitUsageError = 1;
inline constexpr int kExitRejected = 10;

enum class InputKind { Summary, RawAb, Classifier };

struct ClusterOptions {
    std::string input_path;
    InputKind kind = InputKind::Summary;
    std::optional<RateMetric> metric;  // required for classifier inputs
    double alpha = 0.05;
    ThresholdPolicy policy = ThresholdPolicy::BonferroniK2;
    std::string output_path;  // empty -> stdout
};

/// Parses the input, builds group metrics, runs the clustering, and
/// writes the JSON result document. Returns kExitRejected when
/// heterogeneity was found, kExitNotRejected when not, kExitUsageError
/// on any input problem (diagnostics go to `err`).
int cmd_cluster(const ClusterOptions& options, std::ostream& out,
                std::ostream& err);

struct PowerCurveOptions {
    std::vector<double> mu_grid;  // empty -> 20 equispaced points on [0, 1]
    int n_asia = 48;
    int n_africa = 54;
    int n_per_arm = 100;
    double noise_sd = 0.1;
    int replications = 100;
    std::uint64_t seed = 20240101;
    double alpha = 0.05;
    std::string output_path;  // empty -> stdout
};

/// Runs the two-continent power study and writes a tab-separated table
/// (mu, exact_recovery_rate, rejection_rate, replications, mc_se).
/// Byte-identical output for identical options.
int cmd_power_curve(const PowerCurveOptions& options, std::ostream& out,
                    std::ostream& err);

struct FprCurveOptions {
    std::vector<double> alpha_grid;  // empty -> default ladder
    int n_groups = 21;
    int replications = 2000;
    std::uint64_t seed = 20240101;
    std::string output_path;  // empty -> stdout
};

/// Runs the all-null false-positive study and writes a tab-separated
/// table (alpha, false_rejection_rate, replications, mc_se).
int cmd_fpr_curve(const FprCurveOptions& options, std::ostream& out,
                  std::ostream& err);

/// 20 equispaced points from 0 to 1 inclusive.
std::vector<double> default_mu_grid();

std::vector<double> default_alpha_grid();

}  // namespace hetclust::cli
