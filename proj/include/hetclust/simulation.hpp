#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hetclust/engine.hpp"
#include "hetclust/group_metric.hpp"

namespace hetclust {

/// Which synthetic continent a group belongs to; the continent decides
/// the sign of the treatment effect (-mu vs +mu).
enum class Continent { Asia, Africa };

struct SimGroup {
    std::string group_id;
    Continent continent = Continent::Asia;
    int n_control = 0;
    int n_treatment = 0;
};

/// Generative description of the two-continent synthetic experiment:
/// control outcomes are Normal(0, noise_sd) everywhere, treatment
/// outcomes are Normal(-mu, noise_sd) in Asia and Normal(+mu, noise_sd)
/// in Africa.
struct SimulationSpec {
    std::vector<SimGroup> groups;
    double effect_mu = 0.0;
    double noise_sd = 0.1;
    int replications = 100;
    std::uint64_t seed = 0;
    double alpha = 0.05;
};

/// Roster with n_asia + n_africa groups, n_per_arm members in each arm.
/// Group ids are "asia_00".."asia_NN", "africa_00".."africa_NN".
SimulationSpec make_two_continent_spec(int n_asia, int n_africa, int n_per_arm,
                                       double effect_mu, double noise_sd,
                                       int replications, std::uint64_t seed,
                                       double alpha);

/// Country-scale default roster: 48 Asia groups and 54 Africa groups.
SimulationSpec default_spec();

/// Small roster (20 + 20 groups) for quick studies.
SimulationSpec desk_spec();

void validate(const SimulationSpec& spec);

/// Draws one replicate of the experiment and summarizes each group via
/// welch_summary. Deterministic given (spec.seed, rep_index): every
/// (group, arm) pair reads an independent keyed random stream, so the
/// result does not depend on evaluation order and replicate runs can be
/// parallelized by the caller.
std::vector<GroupMetric> simulate_two_continent_replicate(
    const SimulationSpec& spec, int rep_index);

struct PowerCurvePoint {
    double mu = 0.0;
    double exact_recovery_rate = 0.0;
    double rejection_rate = 0.0;
    int replications = 0;
};

/// For each mu on the grid, clusters `replications` simulated
/// replicates (likelihood-ratio notion, spec.alpha, Bonferroni K^2
/// policy) and records how often some final cluster is exactly the
/// Asia group set and how often the homogeneity null is rejected.
/// Random streams are keyed by replicate, not by mu, so the grid shares
/// common random numbers.
std::vector<PowerCurvePoint> power_curve(const SimulationSpec& spec_template,
                                         std::span<const double> mu_grid);

struct FprCurvePoint {
    double alpha = 0.0;
    double false_rejection_rate = 0.0;
    int replications = 0;
};

/// Null study: all true effects equal (zero). Group g's standard error
/// comes from a fixed log-spaced ladder on [0.05, 10] -- group sizes in
/// real segmentation data span orders of magnitude -- and its estimate
/// is drawn Normal(0, sd_g). Each replicate is clustered once per alpha
/// under the Bonferroni K^2 policy, reusing the same draws across the
/// grid. Records the fraction of replicates that falsely reject.
std::vector<FprCurvePoint> fpr_curve(int n_groups,
                                     std::span<const double> alpha_grid,
                                     int replications, std::uint64_t seed);

/// Monte Carlo standard error of an empirical rate.
double rate_standard_error(double rate, int replications);

}  // namespace hetclust
