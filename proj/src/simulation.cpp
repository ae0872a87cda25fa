#include "hetclust/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "hetclust/errors.hpp"
#include "hetclust/rng.hpp"
#include "hetclust/sample_summary.hpp"

namespace hetclust {

namespace {

// Stream channels; every (group, channel) pair reads independent draws.
constexpr std::uint32_t kControlChannel = 0;
constexpr std::uint32_t kTreatmentChannel = 1;
constexpr std::uint32_t kMetricChannel = 2;

std::string indexed_id(const char* prefix, int index, int count) {
    int width = 1;
    for (int c = count - 1; c >= 10; c /= 10) {
        ++width;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16s%0*d", prefix, std::min(width, 12), index);
    return buf;
}

}  // namespace

SimulationSpec make_two_continent_spec(int n_asia, int n_africa, int n_per_arm,
                                       double effect_mu, double noise_sd,
                                       int replications, std::uint64_t seed,
                                       double alpha) {
    SimulationSpec spec;
    spec.groups.reserve(static_cast<std::size_t>(n_asia) + n_africa);
    for (int i = 0; i < n_asia; ++i) {
        spec.groups.push_back(
            {indexed_id("asia_", i, n_asia), Continent::Asia, n_per_arm, n_per_arm});
    }
    for (int i = 0; i < n_africa; ++i) {
        spec.groups.push_back({indexed_id("africa_", i, n_africa), Continent::Africa,
                               n_per_arm, n_per_arm});
    }
    spec.effect_mu = effect_mu;
    spec.noise_sd = noise_sd;
    spec.replications = replications;
    spec.seed = seed;
    spec.alpha = alpha;
    validate(spec);
    return spec;
}

SimulationSpec default_spec() {
    return make_two_continent_spec(48, 54, 100, 0.2, 0.1, 100, 20240101, 0.05);
}

SimulationSpec desk_spec() {
    return make_two_continent_spec(20, 20, 100, 0.2, 0.1, 100, 20240101, 0.05);
}

void validate(const SimulationSpec& spec) {
    if (spec.groups.empty()) {
        throw InputError("simulation spec: groups must be nonempty");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& group : spec.groups) {
        if (group.group_id.empty()) {
            throw InputError("simulation spec: group ids must be nonempty");
        }
        if (!seen.insert(group.group_id).second) {
            throw InputError("simulation spec: duplicate group id '" +
                             group.group_id + "'");
        }
        if (group.n_control < 2 || group.n_treatment < 2) {
            throw InputError("simulation spec: group '" + group.group_id +
                             "' needs at least two members per arm");
        }
    }
    if (!std::isfinite(spec.effect_mu)) {
        throw InputError("simulation spec: effect_mu must be finite");
    }
    if (!std::isfinite(spec.noise_sd) || spec.noise_sd <= 0.0) {
        throw InputError("simulation spec: noise_sd must be finite and positive");
    }
    if (spec.replications < 1) {
        throw InputError("simulation spec: replications must be at least 1");
    }
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
        throw InputError("simulation spec: alpha must lie strictly in (0, 1)");
    }
}

std::vector<GroupMetric> simulate_two_continent_replicate(
    const SimulationSpec& spec, int rep_index) {
    validate(spec);
    if (rep_index < 0) {
        throw InputError("replicate index must be nonnegative");
    }

    std::vector<GroupMetric> metrics;
    metrics.reserve(spec.groups.size());
    std::vector<double> scratch;
    const auto rep = static_cast<std::uint64_t>(rep_index);

    for (const auto& group : spec.groups) {
        RngStream control_stream(spec.seed, rep, group.group_id, kControlChannel);
        scratch.clear();
        for (int i = 0; i < group.n_control; ++i) {
            scratch.push_back(control_stream.next_normal(0.0, spec.noise_sd));
        }
        const SampleSummary control = summarize_samples(scratch);

        const double mu = group.continent == Continent::Asia ? -spec.effect_mu
                                                             : spec.effect_mu;
        RngStream treatment_stream(spec.seed, rep, group.group_id, kTreatmentChannel);
        scratch.clear();
        for (int i = 0; i < group.n_treatment; ++i) {
            scratch.push_back(treatment_stream.next_normal(mu, spec.noise_sd));
        }
        metrics.push_back(
            welch_summary(group.group_id, summarize_samples(scratch), control));
    }
    return metrics;
}

std::vector<PowerCurvePoint> power_curve(const SimulationSpec& spec_template,
                                         std::span<const double> mu_grid) {
    validate(spec_template);
    if (mu_grid.empty()) {
        throw InputError("power curve: mu grid must be nonempty");
    }
    for (double mu : mu_grid) {
        if (!std::isfinite(mu)) {
            throw InputError("power curve: mu values must be finite");
        }
    }

    std::vector<std::string> asia_ids;
    for (const auto& group : spec_template.groups) {
        if (group.continent == Continent::Asia) {
            asia_ids.push_back(group.group_id);
        }
    }
    std::sort(asia_ids.begin(), asia_ids.end());

    const LikelihoodRatioNotion notion;
    const ClusteringConfig config{spec_template.alpha, ThresholdPolicy::BonferroniK2,
                                  TieBreak::LexSmallestPair};

    std::vector<PowerCurvePoint> points;
    points.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        SimulationSpec spec = spec_template;
        spec.effect_mu = mu;

        int recovered = 0;
        int rejected = 0;
        for (int rep = 0; rep < spec.replications; ++rep) {
            const auto metrics = simulate_two_continent_replicate(spec, rep);
            const auto result = run_clustering(metrics, notion, config);
            rejected += result.rejected ? 1 : 0;
            for (const auto& cluster : result.final_clusters) {
                if (cluster.members() == asia_ids) {
                    ++recovered;
                    break;
                }
            }
        }
        const auto reps = static_cast<double>(spec.replications);
        points.push_back({mu, recovered / reps, rejected / reps, spec.replications});
    }
    return points;
}

std::vector<FprCurvePoint> fpr_curve(int n_groups,
                                     std::span<const double> alpha_grid,
                                     int replications, std::uint64_t seed) {
    if (n_groups < 2) {
        throw InputError("fpr curve: need at least two groups");
    }
    if (alpha_grid.empty()) {
        throw InputError("fpr curve: alpha grid must be nonempty");
    }
    for (double alpha : alpha_grid) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw InputError("fpr curve: alpha values must lie strictly in (0, 1)");
        }
    }
    if (replications < 1) {
        throw InputError("fpr curve: replications must be at least 1");
    }

    std::vector<std::string> ids;
    ids.reserve(n_groups);
    for (int i = 0; i < n_groups; ++i) {
        ids.push_back(indexed_id("g", i, n_groups));
    }

    // Fixed log-spaced ladder of standard errors spanning [0.05, 10].
    // Group sizes in real segmentation data differ by orders of
    // magnitude, and the finite-sample behavior of the sequential test
    // on reused data depends strongly on that spread: under equal
    // precisions the greedy merge order manufactures separation between
    // the last two clusters and the false-rejection rate climbs well
    // above alpha for K this large.
    std::vector<double> sds(n_groups);
    for (int g = 0; g < n_groups; ++g) {
        const double frac =
            n_groups == 1 ? 0.0 : static_cast<double>(g) / (n_groups - 1);
        sds[g] = std::exp(std::lerp(std::log(0.05), std::log(10.0), frac));
    }

    const LikelihoodRatioNotion notion;
    std::vector<int> reject_counts(alpha_grid.size(), 0);
    std::vector<GroupMetric> metrics(n_groups);

    // One replicate's draws are reused across the whole alpha grid,
    // mirroring a fixed corpus of null experiments evaluated at several
    // levels.
    for (int rep = 0; rep < replications; ++rep) {
        for (int g = 0; g < n_groups; ++g) {
            RngStream stream(seed, static_cast<std::uint64_t>(rep), ids[g],
                             kMetricChannel);
            metrics[g] = {ids[g], stream.next_normal(0.0, sds[g]), sds[g]};
        }
        for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
            const ClusteringConfig config{alpha_grid[a], ThresholdPolicy::BonferroniK2,
                                          TieBreak::LexSmallestPair};
            if (run_clustering(metrics, notion, config).rejected) {
                ++reject_counts[a];
            }
        }
    }

    std::vector<FprCurvePoint> points;
    points.reserve(alpha_grid.size());
    for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
        points.push_back({alpha_grid[a],
                          reject_counts[a] / static_cast<double>(replications),
                          replications});
    }
    return points;
}

double rate_standard_error(double rate, int replications) {
    if (replications < 1) {
        throw InputError("rate standard error: replications must be at least 1");
    }
    return std::sqrt(std::max(rate * (1.0 - rate), 0.0) /
                     static_cast<double>(replications));
}

}  // namespace hetclust
