// Acceptance suite: every release criterion as one pass/fail line.
// Run with no arguments for the full battery, or pass criterion numbers
// to run a subset (used by the ctest registration). Exit code is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "clustering_oracle.hpp"
#include "fixtures/special_function_fixtures.hpp"
#include "hetclust/engine.hpp"
#include "hetclust/similarity.hpp"
#include "hetclust/simulation.hpp"
#include "hetclust/special_functions.hpp"
#include "test_util.hpp"

using namespace hetclust;
namespace fx = hetclust::test_fixtures;

namespace {

constexpr std::uint64_t kSeed = 20240101;  // committed; used by criteria 1-3

struct Outcome {
    bool pass = false;
    std::string detail;
};

double median_runtime_ms(const std::vector<GroupMetric>& metrics, int runs) {
    const LikelihoodRatioNotion notion;
    const ClusteringConfig config{0.05, ThresholdPolicy::BonferroniK2,
                                  TieBreak::LexSmallestPair};
    std::vector<double> times;
    times.reserve(runs);
    for (int i = 0; i < runs; ++i) {
        const auto start = std::chrono::steady_clock::now();
        const auto result = run_clustering(metrics, notion, config);
        const auto stop = std::chrono::steady_clock::now();
        if (result.final_clusters.empty()) {
            std::abort();  // keep the optimizer from eliding the run
        }
        times.push_back(
            std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

// 1. Exact recovery of the planted Asia set at mu = 0.2, desk preset.
Outcome criterion_power_mu02() {
    auto spec = make_two_continent_spec(20, 20, 100, 0.2, 0.1, 100, kSeed, 0.05);
    const auto points = power_curve(spec, std::vector<double>{0.2});
    const double rate = points[0].exact_recovery_rate;
    return {rate >= 0.9,
            format("exact recovery at mu=0.2 is %.3f (need >= 0.9; 100 reps, "
                   "20+20 groups)",
                   rate)};
}

// 2. Full 20-point power curve: isotonic within 3 MC SEs, plateau >= 0.95.
Outcome criterion_power_plateau() {
    auto spec = make_two_continent_spec(20, 20, 100, 0.0, 0.1, 100, kSeed, 0.05);
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) {
        grid.push_back(i / 19.0);
    }
    const auto points = power_curve(spec, grid);

    bool isotonic = true;
    for (std::size_t i = 0; i < points.size() && isotonic; ++i) {
        const double se = rate_standard_error(
            std::max(points[i].exact_recovery_rate, 1e-3), 100);
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[j].exact_recovery_rate <
                points[i].exact_recovery_rate - 3.0 * se) {
                isotonic = false;
                break;
            }
        }
    }
    double plateau_min = 1.0;
    for (const auto& point : points) {
        if (point.mu >= 0.3) {
            plateau_min = std::min(plateau_min, point.exact_recovery_rate);
        }
    }
    return {isotonic && plateau_min >= 0.95,
            format("isotonic within 3 SE: %s; min recovery over mu>=0.3 is %.3f "
                   "(need >= 0.95)",
                   isotonic ? "yes" : "NO", plateau_min)};
}

// 3. Null false-positive rate, 21 groups, 2000 replications.
Outcome criterion_null_fpr() {
    const std::vector<double> grid = {0.05, 0.5};
    const auto points = fpr_curve(21, grid, 2000, kSeed);
    const double at05 = points[0].false_rejection_rate;
    const double at50 = points[1].false_rejection_rate;
    return {at05 >= 0.0 && at05 <= 0.08 && at50 <= 0.5,
            format("FPR(alpha=0.05) = %.4f (need <= 0.08), FPR(alpha=0.5) = "
                   "%.4f (need <= 0.5)",
                   at05, at50)};
}

// 4. Canonical LR form vs square-root form; singleton reduction.
Outcome criterion_formula_equivalence() {
    test::InstanceGen gen(40001);
    double max_rel = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto a = gen.random_cluster(gen.uniform_int(1, 20), "a");
        const auto b = gen.random_cluster(gen.uniform_int(1, 20), "b");
        const double canonical = lr_statistic(a, b);
        const double si = a.precision_sum();
        const double sj = b.precision_sum();
        const double t = std::sqrt(sj / si) * a.weighted_sum() -
                         std::sqrt(si / sj) * b.weighted_sum();
        const double sqrt_form = t * t / (si + sj);
        max_rel = std::max(max_rel, test::rel_err(canonical, sqrt_form));
    }

    double max_singleton = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const double e1 = gen.uniform(-10, 10);
        const double e2 = gen.uniform(-10, 10);
        const double s1 = gen.log_uniform(1e-3, 10);
        const double s2 = gen.log_uniform(1e-3, 10);
        const double lr = lr_statistic(make_cluster(test::metric("a", e1, s1)),
                                       make_cluster(test::metric("b", e2, s2)));
        const double basic = (e1 - e2) * (e1 - e2) / (s1 * s1 + s2 * s2);
        const double err =
            std::fabs(lr - basic) / std::max({1.0, std::fabs(lr), std::fabs(basic)});
        max_singleton = std::max(max_singleton, err);
    }
    return {max_rel < 1e-10 && max_singleton < 1e-12,
            format("10000 pairs: max form disagreement %.2e (need < 1e-10); "
                   "max singleton disagreement %.2e (need < 1e-12)",
                   max_rel, max_singleton)};
}

// 5. Incremental engine vs from-scratch recomputation oracle.
Outcome criterion_engine_oracle() {
    test::InstanceGen gen(50001);
    const LikelihoodRatioNotion notion;
    const ClusteringConfig config{0.05, ThresholdPolicy::BonferroniK2,
                                  TieBreak::LexSmallestPair};
    for (int trial = 0; trial < 200; ++trial) {
        const int k = gen.uniform_int(1, 8);
        const double scale = (trial % 3 == 0) ? 0.1 : (trial % 3 == 1 ? 1.0 : 4.0);
        const auto metrics = gen.random_metrics(k, scale);
        const auto engine = run_clustering(metrics, notion, config);
        const auto oracle = test::oracle_clustering(metrics, notion, config);

        bool same = engine.rejected == oracle.rejected &&
                    engine.trace.size() == oracle.trace.size() &&
                    engine.decision_pvalue.value() == oracle.decision_pvalue &&
                    engine.final_clusters.size() == oracle.final_members.size();
        for (std::size_t i = 0; same && i < engine.trace.size(); ++i) {
            const auto lhs =
                std::minmax(engine.trace[i].left_members,
                            engine.trace[i].right_members);
            const auto rhs = std::minmax(oracle.trace[i].left, oracle.trace[i].right);
            same = lhs == rhs &&
                   engine.trace[i].max_pvalue.value() == oracle.trace[i].pvalue;
        }
        for (std::size_t i = 0; same && i < engine.final_clusters.size(); ++i) {
            same = engine.final_clusters[i].members() == oracle.final_members[i];
        }
        if (!same) {
            return {false, format("mismatch at instance %d (K=%d)", trial, k)};
        }
    }
    return {true, "200 random instances with K <= 8 match the oracle exactly"};
}

// 6. Special functions vs frozen high-precision fixtures.
Outcome criterion_special_functions() {
    double max_abs = 0.0;
    for (const auto& point : fx::kChiSquare1Sf) {
        max_abs = std::max(max_abs,
                           std::fabs(chi2_sf_1df(point.x).value() - point.sf));
    }
    for (const auto& point : fx::kNormalSf) {
        max_abs =
            std::max(max_abs, std::fabs(normal_sf(point.x).value() - point.sf));
    }
    double max_identity = 0.0;
    for (double x = 0.0; x <= 40.0; x += 0.0625) {
        const double lhs = chi2_sf_1df(x).value();
        const double rhs = 2.0 * normal_sf(std::sqrt(x)).value();
        max_identity = std::max(max_identity, test::rel_err(lhs, rhs));
    }
    return {max_abs < 1e-9 && max_identity < 1e-12,
            format("max |error| over 100 fixture points %.2e (need < 1e-9); "
                   "identity gap %.2e (need < 1e-12)",
                   max_abs, max_identity)};
}

// 7. Wall time: K=100 under 100 ms, and no worse than quadratic to K=400.
Outcome criterion_performance() {
    test::InstanceGen gen(70001);
    const auto metrics100 = gen.random_metrics(100, 0.1);
    const auto metrics400 = gen.random_metrics(400, 0.1);
    median_runtime_ms(metrics100, 3);  // warm-up
    const double t100 = median_runtime_ms(metrics100, 7);
    const double t400 = median_runtime_ms(metrics400, 5);
    // 16x is exactly quadratic; 1.5 covers timer and allocator noise.
    const double limit = 16.0 * 1.5 * t100;
    return {t100 < 100.0 && t400 <= limit,
            format("K=100: %.2f ms (need < 100); K=400: %.2f ms (need <= %.2f, "
                   "i.e. 16 x 1.5 x t100)",
                   t100, t400, limit)};
}

// 8. Permutation, shift, and positive-scale invariance of the partition.
Outcome criterion_invariance() {
    test::InstanceGen gen(80001);
    const LikelihoodRatioNotion notion;
    const ClusteringConfig config{0.05, ThresholdPolicy::BonferroniK2,
                                  TieBreak::LexSmallestPair};

    const auto partition_of = [](const ClusteringResult& r) {
        std::vector<std::vector<std::string>> out;
        for (const auto& cluster : r.final_clusters) {
            out.push_back(cluster.members());
        }
        return out;
    };
    const auto trace_of = [](const ClusteringResult& r) {
        std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>
            out;
        for (const auto& step : r.trace) {
            out.push_back(std::minmax(step.left_members, step.right_members));
        }
        return out;
    };

    for (int trial = 0; trial < 100; ++trial) {
        auto metrics = gen.random_metrics(gen.uniform_int(2, 12), 0.8);
        const auto base = run_clustering(metrics, notion, config);

        auto permuted = metrics;
        for (std::size_t i = permuted.size(); i > 1; --i) {
            std::swap(permuted[i - 1],
                      permuted[static_cast<std::size_t>(
                          gen.uniform_int(0, static_cast<int>(i) - 1))]);
        }
        const auto perm = run_clustering(permuted, notion, config);

        auto shifted = metrics;
        const double shift = gen.uniform(-20.0, 20.0);
        for (auto& m : shifted) m.estimate += shift;
        const auto shif = run_clustering(shifted, notion, config);

        auto scaled = metrics;
        const double scale = gen.log_uniform(0.01, 100.0);
        for (auto& m : scaled) {
            m.estimate *= scale;
            m.sd *= scale;
        }
        const auto scal = run_clustering(scaled, notion, config);

        for (const auto* other : {&perm, &shif, &scal}) {
            if (other->rejected != base.rejected ||
                partition_of(*other) != partition_of(base) ||
                trace_of(*other) != trace_of(base)) {
                return {false, format("invariance broken at instance %d", trial)};
            }
        }
    }
    return {true, "100 randomized instances: partition and trace invariant"};
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "power at mu=0.2", criterion_power_mu02},
        {2, "power plateau", criterion_power_plateau},
        {3, "null false-positive rate", criterion_null_fpr},
        {4, "formula equivalence oracle", criterion_formula_equivalence},
        {5, "engine-oracle equivalence", criterion_engine_oracle},
        {6, "special functions vs fixtures", criterion_special_functions},
        {7, "performance and scaling", criterion_performance},
        {8, "invariance suite", criterion_invariance},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.push_back(std::atoi(argv[i]));
    }

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.number) ==
                selected.end()) {
            continue;
        }
        const auto outcome = criterion.run();
        std::printf("[%s] %d. %s: %s\n", outcome.pass ? "PASS" : "FAIL",
                    criterion.number, criterion.name, outcome.detail.c_str());
        std::fflush(stdout);
        failures += outcome.pass ? 0 : 1;
    }
    return failures;
}
