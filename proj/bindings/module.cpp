#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>
#include <utility>
#include <vector>

#include "hetclust/cli.hpp"
#include "hetclust/cluster_stats.hpp"
#include "hetclust/engine.hpp"
#include "hetclust/errors.hpp"
#include "hetclust/io.hpp"
#include "hetclust/sample_summary.hpp"
#include "hetclust/similarity.hpp"
#include "hetclust/simulation.hpp"
#include "hetclust/special_functions.hpp"

namespace py = pybind11;
using namespace hetclust;

namespace {

// Lets Python subclasses provide their own notion of similarity.
class PySimilarityNotion : public SimilarityNotion {
public:
    using SimilarityNotion::SimilarityNotion;

    PValue pairwise_pvalue(const ClusterStats& a,
                           const ClusterStats& b) const override {
        PYBIND11_OVERRIDE_PURE(PValue, SimilarityNotion, pairwise_pvalue, a, b);
    }
};

std::vector<PredictionRecord> to_prediction_records(
    const std::vector<std::pair<int, int>>& rows, const std::string& group_id) {
    std::vector<PredictionRecord> records;
    records.reserve(rows.size());
    for (const auto& [classification, label] : rows) {
        if ((classification != 0 && classification != 1) ||
            (label != 0 && label != 1)) {
            throw InputError("classifier records must be strictly binary (group '" +
                             group_id + "')");
        }
        records.push_back({static_cast<std::uint8_t>(classification),
                           static_cast<std::uint8_t>(label)});
    }
    return records;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Likelihood-ratio agglomerative clustering with statistical guarantees: "
        "detects groups responding heterogeneously to a treatment or treated "
        "disparately by a classifier.";
#ifdef HETCLUST_VERSION
    m.attr("__version__") = HETCLUST_VERSION;
#else
    m.attr("__version__") = "dev";
#endif

    const auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base);
    py::register_exception<DegenerateVarianceError>(m, "DegenerateVarianceError",
                                                    base);
    py::register_exception<DegenerateRateError>(m, "DegenerateRateError", base);
    py::register_exception<OverlappingClustersError>(m, "OverlappingClustersError",
                                                     base);
    py::register_exception<InputError>(m, "InputError", base);
    py::register_exception<ParseError>(m, "ParseError", base);

    py::class_<PValue>(m, "PValue")
        .def(py::init<double>(), py::arg("value"))
        .def_property_readonly("value", &PValue::value)
        .def("__float__", &PValue::value)
        .def("__repr__", [](const PValue& p) {
            std::ostringstream out;
            out << "PValue(" << p.value() << ")";
            return out.str();
        });
    py::implicitly_convertible<py::float_, PValue>();
    py::implicitly_convertible<py::int_, PValue>();

    m.def(
        "chi2_sf_1df", [](double x) { return chi2_sf_1df(x).value(); }, py::arg("x"),
        "Upper-tail probability of the chi-square distribution with one degree "
        "of freedom.");
    m.def(
        "normal_sf", [](double z) { return normal_sf(z).value(); }, py::arg("z"),
        "Standard normal upper-tail probability.");

    py::class_<SampleSummary>(m, "SampleSummary")
        .def(py::init([](std::size_t count, double mean, double variance) {
                 return SampleSummary{count, mean, variance};
             }),
             py::arg("count"), py::arg("mean"), py::arg("variance"))
        .def_readwrite("count", &SampleSummary::count)
        .def_readwrite("mean", &SampleSummary::mean)
        .def_readwrite("variance", &SampleSummary::variance);

    m.def(
        "summarize_samples",
        [](const std::vector<double>& samples) { return summarize_samples(samples); },
        py::arg("samples"),
        "Count, mean and unbiased variance of a sample sequence.");

    m.def("welch_summary", &welch_summary, py::arg("group_id"),
          py::arg("treatment"), py::arg("control"),
          "Difference-of-means estimate with its large-sample standard error.");

    py::class_<GroupMetric>(m, "GroupMetric")
        .def(py::init([](std::string group_id, double estimate, double sd) {
                 GroupMetric metric{std::move(group_id), estimate, sd};
                 validate(metric);
                 return metric;
             }),
             py::arg("group_id"), py::arg("estimate"), py::arg("sd"))
        .def_readwrite("group_id", &GroupMetric::group_id)
        .def_readwrite("estimate", &GroupMetric::estimate)
        .def_readwrite("sd", &GroupMetric::sd)
        .def("__repr__", [](const GroupMetric& g) {
            std::ostringstream out;
            out << "GroupMetric('" << g.group_id << "', estimate=" << g.estimate
                << ", sd=" << g.sd << ")";
            return out.str();
        });

    py::class_<ClusterStats>(m, "ClusterStats")
        .def_property_readonly("members", &ClusterStats::members)
        .def_property_readonly("precision_sum", &ClusterStats::precision_sum)
        .def_property_readonly("weighted_sum", &ClusterStats::weighted_sum)
        .def_property_readonly("mle_mean", &ClusterStats::mle_mean)
        .def("__repr__", [](const ClusterStats& c) {
            std::ostringstream out;
            out << "ClusterStats(" << c.members().size()
                << " members, mle_mean=" << c.mle_mean() << ")";
            return out.str();
        });

    m.def("make_cluster", &make_cluster, py::arg("metric"),
          "Singleton cluster carrying the group's sufficient statistics.");
    m.def("merge_clusters", &merge_clusters, py::arg("a"), py::arg("b"),
          "Union of two disjoint clusters; sufficient statistics add.");
    m.def("lr_statistic", &lr_statistic, py::arg("a"), py::arg("b"),
          "Likelihood-ratio statistic for equality of two cluster means.");
    m.def(
        "lr_pvalue",
        [](const ClusterStats& a, const ClusterStats& b) {
            return lr_pvalue(a, b).value();
        },
        py::arg("a"), py::arg("b"),
        "Chi-square(1) upper-tail p-value of the likelihood-ratio statistic.");

    py::enum_<RateMetric>(m, "RateMetric")
        .value("FPR", RateMetric::FalsePositiveRate)
        .value("TPR", RateMetric::TruePositiveRate)
        .value("POSITIVE_RATE", RateMetric::PositiveRate)
        .value("MISCLASSIFICATION", RateMetric::MisclassificationRate);

    m.def(
        "classifier_rate_metric",
        [](std::string group_id, const std::vector<std::pair<int, int>>& predictions,
           RateMetric kind) {
            const auto records = to_prediction_records(predictions, group_id);
            return classifier_rate_metric(std::move(group_id), records, kind);
        },
        py::arg("group_id"), py::arg("predictions"), py::arg("kind"),
        "Empirical classifier rate with its binomial standard error; "
        "`predictions` is a sequence of (classification, label) pairs.");

    py::class_<SimilarityNotion, PySimilarityNotion>(m, "SimilarityNotion")
        .def(py::init<>())
        .def("pairwise_pvalue", &SimilarityNotion::pairwise_pvalue, py::arg("a"),
             py::arg("b"));

    py::class_<LikelihoodRatioNotion, SimilarityNotion>(m, "LikelihoodRatioNotion")
        .def(py::init<>());

    py::enum_<ThresholdPolicy>(m, "ThresholdPolicy")
        .value("PER_ITERATION_K", ThresholdPolicy::PerIterationK)
        .value("BONFERRONI_K2", ThresholdPolicy::BonferroniK2);

    py::enum_<TieBreak>(m, "TieBreak")
        .value("LEX_SMALLEST_PAIR", TieBreak::LexSmallestPair);

    py::class_<ClusteringConfig>(m, "ClusteringConfig")
        .def(py::init([](double alpha, ThresholdPolicy policy, TieBreak tie_break) {
                 return ClusteringConfig{alpha, policy, tie_break};
             }),
             py::arg("alpha") = 0.05,
             py::arg("policy") = ThresholdPolicy::BonferroniK2,
             py::arg("tie_break") = TieBreak::LexSmallestPair)
        .def_readwrite("alpha", &ClusteringConfig::alpha)
        .def_readwrite("policy", &ClusteringConfig::policy)
        .def_readwrite("tie_break", &ClusteringConfig::tie_break);

    py::class_<MergeStep>(m, "MergeStep")
        .def_readonly("iteration", &MergeStep::iteration)
        .def_readonly("left_members", &MergeStep::left_members)
        .def_readonly("right_members", &MergeStep::right_members)
        .def_property_readonly(
            "max_pvalue", [](const MergeStep& s) { return s.max_pvalue.value(); })
        .def_readonly("threshold_used", &MergeStep::threshold_used);

    py::class_<ClusteringResult>(m, "ClusteringResult")
        .def_readonly("rejected", &ClusteringResult::rejected)
        .def_readonly("final_clusters", &ClusteringResult::final_clusters)
        .def_readonly("trace", &ClusteringResult::trace)
        .def_property_readonly(
            "decision_pvalue",
            [](const ClusteringResult& r) { return r.decision_pvalue.value(); })
        .def_readonly("threshold", &ClusteringResult::threshold)
        .def("__repr__", [](const ClusteringResult& r) {
            std::ostringstream out;
            out << "ClusteringResult(rejected=" << (r.rejected ? "True" : "False")
                << ", clusters=" << r.final_clusters.size() << ")";
            return out.str();
        });

    m.def(
        "run_clustering",
        [](const std::vector<GroupMetric>& metrics, const ClusteringConfig& config,
           const SimilarityNotion* notion) {
            const LikelihoodRatioNotion fallback;
            return run_clustering(metrics, notion ? *notion : fallback, config);
        },
        py::arg("metrics"), py::arg("config") = ClusteringConfig{},
        py::arg("notion") = static_cast<const SimilarityNotion*>(nullptr),
        "Sequential test-and-merge loop; defaults to the likelihood-ratio "
        "notion of similarity.");

    py::class_<PairwisePValues>(m, "PairwisePValues")
        .def_property_readonly("n_clusters", &PairwisePValues::n_clusters)
        .def_property_readonly("n_pairs", &PairwisePValues::n_pairs)
        .def(
            "p",
            [](const PairwisePValues& table, std::size_t i, std::size_t j) {
                return table.p(i, j).value();
            },
            py::arg("i"), py::arg("j"))
        .def("tie_key", &PairwisePValues::tie_key, py::arg("i"));

    m.def(
        "pairwise_pvalue_table",
        [](const std::vector<ClusterStats>& clusters,
           const SimilarityNotion* notion) {
            const LikelihoodRatioNotion fallback;
            return pairwise_pvalue_table(clusters, notion ? *notion : fallback);
        },
        py::arg("clusters"),
        py::arg("notion") = static_cast<const SimilarityNotion*>(nullptr),
        "Symmetric p-value table over every unordered cluster pair.");

    m.def(
        "argmax_pair",
        [](const PairwisePValues& table) {
            const auto top = argmax_pair(table);
            return py::make_tuple(top.i, top.j, top.p.value());
        },
        py::arg("table"),
        "Pair with the largest p-value as (i, j, p); deterministic ties.");

    m.def(
        "result_to_json",
        [](const ClusteringResult& result, const ClusteringConfig& config,
           std::size_t n_groups) {
            return to_json(make_result_document(result, config, n_groups));
        },
        py::arg("result"), py::arg("config"), py::arg("n_groups"),
        "Serialize a clustering result to the JSON document the CLI emits.");

    py::enum_<Continent>(m, "Continent")
        .value("ASIA", Continent::Asia)
        .value("AFRICA", Continent::Africa);

    py::class_<SimGroup>(m, "SimGroup")
        .def(py::init([](std::string group_id, Continent continent, int n_control,
                         int n_treatment) {
                 return SimGroup{std::move(group_id), continent, n_control,
                                 n_treatment};
             }),
             py::arg("group_id"), py::arg("continent"), py::arg("n_control"),
             py::arg("n_treatment"))
        .def_readwrite("group_id", &SimGroup::group_id)
        .def_readwrite("continent", &SimGroup::continent)
        .def_readwrite("n_control", &SimGroup::n_control)
        .def_readwrite("n_treatment", &SimGroup::n_treatment);

    py::class_<SimulationSpec>(m, "SimulationSpec")
        .def(py::init<>())
        .def_readwrite("groups", &SimulationSpec::groups)
        .def_readwrite("effect_mu", &SimulationSpec::effect_mu)
        .def_readwrite("noise_sd", &SimulationSpec::noise_sd)
        .def_readwrite("replications", &SimulationSpec::replications)
        .def_readwrite("seed", &SimulationSpec::seed)
        .def_readwrite("alpha", &SimulationSpec::alpha);

    m.def("make_two_continent_spec", &make_two_continent_spec, py::arg("n_asia"),
          py::arg("n_africa"), py::arg("n_per_arm"), py::arg("effect_mu"),
          py::arg("noise_sd"), py::arg("replications"), py::arg("seed"),
          py::arg("alpha"));
    m.def("default_spec", &default_spec,
          "Country-scale roster: 48 Asia and 54 Africa groups.");
    m.def("desk_spec", &desk_spec, "Small 20+20 roster for quick studies.");

    m.def("simulate_two_continent_replicate", &simulate_two_continent_replicate,
          py::arg("spec"), py::arg("rep_index"),
          "One deterministic replicate of the two-continent experiment.");

    py::class_<PowerCurvePoint>(m, "PowerCurvePoint")
        .def_readonly("mu", &PowerCurvePoint::mu)
        .def_readonly("exact_recovery_rate", &PowerCurvePoint::exact_recovery_rate)
        .def_readonly("rejection_rate", &PowerCurvePoint::rejection_rate)
        .def_readonly("replications", &PowerCurvePoint::replications);

    m.def(
        "power_curve",
        [](const SimulationSpec& spec, const std::vector<double>& mu_grid) {
            return power_curve(spec, mu_grid);
        },
        py::arg("spec"), py::arg("mu_grid"));

    py::class_<FprCurvePoint>(m, "FprCurvePoint")
        .def_readonly("alpha", &FprCurvePoint::alpha)
        .def_readonly("false_rejection_rate", &FprCurvePoint::false_rejection_rate)
        .def_readonly("replications", &FprCurvePoint::replications);

    m.def(
        "fpr_curve",
        [](int n_groups, const std::vector<double>& alpha_grid, int replications,
           std::uint64_t seed) {
            return fpr_curve(n_groups, alpha_grid, replications, seed);
        },
        py::arg("n_groups"), py::arg("alpha_grid"), py::arg("replications"),
        py::arg("seed"));

    m.def("rate_standard_error", &rate_standard_error, py::arg("rate"),
          py::arg("replications"),
          "Monte Carlo standard error of an empirical rate.");
}
