#include "fairspace/reports.hpp"

#include <cmath>
#include <cstdio>

namespace fairspace {

using nlohmann::json;

namespace {

double finite(double v) {
    if (std::isnan(v)) return 0.0;
    if (std::isinf(v)) return v > 0 ? 1e308 : -1e308;
    return v;
}

const char* mode_name(SmoothingMode mode) {
    return mode == SmoothingMode::additive ? "additive" : "perturb";
}

}  // namespace

json to_json(const SkewReport& report) {
    return json{{"rho_b", finite(report.rho_b)},
                {"rho_w", finite(report.rho_w)},
                {"delta", report.delta},
                {"sigma", finite(report.sigma)},
                {"per_group_rho", report.per_group_rho},
                {"mode", mode_name(report.mode)}};
}

json to_json(const CouplingVerdict& verdict) {
    return json{{"valid", verdict.valid}, {"flags", verdict.flags}};
}

json coupling_to_json(const Coupling& coupling) {
    std::vector<std::vector<double>> rows(coupling.nu.rows,
                                          std::vector<double>(coupling.nu.cols));
    for (size_t i = 0; i < coupling.nu.rows; ++i)
        for (size_t j = 0; j < coupling.nu.cols; ++j) rows[i][j] = coupling.nu.at(i, j);
    return json{{"nu", rows},
                {"row_marginal", coupling.row_marginal},
                {"col_marginal", coupling.col_marginal}};
}

json axiom_verdict_json(const std::string& check, const AxiomVerdict& verdict,
                        const std::vector<std::string>& witness_names, json params) {
    params["eps"] = verdict.epsilon_used;
    json witnesses = json::array();
    if (verdict.witness) {
        auto [a, b] = *verdict.witness;
        witnesses.push_back(json{{"a", a < witness_names.size() ? witness_names[a]
                                                                : std::to_string(a)},
                                 {"b", b < witness_names.size() ? witness_names[b]
                                                                : std::to_string(b)}});
    }
    json j{{"check", check},
           {"params", params},
           {"holds", verdict.holds},
           {"achieved", finite(verdict.achieved_value)},
           {"witnesses", witnesses}};
    if (verdict.all_maps_bound) j["all_maps_bound"] = finite(*verdict.all_maps_bound);
    return j;
}

json fairness_verdict_json(const FairnessVerdict& verdict, const GroupedMetricSpace& cs) {
    json witnesses = json::array();
    for (const auto& v : verdict.violations)
        witnesses.push_back(json{{"p", cs.point_ids[v.p]},
                                 {"q", cs.point_ids[v.q]},
                                 {"d_construct", v.d_construct},
                                 {"d_decision", v.d_decision}});
    return json{{"check", "fairness"},
                {"params", json{{"eps", verdict.epsilon}, {"eps_prime", verdict.epsilon_prime}}},
                {"holds", verdict.fair},
                {"achieved", static_cast<double>(verdict.violations.size())},
                {"witnesses", witnesses}};
}

json skew_verdict_json(const std::string& check, const SkewVerdict& verdict) {
    return json{{"check", check},
                {"params", json{{"threshold", verdict.threshold},
                                {"delta", verdict.skew.delta},
                                {"smoothing", mode_name(verdict.skew.mode)}}},
                {"holds", verdict.flagged},
                {"achieved", finite(verdict.skew.sigma)},
                {"witnesses", json::array()},
                {"skew", to_json(verdict.skew)}};
}

json non_discrimination_json(const NonDiscriminationVerdict& verdict) {
    return json{{"check", "non_discrimination"},
                {"params", json{{"threshold", verdict.threshold},
                                {"delta", verdict.skew.delta},
                                {"smoothing", mode_name(verdict.skew.mode)}}},
                {"holds", verdict.non_discriminatory},
                {"achieved", finite(verdict.skew.sigma)},
                {"witnesses", json::array()},
                {"skew", to_json(verdict.skew)}};
}

json mechanism_verdict_json(const std::string& check, const MechanismVerdict& verdict) {
    return json{{"check", check},
                {"params", json{{"eps", verdict.epsilon}}},
                {"holds", verdict.passes},
                {"achieved", finite(verdict.achieved)},
                {"witnesses", json::array()},
                {"rich", verdict.rich}};
}

json violation_search_json(const ViolationSearchResult& result, const GroupedMetricSpace& os) {
    json witnesses = json::array();
    if (result.found)
        witnesses.push_back(json{{"p", os.point_ids[result.p]},
                                 {"q", os.point_ids[result.q]},
                                 {"os_distance", result.os_distance},
                                 {"ds_distance", result.ds_distance}});
    return json{{"check", "fairness_violation_search"},
                {"params", json{{"delta", result.delta},
                                {"delta_prime", result.delta_prime},
                                {"eps", result.eps},
                                {"injective_premise", result.injective_premise}}},
                {"holds", result.found},
                {"achieved", result.found ? result.os_distance : -1.0},
                {"witnesses", witnesses}};
}

namespace {

json metrics_json(const TrialMetrics& m) {
    return json{{"trial", m.trial},
                {"sigma_cs_os", finite(m.sigma_cs_os)},
                {"sigma_os_ds", finite(m.sigma_os_ds)},
                {"sigma_cs_ds", finite(m.sigma_cs_ds)},
                {"violations", m.violations},
                {"bound", finite(m.bound)},
                {"margin", finite(m.margin)}};
}

}  // namespace

json to_json(const Theorem1Report& report) {
    json trials = json::array();
    for (const auto& t : report.trials) {
        json j = metrics_json(t.metrics);
        j["delta"] = t.delta;
        j["delta_prime"] = t.delta_prime;
        j["eps"] = t.eps;
        j["eps_prime"] = t.eps_prime;
        j["g_distortion"] = t.g_distortion;
        j["f_distortion"] = t.f_distortion;
        trials.push_back(std::move(j));
    }
    return json{{"experiment", "theorem1"},
                {"trials", trials},
                {"total_violations", report.total_violations},
                {"all_assertions_held", report.all_assertions_held}};
}

json to_json(const Theorem2Report& report) {
    json trials = json::array();
    for (const auto& t : report.trials) {
        json j = metrics_json(t.metrics);
        j["found"] = t.found;
        j["verified"] = t.verified;
        j["os_distance"] = t.os_distance;
        trials.push_back(std::move(j));
    }
    return json{{"experiment", "theorem2"},
                {"trials", trials},
                {"found_count", report.found_count},
                {"all_assertions_held", report.all_assertions_held}};
}

json to_json(const GfmTheoremReport& report) {
    json trials = json::array();
    for (const auto& t : report.trials) {
        json j = metrics_json(t.metrics);
        j["wae_achieved"] = t.wae_achieved;
        j["wae_holds"] = t.wae_holds;
        j["gfm_passes"] = t.gfm_passes;
        j["sigma"] = finite(t.sigma);
        j["bound"] = finite(t.bound);
        j["within_bound"] = t.within_bound;
        j["additive_adjustment"] = t.additive_adjustment;
        trials.push_back(std::move(j));
    }
    return json{{"experiment", "gfm_theorem"},
                {"trials", trials},
                {"breaches", report.breaches},
                {"all_assertions_held", report.all_assertions_held}};
}

json to_json(const ConflictReport& report) {
    json rows = json::array();
    for (const auto& m : report.rows) rows.push_back(metrics_json(m));
    return json{{"experiment", "conflict"},
                {"degenerate", report.degenerate},
                {"scenario_a",
                 json{{"skew_ifm", to_json(report.skew_ifm)},
                      {"skew_gfm", to_json(report.skew_gfm)},
                      {"sigma_ratio", finite(report.sigma_ratio)},
                      {"ifm_discriminates_more", report.ifm_discriminates_more}}},
                {"scenario_b",
                 json{{"eps", report.eps},
                      {"eps_prime", report.eps_prime},
                      {"ifm_violations", report.ifm_fairness.violations.size()},
                      {"gfm_violations", report.gfm_fairness.violations.size()},
                      {"gfm_unfair_ifm_fair", report.gfm_unfair_ifm_fair}}},
                {"rows", rows},
                {"all_assertions_held", report.all_assertions_held}};
}

std::vector<TrialMetrics> collect_metrics(const Theorem1Report& report) {
    std::vector<TrialMetrics> out;
    for (const auto& t : report.trials) out.push_back(t.metrics);
    return out;
}

std::vector<TrialMetrics> collect_metrics(const Theorem2Report& report) {
    std::vector<TrialMetrics> out;
    for (const auto& t : report.trials) out.push_back(t.metrics);
    return out;
}

std::vector<TrialMetrics> collect_metrics(const GfmTheoremReport& report) {
    std::vector<TrialMetrics> out;
    for (const auto& t : report.trials) out.push_back(t.metrics);
    return out;
}

std::vector<TrialMetrics> collect_metrics(const ConflictReport& report) { return report.rows; }

std::string metrics_csv(const std::vector<TrialMetrics>& rows) {
    std::string out = "trial,sigma_cs_os,sigma_os_ds,sigma_cs_ds,violations,bound,margin\n";
    char buf[256];
    for (const auto& m : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", m.trial,
                      finite(m.sigma_cs_os), finite(m.sigma_os_ds), finite(m.sigma_cs_ds),
                      m.violations, finite(m.bound), finite(m.margin));
        out += buf;
    }
    return out;
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace fairspace
