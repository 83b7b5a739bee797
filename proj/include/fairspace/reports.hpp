// JSON and CSV report serialization. Reports use the shared verdict schema
// {check, params, holds, achieved, witnesses[]} and are byte-deterministic
// for identical inputs (keys sorted, doubles shortest round-trip).
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fairspace/mechanisms.hpp"
#include "fairspace/transport.hpp"
#include "fairspace/worldgen.hpp"
#include "fairspace/worldviews.hpp"

namespace fairspace {

nlohmann::json to_json(const SkewReport& report);
nlohmann::json to_json(const CouplingVerdict& verdict);
nlohmann::json coupling_to_json(const Coupling& coupling);

nlohmann::json axiom_verdict_json(const std::string& check, const AxiomVerdict& verdict,
                                  const std::vector<std::string>& witness_names,
                                  nlohmann::json params);

nlohmann::json fairness_verdict_json(const FairnessVerdict& verdict,
                                     const GroupedMetricSpace& cs);

nlohmann::json skew_verdict_json(const std::string& check, const SkewVerdict& verdict);
nlohmann::json non_discrimination_json(const NonDiscriminationVerdict& verdict);
nlohmann::json mechanism_verdict_json(const std::string& check, const MechanismVerdict& verdict);
nlohmann::json violation_search_json(const ViolationSearchResult& result,
                                     const GroupedMetricSpace& os);

nlohmann::json to_json(const Theorem1Report& report);
nlohmann::json to_json(const Theorem2Report& report);
nlohmann::json to_json(const GfmTheoremReport& report);
nlohmann::json to_json(const ConflictReport& report);

std::vector<TrialMetrics> collect_metrics(const Theorem1Report& report);
std::vector<TrialMetrics> collect_metrics(const Theorem2Report& report);
std::vector<TrialMetrics> collect_metrics(const GfmTheoremReport& report);
std::vector<TrialMetrics> collect_metrics(const ConflictReport& report);

std::string metrics_csv(const std::vector<TrialMetrics>& rows);

// dump(2) with a trailing newline; the single serialization everybody uses.
std::string dump_report(const nlohmann::json& j);

}  // namespace fairspace
