// fairspace CLI: parse space files, run transformation metrics, axiom and
// discrimination checks, build mechanisms, and drive the synthetic
// experiments. Exit codes: 0 success / assertions held, 1 assertions
// violated, 2 usage or input error (machine-readable JSON on stderr).
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairspace/distortion.hpp"
#include "fairspace/group_geometry.hpp"
#include "fairspace/mechanisms.hpp"
#include "fairspace/reports.hpp"
#include "fairspace/space_io.hpp"
#include "fairspace/transport.hpp"
#include "fairspace/worldgen.hpp"
#include "fairspace/worldviews.hpp"

using namespace fairspace;
using nlohmann::json;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
    out << text;
}

void emit(const json& report, const std::string& out_path) {
    if (out_path.empty())
        std::cout << dump_report(report);
    else
        write_text(out_path, dump_report(report));
}

SmoothingMode parse_smoothing(const std::string& name) {
    if (name == "additive") return SmoothingMode::additive;
    if (name == "perturb") return SmoothingMode::perturb;
    throw Error(Errc::bad_spec, "smoothing must be 'additive' or 'perturb'");
}

std::vector<std::string> group_names(const GroupedMetricSpace& space) {
    std::vector<std::string> names;
    for (int g = 0; g < space.group_count(); ++g)
        names.push_back("group" + std::to_string(g + 1));
    return names;
}

void require_shared_individuals(const std::vector<GroupedMetricSpace>& spaces) {
    for (size_t i = 1; i < spaces.size(); ++i) {
        if (spaces[i].point_ids != spaces[0].point_ids)
            throw Error(Errc::id_mismatch, "'" + spaces[i].space_id +
                                               "' does not share point ids with '" +
                                               spaces[0].space_id + "'");
        if (spaces[i].group_of != spaces[0].group_of)
            throw Error(Errc::id_mismatch, "'" + spaces[i].space_id +
                                               "' does not share the group partition");
    }
}

json wasserstein_matrix_json(const GroupedMetricSpace& space) {
    auto gl = induce_group_space(space);
    size_t k = gl.group_count();
    std::vector<std::vector<double>> rows(k, std::vector<double>(k));
    for (size_t a = 0; a < k; ++a)
        for (size_t b = 0; b < k; ++b) rows[a][b] = gl.dist.at(a, b);
    return json{{"space", space.space_id}, {"groups", k}, {"matrix", rows}};
}

struct AnalyzeArgs {
    std::vector<std::string> files;
    std::vector<std::string> map_files;
    double eps = -1.0;        // negative = not declared
    double eps_prime = -1.0;
    double threshold = -1.0;
    double delta = 0.0;       // 0 = default smoothing radius
    std::string smoothing = "additive";
    uint64_t seed = 0;
    std::string worldview = "none";
    std::string out;
};

int cmd_analyze(const AnalyzeArgs& args) {
    std::vector<GroupedMetricSpace> spaces;
    for (const auto& f : args.files) spaces.push_back(parse_space_file(f));
    require_shared_individuals(spaces);
    SmoothingMode mode = parse_smoothing(args.smoothing);

    bool three = spaces.size() == 3;
    std::vector<std::string> roles =
        three ? std::vector<std::string>{"cs", "os", "ds"} : std::vector<std::string>{"a", "b"};

    json report;
    report["command"] = "analyze";
    report["params"] = json{{"smoothing", args.smoothing}, {"seed", args.seed}};
    if (args.eps >= 0) report["params"]["eps"] = args.eps;
    if (args.eps_prime >= 0) report["params"]["eps_prime"] = args.eps_prime;
    if (args.threshold >= 0) report["params"]["threshold"] = args.threshold;

    json spaces_json = json::array();
    json wmatrices = json::array();
    for (size_t i = 0; i < spaces.size(); ++i) {
        spaces_json.push_back(json{{"id", spaces[i].space_id},
                                   {"role", roles[i]},
                                   {"points", spaces[i].size()},
                                   {"groups", spaces[i].group_count()},
                                   {"diameter", spaces[i].diameter()}});
        wmatrices.push_back(wasserstein_matrix_json(spaces[i]));
    }
    report["spaces"] = spaces_json;
    report["wasserstein_matrices"] = wmatrices;

    json pairs = json::array();
    std::vector<SpaceMap> maps;
    for (size_t i = 0; i + 1 < spaces.size(); ++i) {
        const auto& from = spaces[i];
        const auto& to = spaces[i + 1];
        SpaceMap map = i < args.map_files.size()
                           ? make_map(from, to, parse_map_file(args.map_files[i]))
                           : identity_map(from);
        if (i >= args.map_files.size()) map.codomain_id = to.space_id;
        maps.push_back(map);

        json pj;
        pj["from"] = from.space_id;
        pj["to"] = to.space_id;

        auto dist_report = map_distortion(map, from, to);
        pj["distortion"] = json{{"rho", dist_report.rho},
                                {"witness", json{{"p", from.point_ids[dist_report.witness_p]},
                                                 {"q", from.point_ids[dist_report.witness_q]}}}};
        pj["gromov_wasserstein"] = gromov_wasserstein(from, to).value;

        double delta = args.delta > 0 ? args.delta : default_smoothing_delta(from, to);
        json checks = json::array();
        if (from.group_count() >= 2 && delta > 0) {
            pj["skew"] = to_json(group_skew(from, to, delta, mode, args.seed));
            if (args.threshold >= 0) {
                std::string check_name =
                    three ? (i == 0 ? "structural_bias" : "direct_discrimination")
                          : "structural_bias";
                checks.push_back(skew_verdict_json(
                    check_name,
                    check_structural_bias(from, to, args.threshold, delta, mode, args.seed)));
            }
        } else {
            pj["skew"] = nullptr;
        }
        if (args.eps >= 0) {
            const SpaceMap* given = i < args.map_files.size() ? &maps[i] : nullptr;
            try {
                checks.push_back(axiom_verdict_json(
                    "wysiwyg", check_wysiwyg(from, to, args.eps, given), from.point_ids,
                    json::object()));
            } catch (const Error& e) {
                checks.push_back(json{{"check", "wysiwyg"}, {"skipped", to_string(e.code())}});
            }
        }
        pj["checks"] = checks;
        pairs.push_back(std::move(pj));
    }
    report["pairs"] = pairs;

    if (args.eps >= 0) {
        json axioms = json::array();
        for (const auto& s : spaces) {
            if (s.group_count() < 2) continue;
            json params{{"space", s.space_id}};
            axioms.push_back(
                axiom_verdict_json("wae", check_wae(s, args.eps), group_names(s), params));
        }
        report["axioms"] = axioms;
    }

    if (args.eps >= 0 && args.eps_prime >= 0) {
        if (three) {
            SpaceMap composed = compose(maps[0], maps[1]);
            report["fairness"] =
                fairness_verdict_json(check_fairness(composed, spaces[0], spaces[2], args.eps,
                                                     args.eps_prime),
                                      spaces[0]);
            if (args.threshold >= 0 && spaces[0].group_count() >= 2) {
                double delta =
                    args.delta > 0 ? args.delta : default_smoothing_delta(spaces[0], spaces[2]);
                report["non_discrimination"] = non_discrimination_json(check_non_discrimination(
                    spaces[0], spaces[2], args.threshold, delta, mode, args.seed));
            }
        } else if (args.worldview == "wysiwyg") {
            report["fairness"] = fairness_verdict_json(
                check_fairness(maps[0], spaces[0], spaces[1], args.eps, args.eps_prime),
                spaces[0]);
        } else {
            throw Error(Errc::bad_spec,
                        "fairness on two spaces needs an explicit --worldview wysiwyg: without "
                        "a construct space the check has no declared footing");
        }
    }

    emit(report, args.out);
    return 0;
}

int cmd_skew(const std::vector<std::string>& files, double delta, const std::string& smoothing,
             uint64_t seed, double threshold, const std::string& out) {
    auto x = parse_space_file(files[0]);
    auto y = parse_space_file(files[1]);
    require_shared_individuals({x, y});
    double d = delta > 0 ? delta : default_smoothing_delta(x, y);
    auto skew = group_skew(x, y, d, parse_smoothing(smoothing), seed);
    json report{{"command", "skew"}, {"from", x.space_id}, {"to", y.space_id},
                {"skew", to_json(skew)}};
    if (threshold >= 0) {
        report["threshold"] = threshold;
        report["exceeds_threshold"] = skew.sigma > threshold;
    }
    emit(report, out);
    return 0;
}

int cmd_axioms(const std::vector<std::string>& files, double eps, const std::string& map_file,
               const std::string& out) {
    json report{{"command", "axioms"}, {"params", json{{"eps", eps}}}};
    auto first = parse_space_file(files[0]);
    json axioms = json::array();
    if (first.group_count() >= 2)
        axioms.push_back(axiom_verdict_json("wae", check_wae(first, eps), group_names(first),
                                            json{{"space", first.space_id}}));
    if (files.size() == 2) {
        auto second = parse_space_file(files[1]);
        SpaceMap map;
        const SpaceMap* given = nullptr;
        if (!map_file.empty()) {
            map = make_map(first, second, parse_map_file(map_file));
            given = &map;
        }
        axioms.push_back(axiom_verdict_json("wysiwyg", check_wysiwyg(first, second, eps, given),
                                            first.point_ids,
                                            json{{"from", first.space_id},
                                                 {"to", second.space_id}}));
    }
    report["axioms"] = axioms;
    emit(report, out);
    return 0;
}

int cmd_mechanism(const std::string& file, const std::string& kind, double eps,
                  const std::string& out) {
    auto os = parse_space_file(file);
    Mechanism mech;
    MechanismVerdict verdict;
    if (kind == "ifm") {
        mech = build_ifm(os);
        verdict = verify_ifm(mech.map, os, mech.decision_space, eps);
    } else if (kind == "gfm") {
        mech = build_gfm(os);
        verdict = verify_gfm(mech.map, os, mech.decision_space, eps);
    } else {
        throw Error(Errc::bad_spec, "mechanism kind must be 'ifm' or 'gfm'");
    }

    json assignment = json::object();
    for (size_t p = 0; p < os.size(); ++p)
        assignment[os.point_ids[p]] = mech.decision_space.point_ids[mech.map.image[p]];

    json report{{"command", "mechanism"},
                {"kind", kind},
                {"observed", os.space_id},
                {"decision_space", space_to_json(mech.decision_space)},
                {"assignment", assignment},
                {"verdict", mechanism_verdict_json(kind == "ifm" ? "verify_ifm" : "verify_gfm",
                                                   verdict)}};
    emit(report, out);
    return verdict.passes ? 0 : 1;
}

struct SimulateArgs {
    std::string experiment;
    std::string config_file;
    size_t trials = 100;
    uint64_t seed = 0;
    double eps = -1.0;
    double eps_prime = -1.0;
    double delta = -1.0;
    double delta_prime = -1.0;
    size_t n = 50;
    double shift = 4.0;
    std::vector<double> deltas;        // theorem1 grid; empty = default
    std::vector<double> delta_primes;  // theorem1 grid; empty = default
    size_t n_per_group = 0;            // 0 = experiment default
    int k = 0;                         // 0 = experiment default
    double separation = -1.0;
    double spread = -1.0;
    double wys_separation = -1.0;
    double delta_obs = -1.0;
    std::string out;
    std::string format = "json";
};

// Experiment config file: a flat JSON object; explicit CLI flags win over
// file values, unknown keys are rejected.
void apply_config_file(SimulateArgs& args, const CLI::App& cmd) {
    std::ifstream in(args.config_file);
    if (!in) throw Error(Errc::io_error, "cannot open '" + args.config_file + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(Errc::schema_error,
                    "malformed JSON in '" + args.config_file + "': " + e.what());
    }
    if (!j.is_object()) throw Error(Errc::schema_error, "config must be a JSON object");

    auto overridden = [&](const std::string& flag) {
        return cmd.count("--" + flag) > 0;
    };
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "trials") {
                if (!overridden("trials")) args.trials = value.get<size_t>();
            } else if (key == "seed") {
                if (!overridden("seed")) args.seed = value.get<uint64_t>();
            } else if (key == "eps") {
                if (!overridden("eps")) args.eps = value.get<double>();
            } else if (key == "eps_prime") {
                if (!overridden("eps-prime")) args.eps_prime = value.get<double>();
            } else if (key == "delta") {
                if (!overridden("delta")) args.delta = value.get<double>();
            } else if (key == "delta_prime") {
                if (!overridden("delta-prime")) args.delta_prime = value.get<double>();
            } else if (key == "n") {
                if (!overridden("n")) args.n = value.get<size_t>();
            } else if (key == "shift") {
                if (!overridden("shift")) args.shift = value.get<double>();
            } else if (key == "deltas") {
                args.deltas = value.get<std::vector<double>>();
            } else if (key == "delta_primes") {
                args.delta_primes = value.get<std::vector<double>>();
            } else if (key == "n_per_group") {
                args.n_per_group = value.get<size_t>();
            } else if (key == "k") {
                args.k = value.get<int>();
            } else if (key == "separation") {
                args.separation = value.get<double>();
            } else if (key == "spread") {
                args.spread = value.get<double>();
            } else if (key == "wys_separation") {
                args.wys_separation = value.get<double>();
            } else if (key == "delta_obs") {
                args.delta_obs = value.get<double>();
            } else {
                throw Error(Errc::schema_error, "unknown config key '" + key + "'");
            }
        } catch (const json::exception&) {
            throw Error(Errc::schema_error, "config key '" + key + "' has the wrong type");
        }
    }
}

int cmd_simulate(const SimulateArgs& args) {
    json report;
    std::vector<TrialMetrics> rows;
    bool held = false;

    if (args.experiment == "theorem1") {
        Theorem1Config config;
        config.trials = args.trials;
        config.master_seed = args.seed;
        if (args.eps >= 0) config.eps = args.eps;
        config.base.n_per_group = 10;
        config.base.k = 2;
        config.base.group_separation = 1.0;
        config.base.within_spread = 0.4;
        auto r = run_theorem1_experiment(config);
        report = to_json(r);
        rows = collect_metrics(r);
        held = r.all_assertions_held;
    } else if (args.experiment == "theorem2") {
        Theorem2Config config;
        config.trials = args.trials;
        config.master_seed = args.seed;
        config.n = args.n;
        if (args.delta >= 0) config.delta = args.delta;
        if (args.delta_prime >= 0) config.delta_prime = args.delta_prime;
        auto r = run_theorem2_experiment(config);
        report = to_json(r);
        rows = collect_metrics(r);
        held = r.all_assertions_held;
    } else if (args.experiment == "gfm_theorem") {
        GfmTheoremConfig config;
        config.trials = args.trials;
        config.master_seed = args.seed;
        config.eps = args.eps >= 0 ? args.eps : 1.5;
        config.eps_prime = args.eps_prime >= 0 ? args.eps_prime : 1e-9;
        config.delta = args.delta >= 0 ? args.delta : 0.0;
        config.bias_shift = args.shift;
        config.base.n_per_group = 10;
        config.base.k = 2;
        config.base.group_separation = 0.0;
        config.base.within_spread = 1.0;
        auto r = run_gfm_theorem_experiment(config);
        report = to_json(r);
        rows = collect_metrics(r);
        held = r.all_assertions_held;
    } else if (args.experiment == "conflict") {
        ConflictConfig config;
        config.seed = args.seed;
        if (args.delta >= 0) config.delta = args.delta;
        if (args.eps >= 0) config.eps = args.eps;
        auto r = run_conflict_experiment(config);
        report = to_json(r);
        rows = collect_metrics(r);
        held = r.all_assertions_held;
    } else {
        throw Error(Errc::bad_experiment, "unknown experiment '" + args.experiment + "'");
    }

    if (args.out.empty()) {
        if (args.format == "csv")
            std::cout << metrics_csv(rows);
        else
            std::cout << dump_report(report);
    } else {
        write_text(args.out + ".json", dump_report(report));
        write_text(args.out + ".csv", metrics_csv(rows));
    }
    return held ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transformation metrics and fairness checks for finite measured metric spaces"};
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand(
        "analyze", "pairwise metrics, skew and checkers across two or three spaces");
    analyze_cmd->add_option("files", analyze.files, "space files (CS OS [DS])")
        ->expected(2, 3)
        ->required();
    analyze_cmd->add_option("--map", analyze.map_files, "map file per adjacent pair");
    analyze_cmd->add_option("--eps", analyze.eps, "axiom / fairness tolerance");
    analyze_cmd->add_option("--eps-prime", analyze.eps_prime, "decision-side fairness tolerance");
    analyze_cmd->add_option("--threshold", analyze.threshold, "skew threshold t");
    analyze_cmd->add_option("--delta", analyze.delta, "smoothing radius (default 1e-3 x diameter)");
    analyze_cmd->add_option("--smoothing", analyze.smoothing, "additive|perturb")
        ->check(CLI::IsMember({"additive", "perturb"}));
    analyze_cmd->add_option("--seed", analyze.seed, "seed for perturb smoothing");
    analyze_cmd->add_option("--worldview", analyze.worldview, "declared worldview for 2-space fairness")
        ->check(CLI::IsMember({"none", "wysiwyg"}));
    analyze_cmd->add_option("--out", analyze.out, "report path (default stdout)");

    std::vector<std::string> skew_files;
    double skew_delta = 0.0, skew_threshold = -1.0;
    std::string skew_smoothing = "additive", skew_out;
    uint64_t skew_seed = 0;
    auto* skew_cmd = app.add_subcommand("skew", "group-skew report between two spaces");
    skew_cmd->add_option("files", skew_files, "two space files")->expected(2)->required();
    skew_cmd->add_option("--delta", skew_delta, "smoothing radius (default 1e-3 x diameter)");
    skew_cmd->add_option("--smoothing", skew_smoothing, "additive|perturb")
        ->check(CLI::IsMember({"additive", "perturb"}));
    skew_cmd->add_option("--seed", skew_seed, "seed for perturb smoothing");
    skew_cmd->add_option("--threshold", skew_threshold, "flag when sigma exceeds this");
    skew_cmd->add_option("--out", skew_out, "report path (default stdout)");

    std::vector<std::string> axiom_files;
    double axiom_eps = 0.0;
    std::string axiom_map, axiom_out;
    auto* axioms_cmd = app.add_subcommand("axioms", "equal-groups / faithful-observation checks");
    axioms_cmd->add_option("files", axiom_files, "one or two space files")
        ->expected(1, 2)
        ->required();
    axioms_cmd->add_option("--eps", axiom_eps, "axiom tolerance")->required();
    axioms_cmd->add_option("--map", axiom_map, "map file for the two-space check");
    axioms_cmd->add_option("--out", axiom_out, "report path (default stdout)");

    std::string mech_file, mech_kind, mech_out;
    double mech_eps = 0.0;
    auto* mech_cmd = app.add_subcommand("mechanism", "build and verify a decision mechanism");
    mech_cmd->add_option("file", mech_file, "observed-space file")->required();
    mech_cmd->add_option("--kind", mech_kind, "ifm|gfm")
        ->required()
        ->check(CLI::IsMember({"ifm", "gfm"}));
    mech_cmd->add_option("--eps", mech_eps, "verification tolerance")->required();
    mech_cmd->add_option("--out", mech_out, "report path (default stdout)");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "run a named experiment");
    sim_cmd->add_option("experiment", sim.experiment,
                        "theorem1|theorem2|gfm_theorem|conflict")
        ->required();
    sim_cmd->add_option("--trials", sim.trials, "trial count");
    sim_cmd->add_option("--seed", sim.seed, "master seed");
    sim_cmd->add_option("--eps", sim.eps, "experiment eps");
    sim_cmd->add_option("--eps-prime", sim.eps_prime, "experiment eps'");
    sim_cmd->add_option("--delta", sim.delta, "experiment delta");
    sim_cmd->add_option("--delta-prime", sim.delta_prime, "experiment delta'");
    sim_cmd->add_option("--n", sim.n, "observed points (theorem2)");
    sim_cmd->add_option("--shift", sim.shift, "bias shift (gfm_theorem)");
    sim_cmd->add_option("--out", sim.out, "report base path; writes <out>.json and <out>.csv");
    sim_cmd->add_option("--format", sim.format, "stdout format when --out is unset")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(analyze_cmd)) return cmd_analyze(analyze);
        if (app.got_subcommand(skew_cmd))
            return cmd_skew(skew_files, skew_delta, skew_smoothing, skew_seed, skew_threshold,
                            skew_out);
        if (app.got_subcommand(axioms_cmd))
            return cmd_axioms(axiom_files, axiom_eps, axiom_map, axiom_out);
        if (app.got_subcommand(mech_cmd)) return cmd_mechanism(mech_file, mech_kind, mech_eps, mech_out);
        if (app.got_subcommand(sim_cmd)) return cmd_simulate(sim);
    } catch (const Error& e) {
        json err{{"error", to_string(e.code())}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err{{"error", "INTERNAL"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 2;
}
