#include "fairspace/worldgen.hpp"

#include <algorithm>
#include <cmath>

#include "fairspace/group_geometry.hpp"
#include "fairspace/rng.hpp"
#include "fairspace/transport.hpp"

namespace fairspace {

void validate_spec(const WorldSpec& spec) {
    if (spec.n_per_group < 2) throw Error(Errc::bad_spec, "n_per_group must be >= 2");
    if (spec.k < 1) throw Error(Errc::bad_spec, "group count must be >= 1");
    if (spec.dim < 1) throw Error(Errc::bad_spec, "embedding dimension must be >= 1");
    if (spec.group_separation < 0.0 || spec.within_spread < 0.0)
        throw Error(Errc::bad_spec, "scale parameters must be >= 0");

    if (const auto* biased = std::get_if<BiasedModel>(&spec.observation_model)) {
        if (biased->shifts.size() != static_cast<size_t>(spec.k))
            throw Error(Errc::model_mismatch, "biased model needs one shift per group");
        for (const auto& s : biased->shifts)
            if (s.size() != spec.dim)
                throw Error(Errc::model_mismatch, "shift dimension does not match the space");
    } else if (const auto* proxy = std::get_if<NoisyProxyModel>(&spec.observation_model)) {
        if (proxy->mixing.size() != spec.dim)
            throw Error(Errc::model_mismatch, "mixing matrix must be dim x dim");
        for (const auto& row : proxy->mixing)
            if (row.size() != spec.dim)
                throw Error(Errc::model_mismatch, "mixing matrix must be dim x dim");
        if (proxy->noise < 0.0) throw Error(Errc::model_mismatch, "noise must be >= 0");
    } else if (const auto* faithful = std::get_if<FaithfulModel>(&spec.observation_model)) {
        if (faithful->delta_obs < 0.0) throw Error(Errc::model_mismatch, "delta_obs must be >= 0");
    }
}

GroupedMetricSpace gen_construct_space(const WorldSpec& spec) {
    validate_spec(spec);
    Rng rng(spec.seed);

    size_t n = spec.n_per_group * static_cast<size_t>(spec.k);
    size_t width = std::to_string(n > 0 ? n - 1 : 0).size();

    std::vector<std::string> ids;
    std::vector<int> groups;
    Embedding emb;
    ids.reserve(n);
    groups.reserve(n);
    emb.reserve(n);

    for (int g = 0; g < spec.k; ++g) {
        for (size_t i = 0; i < spec.n_per_group; ++i) {
            std::string num = std::to_string(ids.size());
            ids.push_back("p" + std::string(width - num.size(), '0') + num);
            groups.push_back(g);

            // Gaussian offset clipped at 3x the spread.
            std::vector<double> point(spec.dim, 0.0);
            double norm2 = 0.0;
            for (size_t c = 0; c < spec.dim; ++c) {
                point[c] = spec.within_spread * rng.normal();
                norm2 += point[c] * point[c];
            }
            double limit = 3.0 * spec.within_spread;
            double norm = std::sqrt(norm2);
            if (norm > limit && norm > 0.0)
                for (auto& v : point) v *= limit / norm;
            point[0] += static_cast<double>(g) * spec.group_separation;
            emb.push_back(std::move(point));
        }
    }
    return make_space_from_embedding("cs", std::move(ids), std::move(emb), uniform_measure(n),
                                     std::move(groups));
}

std::pair<GroupedMetricSpace, SpaceMap> observe(const GroupedMetricSpace& cs,
                                                const ObservationModel& model, uint64_t seed) {
    if (!cs.embedding) throw Error(Errc::no_embedding, "observation needs construct coordinates");
    size_t dim = cs.embedding->empty() ? 0 : (*cs.embedding)[0].size();
    Rng rng(seed);
    Embedding out = *cs.embedding;

    if (const auto* faithful = std::get_if<FaithfulModel>(&model)) {
        if (faithful->delta_obs < 0.0) throw Error(Errc::model_mismatch, "delta_obs must be >= 0");
        for (auto& row : out) {
            auto off = rng.in_ball(dim, faithful->delta_obs);
            for (size_t c = 0; c < dim; ++c) row[c] += off[c];
        }
    } else if (const auto* biased = std::get_if<BiasedModel>(&model)) {
        if (biased->shifts.size() != static_cast<size_t>(cs.group_count()))
            throw Error(Errc::model_mismatch, "biased model needs one shift per group");
        for (const auto& s : biased->shifts)
            if (s.size() != dim)
                throw Error(Errc::model_mismatch, "shift dimension does not match the space");
        for (size_t p = 0; p < out.size(); ++p) {
            const auto& shift = biased->shifts[static_cast<size_t>(cs.group_of[p])];
            for (size_t c = 0; c < dim; ++c) out[p][c] += shift[c];
        }
    } else {
        const auto& proxy = std::get<NoisyProxyModel>(model);
        if (proxy.mixing.size() != dim)
            throw Error(Errc::model_mismatch, "mixing matrix must be dim x dim");
        for (const auto& row : proxy.mixing)
            if (row.size() != dim)
                throw Error(Errc::model_mismatch, "mixing matrix must be dim x dim");
        for (auto& row : out) {
            std::vector<double> mixed(dim, 0.0);
            for (size_t r = 0; r < dim; ++r)
                for (size_t c = 0; c < dim; ++c) mixed[r] += proxy.mixing[r][c] * row[c];
            auto off = rng.in_ball(dim, proxy.noise);
            for (size_t c = 0; c < dim; ++c) mixed[c] += off[c];
            row = std::move(mixed);
        }
    }

    GroupedMetricSpace os = make_space_from_embedding("os", cs.point_ids, std::move(out),
                                                      cs.measure, cs.group_of);
    SpaceMap g = identity_map(cs);
    g.codomain_id = os.space_id;
    return {std::move(os), std::move(g)};
}

PipelineWorld make_pipeline(const WorldSpec& spec, MechanismKind kind) {
    PipelineWorld world;
    world.spec = spec;
    world.cs = gen_construct_space(spec);
    auto [os, g] = observe(world.cs, spec.observation_model, Rng::derive(spec.seed, 1));
    world.os = std::move(os);
    world.g = std::move(g);
    world.mechanism = kind == MechanismKind::ifm ? build_ifm(world.os) : build_gfm(world.os);
    world.ds = decision_space_per_individual(world.os, world.mechanism);
    world.f = identity_map(world.os);
    world.f.codomain_id = world.ds.space_id;
    world.composed = compose(world.g, world.f);
    return world;
}

namespace {

// Additive-mode skew with the documented default radius; degenerate
// zero-diameter pairs fall back to a tiny positive radius, single-group
// spaces have nothing to skew.
double sigma_between(const GroupedMetricSpace& a, const GroupedMetricSpace& b) {
    if (a.group_count() < 2 || b.group_count() < 2) return 1.0;
    double delta = default_smoothing_delta(a, b);
    if (!(delta > 0.0)) delta = 1e-9;
    return group_skew(a, b, delta, SmoothingMode::additive, 0).sigma;
}

// Worst decision distance over construct pairs within eps (0 when no pair
// qualifies); eps_prime minus this is the fairness margin.
double worst_close_pair_decision_distance(const SpaceMap& composed, const GroupedMetricSpace& cs,
                                          const GroupedMetricSpace& ds, double eps) {
    double worst = 0.0;
    for (size_t p = 0; p < cs.size(); ++p)
        for (size_t q = p + 1; q < cs.size(); ++q)
            if (cs.dist.at(p, q) <= eps)
                worst = std::max(worst, ds.dist.at(composed.image[p], composed.image[q]));
    return worst;
}

}  // namespace

Theorem1Report run_theorem1_experiment(const Theorem1Config& config) {
    if (config.deltas.empty() || config.delta_primes.empty())
        throw Error(Errc::bad_grid, "parameter grids must be non-empty");
    if (!std::holds_alternative<FaithfulModel>(config.base.observation_model))
        throw Error(Errc::model_mismatch, "faithful observation only");

    Theorem1Report report;
    report.trials.resize(config.trials);
    size_t grid = config.deltas.size() * config.delta_primes.size();

#pragma omp parallel for schedule(dynamic)
    for (long long tt = 0; tt < static_cast<long long>(config.trials); ++tt) {
        size_t t = static_cast<size_t>(tt);
        uint64_t seed_t = Rng::derive(config.master_seed, t);
        size_t combo = t % grid;
        double delta = config.deltas[combo / config.delta_primes.size()];
        double delta_prime = config.delta_primes[combo % config.delta_primes.size()];

        WorldSpec ws = config.base;
        ws.seed = seed_t;
        // Per-point shift of delta/2 keeps the observation distortion <= delta.
        ws.observation_model = FaithfulModel{delta / 2.0};

        GroupedMetricSpace cs = gen_construct_space(ws);
        auto [os, g] = observe(cs, ws.observation_model, Rng::derive(seed_t, 1));

        Mechanism mech = build_ifm(os);
        // Jitter the score copy to realize a mechanism distortion <= delta'.
        mech.decision_space = perturb(mech.decision_space, delta_prime / 2.0,
                                      Rng::derive(seed_t, 2));
        GroupedMetricSpace ds = decision_space_per_individual(os, mech);

        SpaceMap f = identity_map(os);
        f.codomain_id = ds.space_id;
        SpaceMap composed = compose(g, f);

        double eps_prime = config.eps + delta + delta_prime;
        FairnessVerdict fairness = check_fairness(composed, cs, ds, config.eps, eps_prime);

        Theorem1Trial& trial = report.trials[t];
        trial.delta = delta;
        trial.delta_prime = delta_prime;
        trial.eps = config.eps;
        trial.eps_prime = eps_prime;
        trial.g_distortion = map_distortion(g, cs, os).rho;
        trial.f_distortion = map_distortion(mech.map, os, ds).rho;
        trial.violation_count = fairness.violations.size();

        trial.metrics.trial = t;
        trial.metrics.sigma_cs_os = sigma_between(cs, os);
        trial.metrics.sigma_os_ds = sigma_between(os, ds);
        trial.metrics.sigma_cs_ds = sigma_between(cs, ds);
        trial.metrics.violations = static_cast<double>(trial.violation_count);
        trial.metrics.bound = eps_prime;
        trial.metrics.margin =
            eps_prime - worst_close_pair_decision_distance(composed, cs, ds, config.eps);
    }

    for (const auto& trial : report.trials) report.total_violations += trial.violation_count;
    report.all_assertions_held = report.total_violations == 0;
    return report;
}

Theorem2Report run_theorem2_experiment(const Theorem2Config& config) {
    if (config.n < 2) throw Error(Errc::bad_spec, "need at least 2 observed points");
    if (!(config.delta < 1.0) || !(config.delta_prime < 1.0))
        throw Error(Errc::bad_spec, "delta and delta_prime must be < 1");

    Theorem2Report report;
    report.trials.resize(config.trials);

#pragma omp parallel for schedule(dynamic)
    for (long long tt = 0; tt < static_cast<long long>(config.trials); ++tt) {
        size_t t = static_cast<size_t>(tt);
        uint64_t seed_t = Rng::derive(config.master_seed, t);

        // Dense 1-D observed space: diameter <= delta * (n - 1), so some pair
        // sits within delta of its neighbor by pigeonhole.
        size_t per = std::max<size_t>(1, config.n / 2);
        size_t n = 2 * per;
        WorldSpec ws;
        ws.n_per_group = per;
        ws.k = 2;
        ws.dim = 1;
        ws.group_separation = 0.0;
        ws.within_spread = config.delta * static_cast<double>(n - 1) / 6.0;
        ws.seed = seed_t;
        ws.observation_model = FaithfulModel{0.0};

        GroupedMetricSpace cs = gen_construct_space(ws);
        auto [os, g] = observe(cs, ws.observation_model, Rng::derive(seed_t, 1));

        // Rich injective mechanism: a random bijection onto n decision labels
        // carrying the unit discrete metric.
        Matrix unit = Matrix::square(n, 1.0);
        for (size_t i = 0; i < n; ++i) unit.at(i, i) = 0.0;
        std::vector<std::string> label_ids(n);
        for (size_t i = 0; i < n; ++i) label_ids[i] = "d" + std::to_string(i);
        GroupedMetricSpace labels = make_space("ds-labels", std::move(label_ids), std::move(unit),
                                               uniform_measure(n), std::vector<int>(n, 0));

        Rng mech_rng(Rng::derive(seed_t, 7));
        Mechanism mech;
        mech.kind = MechanismKind::ifm;
        mech.decision_space = labels;
        mech.map.domain_id = os.space_id;
        mech.map.codomain_id = labels.space_id;
        mech.map.image = mech_rng.permutation(n);

        ViolationSearchResult found = find_fairness_violation(
            mech.map, os, mech.decision_space, config.delta, config.delta_prime, config.eps);

        Theorem2Trial& trial = report.trials[t];
        trial.found = found.found;
        trial.p = found.p;
        trial.q = found.q;
        trial.os_distance = found.os_distance;
        trial.verified = found.found && os.dist.at(found.p, found.q) <= config.delta &&
                         mech.map.image[found.p] != mech.map.image[found.q];

        GroupedMetricSpace ds = decision_space_per_individual(os, mech);
        trial.metrics.trial = t;
        trial.metrics.sigma_cs_os = sigma_between(cs, os);
        trial.metrics.sigma_os_ds = sigma_between(os, ds);
        trial.metrics.sigma_cs_ds = sigma_between(cs, ds);
        trial.metrics.violations = found.found ? 1.0 : 0.0;
        trial.metrics.bound = config.delta;
        trial.metrics.margin = found.found ? config.delta - found.os_distance : 0.0;
    }

    for (const auto& trial : report.trials)
        if (trial.found && trial.verified) report.found_count++;
    report.all_assertions_held = report.found_count == config.trials;
    return report;
}

GfmTheoremReport run_gfm_theorem_experiment(const GfmTheoremConfig& config) {
    GfmTheoremReport report;
    report.trials.resize(config.trials);

#pragma omp parallel for schedule(dynamic)
    for (long long tt = 0; tt < static_cast<long long>(config.trials); ++tt) {
        size_t t = static_cast<size_t>(tt);
        uint64_t seed_t = Rng::derive(config.master_seed, t);

        WorldSpec ws = config.base;
        ws.seed = seed_t;
        ws.dim = 1;
        BiasedModel biased;
        for (int g = 0; g < ws.k; ++g)
            biased.shifts.push_back({static_cast<double>(g) * config.bias_shift});
        ws.observation_model = biased;

        GroupedMetricSpace cs = gen_construct_space(ws);
        AxiomVerdict wae = check_wae(cs, config.eps);

        auto [os, g] = observe(cs, ws.observation_model, Rng::derive(seed_t, 1));
        Mechanism mech = build_gfm(os);
        GroupedMetricSpace ds = decision_space_per_individual(os, mech);
        MechanismVerdict gfm = verify_gfm(mech.map, os, mech.decision_space, config.eps_prime);

        double delta = config.delta;
        if (!(delta > 0.0)) delta = std::max(1e-9, default_smoothing_delta(cs, ds));
        SkewReport skew = group_skew(cs, ds, delta, SmoothingMode::additive, 0);

        GfmTheoremTrial& trial = report.trials[t];
        trial.wae_achieved = wae.achieved_value;
        trial.wae_holds = wae.holds;
        trial.gfm_passes = gfm.passes;
        trial.sigma = skew.sigma;
        double cap = std::max(config.eps, config.eps_prime);
        if (cap > 0.0) {
            trial.bound = cap / delta;
        } else {
            // Degenerate cap: with additive smoothing the ratio can still
            // reach (0 + delta) / (rho_w + delta) <= 1.
            trial.bound = 1.0;
            trial.additive_adjustment = true;
        }
        trial.within_bound = trial.sigma <= trial.bound;

        trial.metrics.trial = t;
        trial.metrics.sigma_cs_os = sigma_between(cs, os);
        trial.metrics.sigma_os_ds = sigma_between(os, ds);
        trial.metrics.sigma_cs_ds = trial.sigma;
        trial.metrics.violations = trial.within_bound ? 0.0 : 1.0;
        trial.metrics.bound = trial.bound;
        trial.metrics.margin = trial.bound - trial.sigma;
    }

    for (const auto& trial : report.trials)
        if (!(trial.wae_holds && trial.gfm_passes && trial.within_bound)) report.breaches++;
    report.all_assertions_held = report.breaches == 0;
    return report;
}

ConflictReport run_conflict_experiment(const ConflictConfig& config) {
    ConflictReport report;
    report.degenerate = config.separation == 0.0 && config.wys_separation == 0.0;

    // Scenario (a): structural bias. Biased observation pushes separated
    // groups further apart while keeping each group rigid.
    {
        WorldSpec ws;
        ws.n_per_group = config.n_per_group;
        ws.k = 2;
        ws.dim = 1;
        ws.group_separation = config.separation;
        ws.within_spread = config.within_spread;
        ws.seed = Rng::derive(config.seed, 10);
        ws.observation_model = BiasedModel{{{0.0}, {config.shift}}};

        PipelineWorld ifm = make_pipeline(ws, MechanismKind::ifm);
        PipelineWorld gfm = make_pipeline(ws, MechanismKind::gfm);

        double delta = config.delta;
        if (!(delta > 0.0))
            delta = std::max({1e-9, default_smoothing_delta(ifm.cs, ifm.ds),
                              default_smoothing_delta(gfm.cs, gfm.ds)});
        report.skew_ifm = group_skew(ifm.cs, ifm.ds, delta, SmoothingMode::additive, 0);
        report.skew_gfm = group_skew(gfm.cs, gfm.ds, delta, SmoothingMode::additive, 0);
        report.sigma_ratio = report.skew_gfm.sigma > 0.0
                                 ? report.skew_ifm.sigma / report.skew_gfm.sigma
                                 : std::numeric_limits<double>::infinity();
        report.ifm_discriminates_more = report.skew_ifm.sigma > report.skew_gfm.sigma;

        auto row = [&](size_t idx, const PipelineWorld& world, const SkewReport& skew) {
            TrialMetrics m;
            m.trial = idx;
            m.sigma_cs_os = sigma_between(world.cs, world.os);
            m.sigma_os_ds = sigma_between(world.os, world.ds);
            m.sigma_cs_ds = skew.sigma;
            m.bound = 1.0;
            m.margin = report.sigma_ratio - 1.0;
            return m;
        };
        report.rows.push_back(row(0, ifm, report.skew_ifm));
        report.rows.push_back(row(1, gfm, report.skew_gfm));
    }

    // Scenario (b): faithful observation of separated groups. The group
    // mechanism interleaves quantiles across the gap and certifies a close
    // construct pair mapped far apart; the score copy cannot.
    {
        WorldSpec ws;
        ws.n_per_group = config.n_per_group;
        ws.k = 2;
        ws.dim = 1;
        ws.group_separation = config.wys_separation;
        ws.within_spread = config.within_spread;
        ws.seed = Rng::derive(config.seed, 20);
        ws.observation_model = FaithfulModel{config.delta_obs};

        PipelineWorld ifm = make_pipeline(ws, MechanismKind::ifm);
        PipelineWorld gfm = make_pipeline(ws, MechanismKind::gfm);

        report.eps = config.eps;
        // Per-point shifts of delta_obs move any pair distance by at most
        // 2 * delta_obs; an exact score copy adds nothing.
        report.eps_prime = config.eps + 2.0 * config.delta_obs;
        report.ifm_fairness =
            check_fairness(ifm.composed, ifm.cs, ifm.ds, report.eps, report.eps_prime);
        report.gfm_fairness =
            check_fairness(gfm.composed, gfm.cs, gfm.ds, report.eps, report.eps_prime);
        report.gfm_unfair_ifm_fair =
            !report.gfm_fairness.fair && report.ifm_fairness.fair;

        auto row = [&](size_t idx, const PipelineWorld& world, const FairnessVerdict& verdict) {
            TrialMetrics m;
            m.trial = idx;
            m.sigma_cs_os = sigma_between(world.cs, world.os);
            m.sigma_os_ds = sigma_between(world.os, world.ds);
            m.sigma_cs_ds = sigma_between(world.cs, world.ds);
            m.violations = static_cast<double>(verdict.violations.size());
            m.bound = report.eps_prime;
            m.margin = report.eps_prime - worst_close_pair_decision_distance(
                                              world.composed, world.cs, world.ds, report.eps);
            return m;
        };
        report.rows.push_back(row(2, ifm, report.ifm_fairness));
        report.rows.push_back(row(3, gfm, report.gfm_fairness));
    }

    report.all_assertions_held =
        report.degenerate ||
        (report.ifm_discriminates_more && report.gfm_unfair_ifm_fair);
    return report;
}

}  // namespace fairspace
