#include "fairspace/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fairspace/transport.hpp"

namespace fairspace {

bool is_rich(const SpaceMap& f, const GroupedMetricSpace& ds) {
    return f.rich(ds.size());
}

MechanismVerdict verify_ifm(const SpaceMap& f, const GroupedMetricSpace& os,
                            const GroupedMetricSpace& ds, double eps) {
    MechanismVerdict verdict;
    verdict.epsilon = eps;
    verdict.rich = is_rich(f, ds);
    verdict.achieved = map_distortion(f, os, ds).rho;
    verdict.passes = verdict.rich && verdict.achieved <= eps;
    return verdict;
}

namespace {

// Conditional mass of each decision label under one group's image.
std::map<size_t, double> image_distribution(const SpaceMap& f, const GroupedMetricSpace& os,
                                            int group) {
    std::map<size_t, double> dist;
    double mass = 0.0;
    for (size_t p = 0; p < os.size(); ++p)
        if (os.group_of[p] == group) {
            dist[f.image[p]] += os.measure[p];
            mass += os.measure[p];
        }
    for (auto& [label, m] : dist) m = mass > 0 ? m / mass : 0.0;
    return dist;
}

double image_group_wasserstein(const GroupedMetricSpace& ds,
                               const std::map<size_t, double>& a,
                               const std::map<size_t, double>& b) {
    std::vector<size_t> pa, pb;
    std::vector<double> mua, mub;
    for (const auto& [label, m] : a) {
        pa.push_back(label);
        mua.push_back(m);
    }
    for (const auto& [label, m] : b) {
        pb.push_back(label);
        mub.push_back(m);
    }
    Matrix cost(pa.size(), pb.size());
    for (size_t i = 0; i < pa.size(); ++i)
        for (size_t j = 0; j < pb.size(); ++j) cost.at(i, j) = ds.dist.at(pa[i], pb[j]);
    return wasserstein(cost, mua, mub).value;
}

}  // namespace

MechanismVerdict verify_gfm(const SpaceMap& f, const GroupedMetricSpace& os,
                            const GroupedMetricSpace& ds, double eps) {
    MechanismVerdict verdict;
    verdict.epsilon = eps;
    verdict.rich = is_rich(f, ds);

    int k = os.group_count();
    std::vector<std::map<size_t, double>> images(static_cast<size_t>(k));
    for (int g = 0; g < k; ++g) images[static_cast<size_t>(g)] = image_distribution(f, os, g);

    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            verdict.achieved =
                std::max(verdict.achieved,
                         image_group_wasserstein(ds, images[static_cast<size_t>(i)],
                                                 images[static_cast<size_t>(j)]));
    verdict.passes = verdict.rich && verdict.achieved <= eps;
    return verdict;
}

Mechanism build_ifm(const GroupedMetricSpace& os) {
    if (!os.embedding)
        throw Error(Errc::no_embedding, "score copy needs an embedding on the observed space");

    Mechanism m;
    m.kind = MechanismKind::ifm;
    m.decision_space = os;
    m.decision_space.space_id = os.space_id + ":ifm";
    m.map = identity_map(os);
    m.map.codomain_id = m.decision_space.space_id;
    return m;
}

namespace {

bool uniform_equal_groups(const GroupedMetricSpace& os) {
    int k = os.group_count();
    size_t first = os.group_members(0).size();
    for (int g = 1; g < k; ++g)
        if (os.group_members(g).size() != first) return false;
    double expect = 1.0 / static_cast<double>(os.size());
    for (double m : os.measure)
        if (std::abs(m - expect) > 1e-12) return false;
    return true;
}

double score_of(const GroupedMetricSpace& os, size_t p) { return (*os.embedding)[p][0]; }

}  // namespace

double gfm_epsilon_bound(const GroupedMetricSpace& os) {
    if (uniform_equal_groups(os)) return 1e-9;
    double max_cond = 0.0;
    for (int g = 0; g < os.group_count(); ++g) {
        double mass = os.group_mass(g);
        for (size_t p : os.group_members(g))
            if (mass > 0) max_cond = std::max(max_cond, os.measure[p] / mass);
    }
    return 2.0 * os.diameter() * max_cond;
}

Mechanism build_gfm(const GroupedMetricSpace& os) {
    if (!os.embedding || os.embedding->empty() || (*os.embedding)[0].size() != 1)
        throw Error(Errc::not_one_dimensional, "group quantile alignment needs 1-D scores");
    int k = os.group_count();
    if (k < 2) throw Error(Errc::single_group, "group mechanism needs k >= 2");
    for (int g = 0; g < k; ++g)
        if (os.group_members(g).size() < 2)
            throw Error(Errc::group_too_small,
                        "group " + std::to_string(g + 1) + " has fewer than 2 points");

    size_t n = os.size();

    // Pooled order: by (score, point id); ties broken by id.
    std::vector<size_t> pooled(n);
    std::iota(pooled.begin(), pooled.end(), size_t{0});
    auto by_score = [&](size_t a, size_t b) {
        double sa = score_of(os, a), sb = score_of(os, b);
        if (sa != sb) return sa < sb;
        return os.point_ids[a] < os.point_ids[b];
    };
    std::sort(pooled.begin(), pooled.end(), by_score);

    std::vector<double> image_value(n, 0.0);
    if (uniform_equal_groups(os)) {
        // Exact collapse: integer rank arithmetic, identical across groups.
        for (int g = 0; g < k; ++g) {
            auto members = os.group_members(g);
            std::sort(members.begin(), members.end(), by_score);
            size_t m = members.size();
            for (size_t r = 0; r < m; ++r) {
                size_t idx = std::min(n - 1, ((2 * r + 1) * n) / (2 * m));
                image_value[members[r]] = score_of(os, pooled[idx]);
            }
        }
    } else {
        // Measure-weighted quantiles of the pooled distribution.
        std::vector<double> pooled_cum(n);
        double acc = 0.0;
        for (size_t i = 0; i < n; ++i) {
            acc += os.measure[pooled[i]];
            pooled_cum[i] = acc;
        }
        auto pooled_quantile = [&](double u) {
            for (size_t i = 0; i < n; ++i)
                if (pooled_cum[i] >= u - 1e-15) return score_of(os, pooled[i]);
            return score_of(os, pooled[n - 1]);
        };
        for (int g = 0; g < k; ++g) {
            auto members = os.group_members(g);
            std::sort(members.begin(), members.end(), by_score);
            double mass = os.group_mass(g);
            double cum = 0.0;
            for (size_t p : members) {
                double w = mass > 0 ? os.measure[p] / mass : 0.0;
                image_value[p] = pooled_quantile(cum + w / 2.0);
                cum += w;
            }
        }
    }

    // Decision labels: distinct image values, ascending.
    std::vector<double> labels = image_value;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    Mechanism m;
    m.kind = MechanismKind::gfm;
    m.map.domain_id = os.space_id;
    m.map.codomain_id = os.space_id + ":gfm";
    m.map.image.resize(n);

    std::vector<double> label_measure(labels.size(), 0.0);
    for (size_t p = 0; p < n; ++p) {
        size_t idx = static_cast<size_t>(
            std::lower_bound(labels.begin(), labels.end(), image_value[p]) - labels.begin());
        m.map.image[p] = idx;
        label_measure[idx] += os.measure[p];
    }

    std::vector<std::string> ids(labels.size());
    Embedding emb(labels.size());
    Matrix dist = Matrix::square(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        ids[i] = "d" + std::to_string(i);
        emb[i] = {labels[i]};
        for (size_t j = 0; j < labels.size(); ++j) dist.at(i, j) = std::abs(labels[i] - labels[j]);
    }
    m.decision_space = make_space(os.space_id + ":gfm", std::move(ids), std::move(dist),
                                  std::move(label_measure), std::vector<int>(labels.size(), 0),
                                  std::move(emb));

    MechanismVerdict check = verify_gfm(m.map, os, m.decision_space, gfm_epsilon_bound(os));
    if (!check.passes)
        throw Error(Errc::bad_spec, "quantile alignment exceeded its own tolerance bound");
    return m;
}

GroupedMetricSpace decision_space_per_individual(const GroupedMetricSpace& os,
                                                 const Mechanism& mechanism,
                                                 const std::string& space_id) {
    size_t n = os.size();
    const GroupedMetricSpace& labels = mechanism.decision_space;
    Matrix dist = Matrix::square(n);
    for (size_t p = 0; p < n; ++p)
        for (size_t q = 0; q < n; ++q)
            dist.at(p, q) = labels.dist.at(mechanism.map.image[p], mechanism.map.image[q]);

    GroupedMetricSpace ds;
    ds.space_id = space_id;
    ds.point_ids = os.point_ids;
    ds.dist = std::move(dist);
    ds.measure = os.measure;
    ds.group_of = os.group_of;
    if (labels.embedding) {
        Embedding emb(n);
        for (size_t p = 0; p < n; ++p) emb[p] = (*labels.embedding)[mechanism.map.image[p]];
        ds.embedding = std::move(emb);
    }
    return ds;
}

ViolationSearchResult find_fairness_violation(const SpaceMap& f, const GroupedMetricSpace& os,
                                              const GroupedMetricSpace& ds, double delta,
                                              double delta_prime, double eps) {
    size_t n = os.size();
    if (f.image.size() != n)
        throw Error(Errc::domain_mismatch, "mechanism is not total on the observed space");
    if (!is_rich(f, ds)) throw Error(Errc::not_rich, "mechanism does not cover the decision space");

    // Distinct decisions at distance zero are not genuinely discrete.
    bool unit_metric = true;
    for (size_t i = 0; i < ds.size(); ++i)
        for (size_t j = 0; j < ds.size(); ++j) {
            if (i == j) continue;
            double d = ds.dist.at(i, j);
            if (d <= 0.0)
                throw Error(Errc::non_discrete_ds, "decision space has distinct labels at distance 0");
            if (std::abs(d - 1.0) > tol::value) unit_metric = false;
        }
    if (unit_metric && !(delta < 1.0 && delta_prime < 1.0))
        throw Error(Errc::bad_spec, "unit-metric search needs delta, delta_prime < 1");

    ViolationSearchResult result;
    result.delta = delta;
    result.delta_prime = delta_prime;
    result.eps = eps;
    result.injective_premise = f.injective();

    // Smallest non-monochromatic radius: the closest pair with differing
    // decisions (with the general metric, differing by more than delta').
    double best = std::numeric_limits<double>::infinity();
    for (size_t p = 0; p < n; ++p)
        for (size_t q = p + 1; q < n; ++q) {
            double dd = ds.dist.at(f.image[p], f.image[q]);
            bool differs = unit_metric ? f.image[p] != f.image[q] : dd > delta_prime;
            if (!differs) continue;
            double d = os.dist.at(p, q);
            if (d < best) {
                best = d;
                result.p = p;
                result.q = q;
                result.ds_distance = dd;
            }
        }

    if (best <= delta) {
        result.found = true;
        result.os_distance = best;
    }
    return result;
}

}  // namespace fairspace
