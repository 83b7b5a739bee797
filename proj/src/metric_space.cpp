#include "fairspace/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "fairspace/rng.hpp"

namespace fairspace {

size_t GroupedMetricSpace::index_of(const std::string& id) const {
    for (size_t i = 0; i < point_ids.size(); ++i)
        if (point_ids[i] == id) return i;
    throw Error(Errc::id_mismatch, "unknown point id '" + id + "' in space '" + space_id + "'");
}

Matrix pairwise_distances(const Embedding& embedding) {
    size_t n = embedding.size();
    Matrix d = Matrix::square(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (size_t c = 0; c < embedding[i].size(); ++c) {
                double t = embedding[i][c] - embedding[j][c];
                s += t * t;
            }
            d.at(i, j) = d.at(j, i) = std::sqrt(s);
        }
    }
    return d;
}

std::vector<double> uniform_measure(size_t n) {
    return std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0);
}

std::vector<Violation> validate_space_data(const std::vector<std::string>& point_ids,
                                           const Matrix& dist,
                                           const std::vector<double>& measure,
                                           const std::vector<int>& group_of,
                                           const std::optional<Embedding>& embedding) {
    std::vector<Violation> out;
    size_t n = point_ids.size();

    if (!dist.square_shape() || dist.rows != n) {
        out.push_back({Errc::non_square, "distance matrix must be " + std::to_string(n) + "x" +
                                             std::to_string(n)});
        return out;  // shape is a precondition for everything below
    }
    if (measure.size() != n) {
        out.push_back({Errc::bad_measure, "measure length does not match point count"});
        return out;
    }
    if (group_of.size() != n) {
        out.push_back({Errc::empty_group, "group labels missing for some points"});
        return out;
    }

    {
        std::unordered_set<std::string> seen;
        for (const auto& id : point_ids)
            if (!seen.insert(id).second)
                out.push_back({Errc::id_mismatch, "duplicate point id '" + id + "'"});
    }

    for (size_t i = 0; i < n; ++i) {
        if (dist.at(i, i) != 0.0)
            out.push_back({Errc::nonzero_diagonal,
                           "d(" + point_ids[i] + "," + point_ids[i] + ") != 0"});
        for (size_t j = 0; j < n; ++j) {
            double d = dist.at(i, j);
            if (!(d >= 0.0) || !std::isfinite(d)) {
                out.push_back({Errc::negative_distance,
                               "d(" + point_ids[i] + "," + point_ids[j] + ") negative or non-finite"});
            }
        }
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (dist.at(i, j) != dist.at(j, i))
                out.push_back({Errc::asymmetry,
                               "d(" + point_ids[i] + "," + point_ids[j] + ") != d(" +
                                   point_ids[j] + "," + point_ids[i] + ")"});

    // Triangle inequality, tolerance relative to the largest entry.
    double slack = tol::triangle_rel * std::max(1.0, dist.max_abs());
    size_t reported = 0;
    for (size_t i = 0; i < n && reported < 16; ++i)
        for (size_t j = 0; j < n && reported < 16; ++j)
            for (size_t k = 0; k < n && reported < 16; ++k)
                if (dist.at(i, j) > dist.at(i, k) + dist.at(k, j) + slack) {
                    out.push_back({Errc::triangle_violation,
                                   "d(" + point_ids[i] + "," + point_ids[j] + ") > d(" +
                                       point_ids[i] + "," + point_ids[k] + ") + d(" +
                                       point_ids[k] + "," + point_ids[j] + ")"});
                    ++reported;
                }

    double sum = 0.0;
    bool measure_ok = true;
    for (size_t i = 0; i < n; ++i) {
        if (!(measure[i] >= 0.0) || !std::isfinite(measure[i])) {
            out.push_back({Errc::bad_measure, "measure of " + point_ids[i] + " negative or non-finite"});
            measure_ok = false;
        }
        sum += measure[i];
    }
    if (measure_ok && std::abs(sum - 1.0) > tol::measure_sum)
        out.push_back({Errc::bad_measure, "measure sums to " + std::to_string(sum) + ", not 1"});

    int k = 0;
    for (int g : group_of) {
        if (g < 0) {
            out.push_back({Errc::empty_group, "negative group index"});
            return out;
        }
        k = std::max(k, g + 1);
    }
    std::vector<int> counts(static_cast<size_t>(k), 0);
    for (int g : group_of) counts[static_cast<size_t>(g)]++;
    for (int g = 0; g < k; ++g)
        if (counts[static_cast<size_t>(g)] == 0)
            out.push_back({Errc::empty_group, "group " + std::to_string(g + 1) + " is empty"});

    if (embedding) {
        if (embedding->size() != n) {
            out.push_back({Errc::schema_error, "embedding length does not match point count"});
        } else {
            size_t dim = embedding->empty() ? 0 : (*embedding)[0].size();
            bool ragged = false;
            for (const auto& row : *embedding)
                if (row.size() != dim) ragged = true;
            if (ragged) {
                out.push_back({Errc::schema_error, "embedding rows have differing dimension"});
            } else {
                Matrix recomputed = pairwise_distances(*embedding);
                double esl = tol::embedding_rel * std::max(1.0, dist.max_abs());
                for (size_t i = 0; i < n; ++i)
                    for (size_t j = 0; j < n; ++j)
                        if (std::abs(recomputed.at(i, j) - dist.at(i, j)) > esl) {
                            out.push_back({Errc::schema_error,
                                           "dist does not match embedding distances"});
                            i = n;
                            break;
                        }
            }
        }
    }
    return out;
}

GroupedMetricSpace make_space(std::string space_id,
                              std::vector<std::string> point_ids,
                              Matrix dist,
                              std::vector<double> measure,
                              std::vector<int> group_of,
                              std::optional<Embedding> embedding) {
    auto violations = validate_space_data(point_ids, dist, measure, group_of, embedding);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    GroupedMetricSpace s;
    s.space_id = std::move(space_id);
    s.point_ids = std::move(point_ids);
    s.dist = std::move(dist);
    s.measure = std::move(measure);
    s.group_of = std::move(group_of);
    s.embedding = std::move(embedding);
    return s;
}

GroupedMetricSpace make_space_from_embedding(std::string space_id,
                                             std::vector<std::string> point_ids,
                                             Embedding embedding,
                                             std::vector<double> measure,
                                             std::vector<int> group_of) {
    Matrix dist = pairwise_distances(embedding);
    return make_space(std::move(space_id), std::move(point_ids), std::move(dist),
                      std::move(measure), std::move(group_of), std::move(embedding));
}

GroupedMetricSpace subspace(const GroupedMetricSpace& space, const std::vector<size_t>& idx) {
    GroupedMetricSpace s;
    s.space_id = space.space_id + "/sub";
    size_t m = idx.size();
    s.point_ids.reserve(m);
    s.measure.reserve(m);
    s.group_of.reserve(m);
    double mass = 0.0;
    for (size_t i : idx) mass += space.measure[i];
    s.dist = Matrix::square(m);
    for (size_t a = 0; a < m; ++a) {
        s.point_ids.push_back(space.point_ids[idx[a]]);
        s.measure.push_back(mass > 0 ? space.measure[idx[a]] / mass
                                     : 1.0 / static_cast<double>(m));
        s.group_of.push_back(space.group_of[idx[a]]);
        for (size_t b = 0; b < m; ++b) s.dist.at(a, b) = space.dist.at(idx[a], idx[b]);
    }
    if (space.embedding) {
        Embedding e;
        e.reserve(m);
        for (size_t i : idx) e.push_back((*space.embedding)[i]);
        s.embedding = std::move(e);
    }
    return s;
}

bool SpaceMap::injective() const {
    std::set<size_t> seen;
    for (size_t t : image)
        if (!seen.insert(t).second) return false;
    return true;
}

bool SpaceMap::rich(size_t codomain_size) const {
    std::vector<char> hit(codomain_size, 0);
    for (size_t t : image) {
        if (t >= codomain_size) return false;
        hit[t] = 1;
    }
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

SpaceMap make_map(const GroupedMetricSpace& domain,
                  const GroupedMetricSpace& codomain,
                  const std::unordered_map<std::string, std::string>& assignment) {
    SpaceMap f;
    f.domain_id = domain.space_id;
    f.codomain_id = codomain.space_id;
    f.image.reserve(domain.size());
    for (const auto& id : domain.point_ids) {
        auto it = assignment.find(id);
        if (it == assignment.end())
            throw Error(Errc::domain_mismatch, "assignment missing for point '" + id + "'");
        f.image.push_back(codomain.index_of(it->second));
    }
    return f;
}

SpaceMap identity_map(const GroupedMetricSpace& space) {
    SpaceMap f;
    f.domain_id = space.space_id;
    f.codomain_id = space.space_id;
    f.image.resize(space.size());
    for (size_t i = 0; i < space.size(); ++i) f.image[i] = i;
    return f;
}

SpaceMap compose(const SpaceMap& f, const SpaceMap& g) {
    if (f.codomain_id != g.domain_id)
        throw Error(Errc::domain_mismatch,
                    "cannot compose: '" + f.codomain_id + "' vs '" + g.domain_id + "'");
    SpaceMap h;
    h.domain_id = f.domain_id;
    h.codomain_id = g.codomain_id;
    h.image.reserve(f.image.size());
    for (size_t t : f.image) {
        if (t >= g.image.size())
            throw Error(Errc::domain_mismatch, "map image exceeds composed domain");
        h.image.push_back(g.image[t]);
    }
    return h;
}

GroupLevelSpace induce_group_space(const GroupedMetricSpace& space,
                                   const TransportValueFn& transport_solver) {
    int k = space.group_count();
    GroupLevelSpace gl;
    gl.dist = Matrix::square(static_cast<size_t>(k));
    gl.measure.resize(static_cast<size_t>(k));

    std::vector<std::vector<size_t>> members(static_cast<size_t>(k));
    for (int g = 0; g < k; ++g) {
        members[static_cast<size_t>(g)] = space.group_members(g);
        gl.measure[static_cast<size_t>(g)] = space.group_mass(g);
    }

    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            const auto& ya = members[static_cast<size_t>(a)];
            const auto& yb = members[static_cast<size_t>(b)];
            Matrix cost(ya.size(), yb.size());
            for (size_t i = 0; i < ya.size(); ++i)
                for (size_t j = 0; j < yb.size(); ++j)
                    cost.at(i, j) = space.dist.at(ya[i], yb[j]);

            auto normalized = [&](const std::vector<size_t>& pts) {
                std::vector<double> mu(pts.size());
                double mass = 0.0;
                for (size_t p : pts) mass += space.measure[p];
                for (size_t i = 0; i < pts.size(); ++i)
                    mu[i] = mass > 0 ? space.measure[pts[i]] / mass
                                     : 1.0 / static_cast<double>(pts.size());
                return mu;
            };
            double w = transport_solver(cost, normalized(ya), normalized(yb));
            gl.dist.at(static_cast<size_t>(a), static_cast<size_t>(b)) = w;
            gl.dist.at(static_cast<size_t>(b), static_cast<size_t>(a)) = w;
        }
    }
    return gl;
}

namespace {

// Floyd-Warshall min-plus closure; restores the triangle inequality after a
// multiplicative perturbation of the entries.
void shortest_path_closure(Matrix& d) {
    size_t n = d.rows;
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                double via = d.at(i, k) + d.at(k, j);
                if (via < d.at(i, j)) d.at(i, j) = via;
            }
}

}  // namespace

GroupedMetricSpace perturb(const GroupedMetricSpace& space, double delta, uint64_t seed) {
    if (delta < 0.0) throw Error(Errc::negative_radius, "perturbation radius must be >= 0");
    if (delta == 0.0) return space;

    Rng rng(seed);
    if (space.embedding) {
        Embedding moved = *space.embedding;
        size_t dim = moved.empty() ? 0 : moved[0].size();
        for (auto& row : moved) {
            auto off = rng.in_ball(dim, delta);
            for (size_t c = 0; c < dim; ++c) row[c] += off[c];
        }
        GroupedMetricSpace out = space;
        out.dist = pairwise_distances(moved);
        out.embedding = std::move(moved);
        return out;
    }

    // Matrix fallback: scale each unordered pair, then repair the metric.
    double diam = space.diameter();
    GroupedMetricSpace out = space;
    out.embedding = std::nullopt;
    if (diam == 0.0) return out;
    double rel = delta / diam;
    size_t n = space.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double factor = std::max(0.0, 1.0 + rng.uniform(-rel, rel));
            out.dist.at(i, j) = out.dist.at(j, i) = space.dist.at(i, j) * factor;
        }
    shortest_path_closure(out.dist);
    return out;
}

}  // namespace fairspace
