// Finite measured metric spaces with a group partition, and maps between them.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairspace/errors.hpp"
#include "fairspace/matrix.hpp"

namespace fairspace {

namespace tol {
inline constexpr double triangle_rel = 1e-9;   // relative to max distance
inline constexpr double measure_sum = 1e-12;
inline constexpr double embedding_rel = 1e-9;  // dist vs recomputed Euclidean
inline constexpr double marginal = 1e-9;       // coupling marginal check
inline constexpr double value = 1e-9;          // generic value comparisons
}  // namespace tol

using Embedding = std::vector<std::vector<double>>;

// A finite point set with pairwise distances, a probability measure and a
// partition into groups. Immutable after construction; build via make_space.
struct GroupedMetricSpace {
    std::string space_id;
    std::vector<std::string> point_ids;
    Matrix dist;                        // n x n, symmetric, zero diagonal
    std::vector<double> measure;        // non-negative, sums to 1
    std::vector<int> group_of;          // 0-based group index per point
    std::optional<Embedding> embedding; // present iff dist is Euclidean

    size_t size() const { return point_ids.size(); }

    int group_count() const {
        int k = 0;
        for (int g : group_of) k = g + 1 > k ? g + 1 : k;
        return k;
    }

    double diameter() const { return dist.max_abs(); }

    std::vector<size_t> group_members(int g) const {
        std::vector<size_t> out;
        for (size_t i = 0; i < group_of.size(); ++i)
            if (group_of[i] == g) out.push_back(i);
        return out;
    }

    double group_mass(int g) const {
        double m = 0.0;
        for (size_t i = 0; i < group_of.size(); ++i)
            if (group_of[i] == g) m += measure[i];
        return m;
    }

    // Index lookup by point id; throws ID_MISMATCH for unknown ids.
    size_t index_of(const std::string& id) const;
};

// Non-throwing validation; returns every violated invariant (empty = valid).
std::vector<Violation> validate_space_data(const std::vector<std::string>& point_ids,
                                           const Matrix& dist,
                                           const std::vector<double>& measure,
                                           const std::vector<int>& group_of,
                                           const std::optional<Embedding>& embedding);

// Validating constructor; throws ValidationError listing all violations.
GroupedMetricSpace make_space(std::string space_id,
                              std::vector<std::string> point_ids,
                              Matrix dist,
                              std::vector<double> measure,
                              std::vector<int> group_of,
                              std::optional<Embedding> embedding = std::nullopt);

// Same, deriving dist from the embedding.
GroupedMetricSpace make_space_from_embedding(std::string space_id,
                                             std::vector<std::string> point_ids,
                                             Embedding embedding,
                                             std::vector<double> measure,
                                             std::vector<int> group_of);

Matrix pairwise_distances(const Embedding& embedding);

std::vector<double> uniform_measure(size_t n);

// Measured restriction to the given point indices, measure renormalized.
GroupedMetricSpace subspace(const GroupedMetricSpace& space, const std::vector<size_t>& idx);

// A total point-level map between two spaces. image[i] is the codomain index
// of domain point i. The injective/rich flags are recomputed on demand so
// they can never drift from the assignment.
struct SpaceMap {
    std::string domain_id;
    std::string codomain_id;
    std::vector<size_t> image;

    bool injective() const;
    bool rich(size_t codomain_size) const;  // surjective onto the codomain
};

// Build a map from an id-level assignment; throws DOMAIN_MISMATCH if the
// assignment is not total on the domain or targets unknown codomain ids.
SpaceMap make_map(const GroupedMetricSpace& domain,
                  const GroupedMetricSpace& codomain,
                  const std::unordered_map<std::string, std::string>& assignment);

SpaceMap identity_map(const GroupedMetricSpace& space);

// h = f_then(g): domain of f, codomain of g.
SpaceMap compose(const SpaceMap& f, const SpaceMap& g);

// Group-level view of a space: one point per group, distances are Wasserstein
// distances between groups inside the ambient metric, masses are group masses.
// The triangle inequality is deliberately not asserted here.
struct GroupLevelSpace {
    Matrix dist;                  // k x k
    std::vector<double> measure;  // group masses, sums to 1
    size_t group_count() const { return measure.size(); }
};

// Solver callback: exact transport value for (cost, row measure, col measure).
using TransportValueFn = std::function<double(
    const Matrix&, const std::vector<double>&, const std::vector<double>&)>;

GroupLevelSpace induce_group_space(const GroupedMetricSpace& space,
                                   const TransportValueFn& transport_solver);

// Random perturbation within a metric ball of the given radius. Embedding
// mode moves points and recomputes distances; matrix mode rescales entries
// and repairs the metric by shortest-path closure. delta = 0 is the identity.
GroupedMetricSpace perturb(const GroupedMetricSpace& space, double delta, uint64_t seed);

}  // namespace fairspace
