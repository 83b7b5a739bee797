// Independent brute-force oracles for the test suites. Everything here is
// deliberately naive and shares no code with the library's solver paths:
// assignment by full permutation enumeration, transport by enumerating the
// spanning-tree bases of the LP, distortion by recursive map enumeration.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "fairspace/matrix.hpp"
#include "fairspace/metric_space.hpp"

namespace oracle {

using fairspace::GroupedMetricSpace;
using fairspace::Matrix;

// Minimum assignment cost over all n! permutations.
inline double assignment_brute_force(const Matrix& cost) {
    size_t n = cost.rows;
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) total += cost.at(i, perm[i]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Exact transportation LP optimum by enumerating every spanning-tree basis
// of the complete bipartite graph and keeping the cheapest feasible one.
// Only for small instances (m + n <= 9 or so).
inline double transport_lp_brute_force(const Matrix& cost, const std::vector<double>& supply,
                                       const std::vector<double>& demand) {
    size_t m = supply.size(), n = demand.size();
    size_t nodes = m + n;
    size_t edges = m * n;
    size_t need = nodes - 1;

    std::vector<size_t> pick(need);
    double best = std::numeric_limits<double>::infinity();

    // Solve the flows on a candidate tree by leaf elimination.
    auto try_basis = [&](const std::vector<size_t>& chosen) {
        std::vector<int> degree(nodes, 0);
        std::vector<std::vector<size_t>> incident(nodes);
        for (size_t e : chosen) {
            size_t i = e / n, j = m + e % n;
            degree[i]++;
            degree[j]++;
            incident[i].push_back(e);
            incident[j].push_back(e);
        }
        std::vector<double> residual(nodes);
        for (size_t i = 0; i < m; ++i) residual[i] = supply[i];
        for (size_t j = 0; j < n; ++j) residual[m + j] = demand[j];

        std::vector<double> flow(edges, 0.0);
        std::vector<char> edge_done(edges, 0);
        std::vector<char> node_done(nodes, 0);

        for (size_t step = 0; step + 1 < nodes; ++step) {
            size_t leaf = nodes;
            for (size_t u = 0; u < nodes; ++u)
                if (!node_done[u] && degree[u] == 1) {
                    leaf = u;
                    break;
                }
            if (leaf == nodes) return;  // not a tree
            size_t e = 0;
            for (size_t cand : incident[leaf])
                if (!edge_done[cand]) e = cand;
            size_t i = e / n, j = m + e % n;
            size_t other = leaf == i ? j : i;
            flow[e] = residual[leaf];
            residual[other] -= residual[leaf];
            residual[leaf] = 0.0;
            edge_done[e] = 1;
            node_done[leaf] = 1;
            degree[leaf]--;
            degree[other]--;
        }
        for (double f : flow)
            if (f < -1e-9) return;  // infeasible basis
        double total = 0.0;
        for (size_t e : chosen) total += flow[e] * cost.at(e / n, e % n);
        best = std::min(best, total);
    };

    // Enumerate all edge subsets of size nodes-1.
    std::vector<size_t> chosen;
    auto recurse = [&](auto&& self, size_t start, size_t left) -> void {
        if (left == 0) {
            try_basis(chosen);
            return;
        }
        for (size_t e = start; e + left <= edges; ++e) {
            chosen.push_back(e);
            self(self, e + 1, left - 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0, need);
    return best;
}

// Pair-set transport by brute force: builds |X|^2 x |Y|^2 pair values and
// masses, then runs the LP basis enumeration (tiny inputs only).
inline double gw_brute_force(const Matrix& dx, const std::vector<double>& mux, const Matrix& dy,
                             const std::vector<double>& muy) {
    size_t nx = dx.rows, ny = dy.rows;
    Matrix cost(nx * nx, ny * ny);
    for (size_t a = 0; a < nx; ++a)
        for (size_t b = 0; b < nx; ++b)
            for (size_t c = 0; c < ny; ++c)
                for (size_t d = 0; d < ny; ++d)
                    cost.at(a * nx + b, c * ny + d) = std::abs(dx.at(a, b) - dy.at(c, d));
    std::vector<double> mpx(nx * nx), mpy(ny * ny);
    for (size_t a = 0; a < nx; ++a)
        for (size_t b = 0; b < nx; ++b) mpx[a * nx + b] = mux[a] * mux[b];
    for (size_t c = 0; c < ny; ++c)
        for (size_t d = 0; d < ny; ++d) mpy[c * ny + d] = muy[c] * muy[d];
    return transport_lp_brute_force(cost, mpx, mpy) / 2.0;
}

// Minimum distortion by recursive enumeration of candidate maps.
inline double min_distortion_brute_force(const GroupedMetricSpace& x,
                                         const GroupedMetricSpace& y, bool bijections) {
    size_t nx = x.size(), ny = y.size();
    std::vector<size_t> img(nx);
    std::vector<char> used(ny, 0);
    double best = std::numeric_limits<double>::infinity();

    auto distortion = [&]() {
        double worst = 0.0;
        for (size_t p = 0; p < nx; ++p)
            for (size_t q = p + 1; q < nx; ++q)
                worst = std::max(worst, std::abs(x.dist.at(p, q) - y.dist.at(img[p], img[q])));
        return worst;
    };

    auto recurse = [&](auto&& self, size_t pos) -> void {
        if (pos == nx) {
            best = std::min(best, distortion());
            return;
        }
        for (size_t t = 0; t < ny; ++t) {
            if (bijections && used[t]) continue;
            img[pos] = t;
            used[t] = 1;
            self(self, pos + 1);
            used[t] = 0;
        }
    };
    recurse(recurse, 0);
    return best;
}

// Convenience: a line space with uniform measure and one group.
inline GroupedMetricSpace line_space(const std::string& id, const std::vector<double>& xs,
                                     std::vector<int> groups = {}) {
    size_t n = xs.size();
    fairspace::Embedding emb;
    std::vector<std::string> ids;
    for (size_t i = 0; i < n; ++i) {
        emb.push_back({xs[i]});
        ids.push_back(id + std::to_string(i));
    }
    if (groups.empty()) groups.assign(n, 0);
    return fairspace::make_space_from_embedding(id, std::move(ids), std::move(emb),
                                                fairspace::uniform_measure(n), std::move(groups));
}

}  // namespace oracle
