// Exact optimal transport: assignment (Hungarian), Wasserstein distance with
// general marginals (min-cost flow on integer-scaled measures), and the
// pair-set Gromov-Wasserstein distance between two spaces.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fairspace/exec.hpp"
#include "fairspace/metric_space.hpp"

namespace fairspace {

// Joint probability matrix with its prescribed marginals.
struct Coupling {
    Matrix nu;
    std::vector<double> row_marginal;
    std::vector<double> col_marginal;
};

struct CouplingVerdict {
    bool valid = true;
    std::vector<std::string> flags;  // ROW_MARGINAL, COL_MARGINAL, NEGATIVITY
};

CouplingVerdict validate_coupling(const Matrix& nu,
                                  const std::vector<double>& mu_row,
                                  const std::vector<double>& mu_col,
                                  double tolerance = tol::marginal);

struct SolverStats {
    long iterations = 0;
    double runtime_sec = 0.0;
};

struct TransportResult {
    double value = 0.0;
    Coupling coupling;
    SolverStats stats;
};

// Minimum-cost perfect assignment on a square, finite, non-negative cost
// matrix. Returns (permutation, total cost); permutation[i] is the column
// assigned to row i.
std::pair<std::vector<size_t>, double> solve_assignment(const Matrix& cost);

// Integer scaling of two measures onto one common denominator <= cap.
// Throws SCALE_OVERFLOW when no exact rationalization fits.
struct ScaledMeasures {
    std::vector<long long> row;
    std::vector<long long> col;
    long long denominator = 1;
};
ScaledMeasures rationalize_measures(const std::vector<double>& mu_row,
                                    const std::vector<double>& mu_col,
                                    long long cap = 1000000000LL);

// Exact Wasserstein distance for the given cost matrix and marginals.
// Uniform equal-size inputs shortcut to the Hungarian algorithm; everything
// else goes through min-cost flow on the rationalized measures.
TransportResult wasserstein(const Matrix& cost,
                            const std::vector<double>& mu_row,
                            const std::vector<double>& mu_col);

// Wasserstein distance between two measured subsets of one ambient space,
// with the subset measures induced (renormalized) from the ambient measure.
TransportResult wasserstein(const GroupedMetricSpace& ambient,
                            const std::vector<size_t>& ys,
                            const std::vector<size_t>& yps);

TransportResult wasserstein(const GroupedMetricSpace& ambient,
                            const std::vector<size_t>& ys,
                            const std::vector<size_t>& yps,
                            const std::vector<double>& mu_y,
                            const std::vector<double>& mu_yp);

// Point-count cap for the pair-set construction (the transport problem is
// n^2 x n^2). Default 32; the FAIRSPACE_SIZE_CAP environment variable
// overrides it.
size_t gw_size_cap();

// pair_transport assembles the n^2 x n^2 pair problem and solves it as a
// plain transport instance; it is the primary path and yields the coupling.
// quantile exploits that the pair cost |d_X - d_Y| is one-dimensional in the
// pair values, so the same optimum falls out of a CDF sweep in O(n^2 log n).
// The two agree to float precision; tests assert it.
enum class GwMethod { pair_transport, quantile };

struct GwOptions {
    size_t size_cap = 0;  // 0 = gw_size_cap()
    ExecPolicy exec = ExecPolicy::parallel;
    GwMethod method = GwMethod::pair_transport;
};

struct GwResult {
    double value = 0.0;
    // Coupling over ordered pairs, row-major (i * n + j). Populated by the
    // pair_transport method; the quantile method returns only the value.
    Coupling pair_coupling;
    SolverStats stats;
};

GwResult gromov_wasserstein(const Matrix& dist_x, const std::vector<double>& mu_x,
                            const Matrix& dist_y, const std::vector<double>& mu_y,
                            const GwOptions& opts = {});

GwResult gromov_wasserstein(const GroupedMetricSpace& x, const GroupedMetricSpace& y,
                            const GwOptions& opts = {});

double gromov_wasserstein_value(const GroupLevelSpace& x, const GroupLevelSpace& y,
                                const GwOptions& opts = {});

// Group-level space with the exact solver plugged in.
GroupLevelSpace induce_group_space(const GroupedMetricSpace& space);

// Exact transport value as a plain callback (for induce_group_space).
TransportValueFn exact_transport_solver();

namespace kernels {

// |d_X(i,i') - d_Y(j,j')| over ordered pairs; rows = i*nx+i', cols = j*ny+j'.
Matrix assemble_pair_cost(const Matrix& dist_x, const Matrix& dist_y);
Matrix assemble_pair_cost_serial(const Matrix& dist_x, const Matrix& dist_y);

}  // namespace kernels

}  // namespace fairspace
