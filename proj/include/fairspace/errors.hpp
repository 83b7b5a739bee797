// Error codes and exception types shared by every module.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fairspace {

enum class Errc {
    // space validation
    asymmetry,
    negative_distance,
    nonzero_diagonal,
    triangle_violation,
    bad_measure,
    empty_group,
    negative_radius,
    // transport
    non_square,
    non_finite_cost,
    infeasible_marginals,
    scale_overflow,
    size_cap_exceeded,
    // distortion / maps
    size_mismatch,
    domain_mismatch,
    // group geometry
    group_count_mismatch,
    single_group,
    nonpositive_delta,
    // mechanisms
    no_embedding,
    not_one_dimensional,
    group_too_small,
    non_discrete_ds,
    not_rich,
    // worldgen
    model_mismatch,
    bad_spec,
    // cli / io
    io_error,
    schema_error,
    id_mismatch,
    bad_experiment,
    bad_grid,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// One violated invariant, as reported by validate_space.
struct Violation {
    Errc code;
    std::string detail;
};

// Thrown when a space fails validation; carries every violated invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations)
        : Error(violations.empty() ? Errc::bad_spec : violations.front().code,
                summarize(violations)),
          violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    static std::string summarize(const std::vector<Violation>& vs) {
        std::string s;
        for (size_t i = 0; i < vs.size(); ++i) {
            if (i) s += "; ";
            s += std::string(to_string(vs[i].code)) + " (" + vs[i].detail + ")";
        }
        return s;
    }

    std::vector<Violation> violations_;
};

}  // namespace fairspace
