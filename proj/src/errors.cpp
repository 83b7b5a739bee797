#include "fairspace/errors.hpp"

namespace fairspace {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::asymmetry: return "ASYMMETRY";
        case Errc::negative_distance: return "NEGATIVE_DISTANCE";
        case Errc::nonzero_diagonal: return "NONZERO_DIAGONAL";
        case Errc::triangle_violation: return "TRIANGLE_VIOLATION";
        case Errc::bad_measure: return "BAD_MEASURE";
        case Errc::empty_group: return "EMPTY_GROUP";
        case Errc::negative_radius: return "NEGATIVE_RADIUS";
        case Errc::non_square: return "NON_SQUARE";
        case Errc::non_finite_cost: return "NON_FINITE_COST";
        case Errc::infeasible_marginals: return "INFEASIBLE_MARGINALS";
        case Errc::scale_overflow: return "SCALE_OVERFLOW";
        case Errc::size_cap_exceeded: return "SIZE_CAP_EXCEEDED";
        case Errc::size_mismatch: return "SIZE_MISMATCH";
        case Errc::domain_mismatch: return "DOMAIN_MISMATCH";
        case Errc::group_count_mismatch: return "GROUP_COUNT_MISMATCH";
        case Errc::single_group: return "SINGLE_GROUP";
        case Errc::nonpositive_delta: return "NONPOSITIVE_DELTA";
        case Errc::no_embedding: return "NO_EMBEDDING";
        case Errc::not_one_dimensional: return "NOT_ONE_DIMENSIONAL";
        case Errc::group_too_small: return "GROUP_TOO_SMALL";
        case Errc::non_discrete_ds: return "NON_DISCRETE_DS";
        case Errc::not_rich: return "NOT_RICH";
        case Errc::model_mismatch: return "MODEL_MISMATCH";
        case Errc::bad_spec: return "BAD_SPEC";
        case Errc::io_error: return "IO_ERROR";
        case Errc::schema_error: return "SCHEMA_ERROR";
        case Errc::id_mismatch: return "ID_MISMATCH";
        case Errc::bad_experiment: return "BAD_EXPERIMENT";
        case Errc::bad_grid: return "BAD_GRID";
    }
    return "UNKNOWN";
}

}  // namespace fairspace
