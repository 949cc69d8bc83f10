#pragma once

#include <stdexcept>
#include <string>

namespace npg {

enum class errc {
    not_prime,
    degree_too_large,
    division_by_zero,
    field_mismatch,
    not_a_unit,
    ring_mismatch,
    wrong_field,
    shape_mismatch,
    not_invertible,
    precision_too_low,
    endpoint_unresolved,
    incomparable,
    not_symmetric,
    not_integral_breakpoints,
    not_convex,
    slope_out_of_range,
    not_normal_form,
    entries_not_zero_or_unit,
    not_cyclic,
    not_local_local,
    field_too_small,
    stage_validation_failed,
    degenerate_dimensions,
    out_of_parallelogram,
    symmetry_violated,
    field_embedding_failed,
    precondition_not_above,
    realization_exhausted,
    chain_broken,
    internal_inconsistency,
    schema_version_mismatch,
    malformed_file,
};

const char* errc_name(errc c);

/// Every typed failure in the library is thrown as an error carrying its errc.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace npg
