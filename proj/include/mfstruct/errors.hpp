#pragma once

#include <stdexcept>
#include <string>

namespace mfstruct {

// Error conditions surfaced by the library. The names mirror the
// diagnostic codes printed by the CLI.
enum class errc {
    evaluator_domain,
    bound_violation,
    range_mismatch,
    checkpoint_range,
    derivative_order,
    truncation_exceeds_table,
    infeasible,
    denominator_small,
    nonzero_not_found,
    multiplicity_overflow,
    enumeration_cap,
    ambiguous_relation,
    quadrature_budget,
    range,
    parse,
    unknown_key,
    cache_format,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace mfstruct
