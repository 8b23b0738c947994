#include "mfstruct/errors.hpp"

namespace mfstruct {

const char* errc_name(errc c) {
    switch (c) {
        case errc::evaluator_domain: return "EVALUATOR_DOMAIN";
        case errc::bound_violation: return "BOUND_VIOLATION";
        case errc::range_mismatch: return "RANGE_MISMATCH";
        case errc::checkpoint_range: return "CHECKPOINT_RANGE";
        case errc::derivative_order: return "DERIVATIVE_ORDER";
        case errc::truncation_exceeds_table: return "TRUNCATION_EXCEEDS_TABLE";
        case errc::infeasible: return "INFEASIBLE";
        case errc::denominator_small: return "DENOMINATOR_SMALL";
        case errc::nonzero_not_found: return "NONZERO_NOT_FOUND";
        case errc::multiplicity_overflow: return "MULTIPLICITY_OVERFLOW";
        case errc::enumeration_cap: return "ENUMERATION_CAP";
        case errc::ambiguous_relation: return "AMBIGUOUS_RELATION";
        case errc::quadrature_budget: return "QUADRATURE_BUDGET";
        case errc::range: return "RANGE";
        case errc::parse: return "PARSE";
        case errc::unknown_key: return "UNKNOWN_KEY";
        case errc::cache_format: return "CACHE_FORMAT";
    }
    return "UNKNOWN";
}

}  // namespace mfstruct
