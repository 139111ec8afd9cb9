#include "anderson/error.hpp"

namespace anderson {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::not_prime: return "NOT_PRIME";
        case Errc::no_embedding: return "NO_EMBEDDING";
        case Errc::singular: return "SINGULAR";
        case Errc::not_a_rational: return "NOT_A_RATIONAL";
        case Errc::local_factor_indeterminate: return "LOCAL_FACTOR_INDETERMINATE";
        case Errc::not_injective: return "NOT_INJECTIVE";
        case Errc::bad_characteristic: return "BAD_CHARACTERISTIC";
        case Errc::not_pure: return "NOT_PURE";
        case Errc::degenerate: return "DEGENERATE";
        case Errc::field_mismatch: return "FIELD_MISMATCH";
        case Errc::degree_bound_insufficient: return "DEGREE_BOUND_INSUFFICIENT";
        case Errc::not_isogeny: return "NOT_ISOGENY";
        case Errc::bad_quotient: return "BAD_QUOTIENT";
        case Errc::no_isogeny_in_ideal: return "NO_ISOGENY_IN_IDEAL";
        case Errc::not_characteristic_place: return "NOT_CHARACTERISTIC_PLACE";
        case Errc::no_common_subfield: return "NO_COMMON_SUBFIELD";
        case Errc::splitting_cap_exceeded: return "SPLITTING_CAP_EXCEEDED";
        case Errc::precision_insufficient: return "PRECISION_INSUFFICIENT";
        case Errc::not_semisimple: return "NOT_SEMISIMPLE";
        case Errc::parse_error: return "PARSE_ERROR";
        case Errc::internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

int errc_exit_code(Errc c) {
    switch (c) {
        case Errc::parse_error:
            return 2;
        case Errc::not_prime:
        case Errc::no_embedding:
        case Errc::not_a_rational:
        case Errc::not_injective:
        case Errc::bad_characteristic:
        case Errc::not_pure:
        case Errc::degenerate:
        case Errc::field_mismatch:
        case Errc::not_isogeny:
        case Errc::bad_quotient:
        case Errc::no_isogeny_in_ideal:
        case Errc::not_characteristic_place:
        case Errc::no_common_subfield:
        case Errc::not_semisimple:
        case Errc::singular:
            return 3;
        case Errc::local_factor_indeterminate:
        case Errc::degree_bound_insufficient:
        case Errc::splitting_cap_exceeded:
        case Errc::precision_insufficient:
            return 4;
        case Errc::internal:
            return 5;
    }
    return 5;
}

} // namespace anderson
