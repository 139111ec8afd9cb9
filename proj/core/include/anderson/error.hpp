#ifndef ANDERSON_ERROR_HPP
#define ANDERSON_ERROR_HPP

#include <stdexcept>
#include <string>

namespace anderson {

enum class Errc {
    not_prime,
    no_embedding,
    singular,
    not_a_rational,
    local_factor_indeterminate,
    not_injective,
    bad_characteristic,
    not_pure,
    degenerate,
    field_mismatch,
    degree_bound_insufficient,
    not_isogeny,
    bad_quotient,
    no_isogeny_in_ideal,
    not_characteristic_place,
    no_common_subfield,
    splitting_cap_exceeded,
    precision_insufficient,
    not_semisimple,
    parse_error,
    internal,
};

const char* errc_name(Errc c);

// Error class for CLI exit-code mapping: 2 parse, 3 validation, 4 computational, 5 internal.
int errc_exit_code(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

inline void check(bool ok, Errc code, const std::string& what) {
    if (!ok) raise(code, what);
}

// Failed internal assertions indicate an arithmetic bug, not bad input.
inline void internal_check(bool ok, const std::string& what) {
    if (!ok) raise(Errc::internal, what);
}

} // namespace anderson

#endif
