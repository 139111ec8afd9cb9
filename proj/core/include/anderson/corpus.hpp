#ifndef ANDERSON_CORPUS_HPP
#define ANDERSON_CORPUS_HPP

#include <functional>
#include <string>
#include <vector>

#include "anderson/motive.hpp"

namespace anderson::corpus {

// rank 2, dimension d: tau = [[0, 1], [t^d, 0]], theta = 0
Motive sqrt_family(int64_t q, int d, int e = 1);
// rank 2 = dimension: tau = [[1 - zeta t, 0], [t, 1 - zeta t]], theta = 1/zeta
Motive unipotent_example(int64_t q, uint64_t zeta_enc = 1, int e = 1);
// rank 4, dimension 2 with minimal polynomial x^4 - b^2 x^2 - a t^2
Motive biquadratic_example(int64_t q, uint64_t a_enc, uint64_t b_enc, int e = 1);
// rank 2, dimension 1: tau = [[a, t - theta], [1, 0]]
Motive drinfeld_example(int64_t q, uint64_t a_enc = 1, uint64_t theta_enc = 0);
// rank 1: tau = (c0 + c1 t + ...)
Motive scalar_motive(int64_t q, int e, uint64_t theta_enc, const std::vector<uint64_t>& tau_enc);

struct ClaimResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// the built-in regression gallery; every claim must pass
std::vector<ClaimResult> run_corpus();

} // namespace anderson::corpus

#endif
