#ifndef ANDERSON_RATIONAL_HPP
#define ANDERSON_RATIONAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace anderson {

using Rat = boost::rational<long long>;

// Representative of r mod 1 in [0,1).
inline Rat mod_one(const Rat& r) {
    Rat x = r - Rat(boost::rational_cast<long long>(r));
    if (x < Rat(0)) x += Rat(1);
    return x;
}

inline std::string to_string(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

} // namespace anderson

#endif
