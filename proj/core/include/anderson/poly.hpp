#ifndef ANDERSON_POLY_HPP
#define ANDERSON_POLY_HPP

#include <string>
#include <utility>
#include <vector>

#include "anderson/field.hpp"

namespace anderson {

// Univariate polynomial over a finite field, dense, no trailing zeros.
// Used both for elements of L[t] and for scratch univariate work over any
// coefficient field.
class Poly {
public:
    Poly() = default;
    explicit Poly(const FieldDescriptor* fd) : fd_(fd) {}
    Poly(const FieldDescriptor* fd, std::vector<FieldElement> coeffs);

    static Poly zero(const FieldDescriptor* fd) { return Poly(fd); }
    static Poly constant(const FieldElement& c);
    static Poly one(const FieldDescriptor* fd) { return constant(FieldElement::one(fd)); }
    static Poly x(const FieldDescriptor* fd); // the variable
    // c_0 + c_1 t + ... from integer encodings
    static Poly from_encodings(const FieldDescriptor* fd, const std::vector<uint64_t>& enc);

    const FieldDescriptor* field() const { return fd_; }
    int deg() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    bool is_one() const;
    bool is_monic() const;
    bool is_unit() const { return deg() == 0; }
    const std::vector<FieldElement>& coeffs() const { return c_; }
    FieldElement coeff(int i) const; // zero-padded access
    FieldElement lead() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const FieldElement& c) const;
    bool operator==(const Poly& o) const { return fd_ == o.fd_ && c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly shifted(int k) const; // * t^k

    std::string str(const std::string& var = "t") const;

private:
    const FieldDescriptor* fd_ = nullptr;
    std::vector<FieldElement> c_;
    void trim();
};

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b);
Poly exact_div(const Poly& a, const Poly& b);
Poly gcd_monic(const Poly& a, const Poly& b);
// g = gcd monic, plus s,t with s*a + t*b = g.
void xgcd(const Poly& a, const Poly& b, Poly& g, Poly& s, Poly& t);
Poly derivative(const Poly& a);
FieldElement eval(const Poly& a, const FieldElement& x);
Poly monic(const Poly& a);
Poly pow_mod(const Poly& base, uint64_t e, const Poly& mod);
Poly pth_power(const Poly& a);                 // a(t)^p
Poly compose(const Poly& a, const Poly& b);    // a(b(t))
Poly taylor_shift(const Poly& a, const FieldElement& c); // a(t + c)
Poly sigma_q(const Poly& a, int qa);           // q-power map on coefficients, q = p^qa
int valuation(const Poly& a, const Poly& prime); // multiplicity of prime in a; a != 0
Poly map_into(const Poly& a, const FieldDescriptor* target); // embed coefficients
std::optional<Poly> project_poly(const Poly& a, const FieldDescriptor* sub);

// Polynomial in x with Poly coefficients (elements of K[t][x], K the
// coefficient field).  Leading coefficient nonzero.
class XPoly {
public:
    XPoly() = default;
    explicit XPoly(const FieldDescriptor* fd) : fd_(fd) {}
    XPoly(const FieldDescriptor* fd, std::vector<Poly> coeffs);

    static XPoly zero(const FieldDescriptor* fd) { return XPoly(fd); }
    static XPoly constant(const Poly& c);
    static XPoly one(const FieldDescriptor* fd);
    static XPoly x(const FieldDescriptor* fd);

    const FieldDescriptor* field() const { return fd_; }
    int deg() const { return static_cast<int>(c_.size()) - 1; }
    int deg_t() const; // max t-degree of the coefficients
    bool is_zero() const { return c_.empty(); }
    const std::vector<Poly>& coeffs() const { return c_; }
    Poly coeff(int i) const;
    Poly lead() const;
    bool is_monic() const;

    XPoly operator+(const XPoly& o) const;
    XPoly operator-(const XPoly& o) const;
    XPoly operator-() const;
    XPoly operator*(const XPoly& o) const;
    XPoly operator*(const Poly& c) const;
    bool operator==(const XPoly& o) const { return fd_ == o.fd_ && c_ == o.c_; }
    bool operator!=(const XPoly& o) const { return !(*this == o); }

    std::string str(const std::string& xv = "x", const std::string& tv = "t") const;

private:
    const FieldDescriptor* fd_ = nullptr;
    std::vector<Poly> c_;
    void trim();
};

// division by a monic divisor stays in K[t][x]
std::pair<XPoly, XPoly> divrem_monic(const XPoly& a, const XPoly& b);
XPoly exact_div_monic(const XPoly& a, const XPoly& b);
XPoly derivative_x(const XPoly& a);
// primitive-PRS gcd; for a, b with a monic the result is monic with
// coefficients in K[t]
XPoly gcd_monic_x(const XPoly& a, const XPoly& b);
Poly content_t(const XPoly& a);
XPoly deflate(const XPoly& a, int64_t k);  // a = g(x^k) -> g
XPoly inflate(const XPoly& a, int64_t k);  // g -> g(x^k)
bool is_sigma_fixed(const XPoly& a, int qa); // all coefficients fixed by q-power map
XPoly map_into(const XPoly& a, const FieldDescriptor* target);
// Projection of the coefficients into the subfield descriptor; errors with
// not_a_rational when a coefficient is not fixed by the q-power map.
XPoly project_to_subfield(const XPoly& a, const FieldDescriptor* sub);

// Fraction field of K[t]: denominator monic, gcd(num, den) = 1.
class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(const Poly& num);
    RatFunc(const Poly& num, const Poly& den);

    static RatFunc zero(const FieldDescriptor* fd) { return RatFunc(Poly::zero(fd)); }
    static RatFunc one(const FieldDescriptor* fd) { return RatFunc(Poly::one(fd)); }

    const Poly& num() const { return n_; }
    const Poly& den() const { return d_; }
    bool is_zero() const { return n_.is_zero(); }
    bool is_polynomial() const { return d_.is_one(); }

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator-() const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc inv() const;
    bool operator==(const RatFunc& o) const { return n_ == o.n_ && d_ == o.d_; }

private:
    Poly n_, d_;
    void normalize();
};

} // namespace anderson

#endif
