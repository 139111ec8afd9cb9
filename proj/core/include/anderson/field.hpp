#ifndef ANDERSON_FIELD_HPP
#define ANDERSON_FIELD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anderson/error.hpp"

namespace anderson {

// A finite field F_{p^n} presented as F_p[x]/(modulus).  The modulus is the
// first monic irreducible of degree n in the enumeration ordered by the
// base-p value of the coefficient sequence (constant coefficient least
// significant), so descriptors with equal (p,n) coincide.  Descriptors are
// interned: compare by pointer.
struct FieldDescriptor {
    int64_t p = 0;
    int n = 0;
    std::vector<int32_t> modulus; // length n; modulus(x) = x^n + sum modulus[i] x^i
    std::vector<int32_t> frob;    // n*n row-major matrix of x -> x^p on F_p-coordinates

    uint64_t card_small() const; // p^n, only valid when it fits in 64 bits
    std::string name() const;    // "F_{p^n}"
};

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(const FieldDescriptor* fd, std::vector<int32_t> coeffs);

    static FieldElement zero(const FieldDescriptor* fd);
    static FieldElement one(const FieldDescriptor* fd);
    static FieldElement gen(const FieldDescriptor* fd); // residue of x
    // Integer encoding sum a_i p^i with a_i the F_p coordinates, a_0 least significant.
    static FieldElement from_encoding(const FieldDescriptor* fd, uint64_t enc);

    const FieldDescriptor* field() const { return fd_; }
    const std::vector<int32_t>& coeffs() const { return c_; }
    int32_t coeff(int i) const { return c_[static_cast<size_t>(i)]; }
    uint64_t encoding() const;

    bool is_zero() const;
    bool is_one() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement inv() const;
    FieldElement pow(uint64_t e) const;
    FieldElement frobenius() const;          // x -> x^p
    FieldElement frobenius_inv() const;      // inverse of x -> x^p
    FieldElement pow_p_iterated(int k) const; // x -> x^(p^k), k >= 0
    FieldElement pth_root() const { return frobenius_inv(); }

    bool operator==(const FieldElement& o) const { return fd_ == o.fd_ && c_ == o.c_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    std::string str() const;

private:
    const FieldDescriptor* fd_ = nullptr;
    std::vector<int32_t> c_;
};

// sigma for F_q-linear structure, q = p^a: x -> x^q.
inline FieldElement sigma_q(const FieldElement& x, int a) { return x.pow_p_iterated(a); }

namespace fields {

// Deterministic descriptor for F_{p^n}; errors with not_prime for composite p.
const FieldDescriptor* get(int64_t p, int n);

// Canonical embedding along the least-encoded root of the source modulus in
// the target field.  Cached per field pair; a field homomorphism.
FieldElement embed(const FieldElement& x, const FieldDescriptor* target);

// Partial inverse of embed: the preimage in `sub` if x lies in the embedded
// copy of `sub`, nullopt otherwise.
std::optional<FieldElement> project(const FieldElement& x, const FieldDescriptor* sub);

// All elements of a small field in encoding order.
std::vector<FieldElement> all_elements(const FieldDescriptor* fd);

// Coordinates of x in the basis 1, g, ..., g^(e-1) of its field over the
// embedded copy of `sub`, g the canonical generator; e = [field : sub].
std::vector<FieldElement> tower_coords(const FieldElement& x, const FieldDescriptor* sub);
FieldElement tower_lift(const std::vector<FieldElement>& coords, const FieldDescriptor* target);

} // namespace fields

} // namespace anderson

#endif
