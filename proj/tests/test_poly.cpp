#include <doctest.h>

#include "anderson/poly.hpp"
#include "anderson/rng.hpp"

using namespace anderson;

namespace {

const FieldDescriptor* F3 = fields::get(3, 1);

Poly random_poly(const FieldDescriptor* fd, int deg, Rng& rng) {
    std::vector<FieldElement> c;
    for (int i = 0; i <= deg; ++i)
        c.push_back(FieldElement::from_encoding(fd, rng.below(fd->card_small())));
    return Poly(fd, std::move(c));
}

} // namespace

TEST_CASE("division with remainder") {
    Rng rng;
    for (int it = 0; it < 100; ++it) {
        Poly a = random_poly(F3, static_cast<int>(rng.below(8)), rng);
        Poly b = random_poly(F3, static_cast<int>(rng.below(5)), rng);
        if (b.is_zero()) continue;
        auto [q, r] = divrem(a, b);
        CHECK(q * b + r == a);
        CHECK(r.deg() < b.deg());
    }
}

TEST_CASE("gcd and xgcd") {
    Rng rng;
    for (int it = 0; it < 50; ++it) {
        Poly a = random_poly(F3, 4, rng);
        Poly b = random_poly(F3, 3, rng);
        if (a.is_zero() || b.is_zero()) continue;
        Poly g, s, t;
        xgcd(a, b, g, s, t);
        CHECK(s * a + t * b == g);
        CHECK(g == gcd_monic(a, b));
        CHECK(divrem(a, g).second.is_zero());
        CHECK(divrem(b, g).second.is_zero());
    }
}

TEST_CASE("taylor shift and composition") {
    Poly f(F3, {FieldElement::from_encoding(F3, 1), FieldElement::from_encoding(F3, 2),
                FieldElement::from_encoding(F3, 1)});
    FieldElement c = FieldElement::from_encoding(F3, 2);
    Poly g = taylor_shift(f, c);
    for (const auto& x : fields::all_elements(F3)) CHECK(eval(g, x) == eval(f, x + c));
}

TEST_CASE("p-th power spreads exponents") {
    const FieldDescriptor* F9 = fields::get(3, 2);
    Rng rng;
    Poly a = random_poly(F9, 3, rng);
    Poly b = pth_power(a);
    CHECK(b == a * a * a);
}

TEST_CASE("sigma_q fixes the subfield") {
    const FieldDescriptor* F9 = fields::get(3, 2);
    Poly a = map_into(Poly::x(F3) + Poly::one(F3), F9);
    CHECK(sigma_q(a, 1) == a);
}

TEST_CASE("xpoly division by monic") {
    const FieldDescriptor* fq = F3;
    // (x^2 - t)(x + t) = x^3 + t x^2 - t x - t^2
    XPoly a(fq, {-Poly::x(fq), Poly::zero(fq), Poly::one(fq)});
    XPoly b(fq, {Poly::x(fq), Poly::one(fq)});
    XPoly prod = a * b;
    CHECK(exact_div_monic(prod, a) == b);
    CHECK(exact_div_monic(prod, b) == a);
    auto [q, r] = divrem_monic(prod + XPoly::one(fq), a);
    CHECK(q == b);
    CHECK(r == XPoly::one(fq));
}

TEST_CASE("bivariate gcd of monic polynomials") {
    const FieldDescriptor* fq = F3;
    XPoly a(fq, {-Poly::x(fq), Poly::zero(fq), Poly::one(fq)}); // x^2 - t
    XPoly b(fq, {Poly::x(fq), Poly::one(fq)});                  // x + t
    XPoly g = gcd_monic_x(a * b, b * b);
    CHECK(g == b);
    XPoly one = gcd_monic_x(a, b);
    CHECK(one.deg() == 0);
}

TEST_CASE("deflate and inflate") {
    const FieldDescriptor* fq = F3;
    XPoly g(fq, {-Poly::x(fq), Poly::one(fq)}); // y - t
    XPoly f = inflate(g, 3);
    CHECK(f.deg() == 3);
    CHECK(deflate(f, 3) == g);
}

TEST_CASE("projection to the subfield") {
    const FieldDescriptor* F9 = fields::get(3, 2);
    XPoly f(F9, {map_into(-Poly::x(F3), F9), map_into(Poly::one(F3), F9)});
    XPoly down = project_to_subfield(f, F3);
    CHECK(down.field() == F3);
    // a polynomial with a coefficient outside F_3 is rejected
    XPoly bad(F9, {Poly::constant(FieldElement::gen(F9)), Poly::one(F9)});
    CHECK_THROWS_AS((void)project_to_subfield(bad, F3), Error);
}

TEST_CASE("rational function arithmetic") {
    RatFunc a(Poly::x(F3), Poly::x(F3) + Poly::one(F3));
    RatFunc b(Poly::one(F3), Poly::x(F3));
    RatFunc s = a + b;
    RatFunc back = s - b;
    CHECK(back == a);
    CHECK((a * a.inv()) == RatFunc::one(F3));
    CHECK((a / a) == RatFunc::one(F3));
}
