#include <doctest.h>

#include "anderson/factor.hpp"
#include "anderson/rng.hpp"

using namespace anderson;

namespace {

const FieldDescriptor* F3 = fields::get(3, 1);
const FieldDescriptor* F2 = fields::get(2, 1);

XPoly xp(const FieldDescriptor* fq, std::vector<Poly> c) { return XPoly(fq, std::move(c)); }

XPoly x2_minus_tpow(const FieldDescriptor* fq, int d) {
    return xp(fq, {-Poly::one(fq).shifted(d), Poly::zero(fq), Poly::one(fq)});
}

XPoly random_monic(const FieldDescriptor* fq, int dx, int dt, Rng& rng) {
    std::vector<Poly> c;
    for (int i = 0; i < dx; ++i) {
        std::vector<FieldElement> cc;
        for (int j = 0; j <= dt; ++j)
            cc.push_back(FieldElement::from_encoding(fq, rng.below(fq->card_small())));
        c.emplace_back(fq, std::move(cc));
    }
    c.push_back(Poly::one(fq));
    return XPoly(fq, std::move(c));
}

} // namespace

TEST_CASE("univariate factorization over finite fields") {
    Rng rng;
    for (int it = 0; it < 40; ++it) {
        std::vector<FieldElement> cc;
        for (int j = 0; j < 6; ++j) cc.push_back(FieldElement::from_encoding(F3, rng.below(3)));
        cc.push_back(FieldElement::one(F3));
        Poly f(F3, std::move(cc));
        auto fac = factor_univariate(f);
        Poly prod = Poly::one(F3);
        for (auto& [h, m] : fac) {
            CHECK(is_irreducible(h));
            for (int i = 0; i < m; ++i) prod = prod * h;
        }
        CHECK(prod == monic(f));
    }
}

TEST_CASE("irreducible enumeration is canonical") {
    // over F_2: t, t+1, t^2+t+1, t^3+t+1, t^3+t^2+1, ...
    CHECK(nth_monic_irreducible(F2, 0) == Poly::x(F2));
    CHECK(nth_monic_irreducible(F2, 1) == Poly::x(F2) + Poly::one(F2));
    Poly third = nth_monic_irreducible(F2, 2);
    CHECK(third.deg() == 2);
}

TEST_CASE("x^2 - t is irreducible over Q") {
    auto fac = factor_over_A(x2_minus_tpow(F3, 1));
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].second == 1);
    CHECK(fac[0].first == x2_minus_tpow(F3, 1));
}

TEST_CASE("x^2 - t^2 splits") {
    auto fac = factor_over_A(x2_minus_tpow(F3, 2));
    REQUIRE(fac.size() == 2);
    XPoly prod = XPoly::one(F3);
    for (auto& [h, m] : fac) {
        CHECK(h.deg() == 1);
        CHECK(m == 1);
        prod = prod * h;
    }
    CHECK(prod == x2_minus_tpow(F3, 2));
}

TEST_CASE("the biquadratic x^4 - x^2 - t^2 is irreducible over Q") {
    // a = b = 1 over F_3
    XPoly f = xp(F3, {-(Poly::x(F3) * Poly::x(F3)), Poly::zero(F3), -Poly::one(F3),
                      Poly::zero(F3), Poly::one(F3)});
    CHECK(is_irreducible_over_A(f));
}

TEST_CASE("inseparable factorizations") {
    // x^3 - t irreducible over F_3(t)
    XPoly a = xp(F3, {-Poly::x(F3), Poly::zero(F3), Poly::zero(F3), Poly::one(F3)});
    CHECK(is_irreducible_over_A(a));
    // x^3 - t^3 = (x - t)^3
    XPoly b = xp(F3, {-(Poly::one(F3).shifted(3)), Poly::zero(F3), Poly::zero(F3), Poly::one(F3)});
    auto fac = factor_over_A(b);
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].second == 3);
    CHECK(fac[0].first == xp(F3, {-Poly::x(F3), Poly::one(F3)}));
    // mixed: (x^3 - t)(x - t)^3
    auto fac2 = factor_over_A(a * b);
    REQUIRE(fac2.size() == 2);
}

TEST_CASE("x^2 - t over F_2 ramifies as an inseparable irreducible") {
    XPoly f = x2_minus_tpow(F2, 1);
    CHECK(is_irreducible_over_A(f));
}

TEST_CASE("products reproduce the input exactly") {
    Rng rng;
    int done = 0;
    for (int it = 0; done < 30; ++it) {
        XPoly f = random_monic(F3, 3, 2, rng);
        auto fac = factor_over_A(f);
        XPoly prod = XPoly::one(F3);
        for (auto& [h, m] : fac) {
            CHECK(h.is_monic());
            for (int i = 0; i < m; ++i) prod = prod * h;
        }
        CHECK(prod == f);
        // each factor passes the irreducibility re-check
        for (auto& [h, m] : fac) CHECK(is_irreducible_over_A(h));
        ++done;
    }
}

TEST_CASE("recombination works across an extension evaluation point") {
    // (x^2 - t)(x^2 - t - 1): any specialization t = c in F_3 makes one factor
    // or their resultant degenerate often enough to exercise extensions
    XPoly a = x2_minus_tpow(F3, 1);
    XPoly b = xp(F3, {-Poly::x(F3) - Poly::one(F3), Poly::zero(F3), Poly::one(F3)});
    auto fac = factor_over_A(a * b);
    REQUIRE(fac.size() == 2);
    XPoly prod = fac[0].first * fac[1].first;
    CHECK(prod == a * b);
}

TEST_CASE("factorization over F_4 coefficients") {
    const FieldDescriptor* F4 = fields::get(2, 2);
    // q = 4: x^2 - t^2 = (x - t)(x + t) = (x + t)^2 in characteristic 2
    XPoly f = x2_minus_tpow(F4, 2);
    auto fac = factor_over_A(f);
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].second == 2);
}

TEST_CASE("flagged factorization entry point") {
    const FieldDescriptor* F9 = fields::get(3, 2);
    // x^2 - t with coefficients embedded into F_9 projects and factors
    XPoly f(F9, {map_into(-Poly::x(F3), F9), Poly::zero(F9), Poly::one(F9)});
    auto fac = factor_over_A(f, F3);
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].first.field() == F3);
    // a coefficient outside the q-power fixed field is rejected
    XPoly bad(F9, {Poly::constant(FieldElement::gen(F9)), Poly::one(F9)});
    CHECK_THROWS_WITH_AS((void)factor_over_A(bad, F3), doctest::Contains("NOT_A_RATIONAL"), Error);
}

namespace {

// exhaustive irreducibility oracle: a monic factor of a monic polynomial has
// coefficient t-degree bounded by the t-degree of the polynomial, so trial
// division over all candidate divisors is complete
bool irreducible_by_trial_division(const XPoly& f) {
    const FieldDescriptor* fq = f.field();
    const uint64_t card = fq->card_small();
    const int dt = std::max(f.deg_t(), 0);
    for (int dg = 1; 2 * dg <= f.deg(); ++dg) {
        // enumerate monic divisors of x-degree dg with deg_t <= dt
        uint64_t per_coeff = 1;
        for (int i = 0; i <= dt; ++i) per_coeff *= card;
        uint64_t total = 1;
        bool overflow = false;
        for (int i = 0; i < dg; ++i) {
            total *= per_coeff;
            if (total > 40000000ull) { overflow = true; break; }
        }
        REQUIRE_FALSE(overflow);
        for (uint64_t code = 0; code < total; ++code) {
            uint64_t c = code;
            std::vector<Poly> cand;
            for (int i = 0; i < dg; ++i) {
                std::vector<uint64_t> enc;
                for (int j = 0; j <= dt; ++j) {
                    enc.push_back(c % card);
                    c /= card;
                }
                cand.emplace_back(Poly::from_encodings(fq, enc));
            }
            cand.push_back(Poly::one(fq));
            XPoly g(fq, std::move(cand));
            if (divrem_monic(f, g).second.is_zero()) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("factors are irreducible by the trial-division oracle") {
    Rng rng(909);
    for (int64_t q : {2, 3}) {
        const FieldDescriptor* fq = fields::get(q, 1);
        int done = 0;
        while (done < 12) {
            XPoly f = random_monic(fq, 3 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(2)), rng);
            ++done;
            auto fac = factor_over_A(f);
            XPoly prod = XPoly::one(fq);
            for (auto& [h, m] : fac) {
                CHECK(irreducible_by_trial_division(h));
                for (int i = 0; i < m; ++i) prod = prod * h;
            }
            CHECK(prod == f);
        }
    }
    // and the flagship quartic
    const FieldDescriptor* fq = fields::get(3, 1);
    XPoly quartic(fq, {-(Poly::x(fq) * Poly::x(fq)), Poly::zero(fq), -Poly::one(fq),
                       Poly::zero(fq), Poly::one(fq)});
    CHECK(irreducible_by_trial_division(quartic));
}
