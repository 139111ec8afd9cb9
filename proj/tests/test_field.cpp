#include <doctest.h>

#include "anderson/factor.hpp"
#include "anderson/field.hpp"

#include <atomic>
#include <thread>

using namespace anderson;

namespace {

// independent irreducibility check by exhaustive root search (degree <= 3)
bool has_root(const std::vector<int>& coeffs, int p) {
    for (int x = 0; x < p; ++x) {
        long long acc = 0;
        for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) acc = (acc * x + coeffs[static_cast<size_t>(i)]) % p;
        if (acc % p == 0) return true;
    }
    return false;
}

} // namespace

TEST_CASE("prime field modulus is x") {
    const FieldDescriptor* f2 = fields::get(2, 1);
    CHECK(f2->n == 1);
    CHECK(f2->modulus == std::vector<int32_t>{0});
}

TEST_CASE("F_9 modulus is the first irreducible in the enumeration") {
    // oracle: walk all 9 monic quadratics over F_3 in encoding order and keep
    // the first without a root
    std::vector<int32_t> expected;
    for (int v = 0; v < 9; ++v) {
        std::vector<int> c = {v % 3, v / 3, 1};
        if (!has_root(c, 3)) {
            expected = {static_cast<int32_t>(c[0]), static_cast<int32_t>(c[1])};
            break;
        }
    }
    const FieldDescriptor* f9 = fields::get(3, 2);
    CHECK(f9->modulus == expected);
}

TEST_CASE("F_8 has exactly two modulus candidates and takes the smaller") {
    int count = 0;
    std::vector<int32_t> first;
    for (int v = 0; v < 8; ++v) {
        std::vector<int> c = {v % 2, (v / 2) % 2, v / 4, 1};
        // degree-3 irreducible over F_2 iff no root
        if (!has_root(c, 2)) {
            ++count;
            if (first.empty()) first = {static_cast<int32_t>(c[0]), static_cast<int32_t>(c[1]), static_cast<int32_t>(c[2])};
        }
    }
    CHECK(count == 2);
    CHECK(fields::get(2, 3)->modulus == first);
}

TEST_CASE("not prime is rejected") {
    CHECK_THROWS_AS((void)fields::get(6, 1), Error);
}

TEST_CASE("descriptors are interned") {
    CHECK(fields::get(3, 2) == fields::get(3, 2));
}

TEST_CASE("field arithmetic in F_9") {
    const FieldDescriptor* f9 = fields::get(3, 2);
    for (const auto& a : fields::all_elements(f9)) {
        if (a.is_zero()) continue;
        CHECK((a * a.inv()).is_one());
        CHECK(a.pow(8).is_one());
        CHECK(a.frobenius() == a.pow(3));
        CHECK(a.frobenius_inv().frobenius() == a);
    }
}

TEST_CASE("embedding fixes the prime field") {
    const FieldDescriptor* f3 = fields::get(3, 1);
    const FieldDescriptor* f9 = fields::get(3, 2);
    FieldElement two = FieldElement::from_encoding(f3, 2);
    FieldElement img = fields::embed(two, f9);
    CHECK(img.coeffs() == std::vector<int32_t>{2, 0});
    CHECK(fields::embed(FieldElement::one(f3), f9).is_one());
}

TEST_CASE("embedding is a homomorphism on small fields") {
    const FieldDescriptor* f4 = fields::get(2, 2);
    const FieldDescriptor* f16 = fields::get(2, 4);
    auto elems = fields::all_elements(f4);
    for (const auto& a : elems)
        for (const auto& b : elems) {
            CHECK(fields::embed(a * b, f16) == fields::embed(a, f16) * fields::embed(b, f16));
            CHECK(fields::embed(a + b, f16) == fields::embed(a, f16) + fields::embed(b, f16));
        }
}

TEST_CASE("embeddings compose through the tower") {
    const FieldDescriptor* f2 = fields::get(2, 1);
    const FieldDescriptor* f4 = fields::get(2, 2);
    const FieldDescriptor* f16 = fields::get(2, 4);
    for (const auto& a : fields::all_elements(f2))
        CHECK(fields::embed(fields::embed(a, f4), f16) == fields::embed(a, f16));
    // and the direct embedding is deterministic across calls
    for (const auto& a : fields::all_elements(f4))
        CHECK(fields::embed(a, f16) == fields::embed(a, f16));
}

TEST_CASE("no embedding when degrees do not divide") {
    const FieldDescriptor* f4 = fields::get(2, 2);
    const FieldDescriptor* f8 = fields::get(2, 3);
    CHECK_THROWS_AS((void)fields::embed(FieldElement::gen(f4), f8), Error);
}

TEST_CASE("projection inverts embedding") {
    const FieldDescriptor* f3 = fields::get(3, 1);
    const FieldDescriptor* f27 = fields::get(3, 3);
    for (const auto& a : fields::all_elements(f3)) {
        auto back = fields::project(fields::embed(a, f27), f3);
        REQUIRE(back.has_value());
        CHECK(*back == a);
    }
    // the generator of F_27 does not lie in F_3
    CHECK_FALSE(fields::project(FieldElement::gen(f27), f3).has_value());
}

TEST_CASE("tower coordinates reassemble") {
    const FieldDescriptor* f4 = fields::get(2, 2);
    const FieldDescriptor* f16 = fields::get(2, 4);
    for (const auto& x : fields::all_elements(f16)) {
        auto coords = fields::tower_coords(x, f4);
        REQUIRE(coords.size() == 2);
        CHECK(fields::tower_lift(coords, f16) == x);
    }
}

TEST_CASE("roots of a splitting polynomial") {
    const FieldDescriptor* f9 = fields::get(3, 2);
    // x^2 + 1 splits over F_9
    Poly f(f9, {FieldElement::one(f9), FieldElement::zero(f9), FieldElement::one(f9)});
    auto roots = find_roots(f);
    CHECK(roots.size() == 2);
    for (const auto& r : roots) CHECK((r * r + FieldElement::one(f9)).is_zero());
}

TEST_CASE("concurrent field tower access") {
    // registry lookups, embeddings, and arithmetic from several threads
    std::vector<std::thread> workers;
    std::atomic<bool> ok{true};
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&, w] {
            try {
                for (int it = 0; it < 40; ++it) {
                    const FieldDescriptor* sub = fields::get(3, 1 + (it + w) % 2);
                    const FieldDescriptor* big = fields::get(3, 2 * sub->n);
                    FieldElement g = FieldElement::gen(sub);
                    FieldElement img = fields::embed(g, big);
                    if (!(fields::embed(g * g, big) == img * img)) ok = false;
                    auto back = fields::project(img, sub);
                    if (!back || !(*back == g)) ok = false;
                }
            } catch (...) {
                ok = false;
            }
        });
    for (auto& t : workers) t.join();
    CHECK(ok.load());
}
