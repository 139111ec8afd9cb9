#include <benchmark/benchmark.h>

#include "anderson/algebra.hpp"
#include "anderson/corpus.hpp"
#include "anderson/local.hpp"

using namespace anderson;
using namespace anderson::corpus;

namespace {

void bm_field_mul(benchmark::State& state) {
    const FieldDescriptor* f = fields::get(3, static_cast<int>(state.range(0)));
    FieldElement a = FieldElement::gen(f);
    FieldElement b = a + FieldElement::one(f);
    for (auto _ : state) {
        b = a * b;
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(bm_field_mul)->Arg(2)->Arg(6)->Arg(12);

void bm_char_poly(benchmark::State& state) {
    Motive m = sqrt_family(3, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        XPoly cp = char_poly(m.frobenius_matrix());
        benchmark::DoNotOptimize(cp);
    }
}
BENCHMARK(bm_char_poly)->Arg(1)->Arg(3);

void bm_factor_over_A(benchmark::State& state) {
    const FieldDescriptor* f3 = fields::get(3, 1);
    // (x^2 - t)(x^2 - t - 1)(x - t)
    XPoly a(f3, {-Poly::x(f3), Poly::zero(f3), Poly::one(f3)});
    XPoly b(f3, {-Poly::x(f3) - Poly::one(f3), Poly::zero(f3), Poly::one(f3)});
    XPoly c(f3, {-Poly::x(f3), Poly::one(f3)});
    XPoly prod = a * b * c;
    for (auto _ : state) {
        auto fac = factor_over_A(prod);
        benchmark::DoNotOptimize(fac);
    }
}
BENCHMARK(bm_factor_over_A);

void bm_solve_hom(benchmark::State& state) {
    Motive m = base_extend(unipotent_example(3), static_cast<int>(state.range(0)));
    for (auto _ : state) {
        HomBasis hb = solve_hom(m, m);
        benchmark::DoNotOptimize(hb);
    }
}
BENCHMARK(bm_solve_hom)->Arg(1)->Arg(3);

void bm_smith(benchmark::State& state) {
    Motive m = sqrt_family(3, 2);
    Morphism pi(m, m, m.frobenius_matrix());
    for (auto _ : state) {
        IsogenyData d = isogeny_data(pi);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(bm_smith);

void bm_hasse(benchmark::State& state) {
    Motive m = base_extend(biquadratic_example(3, 1, 1), 2);
    for (auto _ : state) {
        EndAlgebraReport rep = hasse_invariants(m);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(bm_hasse);

void bm_tate(benchmark::State& state) {
    Motive m = sqrt_family(3, 1);
    Place v = Place::finite(Poly::x(m.coeff_field()) + Poly::one(m.coeff_field()));
    for (auto _ : state) {
        TateModuleData td = tate_module(m, v, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(td);
    }
}
BENCHMARK(bm_tate)->Arg(1)->Arg(2);

} // namespace

BENCHMARK_MAIN();
