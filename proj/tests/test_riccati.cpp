#include <doctest.h>

#include <cmath>
#include <random>

#include "anosov/errors.hpp"
#include "anosov/riccati.hpp"
#include "oracle.hpp"

using namespace anosov;

namespace {
const char* kSin = "-1 + 0.9*sin(s)";
const double kSinK = std::sqrt(1.9);
// Composite Simpson of a^-2 on [2, 200] over an RK4 path with h = 1e-3.
constexpr double kSinTailAt2 = 0.125065154792769;
}  // namespace

TEST_CASE("riccati_from_jacobi examples") {
    const CurvatureProfile m1 = constant_profile(-1.0);
    const RiccatiSolution u = riccati_from_jacobi(solve_a(m1, {-1, 10}), {0.5, 10});
    for (double s = 0.5; s <= 10; s += 0.01) REQUIRE(std::abs(u.u(s) - 1.0 / std::tanh(s)) <= 1e-8);

    const StableData st = stable_solution(m1, {-64, 64});
    const RiccatiSolution ud = riccati_from_jacobi(st.d, {-5, 5});
    for (double s = -5; s <= 5; s += 0.01) REQUIRE(std::abs(ud.u(s) + 1.0) <= 1e-8);

    try {
        riccati_from_jacobi(solve_a(constant_profile(1.0), {0, 4}), {0.5, 3.5});
        FAIL("expected PoleError");
    } catch (const PoleError& e) {
        CHECK(e.bracket().first <= M_PI);
        CHECK(e.bracket().second >= M_PI);
    }
}

TEST_CASE("green bound examples") {
    const CurvatureProfile m1 = constant_profile(-1.0);
    const StableData st = stable_solution(m1, {-64, 64});
    const BoundReport pass = verify_green_bound(riccati_from_jacobi(st.d, {-10, 10}), 1.0, {-10, 10});
    CHECK(pass.pass);
    CHECK(pass.max_violation <= 1e-12);
    CHECK(pass.note.find("on window") != std::string::npos);

    const BoundReport fail = verify_green_bound(riccati_from_jacobi(solve_a(m1, {0, 10}), {0.5, 10}), 1.0, {0.5, 10});
    CHECK(!fail.pass);
    CHECK(fail.worst_s == doctest::Approx(0.5));
    CHECK(fail.max_violation == doctest::Approx(1.0 / std::tanh(0.5) - 1.0).epsilon(1e-8));

    const CurvatureProfile p = expression_profile(kSin);
    const StableData sp = stable_solution(p, {-64, 64});
    CHECK(verify_green_bound(riccati_from_jacobi(sp.d, {-20, 20}), kSinK, {-20, 20}).pass);
}

TEST_CASE("coth bound examples") {
    const CurvatureProfile m1 = constant_profile(-1.0);
    const BoundReport eq = verify_coth_bound(riccati_from_jacobi(solve_a(m1, {0, 20}), {0.01, 20}), 1.0, {0.01, 20});
    CHECK(eq.pass);
    CHECK(std::abs(eq.max_violation) <= 1e-7);

    const RiccatiSolution zero = riccati_from_jacobi(solve_b(constant_profile(0.0), {0, 10}), {0.01, 10});
    CHECK(verify_coth_bound(zero, 0.1, {0.01, 10}).pass);

    const CurvatureProfile p = expression_profile(kSin);
    const BoundReport sin = verify_coth_bound(riccati_from_jacobi(solve_a(p, {0, 20}), {0.05, 20}), kSinK, {0.05, 20});
    CHECK(sin.pass);
    CHECK(sin.worst_s >= 0.05);
    CHECK(sin.worst_s <= 20.0);
    CHECK_THROWS_AS(verify_coth_bound(zero, 0.1, {0.0, 1.0}), DomainError);
}

TEST_CASE("coth bound holds from 0.01 on random profiles without conjugate points") {
    std::mt19937_64 gen(8);
    for (int i = 0; i < 10; ++i) {
        const auto rp = oracle::negative_profile(gen);
        const CurvatureProfile p = expression_profile(rp.text, {-1e3, 1e3}, std::sqrt(-rp.min_kappa));
        const RiccatiSolution u = riccati_from_jacobi(solve_a(p, {0, 20}), {0.01, 20});
        CHECK(verify_coth_bound(u, p.lower_bound_k, {0.01, 20}).pass);
    }
}

TEST_CASE("norm derivative bound examples") {
    const BoundReport h = norm_derivative_bound(constant_profile(-1.0), {-20, 20}, 1.0);
    CHECK(h.pass);
    CHECK(std::abs(h.max_violation) <= 1e-7);
    CHECK(norm_derivative_bound(constant_profile(0.0), {-20, 20}, 0.1).pass);
    CHECK(norm_derivative_bound(expression_profile(kSin), {-20, 20}, kSinK, 0.05).pass);
}

TEST_CASE("tail mass examples") {
    const CurvatureProfile m1 = constant_profile(-1.0);
    CHECK(std::abs(tail_mass(m1, 1.0, 64.0) - (1.0 / std::tanh(1.0) - 1.0)) <= 1e-9);
    CHECK(tail_mass(m1, 1.0, 64.0) == doctest::Approx(0.3130353).epsilon(1e-7));
    CHECK(std::abs(tail_mass(m1, 10.0, 64.0) - (1.0 / std::tanh(10.0) - 1.0)) <= 1e-12);
    const CurvatureProfile p = expression_profile(kSin);
    CHECK(std::abs(tail_mass(p, 2.0, 64.0) - kSinTailAt2) <= 1e-7);
}

TEST_CASE("tail mass is nonnegative and nonincreasing") {
    const CurvatureProfile p = expression_profile(kSin);
    double prev = tail_mass(p, 0.25, 64.0);
    CHECK(prev >= 0.0);
    for (double s = 0.5; s <= 12.0; s += 0.25) {
        const double m = tail_mass(p, s, 64.0);
        REQUIRE(m >= -1e-10);
        REQUIRE(prev >= m - 1e-10);
        prev = m;
    }
}

TEST_CASE("growth threshold examples") {
    const GrowthReport h = growth_threshold(constant_profile(-1.0), 10.0, {-20, 20}, 1.0);
    CHECK(h.conclusive);
    CHECK(std::abs(h.T - std::asinh(10.0)) <= 1e-3);
    CHECK(h.cross_checked);
    CHECK(h.sufficient_condition_holds);
    REQUIRE(h.sufficient_T);
    CHECK(*h.sufficient_T >= h.T);

    const GrowthReport f = growth_threshold(constant_profile(0.0), 10.0, {-20, 20}, 0.1);
    CHECK(f.conclusive);
    CHECK(std::abs(f.T - 10.0) <= 1e-3);

    const GrowthReport s = growth_threshold(expression_profile(kSin), 100.0, {-20, 20}, kSinK);
    CHECK(s.conclusive);
    CHECK(std::isfinite(s.T));
    CHECK(s.T >= std::asinh(100.0 * kSinK) / kSinK);

    const GrowthReport short_window = growth_threshold(constant_profile(0.0), 100.0, {-20, 20}, 0.1);
    CHECK(!short_window.conclusive);
}

TEST_CASE("growth threshold is nondecreasing in R") {
    const CurvatureProfile p = expression_profile(kSin);
    double prev = 0.0;
    for (double R : {1.5, 3.0, 10.0, 30.0, 100.0, 1000.0}) {
        const GrowthReport g = growth_threshold(p, R, {-20, 20}, kSinK);
        REQUIRE(g.conclusive);
        CHECK(g.T >= prev);
        prev = g.T;
    }
}

TEST_CASE("stable slope bound examples") {
    const StableData h = stable_data(constant_profile(-1.0), {-64, 64});
    const BoundReport bh = stable_slope_bound(h, 1.0, {-20, 20});
    CHECK(bh.pass);
    CHECK(std::abs(bh.max_violation) <= 1e-7);
    CHECK(stable_slope_bound(stable_data(constant_profile(0.0), {-64, 64}), 0.1, {-20, 20}).pass);
    CHECK(stable_slope_bound(stable_data(expression_profile(kSin), {-64, 64}), kSinK, {-20, 20}).pass);
}

TEST_CASE("riccati residual of a nonvanishing solution") {
    const CurvatureProfile p = expression_profile(kSin);
    const StableData st = stable_solution(p, {-64, 64});
    const RiccatiSolution u = riccati_from_jacobi(st.d, {-10, 10});
    const double h = 1e-4;
    for (double s = -9.9; s <= 9.9; s += 0.013) {
        const double up = (u.u(s + h) - u.u(s - h)) / (2 * h);
        REQUIRE(std::abs(up + u.u(s) * u.u(s) + p(s)) <= 1e-6);
    }
}
