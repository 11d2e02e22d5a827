#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "levyfit/distance.hpp"
#include "levyfit/grid.hpp"

using namespace levyfit;

namespace {

Density random_unit_density(const Grid1D& g, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(g.size());
    for (double& x : v) x = u(eng);
    Density d(g, std::move(v));
    const double mass = trapezoid_mass(d);
    for (double& x : d.values) x /= mass;
    return d;
}

Density gaussian_density(const Grid1D& g, double mu, double sigma) {
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double z = (g.node(j) - mu) / sigma;
        v[j] = std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
    }
    return Density(g, std::move(v));
}

}  // namespace

TEST_CASE("hellinger of a density with itself is exactly zero") {
    const Grid1D g(-2.0, 2.0, 41);
    std::mt19937_64 eng(1);
    const auto p = random_unit_density(g, eng);
    CHECK(hellinger_sq(p, p) == 0.0);
}

TEST_CASE("hand-computed toy value") {
    // p = (2, 0, 0), q = (0, 0, 2) on spacing 0.25: trapezoid weights are
    // (h/2, h, h/2), the integrand (sqrt(2) - 0)^2 = 2 at the two endpoints,
    // so H^2 = 0.5 * (0.125*2 + 0 + 0.125*2) = 0.25.
    const Grid1D g3(0.0, 0.5, 3);
    const Density p(g3, {2.0, 0.0, 0.0});
    const Density q(g3, {0.0, 0.0, 2.0});
    CHECK(hellinger_sq(p, q) == Catch::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("disjoint unit-mass supports give H^2 = 1") {
    const Grid1D g(0.0, 10.0, 101);
    std::vector<double> pv(g.size(), 0.0), qv(g.size(), 0.0);
    // unit-mass boxes on separate interior spans: 21 nodes at height v have
    // trapezoid mass 21 v h (20 full cells plus two half-ramps)
    for (std::size_t j = 10; j <= 30; ++j) pv[j] = 1.0 / (21.0 * g.spacing());
    for (std::size_t j = 60; j <= 80; ++j) qv[j] = 1.0 / (21.0 * g.spacing());
    const Density p(g, pv), q(g, qv);
    REQUIRE(trapezoid_mass(p) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(hellinger_sq(p, q) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("hellinger axioms on random unit-mass densities") {
    const Grid1D g(-1.0, 1.0, 101);
    std::mt19937_64 eng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_unit_density(g, eng);
        const auto q = random_unit_density(g, eng);
        const auto r = random_unit_density(g, eng);
        const double pq = hellinger_sq(p, q);
        REQUIRE(pq == hellinger_sq(q, p));  // symmetric arithmetic, bit-exact
        REQUIRE(pq >= 0.0);
        REQUIRE(pq <= 1.0 + 1e-9);
        const double pr = hellinger_sq(p, r);
        const double qr = hellinger_sq(q, r);
        REQUIRE(std::sqrt(pr) <= std::sqrt(pq) + std::sqrt(qr) + 1e-9);
    }
}

TEST_CASE("zero iff nodewise equal") {
    const Grid1D g(-1.0, 1.0, 21);
    std::mt19937_64 eng(3);
    const auto p = random_unit_density(g, eng);
    auto q = p;
    q.values[10] += 1e-6;
    CHECK(hellinger_sq(p, q) > 1e-16);
    CHECK(hellinger_sq(p, p) == 0.0);
}

TEST_CASE("tiny negatives are clamped and counted; larger ones rejected") {
    const Grid1D g(0.0, 1.0, 5);
    const Density p(g, {0.0, -5e-9, 1.0, 2.0, 0.0});
    const Density q(g, {0.0, 0.0, 1.0, 2.0, 0.0});
    std::size_t clamped = 0;
    CHECK(hellinger_sq(p, q, &clamped) == Catch::Approx(0.0).margin(1e-12));
    CHECK(clamped == 1);
    const Density bad(g, {0.0, -1e-6, 1.0, 2.0, 0.0});
    CHECK_THROWS_AS(hellinger_sq(bad, q), std::domain_error);
}

TEST_CASE("grid mismatch is rejected") {
    const Grid1D g1(-1.0, 1.0, 11), g2(-1.0, 1.0, 21);
    const Density p = Density::zeros(g1), q = Density::zeros(g2);
    CHECK_THROWS_AS(hellinger_sq(p, q), grid_mismatch_error);
    CHECK_THROWS_AS(relative_l2(p, q), grid_mismatch_error);
    CHECK_THROWS_AS(absolute_sup(p, q), grid_mismatch_error);
}

TEST_CASE("relative L2 identities") {
    const Grid1D g(-2.0, 2.0, 81);
    const auto q = gaussian_density(g, 0.0, 0.5);
    CHECK(relative_l2(q, q) == 0.0);
    auto p = q;
    for (double& v : p.values) v *= 2.0;
    CHECK(relative_l2(p, q) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(relative_l2(q, Density::zeros(g)), std::domain_error);
}

TEST_CASE("absolute sup identities") {
    const Grid1D g(-2.0, 2.0, 81);
    const auto q = gaussian_density(g, 0.0, 0.5);
    CHECK(absolute_sup(q, q) == 0.0);
    auto p = q;
    p.values[40] += 0.125;
    CHECK(absolute_sup(p, q) == Catch::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("quadrature refinement changes H^2 only slightly for smooth pairs") {
    const Grid1D coarse(-8.0, 8.0, 201);
    const Grid1D fine(-8.0, 8.0, 401);
    const double h_coarse = hellinger_sq(gaussian_density(coarse, 0.0, 1.0), gaussian_density(coarse, 0.3, 1.2));
    const double h_fine = hellinger_sq(gaussian_density(fine, 0.0, 1.0), gaussian_density(fine, 0.3, 1.2));
    CHECK(std::abs(h_coarse - h_fine) < 1e-3);
}
