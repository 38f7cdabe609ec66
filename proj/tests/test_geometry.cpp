#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ssn/geometry.hpp"
#include "ssn/linalg/rng.hpp"
#include "support/oracles.hpp"

using namespace ssn;
using geom::SpherePoint;
using geom::TangentVector;
using linalg::Vec;

namespace {

constexpr double kPi = 3.14159265358979323846;

SpherePoint axis(std::size_t n, std::size_t i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    return SpherePoint(std::move(e));
}

} // namespace

TEST_CASE("SpherePoint construction enforces unit norm and dimension") {
    CHECK_THROWS_AS(SpherePoint(Vec{1.0}), GeometryError);
    CHECK_THROWS_AS(SpherePoint(Vec{1.0, 1.0}), GeometryError);
    CHECK_THROWS_AS(SpherePoint::normalized(Vec{0.0, 0.0}), GeometryError);
    const SpherePoint p = SpherePoint::normalized(Vec{3.0, 4.0});
    CHECK(p[0] == doctest::Approx(0.6));
    CHECK(p[1] == doctest::Approx(0.8));
}

TEST_CASE("project_to_tangent matches the analytic cases") {
    const SpherePoint e1 = axis(2, 0);
    // u = p projects to zero
    const TangentVector z = geom::project_to_tangent(e1, e1.coords());
    CHECK(z.norm() == 0.0);
    // u = (2, 3) keeps only the tangent part
    const TangentVector t = geom::project_to_tangent(e1, Vec{2.0, 3.0});
    CHECK(t.coords()[0] == 0.0);
    CHECK(t.coords()[1] == 3.0);
    // idempotence on an already tangent vector
    const TangentVector t2 = geom::project_to_tangent(e1, t.coords());
    CHECK(t2.coords() == t.coords());
}

TEST_CASE("projection is idempotent and self-adjoint on random inputs") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 200; ++rep) {
        const auto p = testing::random_point(6, gen);
        Vec u(6), w(6);
        for (auto& x : u) x = rng::uniform_real(gen, -2.0, 2.0);
        for (auto& x : w) x = rng::uniform_real(gen, -2.0, 2.0);
        const Vec pu = geom::project_to_tangent(p, u).coords();
        const Vec pw = geom::project_to_tangent(p, w).coords();
        const Vec ppu = geom::project_to_tangent(p, pu).coords();
        for (std::size_t i = 0; i < 6; ++i) CHECK(ppu[i] == doctest::Approx(pu[i]).epsilon(1e-12));
        CHECK(linalg::dot(pu, w) == doctest::Approx(linalg::dot(u, pw)).epsilon(1e-12));
    }
}

TEST_CASE("exp_map analytic values") {
    const SpherePoint e1 = axis(2, 0);
    // zero velocity stays put
    const SpherePoint same = geom::exp_map(TangentVector(e1, Vec{0.0, 0.0}));
    CHECK(same.coords() == e1.coords());
    // quarter great circle lands on e2
    const SpherePoint q = geom::exp_map(TangentVector(e1, Vec{0.0, kPi / 2}));
    CHECK(q[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q[1] == doctest::Approx(1.0));
    // half circle lands on the antipode
    const SpherePoint a = geom::exp_map(TangentVector(e1, Vec{0.0, kPi}));
    CHECK(a[0] == doctest::Approx(-1.0));
    CHECK(std::abs(a[1]) < 1e-12);
}

TEST_CASE("log_map analytic values and antipodal rejection") {
    const SpherePoint e1 = axis(2, 0);
    const SpherePoint e2 = axis(2, 1);
    CHECK(geom::log_map(e1, e1).norm() == 0.0);
    const TangentVector v = geom::log_map(e1, e2);
    CHECK(v.coords()[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.coords()[1] == doctest::Approx(kPi / 2));
    const SpherePoint minus = SpherePoint(Vec{-1.0, 0.0});
    CHECK_THROWS_AS(geom::log_map(e1, minus), AntipodalPointsError);
}

TEST_CASE("distance analytic values") {
    const SpherePoint e1 = axis(3, 0);
    const SpherePoint e2 = axis(3, 1);
    const SpherePoint m = SpherePoint(Vec{-1.0, 0.0, 0.0});
    CHECK(geom::distance(e1, e1) == 0.0);
    CHECK(geom::distance(e1, e2) == doctest::Approx(kPi / 2));
    CHECK(geom::distance(e1, m) == doctest::Approx(kPi));
    CHECK(geom::distance(e1, e2) == geom::distance(e2, e1));
}

TEST_CASE("parallel transport analytic cases") {
    const SpherePoint e1 = axis(3, 0);
    const SpherePoint e2 = axis(3, 1);
    // v orthogonal to the geodesic plane is untouched
    const TangentVector vz(e1, Vec{0.0, 0.0, 1.0});
    const TangentVector tz = geom::parallel_transport(vz, e2);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(tz.coords()[i] == doctest::Approx(vz.coords()[i]).epsilon(1e-14));
    }
    // v along the geodesic rotates onto -e1
    const TangentVector vy(e1, Vec{0.0, 1.0, 0.0});
    const TangentVector ty = geom::parallel_transport(vy, e2);
    CHECK(ty.coords()[0] == doctest::Approx(-1.0));
    CHECK(std::abs(ty.coords()[1]) < 1e-15);
    CHECK(std::abs(ty.coords()[2]) < 1e-15);
    // q = p keeps v
    const TangentVector self = geom::parallel_transport(vy, e1);
    CHECK(self.coords() == vy.coords());
}

TEST_CASE("parallel transport agrees with the transport ODE oracle") {
    std::mt19937_64 gen(6);
    for (int rep = 0; rep < 25; ++rep) {
        const auto p = testing::random_point(5, gen);
        auto q = testing::random_point(5, gen);
        if (geom::distance(p, q) > kPi - 0.2) continue;
        const auto v = testing::random_tangent(p, gen);
        const Vec got = geom::parallel_transport(v, q).coords();
        const Vec want = testing::transport_by_ode(v, q, 2000);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("geometry property suite on random triples") {
    std::mt19937_64 gen(7);
    for (std::size_t n : {2UL, 3UL, 10UL}) {
        for (int rep = 0; rep < 1000; ++rep) {
            const auto p = testing::random_point(n, gen);
            const auto u = testing::random_tangent(p, gen);
            const auto v = testing::random_tangent(p, gen);

            // exp stays on the sphere
            const SpherePoint eu = geom::exp_map(u);
            CHECK(std::abs(linalg::norm2(eu.coords()) - 1.0) <= 1e-12);

            // non-expansiveness
            const double d = geom::distance(geom::exp_map(u), geom::exp_map(v));
            CHECK(d <= linalg::norm2(linalg::sub(u.coords(), v.coords())) + 1e-10);

            // exp/log round trip away from the antipode
            const auto q = testing::random_point(n, gen);
            if (geom::distance(p, q) < kPi - 0.1) {
                const SpherePoint back = geom::exp_map(geom::log_map(p, q));
                for (std::size_t i = 0; i < n; ++i) {
                    CHECK(back[i] == doctest::Approx(q[i]).epsilon(1e-9));
                }
                CHECK(geom::distance(p, q) ==
                      doctest::Approx(geom::log_map(p, q).norm()).epsilon(1e-12));
            }

            // transport isometry and tangency
            if (geom::distance(p, q) < kPi - 0.1) {
                const TangentVector t = geom::parallel_transport(u, q);
                CHECK(std::abs(t.norm() - u.norm()) <= 1e-12 * std::max(1.0, u.norm()));
                CHECK(std::abs(linalg::dot(q.coords(), t.coords())) <=
                      1e-10 * std::max(1.0, t.norm()));
            }
        }
    }
}

TEST_CASE("tangent_basis spans the tangent space orthonormally") {
    std::mt19937_64 gen(8);
    SUBCASE("n=2 gives the unique column up to sign") {
        const auto basis = geom::tangent_basis(axis(2, 0));
        CHECK(basis.columns().rows() == 2);
        CHECK(basis.columns().cols() == 1);
        CHECK(std::abs(std::abs(basis.columns()(1, 0)) - 1.0) <= 1e-15);
        CHECK(std::abs(basis.columns()(0, 0)) <= 1e-15);
    }
    SUBCASE("columns orthonormal and orthogonal to p; embedded vectors are tangent") {
        for (int rep = 0; rep < 50; ++rep) {
            const std::size_t n = 2 + rep % 9;
            const auto p = testing::random_point(n, gen);
            const auto basis = geom::tangent_basis(p);
            const auto& q = basis.columns();
            for (std::size_t a = 0; a + 1 < n; ++a) {
                double qp = 0.0;
                for (std::size_t i = 0; i < n; ++i) qp += q(i, a) * p[i];
                CHECK(std::abs(qp) <= 1e-12);
                for (std::size_t b = 0; b + 1 < n; ++b) {
                    double g = 0.0;
                    for (std::size_t i = 0; i < n; ++i) g += q(i, a) * q(i, b);
                    CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) <= 1e-12);
                }
            }
            Vec w(n - 1);
            for (auto& x : w) x = rng::uniform_real(gen, -3.0, 3.0);
            const TangentVector embedded = basis.embed(w); // ctor checks tangency
            CHECK(std::abs(linalg::dot(p.coords(), embedded.coords())) <=
                  1e-10 * std::max(1.0, embedded.norm()));
        }
    }
    SUBCASE("deterministic for a given p") {
        const auto p = testing::random_point(7, gen);
        CHECK(geom::tangent_basis(p).columns() == geom::tangent_basis(p).columns());
    }
}

TEST_CASE("pole reflector reduction agrees with the materialized basis") {
    std::mt19937_64 gen(9);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + rep % 7;
        const auto p = testing::random_point(n, gen);
        const auto h = geom::pole_reflector(p);
        const auto basis = geom::tangent_basis(p);
        Vec w(n - 1);
        for (auto& x : w) x = rng::uniform_real(gen, -1.0, 1.0);
        // Q w computed through the reflector vs the explicit columns
        Vec padded(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) padded[i] = w[i - 1];
        const Vec via_reflector = h.apply(padded);
        const Vec via_columns = basis.embed(w).coords();
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(via_reflector[i] == doctest::Approx(via_columns[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("exp handles tiny velocities through the series branch") {
    const SpherePoint e1 = axis(3, 0);
    const TangentVector tiny(e1, Vec{0.0, 1e-15, -2e-16});
    const SpherePoint q = geom::exp_map(tiny);
    CHECK(std::abs(linalg::norm2(q.coords()) - 1.0) <= 1e-15);
    CHECK(q[1] == doctest::Approx(1e-15).epsilon(1e-3));
    const TangentVector small(e1, Vec{0.0, 1e-9, 0.0});
    const SpherePoint qs = geom::exp_map(small);
    CHECK(geom::distance(e1, qs) == doctest::Approx(1e-9).epsilon(1e-6));
}
