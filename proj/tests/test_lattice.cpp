#include <doctest.h>

#include "wzlq/lattice.hpp"
#include "wzlq/rng.hpp"

#include <cmath>

using namespace wzlq;

TEST_CASE("lattice construction") {
    auto z1 = make_zn(1);
    CHECK(z1.dim == 1);
    CHECK(voronoi_volume(z1) == doctest::Approx(1.0));

    auto a2 = make_a2(false);
    CHECK(voronoi_volume(a2) == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(a2.basis(0, 0) == doctest::Approx(1.0));
    CHECK(a2.basis(1, 1) == doctest::Approx(std::sqrt(3.0) / 2.0));

    auto a2n = make_a2(true);
    CHECK(voronoi_volume(a2n) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a2n.det_normalized);

    Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
    CHECK_THROWS(make_lattice(singular));
}

TEST_CASE("scaling") {
    auto a2 = make_a2(true);
    auto s2 = scale(a2, 2.0);
    CHECK(voronoi_volume(s2) == doctest::Approx(4.0));
    auto z1 = make_zn(1);
    CHECK(scale(z1, 0.5).basis(0, 0) == doctest::Approx(0.5));
    auto ab = scale(scale(a2, 1.5), 2.0);
    auto prod = scale(a2, 3.0);
    CHECK((ab.basis - prod.basis).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS(scale(z1, -1.0));
}

TEST_CASE("nearest point basics") {
    auto z1 = make_zn(1);
    Eigen::VectorXd x(1);
    x << 0.4;
    CHECK(nearest_point(z1, x).coords[0] == 0);

    auto z2 = make_zn(2);
    Eigen::VectorXd x2(2);
    x2 << 0.6, -1.2;
    auto p = nearest_point(z2, x2);
    CHECK(p.coords[0] == 1);
    CHECK(p.coords[1] == -1);

    // frozen oracle: brute-force search over a coefficient box puts the
    // nearest A2 point to (0.9, 0.1) at coords (1, 0), distance^2 = 0.02
    auto a2 = make_a2(false);
    Eigen::VectorXd xa(2);
    xa << 0.9, 0.1;
    auto pa = nearest_point(a2, xa);
    CHECK(pa.coords[0] == 1);
    CHECK(pa.coords[1] == 0);
    CHECK((xa - pa.embedding).squaredNorm() == doctest::Approx(0.02));

    Eigen::VectorXd bad(1);
    bad << std::nan("");
    CHECK_THROWS(nearest_point(z1, bad));
}

TEST_CASE("nearest point tie rule is lexicographic") {
    auto z1 = make_zn(1);
    Eigen::VectorXd x(1);
    x << 0.5; // equidistant from 0 and 1
    CHECK(nearest_point(z1, x).coords[0] == 0);
    x << -0.5; // equidistant from -1 and 0
    CHECK(nearest_point(z1, x).coords[0] == -1);
}

TEST_CASE("nearest point properties") {
    auto a2 = make_a2(false);
    Rng rng(42);
    for (int t = 0; t < 2000; ++t) {
        Eigen::VectorXd x(2);
        x << 4.0 * rng.uniform_sym(), 4.0 * rng.uniform_sym();
        auto q = nearest_point(a2, x);

        // shift equivariance, exact in integer coordinates
        Eigen::VectorXi lam(2);
        lam << static_cast<int>(rng.next_u64() % 7) - 3,
               static_cast<int>(rng.next_u64() % 7) - 3;
        Eigen::VectorXd shifted = x + a2.basis * lam.cast<double>();
        auto qs = nearest_point(a2, shifted);
        CHECK(qs.coords == q.coords + lam);

        // idempotence
        auto qq = nearest_point(a2, q.embedding);
        CHECK(qq.coords == q.coords);

        // scaling covariance
        double s = 0.3 + 2.0 * rng.uniform();
        auto qsc = nearest_point(scale(a2, s), s * x);
        CHECK(qsc.coords == q.coords);

        // membership: beats random competitors
        double d = (x - q.embedding).squaredNorm();
        for (int c = 0; c < 20; ++c) {
            Eigen::VectorXi comp(2);
            comp << static_cast<int>(rng.next_u64() % 11) - 5,
                    static_cast<int>(rng.next_u64() % 11) - 5;
            Eigen::VectorXd pe = a2.basis * comp.cast<double>();
            CHECK(d <= (x - pe).squaredNorm() + 1e-12);
        }
    }
}

TEST_CASE("second moment estimates") {
    auto z1 = make_zn(1);
    auto est = second_moment_mc(z1, 200000, 7);
    CHECK(std::abs(est.g - 1.0 / 12.0) < 3.0 * est.stderr_);

    auto z2 = make_zn(2);
    auto est2 = second_moment_mc(z2, 200000, 7);
    CHECK(std::abs(est2.g - 1.0 / 12.0) < 3.0 * est2.stderr_);

    auto a2 = make_a2(false);
    auto esta = second_moment_mc(a2, 400000, 7);
    double g_a2 = 5.0 / (36.0 * std::sqrt(3.0)); // 0.080188
    CHECK(std::abs(esta.g - g_a2) < 3.0 * esta.stderr_);

    // doubling trials shrinks stderr roughly by sqrt(2)
    auto small = second_moment_mc(z1, 100000, 11);
    auto big = second_moment_mc(z1, 400000, 11);
    CHECK(big.stderr_ < small.stderr_);

    CHECK_THROWS(second_moment_mc(z1, 100, 1));
}

TEST_CASE("second moment is deterministic given seed") {
    auto a2 = make_a2(false);
    auto e1 = second_moment_mc(a2, 50000, 123);
    auto e2 = second_moment_mc(a2, 50000, 123);
    CHECK(e1.g == e2.g);
    CHECK(e1.stderr_ == e2.stderr_);
}
