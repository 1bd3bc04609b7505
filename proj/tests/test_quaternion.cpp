#include <doctest.h>

#include <cmath>

#include "slicereg/quaternion.hpp"
#include "slicereg/verify.hpp"

using namespace slicereg;

namespace {
double dev(const Quaterniond& a, const Quaterniond& b) { return (a - b).norm(); }
const Quaterniond e1 = Quaterniond::e1();
const Quaterniond e2 = Quaterniond::e2();
const Quaterniond e3 = Quaterniond::e3();
}  // namespace

TEST_SUITE("quaternion") {

TEST_CASE("basis products") {
    CHECK(e1 * e2 == e3);
    CHECK(e2 * e3 == e1);
    CHECK(e3 * e1 == e2);
    CHECK(e2 * e1 == -e3);
    CHECK(e1 * e1 == Quaterniond(-1));
    CHECK(e2 * e2 == Quaterniond(-1));
    CHECK(e3 * e3 == Quaterniond(-1));
}

TEST_CASE("multiplication identity and expansion") {
    const Quaterniond q(0.3, -1.2, 0.5, 2.0);
    CHECK(Quaterniond(1) * q == q);
    CHECK(q * Quaterniond(1) == q);
    const Quaterniond p = (Quaterniond(1) + e1) * (Quaterniond(1) + e2);
    CHECK(p == Quaterniond(1) + e1 + e2 + e3);
}

TEST_CASE("multiplicativity of the norm") {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const Quaterniond p = rng.quat();
        const Quaterniond q = rng.quat();
        CHECK(std::abs((p * q).norm() - p.norm() * q.norm()) <=
              1e-12 * p.norm() * q.norm());
    }
}

TEST_CASE("associativity and distributivity") {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const Quaterniond p = rng.quat();
        const Quaterniond q = rng.quat();
        const Quaterniond r = rng.quat();
        CHECK(dev((p * q) * r, p * (q * r)) <= 1e-12 * p.norm() * q.norm() * r.norm());
        CHECK(dev(p * (q + r), p * q + p * r) <= 1e-12);
    }
}

TEST_CASE("inverse") {
    CHECK(Quaterniond(2).inverse() == Quaterniond(0.5));
    CHECK(e1.inverse() == -e1);
    const Quaterniond q = Quaterniond(1) + e1;
    CHECK(dev(q.inverse(), 0.5 * (Quaterniond(1) - e1)) == 0);
    CHECK(dev(q * q.inverse(), Quaterniond(1)) <= 1e-15);
    CHECK(dev(q.inverse() * q, Quaterniond(1)) <= 1e-15);
    CHECK_THROWS_AS(Quaterniond().inverse(), std::domain_error);
}

TEST_CASE("conjugation") {
    const Quaterniond q(0.3, -1.2, 0.5, 2.0);
    CHECK(q.conj() == Quaterniond(0.3, 1.2, -0.5, -2.0));
    CHECK(dev(q * q.conj(), Quaterniond(q.squared_norm())) <= 1e-14 * q.squared_norm());
    const Quaterniond p(1.5, 0.2, -0.7, 0.1);
    CHECK(dev((p * q).conj(), q.conj() * p.conj()) <= 1e-14);
}

TEST_CASE("slice decomposition") {
    const SlicePointd s1 = slice_decompose(Quaterniond(1) + 2.0 * e2);
    CHECK(s1.xcoord == 1);
    CHECK(s1.ycoord == 2);
    CHECK(dev(s1.unit.embed(), e2) == 0);

    const SlicePointd s2 = slice_decompose(Quaterniond(3));
    CHECK(s2.xcoord == 3);
    CHECK(s2.ycoord == 0);
    CHECK(dev(s2.unit.embed(), e1) == 0);

    const SlicePointd s3 = slice_decompose(e1 + e2);
    CHECK(s3.xcoord == 0);
    CHECK(s3.ycoord == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(dev(s3.unit.embed(), (1 / std::sqrt(2.0)) * (e1 + e2)) <= 1e-15);
}

TEST_CASE("slice reassembly round-trip") {
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        const Quaterniond q = rng.quat(2.0);
        const Quaterniond back = slice_decompose(q).reassemble();
        CHECK(std::abs(back.w() - q.w()) <= 1e-15 * (1 + std::abs(q.w())));
        CHECK(std::abs(back.x() - q.x()) <= 1e-15 * (1 + std::abs(q.x())));
        CHECK(std::abs(back.y() - q.y()) <= 1e-15 * (1 + std::abs(q.y())));
        CHECK(std::abs(back.z() - q.z()) <= 1e-15 * (1 + std::abs(q.z())));
    }
}

TEST_CASE("imaginary unit from angles") {
    const double pi = 3.141592653589793238462643383279502884;
    CHECK(dev(imaginary_from_angles(0.0, 1.3).embed(), e1) <= 1e-15);
    CHECK(dev(imaginary_from_angles(pi / 2, 0.0).embed(), e2) <= 1e-15);
    CHECK(dev(imaginary_from_angles(pi / 2, pi / 2).embed(), e3) <= 1e-15);
    CHECK_THROWS_AS(imaginary_from_angles(-0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(imaginary_from_angles(0.0, 3.2), std::domain_error);

    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        const Quaterniond I =
            imaginary_from_angles(rng.uniform(0, pi), rng.uniform(0, pi)).embed();
        CHECK(dev(I * I, Quaterniond(-1)) <= 1e-14);
    }
}

TEST_CASE("unit imaginary rejects zero direction") {
    CHECK_THROWS_AS(UnitImaginaryd(Eigen::Vector3d(0, 0, 0)), std::domain_error);
}

TEST_CASE("vector round-trip") {
    const Quaterniond q(0.3, -1.2, 0.5, 2.0);
    CHECK(Quaterniond(q.vec4()) == q);
}

}  // TEST_SUITE
