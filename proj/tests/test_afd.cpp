#include <doctest.h>

#include <cmath>

#include "slicereg/afd.hpp"
#include "slicereg/verify.hpp"

using namespace slicereg;

namespace {
double dev(const Quaterniond& a, const Quaterniond& b) { return (a - b).norm(); }
}  // namespace

TEST_SUITE("afd") {

TEST_CASE("super fibonacci points sit on the unit sphere") {
    const auto pts = super_fibonacci_s3<double>(512);
    CHECK(pts.size() == 512);
    for (const auto& p : pts)
        CHECK(std::abs(p.norm() - 1) <= 1e-14);
    // deterministic: regenerate and compare bitwise
    const auto again = super_fibonacci_s3<double>(512);
    for (size_t i = 0; i < pts.size(); ++i)
        CHECK(pts[i] == again[i]);
}

TEST_CASE("objective at step one is the weighted modulus") {
    Rng rng(51);
    const SliceSeriesd f = rng.series(64);
    const AFDStated state(f);
    for (int i = 0; i < 20; ++i) {
        const BallPointd a(rng.ball(0.9));
        const double expect =
            std::sqrt(1 - a.value().squared_norm()) * eval(f, a.value()).norm();
        CHECK(objective(a, state) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("objective peaks at the atom of a kernel signal") {
    const BallPointd b(Quaterniond(0, 0.4, 0.2, 0));
    const SliceSeriesd f = szego_kernel(b, kDefaultOrder);
    const AFDStated state(f);
    CHECK(objective(b, state) == doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(52);
    for (int i = 0; i < 50; ++i) {
        const BallPointd a(rng.ball(0.9));
        if (dev(a.value(), b.value()) > 1e-6)
            CHECK(objective(a, state) < 1.0);
    }
}

TEST_CASE("objective vanishes toward the boundary for polynomials") {
    Rng rng(53);
    const SliceSeriesd f = rng.polynomial(8, kDefaultOrder);
    const AFDStated state(f);
    double coeff_sum = 0;
    for (int n = 0; n <= f.order(); ++n)
        coeff_sum += f[n].norm();
    const double r = 1 - 1e-10;
    const double top = objective(BallPointd(Quaterniond(r)), state);
    CHECK(top <= std::sqrt(1 - r * r) * coeff_sum * (1 + 1e-12));
    CHECK(top <= 1e-3 * objective(BallPointd(), state));
}

TEST_CASE("maximizer recovers a single atom") {
    const BallPointd b(Quaterniond(0, 0.4, 0.2, 0));
    const SliceSeriesd f = szego_kernel(b, kDefaultOrder);
    const AFDStated state(f);
    const auto [a, value] = maximize_objective(state, SearchConfigd{});
    CHECK(dev(a.value(), b.value()) <= 1e-4);
    CHECK(std::abs(value - 1) <= 1e-6);
}

TEST_CASE("maximizer sends constants to the origin") {
    const Quaterniond c(0.7, -0.2, 0.1, 0.4);
    const SliceSeriesd f = SliceSeriesd::constant(c, 32);
    const AFDStated state(f);
    const auto [a, value] = maximize_objective(state, SearchConfigd{});
    CHECK(a.value() == Quaterniond());
    CHECK(value == doctest::Approx(c.norm()).epsilon(1e-12));
}

TEST_CASE("maximizer signals termination on the zero signal") {
    const AFDStated state(SliceSeriesd(16));
    const auto [a, value] = maximize_objective(state, SearchConfigd{});
    CHECK(a.value() == Quaterniond());
    CHECK(value == 0);
}

TEST_CASE("one-atom decomposition in a single step") {
    Rng rng(54);
    const BallPointd b(rng.ball(0.8));
    const Quaterniond c = rng.quat();
    const SliceSeriesd f = szego_kernel(b, kDefaultOrder) * c;
    const AFDStated state = afd_decompose(f, 10, 1e-12, SearchConfigd{});
    CHECK(state.steps() >= 1);
    CHECK(dev(state.tm.param(0).value(), b.value()) <= 1e-4);
    CHECK(dev(state.coefficients[0], c) <= 1e-4 * c.norm());
    CHECK(state.remainder_norms[1] <= 1e-6 * state.remainder_norms[0]);
}

TEST_CASE("energy bookkeeping on a polynomial signal") {
    Rng rng(55);
    const SliceSeriesd f = rng.polynomial(8, kDefaultOrder);
    const double f2 = squared_norm(f);
    const AFDStated state = afd_decompose(f, 12, 0.0, SearchConfigd{});
    CHECK(state.steps() == 12);

    double captured = 0;
    for (int k = 0; k < state.steps(); ++k) {
        captured += state.energies[size_t(k)];
        const double r2 =
            state.remainder_norms[size_t(k) + 1] * state.remainder_norms[size_t(k) + 1];
        CHECK(std::abs(f2 - captured - r2) <= 1e-9 * f2);
        CHECK(state.remainder_norms[size_t(k) + 1] <=
              state.remainder_norms[size_t(k)] + 1e-12 * norm(f));
        CHECK(std::abs(state.coefficients[size_t(k)].norm() -
                       state.objective_values[size_t(k)]) <= 1e-8 * norm(f));
    }
    CHECK(std::abs(squared_norm(state.std_remainder) -
                   state.remainder_norms.back() * state.remainder_norms.back()) <=
          1e-9 * f2);
}

TEST_CASE("residual is orthogonal to the selected system") {
    Rng rng(56);
    const SliceSeriesd f = rng.polynomial(6, kDefaultOrder);
    const AFDStated state = afd_decompose(f, 8, 0.0, SearchConfigd{});
    for (int k = 0; k < state.steps(); ++k)
        CHECK(inner_product(state.std_remainder, state.tm.tm(k)).norm() <=
              1e-8 * norm(f));
}

TEST_CASE("decomposition terminates on the zero signal") {
    const AFDStated state = afd_decompose(SliceSeriesd(32), 5, 1e-10, SearchConfigd{});
    CHECK(state.steps() == 0);
    CHECK(state.remainder_norms.size() == 1);
}

TEST_CASE("energy tolerance stops the loop early") {
    Rng rng(57);
    const BallPointd b(rng.ball(0.6));
    const SliceSeriesd f = szego_kernel(b, kDefaultOrder);
    const AFDStated state = afd_decompose(f, 50, 1e-10, SearchConfigd{});
    CHECK(state.steps() < 50);
}

TEST_CASE("reconstruction matches the remainder bookkeeping") {
    Rng rng(58);
    const SliceSeriesd f = rng.polynomial(6, kDefaultOrder);
    const AFDStated state = afd_decompose(f, 6, 0.0, SearchConfigd{});

    const SliceSeriesd zero = reconstruct(state, 0);
    CHECK(squared_norm(zero) == 0);

    for (int n = 1; n <= state.steps(); ++n) {
        const SliceSeriesd part = reconstruct(state, n);
        double diff2 = 0;
        for (int k = 0; k <= f.order(); ++k)
            diff2 += (f.coeff(k) - part.coeff(k)).squared_norm();
        CHECK(std::abs(std::sqrt(diff2) - state.remainder_norms[size_t(n)]) <= 1e-9);

        double pyth = 0;
        for (int k = 0; k < n; ++k)
            pyth += state.energies[size_t(k)];
        CHECK(std::abs(squared_norm(part) - pyth) <= 1e-9 * squared_norm(f));
    }
    CHECK_THROWS_AS(reconstruct(state, state.steps() + 1), std::domain_error);
}

TEST_CASE("slice-restricted search stays on the slice") {
    Rng rng(59);
    const SliceSeriesd f = rng.polynomial(6, kDefaultOrder);
    SearchConfigd cfg;
    const UnitImaginaryd I = rng.imaginary();
    cfg.slice_restrict = I;
    const AFDStated state = afd_decompose(f, 4, 0.0, cfg);
    for (const BallPointd& a : state.tm.params()) {
        const Eigen::Vector3d v = a.value().imag();
        CHECK((v - v.dot(I.direction()) * I.direction()).norm() <= 1e-12);
    }
}

TEST_CASE("atomic signal synthesis and certificate") {
    AtomicSignald signal;
    signal.atoms.push_back({BallPointd(Quaterniond(0.3, 0.1, 0, 0)), Quaterniond(2)});
    signal.atoms.push_back({BallPointd(), Quaterniond(0, 1, 0, 0)});
    CHECK(signal.certificate() == doctest::Approx(3.0).epsilon(1e-15));
    const SliceSeriesd f = signal.synthesize(32);
    const Quaterniond expect =
        eval(szego_kernel(signal.atoms[0].param, 32) * Quaterniond(2) +
                 szego_kernel(signal.atoms[1].param, 32) * Quaterniond(0, 1, 0, 0),
             Quaterniond(0.2));
    CHECK(dev(eval(f, Quaterniond(0.2)), expect) == 0);
}

TEST_CASE("rate report on a single atom") {
    AtomicSignald signal;
    signal.atoms.push_back({BallPointd(Quaterniond(0.2, 0.5, -0.1, 0.1)), Quaterniond(1.5)});
    const RateReportd report = rate_report(signal, 3, SearchConfigd{}, kDefaultOrder);
    CHECK(report.certificate == doctest::Approx(1.5).epsilon(1e-15));
    REQUIRE(report.rows.size() >= 2);
    CHECK(report.rows[0].m == 1);
    CHECK(report.rows[0].remainder_norm <= report.certificate);
    CHECK(report.rows[1].remainder_norm <= 1e-6 * report.certificate);
    CHECK(report.all_pass());
}

TEST_CASE("rate report rejects an empty signal") {
    CHECK_THROWS_AS(rate_report(AtomicSignald{}, 5, SearchConfigd{}, 64),
                    std::domain_error);
}

TEST_CASE("decomposition is deterministic") {
    Rng rng(60);
    const SliceSeriesd f = rng.polynomial(6, kDefaultOrder);
    const AFDStated s1 = afd_decompose(f, 5, 0.0, SearchConfigd{});
    const AFDStated s2 = afd_decompose(f, 5, 0.0, SearchConfigd{});
    REQUIRE(s1.steps() == s2.steps());
    for (int k = 0; k < s1.steps(); ++k) {
        CHECK(s1.tm.param(k).value() == s2.tm.param(k).value());
        CHECK(s1.coefficients[size_t(k)] == s2.coefficients[size_t(k)]);
    }
}

}  // TEST_SUITE
