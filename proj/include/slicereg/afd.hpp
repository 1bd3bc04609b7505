#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "slicereg/hardy.hpp"
#include "slicereg/quaternion.hpp"
#include "slicereg/series.hpp"

namespace slicereg {

// Tolerance of the runtime cross-check between the recorded expansion
// coefficient and the selection objective value (relative to the
// signal norm).
inline constexpr double kCoefficientCheckTol = 1e-8;

// Smallest Blaschke-product modulus the pointwise objective divides by.
// Below this the quotient amplifies the remainder's evaluation noise
// past the coefficient cross-check, so the objective switches to the
// reduced remainder, which stays well conditioned near the zero
// spheres of the product.
inline constexpr double kBlaschkeGuard = 1e-4;

template <typename Scalar>
struct SearchConfig {
    int radial_levels = 24;
    int sphere_points = 512;
    Scalar rho_max = Scalar(0.95);
    int refine_iters = 200;
    Scalar refine_tol = Scalar(1e-10);
    // When set, the candidate grid and refinement are confined to the
    // complex slice spanned by {1, I}; used to demonstrate that a
    // single slice under-captures generic signals.
    std::optional<UnitImaginary<Scalar>> slice_restrict;
};

// State of the greedy decomposition after n steps: the original signal,
// the standard remainder r_{n+1} = f - sum_k T_k c_k, the reduced
// remainder f_{n+1} obtained through repeated backward shifts, the TM
// system over the selected parameters, and the bookkeeping sequences.
template <typename Scalar>
struct AFDState {
    SliceSeries<Scalar> original;
    SliceSeries<Scalar> std_remainder;
    SliceSeries<Scalar> reduced_remainder;
    TMSystem<Scalar> tm;
    std::vector<Quaternion<Scalar>> coefficients;
    std::vector<Scalar> energies;         // |c_k|^2 per step
    std::vector<Scalar> remainder_norms;  // remainder_norms[n] = |f - reconstruct(n)|
    std::vector<Scalar> objective_values; // selection objective at each chosen parameter
    std::vector<int> shell_steps;         // steps whose selection landed on the rho_max shell

    explicit AFDState(const SliceSeries<Scalar>& f)
        : original(f), std_remainder(f), reduced_remainder(f), tm(f.order()) {
        remainder_norms.push_back(norm(f));
    }

    int steps() const { return tm.size(); }
    const SliceSeries<Scalar>& blaschke_prod() const { return tm.current_product(); }
};

// Selection objective |<f_n, e_a>| = sqrt(1-|a|^2) |B_{n-1}(a^)|^{-1} |r_n(a^)|
// with a^ the conjugate-product twist of a.  Runs entirely pointwise;
// falls back to the reduced-remainder series when the conjugate chain
// collapses below the twist threshold or the product modulus falls
// below the division guard (a removable singularity, e.g. at an
// already-selected parameter).
template <typename Scalar>
Scalar objective(const BallPoint<Scalar>& a, const AFDState<Scalar>& state) {
    const Scalar s2 = Scalar(1) - a.value().squared_norm();
    if (s2 <= Scalar(0))
        return Scalar(0);
    const Scalar weight = std::sqrt(s2);
    if (state.tm.size() == 0)
        return weight * eval(state.std_remainder, a.value()).norm();

    const auto& params = state.tm.params();
    const Quaternion<Scalar> w = blaschke_conj_chain_eval(params, a.value());
    if (w.norm() > Scalar(kTwistFallback)) {
        const Quaternion<Scalar> ah = twist_by(w, a.value()).twisted;
        const Quaternion<Scalar> bv = blaschke_chain_eval(params, ah);
        if (bv.norm() > Scalar(kBlaschkeGuard))
            return weight * eval(state.std_remainder, ah).norm() / bv.norm();
    }
    return weight * eval(state.reduced_remainder, a.value()).norm();
}

// Super-Fibonacci lattice on S^3: low-discrepancy, deterministic.
template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, 4, 1>> super_fibonacci_s3(int n) {
    const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
    const Scalar phi = std::sqrt(Scalar(2));
    const Scalar psi = Scalar(1.533751168755204288118041L);  // psi^4 = psi + 4
    std::vector<Eigen::Matrix<Scalar, 4, 1>> pts;
    pts.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Scalar s = Scalar(i) + Scalar(0.5);
        const Scalar t = s / Scalar(n);
        const Scalar d = Scalar(2) * pi * s;
        const Scalar r = std::sqrt(t);
        const Scalar R = std::sqrt(Scalar(1) - t);
        const Scalar alpha = d / phi;
        const Scalar beta = d / psi;
        pts.emplace_back(r * std::sin(alpha), r * std::cos(alpha),
                         R * std::sin(beta), R * std::cos(beta));
    }
    return pts;
}

template <typename Scalar>
struct NelderMeadResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
    Scalar fx;
    int iterations;
};

// Derivative-free simplex minimizer with a feasibility projection
// applied to every trial point.  Deterministic; the best vertex never
// regresses, so the start point survives as the fallback answer.
template <typename Scalar>
NelderMeadResult<Scalar> nelder_mead(
    const std::function<Scalar(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& fn,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0, Scalar step, int max_iters, Scalar tol,
    const std::function<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& clip) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const int dim = static_cast<int>(x0.size());
    std::vector<Vec> xs;
    std::vector<Scalar> fs;
    xs.push_back(clip(x0));
    fs.push_back(fn(xs[0]));
    for (int i = 0; i < dim; ++i) {
        Vec v = x0;
        v[i] += step;
        xs.push_back(clip(v));
        fs.push_back(fn(xs.back()));
    }

    const auto order = [&]() {
        for (size_t i = 1; i < xs.size(); ++i) {
            size_t j = i;
            while (j > 0 && fs[j] < fs[j - 1]) {
                std::swap(fs[j], fs[j - 1]);
                std::swap(xs[j], xs[j - 1]);
                --j;
            }
        }
    };

    int it = 0;
    for (; it < max_iters; ++it) {
        order();
        Scalar diam(0);
        for (int i = 1; i <= dim; ++i)
            diam = std::max(diam, (xs[static_cast<size_t>(i)] - xs[0]).norm());
        if (diam < tol)
            break;

        Vec cen = Vec::Zero(dim);
        for (int i = 0; i < dim; ++i)
            cen += xs[static_cast<size_t>(i)];
        cen /= Scalar(dim);
        const size_t worst = static_cast<size_t>(dim);

        const Vec xr = clip(cen + (cen - xs[worst]));
        const Scalar fr = fn(xr);
        if (fr < fs[0]) {
            const Vec xe = clip(cen + Scalar(2) * (xr - cen));
            const Scalar fe = fn(xe);
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[worst - 1]) {
            xs[worst] = xr;
            fs[worst] = fr;
        } else {
            bool shrink = false;
            if (fr < fs[worst]) {
                const Vec xc = clip(cen + Scalar(0.5) * (xr - cen));
                const Scalar fc = fn(xc);
                if (fc <= fr) {
                    xs[worst] = xc;
                    fs[worst] = fc;
                } else {
                    shrink = true;
                }
            } else {
                const Vec xc = clip(cen + Scalar(0.5) * (xs[worst] - cen));
                const Scalar fc = fn(xc);
                if (fc < fs[worst]) {
                    xs[worst] = xc;
                    fs[worst] = fc;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                for (size_t i = 1; i <= static_cast<size_t>(dim); ++i) {
                    xs[i] = clip(xs[0] + Scalar(0.5) * (xs[i] - xs[0]));
                    fs[i] = fn(xs[i]);
                }
            }
        }
    }
    order();
    return {xs[0], fs[0], it};
}

namespace detail {

// Chebyshev-spaced radii filling (0, rho]; the top level sits exactly
// on the search shell.
template <typename Scalar>
std::vector<Scalar> radial_levels(int count, Scalar rho) {
    const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
    std::vector<Scalar> radii;
    radii.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        radii.push_back(rho * std::sin(pi * Scalar(i + 1) / Scalar(2 * count)));
    return radii;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> clip_to_ball(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Scalar rho) {
    const Scalar n = x.norm();
    if (n > rho)
        return x * (rho / n);
    return x;
}

}  // namespace detail

// Two-phase maximum search: deterministic coarse grid (radial levels
// times an S^3 direction lattice, plus the origin), then simplex
// refinement from the best grid point.  Grid ties break toward the
// smaller |a|, then lexicographically, so identical inputs always
// select identical parameters.  A remainder below the zero threshold
// short-circuits to (0, 0), the termination signal.
template <typename Scalar>
std::pair<BallPoint<Scalar>, Scalar> maximize_objective(const AFDState<Scalar>& state,
                                                        const SearchConfig<Scalar>& cfg) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    if (norm(state.std_remainder) < Scalar(kZeroThreshold))
        return {BallPoint<Scalar>(), Scalar(0)};

    std::vector<Quaternion<Scalar>> directions;
    if (cfg.slice_restrict) {
        const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
        const Quaternion<Scalar> I = cfg.slice_restrict->embed();
        directions.reserve(static_cast<size_t>(cfg.sphere_points));
        for (int k = 0; k < cfg.sphere_points; ++k) {
            const Scalar phi = Scalar(2) * pi * Scalar(k) / Scalar(cfg.sphere_points);
            directions.push_back(Quaternion<Scalar>(std::cos(phi)) + std::sin(phi) * I);
        }
    } else {
        for (const auto& v : super_fibonacci_s3<Scalar>(cfg.sphere_points))
            directions.emplace_back(v[0], v[1], v[2], v[3]);
    }

    std::vector<Quaternion<Scalar>> candidates;
    candidates.reserve(directions.size() * static_cast<size_t>(cfg.radial_levels) + 1);
    candidates.emplace_back();
    for (const Scalar r : detail::radial_levels(cfg.radial_levels, cfg.rho_max))
        for (const auto& d : directions)
            candidates.push_back(r * d);

    // Candidate values are independent; the argmax reduction below is
    // the one fixed, order-deterministic pass.
    std::vector<Scalar> values(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i)
        values[i] = objective(BallPoint<Scalar>(candidates[i]), state);

    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        } else if (values[i] == values[best]) {
            const Scalar ni = candidates[i].norm();
            const Scalar nb = candidates[best].norm();
            if (ni < nb || (ni == nb && lex_less(candidates[i], candidates[best])))
                best = i;
        }
    }
    Quaternion<Scalar> best_a = candidates[best];
    Scalar best_v = values[best];

    const Scalar rho = cfg.rho_max;
    if (cfg.slice_restrict) {
        const Quaternion<Scalar> I = cfg.slice_restrict->embed();
        const auto unpack = [&I](const Vec& x) {
            return Quaternion<Scalar>(x[0]) + x[1] * I;
        };
        const std::function<Scalar(const Vec&)> neg = [&](const Vec& x) {
            return -objective(BallPoint<Scalar>(unpack(x)), state);
        };
        const std::function<Vec(const Vec&)> clip = [rho](const Vec& x) {
            return detail::clip_to_ball(x, rho);
        };
        Vec x0(2);
        x0 << best_a.w(), best_a.imag().dot(I.imag());
        const auto res =
            nelder_mead<Scalar>(neg, x0, Scalar(0.02), cfg.refine_iters, cfg.refine_tol, clip);
        if (-res.fx > best_v) {
            best_v = -res.fx;
            best_a = unpack(res.x);
        }
    } else {
        const std::function<Scalar(const Vec&)> neg = [&](const Vec& x) {
            return -objective(BallPoint<Scalar>(Quaternion<Scalar>(x[0], x[1], x[2], x[3])), state);
        };
        const std::function<Vec(const Vec&)> clip = [rho](const Vec& x) {
            return detail::clip_to_ball(x, rho);
        };
        Vec x0(4);
        x0 << best_a.w(), best_a.x(), best_a.y(), best_a.z();
        const auto res =
            nelder_mead<Scalar>(neg, x0, Scalar(0.02), cfg.refine_iters, cfg.refine_tol, clip);
        if (-res.fx > best_v) {
            best_v = -res.fx;
            best_a = Quaternion<Scalar>(res.x[0], res.x[1], res.x[2], res.x[3]);
        }
    }
    return {BallPoint<Scalar>(best_a), best_v};
}

// Greedy loop: select a parameter by maximum search, extend the TM
// system, record c_n = <f, T_n>, advance both remainders.  Stops at
// max_iters or when the remainder energy falls to energy_tol relative
// to the signal energy.
template <typename Scalar>
AFDState<Scalar> afd_decompose(const SliceSeries<Scalar>& f, int max_iters, Scalar energy_tol,
                               const SearchConfig<Scalar>& cfg = {}) {
    AFDState<Scalar> state(f);
    const Scalar f2 = squared_norm(f);
    const Scalar fnorm = std::sqrt(f2);

    for (int n = 0; n < max_iters; ++n) {
        if (squared_norm(state.std_remainder) <= energy_tol * f2)
            break;
        const auto [a, value] = maximize_objective(state, cfg);
        if (value == Scalar(0))
            break;

        state.tm.append(a);
        const SliceSeries<Scalar>& t = state.tm.tm(state.tm.size() - 1);
        const Quaternion<Scalar> c = inner_product(f, t);
        // <f, T_n> and <f_n, e_{a_n}> agree in exact arithmetic; their
        // moduli drifting apart means the twist path and the series
        // path disagree, which is a logic error, not noise.
        if (std::abs(c.norm() - value) > Scalar(kCoefficientCheckTol) * fnorm)
            throw std::logic_error("afd_decompose: expansion coefficient disagrees with "
                                   "the selection objective value");

        state.coefficients.push_back(c);
        state.energies.push_back(c.squared_norm());
        state.objective_values.push_back(value);
        state.std_remainder = state.std_remainder - t * c;
        state.reduced_remainder = backward_shift(state.reduced_remainder, a);
        state.remainder_norms.push_back(norm(state.std_remainder));
        if (a.value().norm() >= cfg.rho_max - Scalar(1e-12))
            state.shell_steps.push_back(state.tm.size());
    }
    return state;
}

// Partial sum sum_{k<n} T_k c_k of the expansion.
template <typename Scalar>
SliceSeries<Scalar> reconstruct(const AFDState<Scalar>& state, int n_terms) {
    if (n_terms < 0 || n_terms > state.steps())
        throw std::domain_error("reconstruct: term count exceeds steps taken");
    SliceSeries<Scalar> acc(state.tm.order());
    for (int k = 0; k < n_terms; ++k)
        acc = acc + state.tm.tm(k) * state.coefficients[static_cast<size_t>(k)];
    return acc;
}

// A finite kernel combination f = sum_k e_{b_k} c_k together with its
// certificate M = sum_k |c_k|.
template <typename Scalar>
struct AtomicSignal {
    struct Atom {
        BallPoint<Scalar> param;
        Quaternion<Scalar> coeff;
    };
    std::vector<Atom> atoms;

    Scalar certificate() const {
        Scalar m(0);
        for (const auto& atom : atoms)
            m += atom.coeff.norm();
        return m;
    }

    SliceSeries<Scalar> synthesize(int N) const {
        SliceSeries<Scalar> f(N);
        for (const auto& atom : atoms)
            f = f + szego_kernel(atom.param, N) * atom.coeff;
        return f;
    }
};

template <typename Scalar>
struct RateReport {
    struct Row {
        int m;
        Scalar remainder_norm;  // |r_m|
        Scalar bound;           // M / sqrt(m)
        bool bound_ok;
        // d_{m+1} <= d_m (1 - d_m / A) for d_m = |r_m|^2, A = M^2,
        // up to rounding slack; vacuously true on the last row.
        bool recurrence_ok;
    };
    Scalar certificate;
    std::vector<Row> rows;

    bool all_pass() const {
        for (const auto& row : rows)
            if (!row.bound_ok || !row.recurrence_ok)
                return false;
        return true;
    }
};

// Decomposes a kernel combination and tabulates the remainder decay
// against the M/sqrt(m) envelope.
template <typename Scalar>
RateReport<Scalar> rate_report(const AtomicSignal<Scalar>& signal, int max_iters,
                               const SearchConfig<Scalar>& cfg = {}, int N = kDefaultOrder) {
    if (signal.atoms.empty())
        throw std::domain_error("rate_report: signal must contain at least one atom");
    const Scalar M = signal.certificate();
    const Scalar A = M * M;
    const SliceSeries<Scalar> f = signal.synthesize(N);
    const AFDState<Scalar> state = afd_decompose(f, max_iters, Scalar(0), cfg);

    RateReport<Scalar> report;
    report.certificate = M;
    const auto& norms = state.remainder_norms;
    const Scalar slack = Scalar(1e-12) * norms[0] * norms[0];
    for (size_t i = 0; i < norms.size(); ++i) {
        const int m = static_cast<int>(i) + 1;
        typename RateReport<Scalar>::Row row;
        row.m = m;
        row.remainder_norm = norms[i];
        row.bound = M / std::sqrt(Scalar(m));
        // A one-atom signal meets the m = 1 bound with equality up to rounding.
        row.bound_ok = norms[i] <= row.bound * (Scalar(1) + Scalar(1e-12));
        row.recurrence_ok = true;
        if (i + 1 < norms.size()) {
            const Scalar dm = norms[i] * norms[i];
            const Scalar dn = norms[i + 1] * norms[i + 1];
            row.recurrence_ok = dn <= dm * (Scalar(1) - dm / A) + slack;
        }
        report.rows.push_back(row);
    }
    return report;
}

using SearchConfigd = SearchConfig<double>;
using AFDStated = AFDState<double>;
using AtomicSignald = AtomicSignal<double>;
using RateReportd = RateReport<double>;

}  // namespace slicereg
