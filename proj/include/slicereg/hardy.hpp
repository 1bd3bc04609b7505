#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "slicereg/quaternion.hpp"
#include "slicereg/series.hpp"

namespace slicereg {

// Pointwise threshold below which a Blaschke chain value counts as a
// hit on a zero sphere and callers fall back to series evaluation.
inline constexpr double kTwistFallback = 1e-12;

// A kernel/Blaschke parameter strictly inside the unit ball.
template <typename Scalar>
class BallPoint {
public:
    BallPoint() = default;

    explicit BallPoint(const Quaternion<Scalar>& v) : value_(v) {
        if (!(v.norm() < Scalar(1)))
            throw std::domain_error("ball point must satisfy |a| < 1");
    }

    const Quaternion<Scalar>& value() const { return value_; }

private:
    Quaternion<Scalar> value_;
};

// <f,g> = sum_n conj(b_n) a_n, the boundary inner product reduced to
// coefficients; conjugated g-coefficient multiplies from the left.
// Accumulated componentwise with each product paired against its
// argument-swapped twin, so swapping f and g conjugates the result exactly
// and <f,f> is exactly real.
template <typename Scalar>
Quaternion<Scalar> inner_product(const SliceSeries<Scalar>& f, const SliceSeries<Scalar>& g) {
    Scalar re(0), ix(0), iy(0), iz(0);
    const int top = std::min(f.order(), g.order());
    for (int n = 0; n <= top; ++n) {
        const Quaternion<Scalar>& a = f[n];
        const Quaternion<Scalar>& b = g[n];
        re += b.w() * a.w() + b.x() * a.x() + b.y() * a.y() + b.z() * a.z();
        ix += (b.w() * a.x() - b.x() * a.w()) + (b.z() * a.y() - b.y() * a.z());
        iy += (b.w() * a.y() - b.y() * a.w()) + (b.x() * a.z() - b.z() * a.x());
        iz += (b.w() * a.z() - b.z() * a.w()) + (b.y() * a.x() - b.x() * a.y());
    }
    return {re, ix, iy, iz};
}

template <typename Scalar>
Scalar squared_norm(const SliceSeries<Scalar>& f) {
    Scalar acc(0);
    for (int n = 0; n <= f.order(); ++n)
        acc += f[n].squared_norm();
    return acc;
}

template <typename Scalar>
Scalar norm(const SliceSeries<Scalar>& f) {
    return std::sqrt(squared_norm(f));
}

template <typename Scalar>
struct QuadratureInner {
    Quaternion<Scalar> value;
    // Trapezoid in t resolves products up to series order only when
    // n_t >= 2N+2; false flags a potentially aliased result.
    bool sufficient_nodes = true;
    // Worst deviation of a per-slice inner product from the weighted
    // mean; the per-slice value is slice-independent in exact arithmetic.
    Scalar slice_deviation = Scalar(0);
};

// Independent oracle for inner_product: trapezoid rule in t on every
// slice of a uniform (theta1, theta2) grid, sin(theta1)-weighted and
// normalized to total weight 1.
template <typename Scalar>
QuadratureInner<Scalar> inner_product_quadrature(const SliceSeries<Scalar>& f,
                                                 const SliceSeries<Scalar>& g,
                                                 int n_t, int n_theta) {
    if (n_t < 1 || n_theta < 1)
        throw std::domain_error("quadrature needs at least one node per axis");
    const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
    const int N = std::max(f.order(), g.order());

    QuadratureInner<Scalar> out;
    out.sufficient_nodes = n_t >= 2 * N + 2;

    std::vector<Quaternion<Scalar>> slice_values;
    std::vector<Scalar> weights;
    slice_values.reserve(static_cast<size_t>(n_theta) * n_theta);
    weights.reserve(static_cast<size_t>(n_theta) * n_theta);

    for (int i = 0; i < n_theta; ++i) {
        const Scalar th1 = pi * (Scalar(i) + Scalar(0.5)) / Scalar(n_theta);
        for (int j = 0; j < n_theta; ++j) {
            const Scalar th2 = pi * (Scalar(j) + Scalar(0.5)) / Scalar(n_theta);
            const Quaternion<Scalar> I = imaginary_from_angles(th1, th2).embed();
            Quaternion<Scalar> acc;
            for (int k = 0; k < n_t; ++k) {
                const Scalar t = Scalar(2) * pi * Scalar(k) / Scalar(n_t);
                const Quaternion<Scalar> p =
                    Quaternion<Scalar>(std::cos(t)) + std::sin(t) * I;
                acc += eval(g, p).conj() * eval(f, p);
            }
            slice_values.push_back(acc / Scalar(n_t));
            weights.push_back(std::sin(th1));
        }
    }

    Scalar wsum(0);
    Quaternion<Scalar> mean;
    for (size_t k = 0; k < weights.size(); ++k) {
        mean += weights[k] * slice_values[k];
        wsum += weights[k];
    }
    mean = mean / wsum;
    out.value = mean;
    for (const auto& v : slice_values)
        out.slice_deviation = std::max(out.slice_deviation, (v - mean).norm());
    return out;
}

// Normalized Szego kernel e_a = sqrt(1-|a|^2) (1 - q conj(a))^{-*},
// coefficients sqrt(1-|a|^2) conj(a)^n in closed form.
template <typename Scalar>
SliceSeries<Scalar> szego_kernel(const BallPoint<Scalar>& a, int N) {
    const Quaternion<Scalar>& av = a.value();
    const Scalar s = std::sqrt(Scalar(1) - av.squared_norm());
    SliceSeries<Scalar> out(N);
    Quaternion<Scalar> p(1);
    out[0] = Quaternion<Scalar>(s);
    for (int n = 1; n <= N; ++n) {
        p = p * av.conj();
        out[n] = s * p;
    }
    return out;
}

// Blaschke factor B_a = (1 - q conj(a))^{-*} * (a - q) (a/|a|); the
// convention B_0(q) = q covers a = 0, keeping the boundary modulus 1
// and the zero at the parameter.
template <typename Scalar>
SliceSeries<Scalar> blaschke_factor(const BallPoint<Scalar>& a, int N) {
    const Quaternion<Scalar>& av = a.value();
    const Scalar an = av.norm();
    if (an == Scalar(0))
        return SliceSeries<Scalar>::monomial(1, N);
    const Quaternion<Scalar> mu = av / an;
    const Quaternion<Scalar> ac = av.conj();
    SliceSeries<Scalar> out(N);
    out[0] = av * mu;
    Quaternion<Scalar> p(1);  // conj(a)^{n-1}
    for (int n = 1; n <= N; ++n) {
        out[n] = (p * ac * av - p) * mu;
        p = p * ac;
    }
    return out;
}

// Closed-form pointwise Blaschke value via the reciprocal twist; exact
// to rounding on the whole closed ball, boundary included.
template <typename Scalar>
Quaternion<Scalar> blaschke_eval(const BallPoint<Scalar>& a, const Quaternion<Scalar>& q) {
    const Quaternion<Scalar>& av = a.value();
    const Scalar an = av.norm();
    if (an == Scalar(0))
        return q;
    const Quaternion<Scalar> mu = av / an;
    // h = 1 - q conj(a); h^c(q) = 1 - q a never vanishes for |q| <= 1.
    const Quaternion<Scalar> w = Quaternion<Scalar>(1) - q * av;
    const Quaternion<Scalar> qh = twist_by(w, q).twisted;
    const Quaternion<Scalar> h = Quaternion<Scalar>(1) - qh * av.conj();
    return h.inverse() * (av - qh) * mu;
}

// Pointwise value of B_{a_1} * ... * B_{a_k} by chaining the product
// twist through the factors; zero as soon as a factor vanishes.
template <typename Scalar>
Quaternion<Scalar> blaschke_chain_eval(const std::vector<BallPoint<Scalar>>& params,
                                       const Quaternion<Scalar>& q) {
    Quaternion<Scalar> val(1);
    Quaternion<Scalar> cur = q;
    for (const auto& a : params) {
        const Quaternion<Scalar> v = blaschke_eval(a, cur);
        if (v.norm() <= Scalar(kZeroThreshold))
            return {};
        val = val * v;
        cur = twist_by(v, cur).twisted;
    }
    return val;
}

// Pointwise value of the regular conjugate of a single factor,
// B_a^c = (conj(a) - q) conj(a/|a|) * (1 - q a)^{-*}.
template <typename Scalar>
Quaternion<Scalar> blaschke_conj_eval(const BallPoint<Scalar>& a, const Quaternion<Scalar>& q) {
    const Quaternion<Scalar>& av = a.value();
    const Scalar an = av.norm();
    if (an == Scalar(0))
        return q;
    const Quaternion<Scalar> mub = av.conj() / an;
    const Quaternion<Scalar> f1 = (av.conj() - q) * mub;
    if (f1.norm() <= Scalar(kZeroThreshold))
        return {};
    const Quaternion<Scalar> qt = twist_by(f1, q).twisted;
    // (1 - q a)^{-*} at qt through its own conjugate twist h = 1 - q conj(a).
    const Quaternion<Scalar> hp = Quaternion<Scalar>(1) - qt * av.conj();
    const Quaternion<Scalar> pp = twist_by(hp, qt).twisted;
    return f1 * (Quaternion<Scalar>(1) - pp * av).inverse();
}

// (B_{a_1}*...*B_{a_k})^c = B_{a_k}^c * ... * B_{a_1}^c, chained pointwise.
template <typename Scalar>
Quaternion<Scalar> blaschke_conj_chain_eval(const std::vector<BallPoint<Scalar>>& params,
                                            const Quaternion<Scalar>& q) {
    Quaternion<Scalar> val(1);
    Quaternion<Scalar> cur = q;
    for (auto it = params.rbegin(); it != params.rend(); ++it) {
        const Quaternion<Scalar> v = blaschke_conj_eval(*it, cur);
        if (v.norm() <= Scalar(kZeroThreshold))
            return {};
        val = val * v;
        cur = twist_by(v, cur).twisted;
    }
    return val;
}

// Left-to-right *-product of Blaschke factors; empty list is the
// constant 1.
template <typename Scalar>
SliceSeries<Scalar> blaschke_product(const std::vector<BallPoint<Scalar>>& params, int N) {
    SliceSeries<Scalar> out = SliceSeries<Scalar>::constant(Quaternion<Scalar>(1), N);
    for (const auto& a : params)
        out = star_mul(out, blaschke_factor(a, N));
    return out;
}

/// Takenaka-Malmquist system over an ordered parameter list: partial
// Blaschke products and the orthonormal functions T_k built on them.
// product(k) multiplies the factors of the first k parameters, so
// T_k = product(k-1) * e_{a_k} and product(size()) is the running
// product over everything selected so far.
template <typename Scalar>
class TMSystem {
public:
    explicit TMSystem(int order = kDefaultOrder) : order_(order) {
        products_.push_back(SliceSeries<Scalar>::constant(Quaternion<Scalar>(1), order_));
    }

    void append(const BallPoint<Scalar>& a) {
        tms_.push_back(star_mul(products_.back(), szego_kernel(a, order_)));
        products_.push_back(star_mul(products_.back(), blaschke_factor(a, order_)));
        params_.push_back(a);
    }

    int size() const { return static_cast<int>(params_.size()); }
    int order() const { return order_; }

    const std::vector<BallPoint<Scalar>>& params() const { return params_; }
    const BallPoint<Scalar>& param(int k) const { return params_[static_cast<size_t>(k)]; }

    const SliceSeries<Scalar>& tm(int k) const { return tms_[static_cast<size_t>(k)]; }
    const SliceSeries<Scalar>& product(int k) const { return products_[static_cast<size_t>(k)]; }
    const SliceSeries<Scalar>& current_product() const { return products_.back(); }

private:
    int order_;
    std::vector<BallPoint<Scalar>> params_;
    std::vector<SliceSeries<Scalar>> products_;
    std::vector<SliceSeries<Scalar>> tms_;
};

template <typename Scalar>
TMSystem<Scalar> tm_system(const std::vector<BallPoint<Scalar>>& params, int N) {
    TMSystem<Scalar> sys(N);
    for (const auto& a : params)
        sys.append(a);
    return sys;
}

// Hyperbolic backward shift S_a f = B_a^{-*} * (f - e_a <f,e_a>).
// The division by B_a runs as a stable deflation: premultiply the
// residual by (1 - q conj(a)) keeping one extra order, divide by
// (a - q) with the backward recurrence y_{n-1} = a y_n - h_n seeded
// above the top, then left-multiply by conj(a/|a|).  The extra order
// matters: the quotient of the order-(N+1) premultiplied residual has
// order N, and dropping its top coefficient breaks the energy identity.
template <typename Scalar>
SliceSeries<Scalar> backward_shift(const SliceSeries<Scalar>& f, const BallPoint<Scalar>& a) {
    const int N = f.order();
    const SliceSeries<Scalar> ea = szego_kernel(a, N);
    const Quaternion<Scalar> c = inner_product(f, ea);
    const SliceSeries<Scalar> r = f - ea * c;

    const Quaternion<Scalar>& av = a.value();
    if (av.norm() == Scalar(0)) {
        SliceSeries<Scalar> out(N);
        for (int n = 0; n < N; ++n)
            out[n] = r[n + 1];
        return out;
    }

    const Quaternion<Scalar> ac = av.conj();
    std::vector<Quaternion<Scalar>> h(static_cast<size_t>(N) + 2);
    h[0] = r[0];
    for (int n = 1; n <= N; ++n)
        h[static_cast<size_t>(n)] = r[n] - ac * r[n - 1];
    h[static_cast<size_t>(N) + 1] = -(ac * r[N]);

    std::vector<Quaternion<Scalar>> y(static_cast<size_t>(N) + 2);
    for (int n = N + 1; n >= 1; --n)
        y[static_cast<size_t>(n) - 1] = av * y[static_cast<size_t>(n)] - h[static_cast<size_t>(n)];

    const Quaternion<Scalar> mub = ac / av.norm();
    SliceSeries<Scalar> out(N);
    for (int n = 0; n <= N; ++n)
        out[n] = mub * y[static_cast<size_t>(n)];
    return out;
}

// Projection of a two-sided boundary Fourier sequence onto the Hardy
// space: keep the non-negative modes, drop the negative ones.
template <typename Scalar>
SliceSeries<Scalar> szego_projection(const std::vector<Quaternion<Scalar>>& neg_coeffs,
                                     const std::vector<Quaternion<Scalar>>& pos_coeffs) {
    (void)neg_coeffs;
    if (pos_coeffs.empty())
        return SliceSeries<Scalar>(0);
    return SliceSeries<Scalar>(pos_coeffs);
}

using BallPointd = BallPoint<double>;
using TMSystemd = TMSystem<double>;

}  // namespace slicereg
