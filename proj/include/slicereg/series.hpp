#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "slicereg/quaternion.hpp"

namespace slicereg {

// Noise floor for pointwise zero tests in the twist evaluation formulas.
inline constexpr double kZeroThreshold = 1e-13;

inline constexpr int kDefaultOrder = 256;

// Truncated power series f(q) = sum_n q^n a_n with right quaternion
// coefficients; the working representation of a slice regular function
// on the unit ball.  Binary operations produce output at the larger of
// the two input orders and drop modes above it.
template <typename Scalar>
class SliceSeries {
public:
    using Coeff = Quaternion<Scalar>;

    explicit SliceSeries(int order = 0) : coeffs_(static_cast<size_t>(order) + 1) {
        if (order < 0)
            throw std::domain_error("series order must be non-negative");
    }

    explicit SliceSeries(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty())
            throw std::domain_error("series needs at least the constant coefficient");
    }

    static SliceSeries constant(const Coeff& c, int order = 0) {
        SliceSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }

    // The monomial q^k at truncation order >= k.
    static SliceSeries monomial(int k, int order) {
        SliceSeries s(std::max(k, order));
        s.coeffs_[static_cast<size_t>(k)] = Coeff(1);
        return s;
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }

    const Coeff& operator[](int n) const { return coeffs_[static_cast<size_t>(n)]; }
    Coeff& operator[](int n) { return coeffs_[static_cast<size_t>(n)]; }

    // Coefficient with zero-extension past the truncation order.
    Coeff coeff(int n) const {
        return n <= order() ? coeffs_[static_cast<size_t>(n)] : Coeff();
    }

    const std::vector<Coeff>& coeffs() const { return coeffs_; }

    SliceSeries truncated(int order) const {
        SliceSeries out(order);
        const int top = std::min(order, this->order());
        for (int n = 0; n <= top; ++n)
            out.coeffs_[static_cast<size_t>(n)] = coeffs_[static_cast<size_t>(n)];
        return out;
    }

    friend SliceSeries operator+(const SliceSeries& f, const SliceSeries& g) {
        SliceSeries out(std::max(f.order(), g.order()));
        for (int n = 0; n <= out.order(); ++n)
            out[n] = f.coeff(n) + g.coeff(n);
        return out;
    }

    friend SliceSeries operator-(const SliceSeries& f, const SliceSeries& g) {
        SliceSeries out(std::max(f.order(), g.order()));
        for (int n = 0; n <= out.order(); ++n)
            out[n] = f.coeff(n) - g.coeff(n);
        return out;
    }

    // f * c: right module action, coefficients a_n c.
    friend SliceSeries operator*(SliceSeries f, const Coeff& c) {
        for (auto& a : f.coeffs_)
            a = a * c;
        return f;
    }

    friend SliceSeries operator*(Scalar s, SliceSeries f) {
        for (auto& a : f.coeffs_)
            a *= s;
        return f;
    }

private:
    std::vector<Coeff> coeffs_;
};

// Cauchy convolution (f*g)_n = sum_k a_k b_{n-k}, left factor's
// coefficients multiplying from the left.
template <typename Scalar>
SliceSeries<Scalar> star_mul(const SliceSeries<Scalar>& f, const SliceSeries<Scalar>& g) {
    const int N = std::max(f.order(), g.order());
    SliceSeries<Scalar> out(N);
    const int gN = g.order();
    for (int k = 0; k <= f.order(); ++k) {
        const auto& a = f[k];
        const int top = std::min(N - k, gN);
        for (int j = 0; j <= top; ++j)
            out[k + j] += a * g[j];
    }
    return out;
}

template <typename Scalar>
SliceSeries<Scalar> regular_conj(const SliceSeries<Scalar>& f) {
    SliceSeries<Scalar> out(f.order());
    for (int n = 0; n <= f.order(); ++n)
        out[n] = f[n].conj();
    return out;
}

// f^s = f * f^c; all coefficients real up to rounding.
template <typename Scalar>
SliceSeries<Scalar> symmetrize(const SliceSeries<Scalar>& f) {
    return star_mul(f, regular_conj(f));
}

// f^{-*} = (1/f^s) f^c, computed by inverting the real series f^s term
// by term and convolving with the conjugate.  Requires a_0 != 0.
template <typename Scalar>
SliceSeries<Scalar> regular_reciprocal(const SliceSeries<Scalar>& f) {
    if (f[0].squared_norm() == Scalar(0))
        throw std::domain_error("regular_reciprocal: constant coefficient is zero, "
                                "no power-series expansion at the origin");
    const int N = f.order();
    const SliceSeries<Scalar> fs = symmetrize(f);
    std::vector<Scalar> s(static_cast<size_t>(N) + 1);
    for (int n = 0; n <= N; ++n)
        s[static_cast<size_t>(n)] = fs[n].real();
    std::vector<Scalar> u(static_cast<size_t>(N) + 1);
    u[0] = Scalar(1) / s[0];
    for (int n = 1; n <= N; ++n) {
        Scalar acc(0);
        for (int k = 1; k <= n; ++k)
            acc += s[static_cast<size_t>(k)] * u[static_cast<size_t>(n - k)];
        u[static_cast<size_t>(n)] = -acc / s[0];
    }
    const SliceSeries<Scalar> fc = regular_conj(f);
    SliceSeries<Scalar> out(N);
    for (int n = 0; n <= N; ++n) {
        Quaternion<Scalar> acc;
        for (int k = 0; k <= n; ++k)
            acc += u[static_cast<size_t>(k)] * fc[n - k];
        out[n] = acc;
    }
    return out;
}

// Left-nested Horner value a_0 + q(a_1 + q(a_2 + ...)).
template <typename Scalar>
Quaternion<Scalar> eval(const SliceSeries<Scalar>& f, const Quaternion<Scalar>& q) {
    Quaternion<Scalar> v = f[f.order()];
    for (int n = f.order() - 1; n >= 0; --n)
        v = f[n] + q * v;
    return v;
}

// A point q and its conjugated rotation v^{-1} q v within the sphere [q].
template <typename Scalar>
struct TwistedPoint {
    Quaternion<Scalar> original;
    Quaternion<Scalar> twisted;
};

template <typename Scalar>
TwistedPoint<Scalar> twist_by(const Quaternion<Scalar>& v, const Quaternion<Scalar>& q) {
    return {q, v.inverse() * q * v};
}

// (f*g)(q) = f(q) g(q~) with q~ = f(q)^{-1} q f(q), and 0 where f(q) = 0.
template <typename Scalar>
Quaternion<Scalar> eval_star_pointwise(const SliceSeries<Scalar>& f,
                                       const SliceSeries<Scalar>& g,
                                       const Quaternion<Scalar>& q) {
    const Quaternion<Scalar> fq = eval(f, q);
    if (fq.norm() <= Scalar(kZeroThreshold))
        return {};
    return fq * eval(g, twist_by(fq, q).twisted);
}

// (f^{-*} * g)(q) = f(q^)^{-1} g(q^) with q^ = f^c(q)^{-1} q f^c(q).
// Stable pointwise evaluator; never builds the reciprocal series.
template <typename Scalar>
Quaternion<Scalar> eval_reciprocal_star(const SliceSeries<Scalar>& f,
                                        const SliceSeries<Scalar>& g,
                                        const Quaternion<Scalar>& q) {
    const auto zero_sphere_error = [&q]() {
        const SlicePoint<Scalar> sp = slice_decompose(q);
        std::ostringstream msg;
        msg << "eval_reciprocal_star: q lies on a zero sphere of the symmetrization, "
            << "[q] = { " << sp.xcoord << " + " << sp.ycoord << " I : I*I = -1 }";
        return std::domain_error(msg.str());
    };
    const Quaternion<Scalar> fcq = eval(regular_conj(f), q);
    // f^c(q) = 0 puts q on the zero set of f^s = f^c * (f^c)^c.
    if (fcq.norm() <= Scalar(kZeroThreshold))
        throw zero_sphere_error();
    const Quaternion<Scalar> qh = twist_by(fcq, q).twisted;
    const Quaternion<Scalar> fqh = eval(f, qh);
    // f^s(q) = f^c(q) f(q^) via the product formula with left factor f^c.
    if (fcq.norm() * fqh.norm() <= Scalar(kZeroThreshold))
        throw zero_sphere_error();
    return fqh.inverse() * eval(g, qh);
}

// Representation formula: the value at x + yJ from the two conjugate
// evaluations on slice I.
template <typename Scalar>
Quaternion<Scalar> slice_extension_eval(const SliceSeries<Scalar>& f, Scalar x, Scalar y,
                                        const UnitImaginary<Scalar>& I,
                                        const UnitImaginary<Scalar>& J) {
    const Quaternion<Scalar> qi = I.embed();
    const Quaternion<Scalar> plus = eval(f, Quaternion<Scalar>(x) + y * qi);
    const Quaternion<Scalar> minus = eval(f, Quaternion<Scalar>(x) - y * qi);
    return Scalar(0.5) * (plus + minus) + Scalar(0.5) * (J.embed() * qi * (minus - plus));
}

using SliceSeriesd = SliceSeries<double>;
using TwistedPointd = TwistedPoint<double>;

}  // namespace slicereg
