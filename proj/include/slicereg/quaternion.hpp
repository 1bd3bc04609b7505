#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace slicereg {

// Quaternion over a real scalar type, basis {1, e1, e2, e3} with
// e1*e2 = e3 and ei*ej + ej*ei = -2*delta_ij.
template <typename Scalar>
class Quaternion {
public:
    Quaternion() : w_(0), x_(0), y_(0), z_(0) {}
    Quaternion(Scalar w, Scalar x, Scalar y, Scalar z) : w_(w), x_(x), y_(y), z_(z) {}
    Quaternion(Scalar real) : w_(real), x_(0), y_(0), z_(0) {}

    static Quaternion e1() { return {0, 1, 0, 0}; }
    static Quaternion e2() { return {0, 0, 1, 0}; }
    static Quaternion e3() { return {0, 0, 0, 1}; }

    explicit Quaternion(const Eigen::Matrix<Scalar, 4, 1>& v)
        : w_(v[0]), x_(v[1]), y_(v[2]), z_(v[3]) {}

    Eigen::Matrix<Scalar, 4, 1> vec4() const { return {w_, x_, y_, z_}; }

    Scalar w() const { return w_; }
    Scalar x() const { return x_; }
    Scalar y() const { return y_; }
    Scalar z() const { return z_; }

    Scalar real() const { return w_; }
    Eigen::Matrix<Scalar, 3, 1> imag() const { return {x_, y_, z_}; }

    Scalar squared_norm() const { return w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_; }
    Scalar norm() const { return std::sqrt(squared_norm()); }

    Quaternion conj() const { return {w_, -x_, -y_, -z_}; }

    Quaternion inverse() const {
        const Scalar n2 = squared_norm();
        if (n2 == Scalar(0))
            throw std::domain_error("quaternion inverse of zero");
        return {w_ / n2, -x_ / n2, -y_ / n2, -z_ / n2};
    }

    Quaternion operator-() const { return {-w_, -x_, -y_, -z_}; }

    Quaternion& operator+=(const Quaternion& o) {
        w_ += o.w_; x_ += o.x_; y_ += o.y_; z_ += o.z_;
        return *this;
    }
    Quaternion& operator-=(const Quaternion& o) {
        w_ -= o.w_; x_ -= o.x_; y_ -= o.y_; z_ -= o.z_;
        return *this;
    }
    Quaternion& operator*=(Scalar s) {
        w_ *= s; x_ *= s; y_ *= s; z_ *= s;
        return *this;
    }

    friend Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
    friend Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
    friend Quaternion operator*(Quaternion a, Scalar s) { return a *= s; }
    friend Quaternion operator*(Scalar s, Quaternion a) { return a *= s; }
    friend Quaternion operator/(Quaternion a, Scalar s) { return a *= Scalar(1) / s; }

    friend Quaternion operator*(const Quaternion& p, const Quaternion& q) {
        return {p.w_ * q.w_ - p.x_ * q.x_ - p.y_ * q.y_ - p.z_ * q.z_,
                p.w_ * q.x_ + p.x_ * q.w_ + p.y_ * q.z_ - p.z_ * q.y_,
                p.w_ * q.y_ - p.x_ * q.z_ + p.y_ * q.w_ + p.z_ * q.x_,
                p.w_ * q.z_ + p.x_ * q.y_ - p.y_ * q.x_ + p.z_ * q.w_};
    }

    friend bool operator==(const Quaternion& a, const Quaternion& b) {
        return a.w_ == b.w_ && a.x_ == b.x_ && a.y_ == b.y_ && a.z_ == b.z_;
    }
    friend bool operator!=(const Quaternion& a, const Quaternion& b) { return !(a == b); }

private:
    Scalar w_, x_, y_, z_;
};

template <typename Scalar>
Quaternion<Scalar> conj(const Quaternion<Scalar>& q) { return q.conj(); }

template <typename Scalar>
Quaternion<Scalar> inverse(const Quaternion<Scalar>& q) { return q.inverse(); }

template <typename Scalar>
Scalar norm(const Quaternion<Scalar>& q) { return q.norm(); }

template <typename Scalar>
Scalar squared_norm(const Quaternion<Scalar>& q) { return q.squared_norm(); }

// Componentwise (w, x, y, z) ordering; used for deterministic tie-breaking.
template <typename Scalar>
bool lex_less(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
    if (a.w() != b.w()) return a.w() < b.w();
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
}

// A point I of the imaginary sphere: I*I = -1 when embedded with w = 0.
template <typename Scalar>
class UnitImaginary {
public:
    UnitImaginary() : dir_(1, 0, 0) {}

    explicit UnitImaginary(const Eigen::Matrix<Scalar, 3, 1>& dir) {
        const Scalar n = dir.norm();
        if (n == Scalar(0))
            throw std::domain_error("imaginary unit from zero direction");
        dir_ = dir / n;
    }

    const Eigen::Matrix<Scalar, 3, 1>& direction() const { return dir_; }

    Quaternion<Scalar> embed() const { return {0, dir_[0], dir_[1], dir_[2]}; }

private:
    Eigen::Matrix<Scalar, 3, 1> dir_;
};

// I(theta) = e1 cos t1 + e2 sin t1 cos t2 + e3 sin t1 sin t2.
template <typename Scalar>
UnitImaginary<Scalar> imaginary_from_angles(Scalar theta1, Scalar theta2) {
    const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
    if (!(theta1 >= 0 && theta1 <= pi) || !(theta2 >= 0 && theta2 <= pi))
        throw std::domain_error("imaginary_from_angles: angles must lie in [0, pi]");
    const Scalar s1 = std::sin(theta1);
    return UnitImaginary<Scalar>(Eigen::Matrix<Scalar, 3, 1>(
        std::cos(theta1), s1 * std::cos(theta2), s1 * std::sin(theta2)));
}

// q = x + y*I with y >= 0; real q gets I = e1 by convention.
template <typename Scalar>
struct SlicePoint {
    Scalar xcoord;
    Scalar ycoord;
    UnitImaginary<Scalar> unit;

    Quaternion<Scalar> reassemble() const {
        return Quaternion<Scalar>(xcoord) + ycoord * unit.embed();
    }
};

template <typename Scalar>
SlicePoint<Scalar> slice_decompose(const Quaternion<Scalar>& q) {
    const Eigen::Matrix<Scalar, 3, 1> im = q.imag();
    const Scalar y = im.norm();
    if (y == Scalar(0))
        return {q.real(), Scalar(0), UnitImaginary<Scalar>()};
    return {q.real(), y, UnitImaginary<Scalar>(im)};
}

using Quaterniond = Quaternion<double>;
using UnitImaginaryd = UnitImaginary<double>;
using SlicePointd = SlicePoint<double>;

}  // namespace slicereg
