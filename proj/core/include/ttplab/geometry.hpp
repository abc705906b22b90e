#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ttplab {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr const double& operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

// 3x3 matrix, row-major; for a velocity gradient, m(i,j) = dV_i/dx_j.
struct Mat3 {
    std::array<double, 9> m{};

    constexpr double& operator()(std::size_t i, std::size_t j) { return m[3 * i + j]; }
    constexpr const double& operator()(std::size_t i, std::size_t j) const { return m[3 * i + j]; }

    constexpr Mat3& operator+=(const Mat3& o) {
        for (std::size_t k = 0; k < 9; ++k) m[k] += o.m[k];
        return *this;
    }
    constexpr Mat3& operator-=(const Mat3& o) {
        for (std::size_t k = 0; k < 9; ++k) m[k] -= o.m[k];
        return *this;
    }
    constexpr Mat3& operator*=(double s) {
        for (std::size_t k = 0; k < 9; ++k) m[k] *= s;
        return *this;
    }

    constexpr double trace() const { return m[0] + m[4] + m[8]; }

    static constexpr Mat3 identity() {
        Mat3 r;
        r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return r;
    }
};

constexpr Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
constexpr Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
constexpr Mat3 operator*(double s, Mat3 a) { return a *= s; }
constexpr Mat3 operator*(Mat3 a, double s) { return a *= s; }

// Matrix-vector product: (m v)_i = m(i,j) v_j.
constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

// Row-contraction used for advection terms: (v . grad) V, with m(i,j) = dV_i/dx_j.
constexpr Vec3 advect(const Vec3& v, const Mat3& grad) { return grad * v; }

constexpr Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
}

constexpr Mat3 transpose(const Mat3& a) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}

// Curl from a gradient tensor with the m(i,j) = dV_i/dx_j convention.
constexpr Vec3 curl_of(const Mat3& grad_v) {
    return {grad_v(2, 1) - grad_v(1, 2),
            grad_v(0, 2) - grad_v(2, 0),
            grad_v(1, 0) - grad_v(0, 1)};
}

struct Box3 {
    Vec3 lo, hi;

    constexpr double volume() const {
        return (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z);
    }
    constexpr bool contains(const Vec3& r, double tol = 0.0) const {
        return r.x >= lo.x - tol && r.x <= hi.x + tol && r.y >= lo.y - tol &&
               r.y <= hi.y + tol && r.z >= lo.z - tol && r.z <= hi.z + tol;
    }
    constexpr Vec3 extent() const { return hi - lo; }
};

}  // namespace ttplab
