#pragma once

#include <cmath>
#include <ostream>

namespace minkgeo {

/// Plain 2-vector in ambient coordinates. Covectors (row functionals) reuse
/// the same storage; applying a covector to a vector is dot().
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double a) const { return {a * x, a * y}; }
    constexpr Vec2 operator/(double a) const { return {x / a, y / a}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double a) { x *= a; y *= a; return *this; }

    double norm2() const { return std::hypot(x, y); }
};

constexpr Vec2 operator*(double a, Vec2 v) { return {a * v.x, a * v.y}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Signed area of the pair (a, b); the 2-D cross product.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline std::ostream& operator<<(std::ostream& os, Vec2 v) {
    return os << "(" << v.x << ", " << v.y << ")";
}

/// 2x2 matrix, row-major.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    constexpr Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    constexpr double det() const { return a11 * a22 - a12 * a21; }

    constexpr Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    constexpr Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }

    /// Matrix with the given columns.
    static constexpr Mat2 from_columns(Vec2 c1, Vec2 c2) { return {c1.x, c2.x, c1.y, c2.y}; }

    static constexpr Mat2 identity() { return {}; }

    static Mat2 rotation(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, s, c};
    }
};

inline double max_abs_entry_diff(const Mat2& a, const Mat2& b) {
    double m = std::fabs(a.a11 - b.a11);
    m = std::max(m, std::fabs(a.a12 - b.a12));
    m = std::max(m, std::fabs(a.a21 - b.a21));
    m = std::max(m, std::fabs(a.a22 - b.a22));
    return m;
}

} // namespace minkgeo
