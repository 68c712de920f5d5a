#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace om {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Symmetric 2x2 matrix.
struct Mat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    Mat2() = default;
    Mat2(double xx_, double xy_, double yy_) : xx(xx_), xy(xy_), yy(yy_) {}

    static Mat2 identity() { return {1.0, 0.0, 1.0}; }
    static Mat2 outer(const Vec2& v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

    Mat2 operator+(const Mat2& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
    Mat2 operator-(const Mat2& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
    Mat2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
    Mat2& operator+=(const Mat2& o) { xx += o.xx; xy += o.xy; yy += o.yy; return *this; }

    double trace() const { return xx + yy; }
    double det() const { return xx * yy - xy * xy; }
    Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }

    // Eigenvalues in ascending order.
    void eigenvalues(double& lo, double& hi) const {
        double half_tr = 0.5 * (xx + yy);
        double d = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
        lo = half_tr - d;
        hi = half_tr + d;
    }
};

inline double dot(const Mat2& a, const Mat2& b) {
    return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy;
}

} // namespace om
