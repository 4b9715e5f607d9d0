#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace dgxfem {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // 2-d cross product (z component of the 3-d cross)
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    // counterclockwise rotation by 90 degrees
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

using ScalarField = std::function<double(Vec2)>;
using VectorField = std::function<Vec2(Vec2)>;

// Base for all recoverable solver/geometry failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Interface under-resolved by the mesh: a cell is crossed more than once.
struct AmbiguousCut : Error {
    explicit AmbiguousCut(const std::string& msg) : Error(msg) {}
};

struct UnsupportedOrder : Error {
    explicit UnsupportedOrder(const std::string& msg) : Error(msg) {}
};

struct InvalidThreshold : Error {
    explicit InvalidThreshold(const std::string& msg) : Error(msg) {}
};

struct IllConditionedMass : Error {
    explicit IllConditionedMass(const std::string& msg) : Error(msg) {}
};

struct DegeneratePolygon : Error {
    explicit DegeneratePolygon(const std::string& msg) : Error(msg) {}
};

}  // namespace dgxfem
