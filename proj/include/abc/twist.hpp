#pragma once

#include <cmath>
#include <limits>

namespace abc {

struct Pt {
    double x = 0;
    double y = 0;
};

inline double wrap01(double v) {
    double r = v - std::floor(v);
    return r >= 1.0 ? 0.0 : r;
}

// Signed difference a - b reduced to [-1/2, 1/2).
inline double circ_diff(double a, double b) {
    double d = a - b;
    return d - std::floor(d + 0.5);
}

inline double circ_dist(double a, double b) { return std::fabs(circ_diff(a, b)); }

inline double torus_dist(Pt a, Pt b) { return std::max(circ_dist(a.x, b.x), circ_dist(a.y, b.y)); }

// 6u^5 - 15u^4 + 10u^3, clamped to [0,1].
inline double smoothstep5(double u) {
    if (u <= 0) return 0;
    if (u >= 1) return 1;
    return u * u * u * (u * (u * 6 - 15) + 10);
}

// Smooth ramp: 0 for v <= -1, 1 for v >= 1.
inline double ramp(double v) { return smoothstep5(0.5 * (v + 1)); }

constexpr double kFar = std::numeric_limits<double>::infinity();

// Area-preserving twist of the unit square: quarter turn on [2e,1-2e]^2, identity off [e,1-e]^2.
class SquareTwist {
public:
    explicit SquareTwist(double eps);
    double eps() const { return eps_; }
    Pt apply(Pt p, bool inverse = false) const;
    // Twist fraction a(rho): 1 in the rotation zone, 0 in the identity zone.
    double turn(double rho) const;
    // Lower bound on the distance to the lines where the derivative jumps.
    double kink_distance(Pt p) const;

private:
    double eps_;
    double inner_;  // 1/2 - 2 eps
    double outer_;  // 1/2 - eps
};

Pt square_twist_eval(const SquareTwist& tw, Pt p, bool inverse = false);
// Twist rescaled horizontally into each cell [i/q, (i+1)/q) x [0,1).
Pt phi_q_eval(long q, double eps, Pt p, bool inverse = false);

} // namespace abc
