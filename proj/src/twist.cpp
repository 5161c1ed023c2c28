#include "abc/twist.hpp"

#include <stdexcept>

namespace abc {

SquareTwist::SquareTwist(double eps) : eps_(eps), inner_(0.5 - 2 * eps), outer_(0.5 - eps) {
    if (!(eps > 0 && eps < 0.25)) throw std::invalid_argument("SquareTwist: eps must lie in (0, 1/4)");
}

double SquareTwist::turn(double rho) const {
    if (rho <= inner_) return 1;
    if (rho >= outer_) return 0;
    return 1 - smoothstep5((rho - inner_) / eps_);
}

namespace {

// Arc-length position on the square of sup-radius rho, counterclockwise from (rho, -rho).
double arc_of(double X, double Y, double rho) {
    if (std::fabs(X) >= std::fabs(Y)) {
        if (X > 0) return Y + rho;
        return 5 * rho - Y;
    }
    if (Y > 0) return 3 * rho - X;
    return 7 * rho + X;
}

void point_of(double s, double rho, double& X, double& Y) {
    double side = 2 * rho;
    if (s < side) {
        X = rho;
        Y = s - rho;
    } else if (s < 2 * side) {
        Y = rho;
        X = 3 * rho - s;
    } else if (s < 3 * side) {
        X = -rho;
        Y = 5 * rho - s;
    } else {
        Y = -rho;
        X = s - 7 * rho;
    }
}

} // namespace

Pt SquareTwist::apply(Pt p, bool inverse) const {
    const double X = p.x - 0.5, Y = p.y - 0.5;
    const double rho = std::max(std::fabs(X), std::fabs(Y));
    if (rho >= outer_) return p;
    if (rho <= inner_) {
        if (inverse) return {p.y, 1.0 - p.x};
        return {1.0 - p.y, p.x};
    }
    const double per = 8 * rho;
    double s = arc_of(X, Y, rho);
    double shift = 2 * rho * turn(rho);
    s += inverse ? -shift : shift;
    s = std::fmod(s, per);
    if (s < 0) s += per;
    double X2, Y2;
    point_of(s, rho, X2, Y2);
    return {X2 + 0.5, Y2 + 0.5};
}

double SquareTwist::kink_distance(Pt p) const {
    const double X = p.x - 0.5, Y = p.y - 0.5;
    const double rho = std::max(std::fabs(X), std::fabs(Y));
    double off_annulus = 0;
    if (rho < inner_) off_annulus = inner_ - rho;
    else if (rho > outer_) off_annulus = rho - outer_;
    double in_diag = std::fabs(std::fabs(X) - std::fabs(Y)) / std::sqrt(2.0);
    Pt o = apply(p);
    double out_diag = std::fabs(std::fabs(o.x - 0.5) - std::fabs(o.y - 0.5)) / std::sqrt(2.0);
    double lip = 3 + 1.875 / eps_;
    return std::max(off_annulus, std::min(in_diag, out_diag / lip));
}

Pt square_twist_eval(const SquareTwist& tw, Pt p, bool inverse) { return tw.apply(p, inverse); }

Pt phi_q_eval(long q, double eps, Pt p, bool inverse) {
    if (q < 1) throw std::invalid_argument("phi_q_eval: q must be >= 1");
    SquareTwist tw(eps);
    double v = p.x * q;
    double cell = std::floor(v);
    Pt loc{v - cell, p.y};
    if (loc.x >= 1.0) loc.x = 0;
    Pt r = tw.apply(loc, inverse);
    return {wrap01((cell + r.x) / q), wrap01(r.y)};
}

} // namespace abc
