#pragma once

#include "abc/bigrat.hpp"

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace abc {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Gamma_r(x) = Gamma(x^(1/r) + 1)^r on x >= 1.
double gamma_r(double x, int r);
double log_gamma_r(double x, int r);
// Inverse of Gamma_r on [1, inf); y >= 1.
double gamma_r_inv(double y, int r);
// Inverse taking log(y), usable when y itself overflows.
double gamma_r_inv_log(double log_y, int r);

struct ScalingFamily {
    enum class Kind { Pol, Log, Int1, Int2 };
    Kind kind = Kind::Pol;
    int r = 4;
    double q1 = 2;

    static ScalingFamily pol() { return {Kind::Pol, 0, 0}; }
    static ScalingFamily log() { return {Kind::Log, 0, 0}; }
    static ScalingFamily int1(int r, double q1) { return {Kind::Int1, r, q1}; }
    static ScalingFamily int2(int r, double q1) { return {Kind::Int2, r, q1}; }

    std::string name() const;
    static ScalingFamily parse(const std::string& s);
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// log a_m(t) given log m.
double log_eval(const ScalingFamily& f, double log_m, double t);
// a_m(t); +inf when the value overflows.
double eval(const ScalingFamily& f, double m, double t);

struct OrderingRow {
    BigInt m;
    double log_ratio = 0;
};

std::vector<OrderingRow> ordering_table(const ScalingFamily& slow, const ScalingFamily& fast, double t, double s,
                                        const std::vector<BigInt>& m_grid);
void write_ordering_csv(std::ostream& os, const std::vector<OrderingRow>& rows);

} // namespace abc
