#include "abc/scaling.hpp"

#include <cmath>
#include <ostream>

#include "abc/csv.hpp"

namespace abc {

double log_gamma_r(double x, int r) {
    if (!(x >= 1.0)) throw DomainError("gamma_r: argument must be >= 1");
    if (r < 1) throw DomainError("gamma_r: r must be positive");
    return r * std::lgamma(std::pow(x, 1.0 / r) + 1.0);
}

double gamma_r(double x, int r) { return std::exp(log_gamma_r(x, r)); }

double gamma_r_inv_log(double log_y, int r) {
    if (!(log_y >= 0.0)) throw DomainError("gamma_r_inv: argument must be >= 1");
    if (log_y == 0.0) return 1.0;
    // Solve lgamma(u + 1) = log_y / r in u = x^(1/r) >= 1.
    const double target = log_y / r;
    double lo = 1.0, hi = 2.0;
    while (std::lgamma(hi + 1.0) < target) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (std::lgamma(mid + 1.0) < target) lo = mid;
        else hi = mid;
    }
    double u = 0.5 * (lo + hi);
    return std::pow(u, r);
}

double gamma_r_inv(double y, int r) {
    if (!(y >= 1.0)) throw DomainError("gamma_r_inv: argument must be >= 1");
    return gamma_r_inv_log(std::log(y), r);
}

std::string ScalingFamily::name() const {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return std::string(buf);
    };
    switch (kind) {
    case Kind::Pol: return "pol";
    case Kind::Log: return "log";
    case Kind::Int1: return "int1(" + std::to_string(r) + ";" + num(q1) + ")";
    case Kind::Int2: return "int2(" + std::to_string(r) + ";" + num(q1) + ")";
    }
    return "?";
}

ScalingFamily ScalingFamily::parse(const std::string& s) {
    if (s == "pol") return pol();
    if (s == "log") return log();
    for (auto [prefix, kind] : {std::pair{"int1(", Kind::Int1}, std::pair{"int2(", Kind::Int2}}) {
        std::string p(prefix);
        if (s.rfind(p, 0) == 0 && s.back() == ')') {
            std::string body = s.substr(p.size(), s.size() - p.size() - 1);
            auto sep = body.find_first_of(";,");
            if (sep == std::string::npos) break;
            ScalingFamily f{kind, std::stoi(body.substr(0, sep)), std::stod(body.substr(sep + 1))};
            if (f.r < 4 || f.q1 < 2) throw DomainError("intermediate families require r >= 4 and q1 >= 2");
            return f;
        }
    }
    throw DomainError("unknown scaling family '" + s + "'");
}

double log_eval(const ScalingFamily& f, double log_m, double t) {
    if (!(t > 0)) throw DomainError("scale parameter t must be positive");
    switch (f.kind) {
    case ScalingFamily::Kind::Pol: return t * log_m;
    case ScalingFamily::Kind::Log:
        if (!(log_m > 0)) throw DomainError("log scale needs ln m > 0");
        return t * std::log(log_m);
    case ScalingFamily::Kind::Int1:
    case ScalingFamily::Kind::Int2: {
        if (f.r < 4 || f.q1 < 2) throw DomainError("intermediate families require r >= 4 and q1 >= 2");
        double ratio = log_m / std::log(f.q1);
        if (!(ratio >= 1.0)) throw DomainError("ln m / ln q1 < 1 outside the intermediate scale domain");
        double g = gamma_r_inv_log(std::log(ratio), f.r);
        if (f.kind == ScalingFamily::Kind::Int1) return t * log_m / g;
        return t * log_m / std::pow(g, double(f.r - 2) / f.r);
    }
    }
    return 0;
}

double eval(const ScalingFamily& f, double m, double t) {
    if (!(m >= 2)) throw DomainError("scale argument m must be >= 2");
    double lv = log_eval(f, std::log(m), t);
    if (lv > std::log(std::numeric_limits<double>::max())) return kInf;
    return std::exp(lv);
}

std::vector<OrderingRow> ordering_table(const ScalingFamily& slow, const ScalingFamily& fast, double t, double s,
                                        const std::vector<BigInt>& m_grid) {
    std::vector<OrderingRow> out;
    for (size_t i = 0; i < m_grid.size(); ++i) {
        if (i > 0 && !(m_grid[i - 1] < m_grid[i])) throw DomainError("ordering grid must be increasing");
        double lm = log_big(m_grid[i]);
        out.push_back({m_grid[i], log_eval(slow, lm, t) - log_eval(fast, lm, s)});
    }
    return out;
}

void write_ordering_csv(std::ostream& os, const std::vector<OrderingRow>& rows) {
    os << "m,log_ratio,ratio_finite\n";
    for (const auto& r : rows) {
        double v = std::exp(r.log_ratio);
        std::string fin = std::isinf(v) ? "inf" : (v == 0.0 ? "0" : fmt_double(v));
        os << to_decimal(r.m) << "," << fmt_double(r.log_ratio) << "," << fin << "\n";
    }
}

} // namespace abc
