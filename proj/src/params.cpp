#include "abc/params.hpp"

#include "abc/csv.hpp"

#include <cmath>
#include <sstream>

namespace abc {

namespace {

constexpr double kMaxBits = 3.4e7;  // about 10^7 decimal digits

BigInt checked_pow(const BigInt& q, const BigInt& e, const std::string& what) {
    if (e < 0) throw ParamError(what + ": negative exponent " + to_decimal(e));
    if (!e.fits_ulong_p()) throw ParamError(what + ": exponent " + to_decimal(e) + " too large");
    double bits = double(mpz_sizeinbase(q.get_mpz_t(), 2)) * e.get_d();
    if (bits > kMaxBits)
        throw ParamError(what + ": result would have about " + std::to_string(long(bits * 0.30103)) +
                         " digits (limit 10^7)");
    return pow_big(q, e.get_ui());
}

BigInt ipow(long b, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

struct Targets {
    BigInt l;
    BigInt l_prime;
    int m_smooth;
};

Targets regime_targets(const ParamProfile& pr, int n, const BigInt& q) {
    switch (pr.regime) {
    case Regime::Intermediate: {
        if (pr.r < 4) throw ParamError("Intermediate regime requires r >= 4");
        if (n == 1) return {1, 1, 0};
        BigInt kl_exp = ipow(n, pr.r) - 2;
        BigInt lp_exp = ipow(n - 1, pr.r) - 1;
        return {checked_pow(q, kl_exp, "l_n = q_n^(n^r - 2)"),
                checked_pow(q, lp_exp, "l_n' = q_n^((n-1)^r - 1)"), n - 1};
    }
    case Regime::Log: {
        if (n == 1) return {1, 1, 0};
        if (q < n) throw ParamError("log regime needs q_n >= n for l_n' = q_n^(q_n - n)");
        return {checked_pow(q, q - 2, "l_n = q_n^(q_n - 2)"),
                checked_pow(q, q - n, "l_n' = q_n^(q_n - n)"), n - 1};
    }
    case Regime::Poly: {
        if (pr.K < 2) throw ParamError("polynomial regime requires K >= 2");
        if (n == 1) return {1, 1, 0};
        BigInt k4 = ipow(pr.K, 4);
        return {checked_pow(q, k4 - 2, "l_n = q_n^(K^4 - 2)"),
                checked_pow(q, k4 - pr.K - 3, "l_n' = q_n^(K^4 - K - 3)"), pr.K - 1};
    }
    case Regime::Custom: {
        if (pr.custom.empty()) throw ParamError("custom profile has an empty schedule");
        const CustomStep& c = pr.custom[std::min<size_t>(size_t(n - 1), pr.custom.size() - 1)];
        BigInt l = c.l ? *c.l : checked_pow(q, BigInt(c.l_exp), "custom l_n");
        BigInt lp = c.l_prime ? *c.l_prime : checked_pow(q, BigInt(c.l_prime_exp), "custom l_n'");
        if (l < 1) throw ParamError("custom l_n must be a positive integer");
        if (lp < 1) throw ParamError("custom l_n' must be a positive integer");
        return {l, lp, n - 1};
    }
    }
    throw ParamError("unknown regime");
}

void fill_stage(StageParams& st, const ParamProfile& pr) {
    Targets t = regime_targets(pr, st.n, st.q);
    st.k = 1;
    st.l = t.l;
    st.l_prime = t.l_prime;
    st.m_smooth = t.m_smooth;
    st.eps = default_eps(pr, st.n, st.q);
}

CheckResult pass(std::string d = {}) { return {CheckStatus::Pass, std::move(d)}; }
CheckResult fail(std::string d) { return {CheckStatus::Fail, std::move(d)}; }
CheckResult na(std::string d) { return {CheckStatus::NotApplicable, std::move(d)}; }

} // namespace

std::string ParamProfile::name() const {
    switch (regime) {
    case Regime::Intermediate: return "intermediate(r=" + std::to_string(r) + ")";
    case Regime::Log: return "log";
    case Regime::Poly: return "poly(K=" + std::to_string(K) + ")";
    case Regime::Custom: return "custom";
    }
    return "?";
}

BigRational default_eps(const ParamProfile& pr, int n, const BigInt&) {
    if (size_t(n - 1) < pr.eps_override.size() && pr.eps_override[n - 1]) return *pr.eps_override[n - 1];
    if (pr.regime == Regime::Custom && !pr.custom.empty()) {
        const CustomStep& c = pr.custom[std::min<size_t>(size_t(n - 1), pr.custom.size() - 1)];
        if (c.eps) return *c.eps;
    }
    if (pr.relax_eps) return pr.relaxed_eps;
    return BigRational(1, ipow(n, 4));
}

StageParams initial_stage(const ParamProfile& pr) {
    if (pr.q1 < 2) throw ParamError("q1 must be >= 2");
    StageParams st;
    st.n = 1;
    st.p = 1;
    st.q = pr.q1;
    st.alpha = BigRational(st.p, st.q);
    fill_stage(st, pr);
    return st;
}

StageParams advance_stage(const StageParams& prev, const ParamProfile& pr, std::optional<double> norm_hint) {
    if (prev.alpha != BigRational(prev.p, prev.q))
        throw ParamError("stage " + std::to_string(prev.n) + ": alpha != p/q");
    if (prev.k < 1 || prev.l < 1) throw ParamError("k_n and l_n must be positive integers");
    StageParams st;
    st.n = prev.n + 1;
    st.q = prev.q_next();
    st.p = prev.p_next();
    st.alpha = prev.alpha + prev.beta();
    if (st.alpha != BigRational(st.p, st.q)) throw ParamError("successor alpha does not reduce to p/q");
    fill_stage(st, pr);
    if (norm_hint) st = apply_norm_hint(std::move(st), *norm_hint);
    return st;
}

StageParams apply_norm_hint(StageParams st, double hint) {
    if (!(hint > 0) || !std::isfinite(hint)) throw ParamError("norm hint must be positive and finite");
    BigInt c(std::ceil(hint));
    BigInt need = c * st.l_prime;
    if (st.l < need) st.l = need;
    return st;
}

std::vector<StageParams> build_chain(const ParamProfile& pr, int n_max) {
    std::vector<StageParams> chain{initial_stage(pr)};
    while (chain.back().n < n_max) chain.push_back(advance_stage(chain.back(), pr));
    return chain;
}

BigInt idealized_exponent(int r, int n) {
    BigInt e = 1;
    for (int m = 1; m <= n; ++m) e *= ipow(m, r);
    return e;
}

std::vector<BigInt> idealized_q_sequence(const BigInt& q1, int r, int n_max) {
    if (q1 < 2) throw ParamError("q1 must be >= 2");
    if (r < 4) throw ParamError("r must be >= 4");
    std::vector<BigInt> out;
    for (int n = 1; n <= n_max; ++n) {
        BigInt e = idealized_exponent(r, n);
        double digits = e.get_d() * std::log10(q1.get_d());
        if (digits > 1e7 || !e.fits_ulong_p())
            throw ParamError("idealized q for n=" + std::to_string(n) + " has about " +
                             std::to_string(static_cast<long double>(digits)) + " digits (limit 10^7)");
        out.push_back(pow_big(q1, e.get_ui()));
    }
    return out;
}

int first_checked_stage(const ParamProfile& pr) {
    switch (pr.regime) {
    case Regime::Intermediate:
        for (int n = 2;; ++n)
            if (ipow(n, 2) < ipow(n - 1, pr.r)) return n;
    case Regime::Log:
    case Regime::Poly: return 2;
    case Regime::Custom: return 1;
    }
    return 1;
}

bool ValidationReport::ok() const {
    for (const auto& s : stages)
        for (const CheckResult* c : {&s.ordering, &s.summability, &s.eps, &s.successor})
            if (c->status == CheckStatus::Fail) return false;
    return true;
}

const char* status_name(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::NotApplicable: return "n/a";
    }
    return "?";
}

std::string ValidationReport::text() const {
    std::ostringstream os;
    for (const auto& s : stages) {
        auto line = [&](const char* name, const CheckResult& c) {
            os << "stage " << s.n << " " << name << ": " << status_name(c.status);
            if (!c.detail.empty()) os << " (" << c.detail << ")";
            os << "\n";
        };
        line("ordering", s.ordering);
        line("summability", s.summability);
        line("eps", s.eps);
        line("successor", s.successor);
    }
    os << "overall: " << (ok() ? "pass" : "FAIL") << "\n";
    return os.str();
}

ValidationReport validate_chain(const std::vector<StageParams>& chain, const ParamProfile& pr) {
    if (chain.size() < 2) throw ParamError("validate_chain needs at least two stages");
    ValidationReport rep;
    const int first = first_checked_stage(pr);
    BigRational partial = 0;
    for (size_t i = 0; i < chain.size(); ++i) {
        const StageParams& s = chain[i];
        const StageParams* next = (i + 1 < chain.size()) ? &chain[i + 1] : nullptr;
        StageCheck c;
        c.n = s.n;

        // successor consistency
        if (s.alpha != BigRational(s.p, s.q)) {
            c.successor = fail("alpha != p/q");
        } else if (next) {
            if (next->n != s.n + 1) c.successor = fail("stage indices not consecutive");
            else if (next->q != s.q_next()) c.successor = fail("q_{n+1} != k l q_n^2");
            else if (next->p != s.p_next()) c.successor = fail("p_{n+1} != k l q_n p_n + 1");
            else if (next->alpha - s.alpha != s.beta()) c.successor = fail("alpha_{n+1} - alpha_n != 1/(k l q_n^2)");
            else c.successor = pass();
        } else {
            c.successor = pass("last stage, alpha = p/q only");
        }

        const bool applicable = s.n >= first;
        const std::string pre = "pre-asymptotic stage, checks start at n=" + std::to_string(first);

        // ordering chain
        if (!applicable) {
            c.ordering = na(pre);
        } else if (pr.regime == Regime::Intermediate) {
            BigInt n2 = ipow(s.n, 2), nr = ipow(s.n, pr.r);
            double bits = double(mpz_sizeinbase(s.q.get_mpz_t(), 2)) * nr.get_d();
            if (bits > kMaxBits) {
                c.ordering = na("q_n^(n^r) too large to form exactly");
            } else {
                BigInt a = pow_big(s.q, n2.get_ui()), b = s.l_prime * s.q, top = pow_big(s.q, nr.get_ui());
                if (!(s.q < a)) c.ordering = fail("q_n < q_n^(n^2) violated");
                else if (!(a < b)) c.ordering = fail("q_n^(n^2) < l_n' q_n violated");
                else if (!(b < top)) c.ordering = fail("l_n' q_n < q_n^(n^r) violated");
                else if (next && next->q != top) c.ordering = fail("q_n^(n^r) != q_{n+1}");
                else if (!next && s.q_next() != top) c.ordering = fail("k l q_n^2 != q_n^(n^r)");
                else c.ordering = pass();
            }
        } else {
            BigInt b = s.l_prime * s.q, qn = next ? next->q : s.q_next();
            if (!(s.q < b)) c.ordering = fail("q_n < l_n' q_n violated (l_n' must exceed 1)");
            else if (!(b < qn)) c.ordering = fail("l_n' q_n < q_{n+1} violated");
            else c.ordering = pass();
        }

        // summability of 1/l_n'
        if (!applicable) {
            c.summability = na(pre);
        } else {
            partial = partial + BigRational(1, s.l_prime);
            std::string d = "partial sum " + fmt_double(partial.to_double());
            c.summability = (partial < BigRational(1)) ? pass(d) : fail(d + " >= 1");
        }

        // eps constraints
        if (pr.relax_eps) {
            c.eps = na("relaxed profile");
        } else if (!applicable) {
            c.eps = na(pre);
        } else {
            BigRational bound(1, ipow(s.n, 4));
            if (!(BigRational(0) < s.eps)) c.eps = fail("eps_n must be positive");
            else if (s.eps > bound) c.eps = fail("eps_n <= 1/n^4 violated: " + s.eps.str() + " > " + bound.str());
            else if (!(BigRational(s.q) > BigRational(1) / s.eps)) c.eps = fail("q_n > 1/eps_n violated");
            else if (i > 0 && chain[i - 1].n >= first && s.eps > chain[i - 1].eps)
                c.eps = fail("eps_n not monotonically decreasing");
            else c.eps = pass();
        }
        rep.stages.push_back(std::move(c));
    }
    return rep;
}

nlohmann::json stage_to_json(const StageParams& s) {
    return {{"n", s.n},
            {"p", to_decimal(s.p)},
            {"q", to_decimal(s.q)},
            {"k", to_decimal(s.k)},
            {"l", to_decimal(s.l)},
            {"l_prime", to_decimal(s.l_prime)},
            {"alpha", s.alpha.str()},
            {"eps", s.eps.str()},
            {"m_smooth", s.m_smooth}};
}

StageParams stage_from_json(const nlohmann::json& j) {
    StageParams s;
    s.n = j.at("n").get<int>();
    s.p = parse_decimal(j.at("p").get<std::string>());
    s.q = parse_decimal(j.at("q").get<std::string>());
    s.k = parse_decimal(j.at("k").get<std::string>());
    s.l = parse_decimal(j.at("l").get<std::string>());
    s.l_prime = parse_decimal(j.at("l_prime").get<std::string>());
    s.alpha = BigRational::parse(j.at("alpha").get<std::string>());
    s.eps = BigRational::parse(j.at("eps").get<std::string>());
    s.m_smooth = j.value("m_smooth", 0);
    return s;
}

nlohmann::json chain_to_json(const std::vector<StageParams>& chain) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : chain) a.push_back(stage_to_json(s));
    return a;
}

std::vector<StageParams> chain_from_json(const nlohmann::json& j) {
    std::vector<StageParams> out;
    for (const auto& e : j) out.push_back(stage_from_json(e));
    return out;
}

nlohmann::json profile_to_json(const ParamProfile& p) {
    nlohmann::json j;
    switch (p.regime) {
    case Regime::Intermediate: j["regime"] = "intermediate"; j["r"] = p.r; break;
    case Regime::Log: j["regime"] = "log"; break;
    case Regime::Poly: j["regime"] = "poly"; j["K"] = p.K; break;
    case Regime::Custom: j["regime"] = "custom"; break;
    }
    j["q1"] = to_decimal(p.q1);
    j["relax_eps"] = p.relax_eps;
    j["relaxed_eps"] = p.relaxed_eps.str();
    if (!p.custom.empty()) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& c : p.custom) {
            nlohmann::json e = nlohmann::json::object();
            if (c.l) e["l"] = to_decimal(*c.l); else e["l_exp"] = c.l_exp;
            if (c.l_prime) e["l_prime"] = to_decimal(*c.l_prime); else e["l_prime_exp"] = c.l_prime_exp;
            if (c.eps) e["eps"] = c.eps->str();
            a.push_back(e);
        }
        j["custom"] = a;
    }
    if (!p.eps_override.empty()) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& e : p.eps_override) a.push_back(e ? nlohmann::json(e->str()) : nlohmann::json(nullptr));
        j["eps"] = a;
    }
    return j;
}

namespace {
BigInt json_int(const nlohmann::json& v) {
    if (v.is_string()) return parse_decimal(v.get<std::string>());
    if (v.is_number_integer()) return BigInt(v.get<long>());
    throw ParamError("expected integer (number or decimal string)");
}
BigRational json_rat(const nlohmann::json& v) {
    if (v.is_string()) return BigRational::parse(v.get<std::string>());
    if (v.is_number_integer()) return BigRational(v.get<long>());
    throw ParamError("expected exact rational as \"num/den\" string");
}
} // namespace

ParamProfile profile_from_json(const nlohmann::json& j) {
    ParamProfile p;
    std::string reg = j.value("regime", "intermediate");
    if (reg == "intermediate") p.regime = Regime::Intermediate;
    else if (reg == "log") p.regime = Regime::Log;
    else if (reg == "poly") p.regime = Regime::Poly;
    else if (reg == "custom") p.regime = Regime::Custom;
    else throw ParamError("unknown regime '" + reg + "'");
    p.r = j.value("r", 4);
    p.K = j.value("K", 2);
    if (j.contains("q1")) p.q1 = json_int(j["q1"]);
    p.relax_eps = j.value("relax_eps", false);
    if (j.contains("relaxed_eps")) p.relaxed_eps = json_rat(j["relaxed_eps"]);
    if (j.contains("custom")) {
        for (const auto& e : j["custom"]) {
            CustomStep c;
            if (e.contains("l")) c.l = json_int(e["l"]);
            if (e.contains("l_prime")) c.l_prime = json_int(e["l_prime"]);
            c.l_exp = e.value("l_exp", 0ul);
            c.l_prime_exp = e.value("l_prime_exp", 0ul);
            if (e.contains("eps")) c.eps = json_rat(e["eps"]);
            p.custom.push_back(c);
        }
    }
    if (j.contains("eps")) {
        for (const auto& e : j["eps"]) {
            if (e.is_null()) p.eps_override.push_back(std::nullopt);
            else p.eps_override.push_back(json_rat(e));
        }
    }
    if (p.regime == Regime::Intermediate && p.r < 4) throw ParamError("Intermediate regime requires r >= 4");
    if (p.regime == Regime::Poly && p.K < 2) throw ParamError("polynomial regime requires K >= 2");
    return p;
}

} // namespace abc
