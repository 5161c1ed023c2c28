#pragma once

#include "abc/bigrat.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abc {

struct StageParams {
    int n = 1;
    BigInt p = 1;
    BigInt q = 2;
    BigInt k = 1;
    BigInt l = 1;
    BigInt l_prime = 1;
    BigRational alpha{1, 2};
    BigRational eps{1, 8};
    int m_smooth = 0;

    // beta_n = 1/(k l q^2), the rotation increment to the next stage.
    BigRational beta() const { return BigRational(1, k * l * q * q); }
    BigInt q_next() const { return k * l * q * q; }
    BigInt p_next() const { return k * l * q * p + 1; }
};

enum class Regime { Intermediate, Log, Poly, Custom };

// One entry of a custom schedule. Either explicit integers or exponents of q_n.
struct CustomStep {
    std::optional<BigInt> l;
    std::optional<BigInt> l_prime;
    unsigned long l_exp = 0;
    unsigned long l_prime_exp = 0;
    std::optional<BigRational> eps;
};

struct ParamProfile {
    Regime regime = Regime::Intermediate;
    int r = 4;  // Intermediate
    int K = 2;  // Poly
    std::vector<CustomStep> custom;  // index n-1
    BigInt q1 = 2;
    bool relax_eps = false;
    BigRational relaxed_eps{1, 8};
    std::vector<std::optional<BigRational>> eps_override;  // index n-1

    std::string name() const;
};

class ParamError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Stage 1 of a chain. Regime profiles use a seed stage with k = l = l' = 1 so that q_2 = q_1^2.
StageParams initial_stage(const ParamProfile& profile);
StageParams advance_stage(const StageParams& prev, const ParamProfile& profile,
                          std::optional<double> norm_hint = std::nullopt);
// Raises l to ceil(hint) * l' when below; the successor is unaffected until advanced.
StageParams apply_norm_hint(StageParams st, double norm_hint);
std::vector<StageParams> build_chain(const ParamProfile& profile, int n_max);

// eps_n used by the profile at stage n with denominator q.
BigRational default_eps(const ParamProfile& profile, int n, const BigInt& q);

// Entry i is q~_{i+2} for i = 0..n_max-1, i.e. q1^(prod_{m<=n} m^r) for n = 1..n_max.
std::vector<BigInt> idealized_q_sequence(const BigInt& q1, int r, int n_max);
// Exponent prod_{m=1}^n m^r, exact.
BigInt idealized_exponent(int r, int n);

enum class CheckStatus { Pass, Fail, NotApplicable };

struct CheckResult {
    CheckStatus status = CheckStatus::NotApplicable;
    std::string detail;
};

struct StageCheck {
    int n = 0;
    CheckResult ordering;
    CheckResult summability;
    CheckResult eps;
    CheckResult successor;
};

struct ValidationReport {
    std::vector<StageCheck> stages;
    bool ok() const;
    std::string text() const;
};

// First stage index at which the asymptotic ordering chain is satisfiable for the profile.
int first_checked_stage(const ParamProfile& profile);
ValidationReport validate_chain(const std::vector<StageParams>& chain, const ParamProfile& profile);

nlohmann::json stage_to_json(const StageParams& s);
StageParams stage_from_json(const nlohmann::json& j);
nlohmann::json chain_to_json(const std::vector<StageParams>& chain);
std::vector<StageParams> chain_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const ParamProfile& p);
ParamProfile profile_from_json(const nlohmann::json& j);

const char* status_name(CheckStatus s);

} // namespace abc
