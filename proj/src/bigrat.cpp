#include "abc/bigrat.hpp"

#include <cmath>
#include <stdexcept>

namespace abc {

BigRational::BigRational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("BigRational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.v_ == 0) throw std::domain_error("BigRational: division by zero");
    return BigRational(mpq_class(a.v_ / b.v_));
}

std::string BigRational::str() const {
    return to_decimal(v_.get_num()) + "/" + to_decimal(v_.get_den());
}

BigRational BigRational::parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return BigRational(parse_decimal(s), 1);
    return BigRational(parse_decimal(s.substr(0, slash)), parse_decimal(s.substr(slash + 1)));
}

BigRational BigRational::frac() const {
    BigInt n = v_.get_num(), d = v_.get_den(), r;
    mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return BigRational(r, d);
}

std::string to_decimal(const BigInt& v) { return v.get_str(10); }

BigInt parse_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer string");
    size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad integer string: " + s);
    for (size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("bad integer string: " + s);
    return BigInt(s, 10);
}

double log_big(const BigInt& v) {
    if (v <= 0) throw std::domain_error("log of non-positive integer");
    long e = 0;
    double m = mpz_get_d_2exp(&e, v.get_mpz_t());
    return std::log(m) + double(e) * std::log(2.0);
}

BigInt pow_big(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

size_t decimal_digits(const BigInt& v) {
    if (v == 0) return 1;
    BigInt a = abs(v);
    size_t est = mpz_sizeinbase(a.get_mpz_t(), 10); // exact or one too large
    BigInt p = pow_big(10, est - 1);
    return (a < p) ? est - 1 : est;
}

} // namespace abc
