#pragma once

#include <gmpxx.h>

#include <string>

namespace abc {

using BigInt = mpz_class;

// Exact rational kept in lowest terms with a positive denominator.
class BigRational {
public:
    BigRational() : v_(0) {}
    BigRational(long n) : v_(n) {}
    BigRational(const BigInt& num, const BigInt& den = 1);
    explicit BigRational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    BigInt num() const { return v_.get_num(); }
    BigInt den() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    double to_double() const { return v_.get_d(); }
    // "num/den"; integers still carry "/1" so the format is uniform.
    std::string str() const;
    static BigRational parse(const std::string& s);

    // Fractional part in [0,1).
    BigRational frac() const;

    friend BigRational operator+(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ + b.v_)); }
    friend BigRational operator-(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ - b.v_)); }
    friend BigRational operator*(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ * b.v_)); }
    friend BigRational operator/(const BigRational& a, const BigRational& b);
    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }

private:
    mpq_class v_;
};

std::string to_decimal(const BigInt& v);
BigInt parse_decimal(const std::string& s);
// Natural log of a positive big integer, accurate to double precision for any size.
double log_big(const BigInt& v);
BigInt pow_big(const BigInt& base, unsigned long e);
// Decimal digit count (exact).
size_t decimal_digits(const BigInt& v);

} // namespace abc
