#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgsim/graph.hpp"

namespace sgsim {

// Exact rational on 64-bit numerator/denominator, normalized with gcd and a
// positive denominator. Intermediate products run in 128 bits; anything that
// cannot be reduced back into 64 bits throws instead of wrapping. Witness
// arithmetic stays tiny (denominators bounded by n), so the guard never fires
// in legitimate use.
class Rational {
public:
    Rational() = default;
    Rational(long long value) : num_(value) {}
    Rational(long long num, long long den) {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        normalize(num, den);
    }

    long long num() const { return num_; }
    long long den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 num = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 den = i128(a.den_) * b.den_;
        return from_i128(num, den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 num = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        __int128 den = i128(a.den_) * b.den_;
        return from_i128(num, den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational: division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    static Rational parse(const std::string& num, const std::string& den) {
        return Rational(std::stoll(num), std::stoll(den));
    }

private:
    static __int128 i128(long long v) { return static_cast<__int128>(v); }

    static Rational from_i128(__int128 num, __int128 den) {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        const __int128 lo = std::numeric_limits<long long>::min();
        const __int128 hi = std::numeric_limits<long long>::max();
        if (num < lo || num > hi || den > hi)
            throw std::overflow_error("rational: magnitude exceeds 64 bits");
        Rational r;
        r.num_ = static_cast<long long>(num);
        r.den_ = static_cast<long long>(den);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalize(long long num, long long den) {
        *this = from_i128(i128(num), i128(den));
    }

    long long num_ = 0;
    long long den_ = 1;
};

// Exact R(G,x) for integer-weighted graphs and rational x.
inline Rational quadratic_form_exact(const Graph& g, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != g.vertex_count())
        throw std::invalid_argument("quadratic_form_exact: vector length mismatch");
    Rational r(0);
    for (const Edge& e : g.edges()) {
        if (e.w != static_cast<long long>(e.w))
            throw std::invalid_argument("quadratic_form_exact: non-integer edge weight");
        Rational d = x[e.u] - x[e.v];
        r += Rational(static_cast<long long>(e.w)) * d * d;
    }
    return r;
}

}  // namespace sgsim
