#ifndef SPECSEQ_RATIONAL_HPP
#define SPECSEQ_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "specseq/errors.hpp"

namespace specseq {

/* Arbitrary-precision rational, always canonical: gcd(num,den)=1, den>0. */
class BigRational {
  public:
    BigRational() : v_(0) {}
    BigRational(long n) : v_(n) {}
    BigRational(long n, long d) : v_(n, d) {
        if (d == 0) throw division_by_zero();
        v_.canonicalize();
    }
    explicit BigRational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit BigRational(const mpz_class& z) : v_(z) {}

    // accepts "a" or "a/b" with optional sign on a
    static BigRational from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            mpq_class q{mpz_class(s)};
            return BigRational(q);
        }
        mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) throw division_by_zero();
        mpq_class q(num, den);
        q.canonicalize();
        return BigRational(q);
    }

    const mpq_class& raw() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    BigRational operator-() const { return BigRational(mpq_class(-v_)); }
    BigRational operator+(const BigRational& o) const { return BigRational(mpq_class(v_ + o.v_)); }
    BigRational operator-(const BigRational& o) const { return BigRational(mpq_class(v_ - o.v_)); }
    BigRational operator*(const BigRational& o) const { return BigRational(mpq_class(v_ * o.v_)); }
    BigRational operator/(const BigRational& o) const {
        if (o.is_zero()) throw division_by_zero();
        return BigRational(mpq_class(v_ / o.v_));
    }
    BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
    BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
    BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }

    BigRational inverse() const {
        if (is_zero()) throw division_by_zero();
        return BigRational(mpq_class(1 / v_));
    }

    bool operator==(const BigRational& o) const { return v_ == o.v_; }
    bool operator!=(const BigRational& o) const { return v_ != o.v_; }
    bool operator<(const BigRational& o) const { return v_ < o.v_; }
    bool operator>(const BigRational& o) const { return v_ > o.v_; }

    std::string str() const { return v_.get_str(); }

  private:
    mpq_class v_;
};

inline BigRational abs(const BigRational& r) { return r.sign() < 0 ? -r : r; }

/* Exact square root; throws not_a_perfect_square when none exists in Q. */
inline BigRational rational_sqrt(const BigRational& r) {
    if (r.sign() < 0) throw not_a_perfect_square(r.str());
    mpz_class num = r.numerator(), den = r.denominator();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        throw not_a_perfect_square(r.str());
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    mpq_class q(sn, sd);
    q.canonicalize();
    return BigRational(q);
}

/* Write n = s^2 * k with k squarefree; returns (s, k).  Trial division:
   desk-scale inputs only. */
inline std::pair<mpz_class, mpz_class> squarefree_decompose(mpz_class n) {
    if (n <= 0) throw error("squarefree_decompose expects a positive integer");
    mpz_class s = 1, k = 1;
    mpz_class p = 2;
    const long limit = 1000000;
    while (p * p <= n) {
        if (p > limit)
            throw error("integer too large to factor for square-root normalization");
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        for (unsigned t = 0; t + 1 < e; t += 2) s *= p;
        if (e % 2) k *= p;
        p += (p == 2) ? 1 : 2;
    }
    if (n > 1) k *= n;
    return {s, k};
}

/* Element of Q(i).  Field operations are exact. */
class GaussianRational {
  public:
    GaussianRational() = default;
    GaussianRational(long n) : re_(n) {}
    GaussianRational(const BigRational& re) : re_(re) {}
    GaussianRational(const BigRational& re, const BigRational& im) : re_(re), im_(im) {}

    static GaussianRational i() { return GaussianRational(BigRational(0), BigRational(1)); }

    const BigRational& re() const { return re_; }
    const BigRational& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_one() const { return re_.is_one() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    GaussianRational conj() const { return GaussianRational(re_, -im_); }
    BigRational norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational operator-() const { return GaussianRational(-re_, -im_); }
    GaussianRational operator+(const GaussianRational& o) const {
        return GaussianRational(re_ + o.re_, im_ + o.im_);
    }
    GaussianRational operator-(const GaussianRational& o) const {
        return GaussianRational(re_ - o.re_, im_ - o.im_);
    }
    GaussianRational operator*(const GaussianRational& o) const {
        return GaussianRational(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }
    GaussianRational inverse() const {
        BigRational n = norm();
        if (n.is_zero()) throw division_by_zero();
        return GaussianRational(re_ / n, -im_ / n);
    }
    GaussianRational operator/(const GaussianRational& o) const { return *this * o.inverse(); }
    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

    bool operator==(const GaussianRational& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }

    std::string str() const {
        if (im_.is_zero()) return re_.str();
        std::string s;
        if (!re_.is_zero()) s = re_.str() + (im_.sign() > 0 ? "+" : "");
        if (im_.is_one())
            s += "i";
        else if ((-im_).is_one())
            s += "-i";
        else
            s += im_.str() + "*i";
        return s;
    }

  private:
    BigRational re_, im_;
};

}  // namespace specseq

#endif
