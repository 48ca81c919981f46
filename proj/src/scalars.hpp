#ifndef COBAREXT_SCALARS_HPP
#define COBAREXT_SCALARS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <limits>

#include "error.hpp"

namespace cbx {

using Int = mpz_class;
using Rat = mpq_class;

// +infinity stand-in for valuations; small enough that val + val never wraps
inline constexpr long VAL_INF = std::numeric_limits<long>::max() / 4;

struct Prime {
    long p;
    explicit Prime(long p_);
};

long val_p(const Int& n, long p);
long val_p(const Rat& q, long p);

// x / p^k for exactly divisible x; throws insufficient_divisibility otherwise
Rat divide_p_exact(const Rat& q, long p, long k);

// max N with p^N <= 2^62, so residues and moduli fit in uint64_t
int max_precision(long p);

uint64_t pow_u64(long p, int n);
uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t invmod_u64(uint64_t a, uint64_t m);  // gcd(a, m) = 1 required

/* An element of Z/p^N.  Precision rides with the value: mixed-precision
   sums and products land at the minimum of the operand precisions. */
class Padic {
  public:
    Padic() : p_(0), n_(0), r_(0) {}
    Padic(long p, int N, uint64_t residue);

    static Padic from_int(long p, int N, const Int& z);
    static Padic from_rat(long p, int N, const Rat& q);  // negative_valuation if q not p-local

    long prime() const { return p_; }
    int precision() const { return n_; }
    uint64_t residue() const { return r_; }
    uint64_t modulus() const { return pow_u64(p_, n_); }

    bool is_zero() const { return r_ == 0; }
    long val() const;  // min(nu_p(residue), N)

    Padic operator+(const Padic& o) const;
    Padic operator-(const Padic& o) const;
    Padic operator-() const;
    Padic operator*(const Padic& o) const;
    Padic& operator+=(const Padic& o) { return *this = *this + o; }
    Padic& operator*=(const Padic& o) { return *this = *this * o; }
    bool operator==(const Padic& o) const;

    // y with p^k * y = x at precision N - k
    Padic divide_p(int k) const;
    // multiplicative inverse; requires val() = 0
    Padic inverse() const;
    // same residue class truncated to a smaller precision
    Padic truncate(int N) const;

  private:
    long p_;
    int n_;
    uint64_t r_;
    void match(const Padic& o) const;
};

}  // namespace cbx

#endif
