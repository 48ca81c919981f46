#include "scalars.hpp"

namespace cbx {

const char* err_name(Err e) {
    switch (e) {
        case Err::none: return "ok";
        case Err::negative_valuation: return "NegativeValuation";
        case Err::insufficient_divisibility: return "InsufficientDivisibility";
        case Err::precision_exhausted: return "PrecisionExhausted";
        case Err::exponent_overflow: return "ExponentOverflow";
        case Err::infinite_basis: return "InfiniteBasis";
        case Err::integrality_failure: return "IntegralityFailure";
        case Err::window_too_small: return "WindowTooSmall";
        case Err::not_a_coideal: return "NotACoidealError";
        case Err::centrality_violation: return "CentralityViolation";
        case Err::window_guard_violation: return "WindowGuardViolation";
        case Err::series_precision: return "SeriesPrecisionError";
        case Err::rule_gap: return "RuleGapError";
        case Err::not_contained: return "NotContained";
        case Err::unknown_scenario: return "UnknownScenario";
        case Err::bad_config: return "ConfigError";
        case Err::internal: return "InternalError";
    }
    return "InternalError";
}

Prime::Prime(long p_) : p(p_) {
    if (p < 2) fail(Err::bad_config, "prime must be >= 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) fail(Err::bad_config, std::to_string(p) + " is not prime");
}

long val_p(const Int& n, long p) {
    if (n == 0) return VAL_INF;
    mpz_class tmp;
    return (long)mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t());
}

long val_p(const Rat& q, long p) {
    if (q == 0) return VAL_INF;
    return val_p(Int(q.get_num()), p) - val_p(Int(q.get_den()), p);
}

Rat divide_p_exact(const Rat& q, long p, long k) {
    if (q == 0) return q;
    if (val_p(q, p) < k)
        fail(Err::insufficient_divisibility,
             "valuation " + std::to_string(val_p(q, p)) + " < " + std::to_string(k));
    Rat pk;
    mpz_ui_pow_ui(pk.get_num_mpz_t(), (unsigned long)p, (unsigned long)k);
    pk.get_den() = 1;
    Rat r = q / pk;
    r.canonicalize();
    return r;
}

int max_precision(long p) {
    int n = 0;
    unsigned __int128 m = 1;
    while (m * (unsigned __int128)p <= ((unsigned __int128)1 << 62)) {
        m *= (unsigned __int128)p;
        ++n;
    }
    return n;
}

uint64_t pow_u64(long p, int n) {
    uint64_t r = 1;
    for (int i = 0; i < n; ++i) r *= (uint64_t)p;
    return r;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((unsigned __int128)a * b % m);
}

uint64_t invmod_u64(uint64_t a, uint64_t m) {
    // extended Euclid; signed intermediates stay below 2^63 for m <= 2^62
    int64_t t = 0, nt = 1;
    uint64_t r = m, nr = a % m;
    while (nr != 0) {
        uint64_t qq = r / nr;
        int64_t tt = t - (int64_t)qq * nt;
        t = nt; nt = tt;
        uint64_t rr = r - qq * nr;
        r = nr; nr = rr;
    }
    if (r != 1) fail(Err::internal, "invmod of non-unit");
    return t < 0 ? (uint64_t)(t + (int64_t)m) : (uint64_t)t;
}

Padic::Padic(long p, int N, uint64_t residue) : p_(p), n_(N), r_(residue) {
    if (N < 1 || N > max_precision(p)) fail(Err::bad_config, "precision out of range");
    r_ %= modulus();
}

Padic Padic::from_int(long p, int N, const Int& z) {
    mpz_class m = Int((unsigned long)pow_u64(p, N));
    mpz_class r = z % m;
    if (r < 0) r += m;
    return Padic(p, N, r.get_ui());
}

Padic Padic::from_rat(long p, int N, const Rat& q) {
    if (val_p(q, p) < 0)
        fail(Err::negative_valuation, "denominator divisible by " + std::to_string(p));
    uint64_t m = pow_u64(p, N);
    mpz_class mm = Int((unsigned long)m);
    mpz_class num = q.get_num() % mm;
    if (num < 0) num += mm;
    mpz_class den = q.get_den() % mm;
    uint64_t inv = invmod_u64(den.get_ui(), m);
    return Padic(p, N, mulmod_u64(num.get_ui(), inv, m));
}

void Padic::match(const Padic& o) const {
    if (p_ != o.p_) fail(Err::internal, "mixed primes in Padic arithmetic");
}

long Padic::val() const {
    if (r_ == 0) return n_;
    long v = 0;
    uint64_t r = r_;
    while (r % (uint64_t)p_ == 0) { r /= (uint64_t)p_; ++v; }
    return v;
}

Padic Padic::operator+(const Padic& o) const {
    match(o);
    int n = std::min(n_, o.n_);
    uint64_t m = pow_u64(p_, n);
    return Padic(p_, n, (r_ % m + o.r_ % m) % m);
}

Padic Padic::operator-(const Padic& o) const {
    match(o);
    int n = std::min(n_, o.n_);
    uint64_t m = pow_u64(p_, n);
    return Padic(p_, n, (r_ % m + m - o.r_ % m) % m);
}

Padic Padic::operator-() const {
    return r_ == 0 ? *this : Padic(p_, n_, modulus() - r_);
}

Padic Padic::operator*(const Padic& o) const {
    match(o);
    int n = std::min(n_, o.n_);
    uint64_t m = pow_u64(p_, n);
    return Padic(p_, n, mulmod_u64(r_ % m, o.r_ % m, m));
}

bool Padic::operator==(const Padic& o) const {
    if (p_ != o.p_) return false;
    int n = std::min(n_, o.n_);
    uint64_t m = pow_u64(p_, n);
    return r_ % m == o.r_ % m;
}

Padic Padic::divide_p(int k) const {
    if (n_ <= k) fail(Err::precision_exhausted, "divide_p at precision " + std::to_string(n_));
    if (val() < k)
        fail(Err::insufficient_divisibility,
             "valuation " + std::to_string(val()) + " < " + std::to_string(k));
    return Padic(p_, n_ - k, r_ / pow_u64(p_, k));
}

Padic Padic::inverse() const {
    if (val() != 0) fail(Err::insufficient_divisibility, "inverse of non-unit");
    return Padic(p_, n_, invmod_u64(r_, modulus()));
}

Padic Padic::truncate(int N) const {
    if (N > n_) fail(Err::precision_exhausted, "truncate cannot raise precision");
    return Padic(p_, N, r_ % pow_u64(p_, N));
}

}  // namespace cbx
