#ifndef COBAREXT_GRADED_HPP
#define COBAREXT_GRADED_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scalars.hpp"

namespace cbx {

/* Generator ids: v_i in the low block, t_i in the high block, so the
   canonical order is v_1 < v_2 < ... < t_1 < t_2 < ... */
using GenId = uint32_t;
constexpr GenId gen_v(int i) { return (GenId)i; }
constexpr GenId gen_t(int i) { return 0x10000u | (GenId)i; }
inline bool is_v(GenId g) { return (g >> 16) == 0; }
inline bool is_t(GenId g) { return (g >> 16) == 1; }
inline int gen_index(GenId g) { return (int)(g & 0xffffu); }
std::string gen_name(GenId g);

struct GenTable {
    long p = 2;
    int v_max = 0;         // v_1..v_max present
    int t_max = 0;         // t_1..t_max present
    int invertible_v = 0;  // index of the one inverted v, 0 if none
    long degree(GenId g) const;  // 2(p^i - 1)
    bool contains(GenId g) const;
    bool invertible(GenId g) const { return is_v(g) && gen_index(g) == invertible_v; }
};

// sorted by GenId, no zero exponents; negative exponents only on invertible gens
using Mon = std::vector<std::pair<GenId, int>>;

Mon mon_mul(const Mon& a, const Mon& b);
Mon mon_pow(const Mon& a, int e);
Mon mon_gen(GenId g, int e = 1);
inline Mon mon_one() { return {}; }
long mon_degree(const Mon& m, const GenTable& tab);
int mon_factors(const Mon& m);  // total exponent over positive-exponent factors
int mon_exp(const Mon& m, GenId g);
std::string mon_str(const Mon& m);

/* Truncation window.  degree_max and the exponent box follow the module
   contract; factor_max additionally caps the total exponent of a monomial,
   which keeps deep structure-map recursions finite at high generator index.
   All three are monomial-ideal filters, so truncating inside a computation
   equals truncating its exact result. */
struct Window {
    long degree_max = -1;  // < 0: unbounded
    int s_max = 0;
    int factor_max = -1;   // < 0: unbounded
    std::map<GenId, std::pair<int, int>> box;  // inclusive bounds
    /* when nonzero, this generator contributes 0 to the degree the window
       filters on; used for complexes free over a central Laurent subring,
       where the cap applies to the degree of the reduced part */
    GenId zero_degree_gen = 0;
    bool has_box(GenId g) const { return box.count(g) != 0; }
};

// degree as the window measures it (zero_degree_gen contributes nothing)
long win_degree(const Mon& m, const GenTable& tab, const Window& w);

// quotient by a monomial ideal: kill listed generators
struct Quotient {
    int kill_t_upto = 0;                        // t_j -> 0 for j <= this (Gamma(i) mode)
    int kill_t_above = 0x7fffffff;              // t_j -> 0 for j > this
    int kill_v_above = 0x7fffffff;              // v_j -> 0 for j > this (base truncation)
    std::set<int> kill_v;                       // v_j -> 0 for listed j (J-type ideals)
};

struct Trunc {
    const GenTable* tab = nullptr;
    const Window* win = nullptr;
    const Quotient* quo = nullptr;
    bool ok(const Mon& m) const;
};

// ---- scalar ring descriptors ----
struct RatRing {
    using S = Rat;
    Rat one() const { return Rat(1); }
    Rat from_long(long v) const { return Rat(v); }
    static bool nz(const Rat& x) { return x != 0; }
};
struct PadicRing {
    using S = Padic;
    long p;
    int N;
    Padic one() const { return Padic(p, N, 1); }
    Padic from_long(long v) const { return Padic::from_int(p, N, Int(v)); }
    static bool nz(const Padic& x) { return !x.is_zero(); }
};

template <class R>
struct Poly {
    using S = typename R::S;
    std::map<Mon, S> t;
    bool zero() const { return t.empty(); }
    int size() const { return (int)t.size(); }
};

template <class R>
struct Tensor {
    using S = typename R::S;
    int len = 1;
    std::map<std::vector<Mon>, S> t;
    bool zero() const { return t.empty(); }
    int size() const { return (int)t.size(); }
};

using QPoly = Poly<RatRing>;
using QTensor = Tensor<RatRing>;
using PPoly = Poly<PadicRing>;
using PTensor = Tensor<PadicRing>;

// ---- polynomial operations ----
template <class R>
void padd_into(Poly<R>& a, const Poly<R>& b) {
    for (const auto& [m, c] : b.t) {
        auto it = a.t.find(m);
        if (it == a.t.end()) {
            if (R::nz(c)) a.t.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (!R::nz(it->second)) a.t.erase(it);
        }
    }
}

template <class R>
Poly<R> padd(Poly<R> a, const Poly<R>& b) {
    padd_into(a, b);
    return a;
}

template <class R>
Poly<R> pscale(const Poly<R>& a, const typename R::S& s) {
    Poly<R> r;
    if (!R::nz(s)) return r;
    for (const auto& [m, c] : a.t) {
        auto cs = c * s;
        if (R::nz(cs)) r.t.emplace(m, cs);
    }
    return r;
}

template <class R>
Poly<R> pneg(const Poly<R>& a) {
    Poly<R> r;
    for (const auto& [m, c] : a.t) r.t.emplace(m, -c);
    return r;
}

template <class R>
Poly<R> psub(Poly<R> a, const Poly<R>& b) {
    padd_into(a, pneg(b));
    return a;
}

template <class R>
Poly<R> pfilter(const Poly<R>& a, const Trunc& tr) {
    Poly<R> r;
    for (const auto& [m, c] : a.t)
        if (tr.ok(m)) r.t.emplace(m, c);
    return r;
}

template <class R>
Poly<R> pmul(const Poly<R>& a, const Poly<R>& b, const Trunc& tr) {
    Poly<R> r;
    int fmax = tr.win ? tr.win->factor_max : -1;
    for (const auto& [ma, ca] : a.t) {
        int fa = fmax >= 0 ? mon_factors(ma) : 0;
        for (const auto& [mb, cb] : b.t) {
            if (fmax >= 0 && fa + mon_factors(mb) > fmax) continue;
            Mon m = mon_mul(ma, mb);
            if (!tr.ok(m)) continue;
            auto c = ca * cb;
            auto it = r.t.find(m);
            if (it == r.t.end()) {
                if (R::nz(c)) r.t.emplace(std::move(m), c);
            } else {
                it->second = it->second + c;
                if (!R::nz(it->second)) r.t.erase(it);
            }
        }
    }
    return r;
}

template <class R>
Poly<R> pconst(const R& ring, const typename R::S& s) {
    Poly<R> r;
    if (R::nz(s)) r.t.emplace(mon_one(), s);
    return r;
}

template <class R>
Poly<R> pmon(const R& ring, const Mon& m) {
    Poly<R> r;
    r.t.emplace(m, ring.one());
    return r;
}

inline Rat invert_scalar(const RatRing&, const Rat& c) {
    if (c == 0) fail(Err::exponent_overflow, "inverting zero coefficient");
    return Rat(1) / c;
}
inline Padic invert_scalar(const PadicRing&, const Padic& c) { return c.inverse(); }

template <class R>
Poly<R> ppow(const R& ring, const Poly<R>& a, long n, const Trunc& tr) {
    if (n < 0) {
        // only a unit-coefficient single monomial can be inverted
        if (a.t.size() != 1) fail(Err::exponent_overflow, "negative power of a sum");
        const auto& [m, c] = *a.t.begin();
        Poly<R> inv;
        inv.t.emplace(mon_pow(m, -1), invert_scalar(ring, c));
        return ppow(ring, inv, -n, tr);
    }
    Poly<R> r = pconst(ring, ring.one());
    Poly<R> base = a;
    while (n) {
        if (n & 1) r = pmul(r, base, tr);
        n >>= 1;
        if (n) base = pmul(base, base, tr);
    }
    return r;
}

/* Ring-map image of x: every generator appearing in x must have a rule.
   Negative exponents require the rule image to be an invertible monomial. */
template <class R>
Poly<R> substitute(const R& ring, const Poly<R>& x,
                   const std::map<GenId, Poly<R>>& rules, const Trunc& tr) {
    Poly<R> out;
    for (const auto& [m, c] : x.t) {
        Poly<R> term = pconst(ring, c);
        for (const auto& [g, e] : m) {
            auto it = rules.find(g);
            if (it == rules.end()) {
                term = pmul(term, ppow(ring, pmon(ring, mon_gen(g)), e, tr), tr);
            } else {
                term = pmul(term, ppow(ring, it->second, e, tr), tr);
            }
            if (term.zero()) break;
        }
        padd_into(out, term);
    }
    return out;
}

template <class R>
std::map<long, Poly<R>> degree_split(const Poly<R>& a, const GenTable& tab) {
    std::map<long, Poly<R>> r;
    for (const auto& [m, c] : a.t) r[mon_degree(m, tab)].t.emplace(m, c);
    return r;
}

// ---- tensor operations ----
template <class R>
Tensor<R> tensor_of(const Poly<R>& x, int len, int slot) {
    Tensor<R> r;
    r.len = len;
    for (const auto& [m, c] : x.t) {
        std::vector<Mon> w((size_t)len);
        w[(size_t)slot] = m;
        r.t.emplace(std::move(w), c);
    }
    return r;
}

template <class R>
void tadd_into(Tensor<R>& a, const Tensor<R>& b) {
    for (const auto& [w, c] : b.t) {
        auto it = a.t.find(w);
        if (it == a.t.end()) {
            if (R::nz(c)) a.t.emplace(w, c);
        } else {
            it->second = it->second + c;
            if (!R::nz(it->second)) a.t.erase(it);
        }
    }
}

template <class R>
Tensor<R> tadd(Tensor<R> a, const Tensor<R>& b) {
    tadd_into(a, b);
    return a;
}

template <class R>
Tensor<R> tscale(const Tensor<R>& a, const typename R::S& s) {
    Tensor<R> r;
    r.len = a.len;
    if (!R::nz(s)) return r;
    for (const auto& [w, c] : a.t) {
        auto cs = c * s;
        if (R::nz(cs)) r.t.emplace(w, cs);
    }
    return r;
}

template <class R>
Tensor<R> tneg(const Tensor<R>& a) {
    Tensor<R> r;
    r.len = a.len;
    for (const auto& [w, c] : a.t) r.t.emplace(w, -c);
    return r;
}

template <class R>
Tensor<R> tsub(Tensor<R> a, const Tensor<R>& b) {
    tadd_into(a, tneg(b));
    return a;
}

bool word_ok(const std::vector<Mon>& w, const Trunc& tr);

template <class R>
Tensor<R> tmul(const Tensor<R>& a, const Tensor<R>& b, const Trunc& tr) {
    Tensor<R> r;
    r.len = a.len;
    if (a.len != b.len) fail(Err::internal, "tensor length mismatch");
    for (const auto& [wa, ca] : a.t) {
        for (const auto& [wb, cb] : b.t) {
            std::vector<Mon> w((size_t)a.len);
            for (int i = 0; i < a.len; ++i) w[(size_t)i] = mon_mul(wa[(size_t)i], wb[(size_t)i]);
            if (!word_ok(w, tr)) continue;
            auto c = ca * cb;
            auto it = r.t.find(w);
            if (it == r.t.end()) {
                if (R::nz(c)) r.t.emplace(std::move(w), c);
            } else {
                it->second = it->second + c;
                if (!R::nz(it->second)) r.t.erase(it);
            }
        }
    }
    return r;
}

template <class R>
Tensor<R> tpow(const R& ring, const Tensor<R>& a, long n, const Trunc& tr) {
    Tensor<R> r;
    r.len = a.len;
    r.t.emplace(std::vector<Mon>((size_t)a.len), ring.one());
    Tensor<R> base = a;
    while (n) {
        if (n & 1) r = tmul(r, base, tr);
        n >>= 1;
        if (n) base = tmul(base, base, tr);
    }
    return r;
}

template <class R>
Tensor<R> tfilter(const Tensor<R>& a, const Trunc& tr) {
    Tensor<R> r;
    r.len = a.len;
    for (const auto& [w, c] : a.t)
        if (word_ok(w, tr)) r.t.emplace(w, c);
    return r;
}

// ---- rendering (canonical text form used in golden files) ----
std::string scal_str(const Rat& c);
std::string scal_str(const Padic& c);

template <class R>
std::string poly_str(const Poly<R>& a) {
    if (a.t.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : a.t) {
        if (!s.empty()) s += " + ";
        s += scal_str(c);
        if (!m.empty()) s += "*" + mon_str(m);
    }
    return s;
}

template <class R>
std::string tensor_str(const Tensor<R>& a) {
    if (a.t.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : a.t) {
        if (!s.empty()) s += " + ";
        s += scal_str(c) + "*[";
        for (size_t i = 0; i < w.size(); ++i) {
            if (i) s += "|";
            s += w[i].empty() ? "1" : mon_str(w[i]);
        }
        s += "]";
    }
    return s;
}

// all monomials in `subset` generators of degree d inside the window box
std::vector<Mon> enumerate_basis(const GenTable& tab, const std::vector<GenId>& subset,
                                 long d, const Window& w);

}  // namespace cbx

#endif
