#include "hopf.hpp"

#include <algorithm>
#include <cctype>

namespace cbx {

namespace {

long pow_l(long p, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

// generator as a polynomial, zero if the truncation kills it
template <class R>
Poly<R> gen_image(const R& ring, GenId g, long e, const Trunc& t) {
    Mon m = mon_gen(g);
    if (!t.ok(m)) return {};
    return ppow(ring, pmon(ring, m), e, t);
}

template <class R>
Tensor<R> tensor_unit(const R& ring, int len) {
    Tensor<R> r;
    r.len = len;
    r.t.emplace(std::vector<Mon>((size_t)len), ring.one());
    return r;
}

void split_vt(const Mon& m, Mon& vm, Mon& tm) {
    vm.clear();
    tm.clear();
    for (const auto& [g, e] : m) (is_v(g) ? vm : tm).emplace_back(g, e);
}

}  // namespace

// ---- exact recursions ----

LogCtx::LogCtx(GenTable tab, Window win, Quotient quo)
    : tab_(std::move(tab)), win_(std::move(win)), quo_(std::move(quo)) {
    if (tab_.p < 2) fail(Err::bad_config, "prime must be at least 2");
}

const QPoly& LogCtx::lam(int k) {
    auto it = lam_.find(k);
    if (it != lam_.end()) return it->second;
    QPoly r;
    Trunc t = tr();
    if (k == 0) {
        r = pconst(ring_, Rat(1));
    } else {
        long pw = 1;
        for (int i = 0; i < k; ++i) {
            QPoly vp = gen_image(ring_, gen_v(k - i), pw, t);
            padd_into(r, pmul(lam(i), vp, t));
            pw *= tab_.p;
        }
        r = pscale(r, Rat(1) / Rat(tab_.p));
    }
    return lam_.emplace(k, std::move(r)).first->second;
}

const QPoly& LogCtx::etaR_lam(int k) {
    auto it = etalam_.find(k);
    if (it != etalam_.end()) return it->second;
    QPoly r;
    Trunc t = tr();
    long pw = 1;
    for (int i = 0; i <= k; ++i) {
        int j = k - i;
        QPoly tp = j == 0 ? pconst(ring_, Rat(1)) : gen_image(ring_, gen_t(j), pw, t);
        padd_into(r, pmul(lam(i), tp, t));
        pw *= tab_.p;
    }
    return etalam_.emplace(k, std::move(r)).first->second;
}

const QPoly& LogCtx::etaR_v(int k) {
    auto it = etav_.find(k);
    if (it != etav_.end()) return it->second;
    Trunc t = tr();
    QPoly r = pscale(etaR_lam(k), Rat(tab_.p));
    long pw = tab_.p;
    for (int i = 1; i < k; ++i) {
        QPoly pow = ppow(ring_, etaR_v(k - i), pw, t);
        padd_into(r, pneg(pmul(etaR_lam(i), pow, t)));
        pw *= tab_.p;
    }
    check_integral(r, "eta_R(v" + std::to_string(k) + ")");
    return etav_.emplace(k, std::move(r)).first->second;
}

const QTensor& LogCtx::diag_t(int k) {
    auto it = diagt_.find(k);
    if (it != diagt_.end()) return it->second;
    Trunc t = tr();
    QTensor r;
    r.len = 2;
    for (int a = 0; a <= k; ++a) {
        for (int b = 0; a + b <= k; ++b) {
            int c = k - a - b;
            QPoly left = lam(a);
            if (b) left = pmul(left, gen_image(ring_, gen_t(b), pow_l(tab_.p, a), t), t);
            QPoly right =
                c ? gen_image(ring_, gen_t(c), pow_l(tab_.p, a + b), t) : pconst(ring_, Rat(1));
            tadd_into(r, tmul(tensor_of(left, 2, 0), tensor_of(right, 2, 1), t));
        }
    }
    for (int a = 1; a <= k; ++a) {
        int b = k - a;
        QTensor db = b ? diag_t(b) : tensor_unit(ring_, 2);
        QTensor pw = tpow(ring_, db, pow_l(tab_.p, a), t);
        tadd_into(r, tneg(tmul(tensor_of(lam(a), 2, 0), pw, t)));
    }
    check_integral(r, "Delta(t" + std::to_string(k) + ")");
    return diagt_.emplace(k, std::move(r)).first->second;
}

void check_integral(const QPoly& x, const std::string& what) {
    for (const auto& [m, c] : x.t)
        if (c.get_den() != 1)
            fail(Err::integrality_failure,
                 what + ": coefficient " + c.get_str() + " at " + mon_str(m));
}

void check_integral(const QTensor& x, const std::string& what) {
    for (const auto& [w, c] : x.t)
        if (c.get_den() != 1)
            fail(Err::integrality_failure, what + ": coefficient " + c.get_str() + " at a word");
}

std::vector<QPoly> log_coefficients(long p, int kmax) {
    if (kmax < 0) fail(Err::bad_config, "negative index bound");
    GenTable tab{p, kmax, 0, 0};
    LogCtx ctx(tab, Window{}, Quotient{});
    std::vector<QPoly> out;
    out.reserve((size_t)kmax + 1);
    for (int k = 0; k <= kmax; ++k) out.push_back(ctx.lam(k));
    return out;
}

// ---- presentations ----

long Presentation::rule_pow() const { return pow_l(spec.p, spec.n); }

namespace {

/* right-unit image of a pure-v monomial from a table of generator images;
   negative exponents succeed only when the image is a single monomial */
template <class R>
Poly<R> etaR_vmon_tab(const R& ring, const std::map<int, Poly<R>>& etav, const Mon& vm,
                      const Trunc& t) {
    Poly<R> r = pconst(ring, ring.one());
    for (const auto& [g, e] : vm) {
        auto it = etav.find(gen_index(g));
        if (it == etav.end()) fail(Err::bad_config, "no right-unit image for " + gen_name(g));
        r = pmul(r, ppow(ring, it->second, e, t), t);
        if (r.zero()) break;
    }
    return r;
}

template <class R, class EtaFn>
Tensor<R> slide_core(const R& ring, Tensor<R> cur, EtaFn eta, const Trunc& t) {
    for (int i = cur.len - 1; i >= 1; --i) {
        Tensor<R> next;
        next.len = cur.len;
        for (const auto& [w, c] : cur.t) {
            Mon vm, tm;
            split_vt(w[(size_t)i], vm, tm);
            if (vm.empty()) {
                auto it = next.t.find(w);
                if (it == next.t.end())
                    next.t.emplace(w, c);
                else {
                    it->second = it->second + c;
                    if (!R::nz(it->second)) next.t.erase(it);
                }
                continue;
            }
            Poly<R> img = eta(vm);
            for (const auto& [mi, ci] : img.t) {
                std::vector<Mon> w2 = w;
                w2[(size_t)i] = tm;
                w2[(size_t)i - 1] = mon_mul(w[(size_t)i - 1], mi);
                if (!word_ok(w2, t)) continue;
                auto cc = c * ci;
                auto it = next.t.find(w2);
                if (it == next.t.end()) {
                    if (R::nz(cc)) next.t.emplace(std::move(w2), cc);
                } else {
                    it->second = it->second + cc;
                    if (!R::nz(it->second)) next.t.erase(it);
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

template <class R>
Tensor<R> diag_core(const R& ring, const std::map<int, Tensor<R>>& diagt, const Tensor<R>& x,
                    int slot, const Trunc& t) {
    Tensor<R> out;
    out.len = x.len + 1;
    for (const auto& [w, c] : x.t) {
        Mon vm, tm;
        split_vt(w[(size_t)slot], vm, tm);
        Tensor<R> d2 = tensor_unit(ring, 2);
        for (const auto& [g, e] : tm) {
            auto it = diagt.find(gen_index(g));
            if (it == diagt.end()) fail(Err::bad_config, "no comultiplication for " + gen_name(g));
            d2 = tmul(d2, tpow(ring, it->second, e, t), t);
            if (d2.zero()) break;
        }
        for (const auto& [w2, c2] : d2.t) {
            std::vector<Mon> nw;
            nw.reserve((size_t)x.len + 1);
            for (int j = 0; j < slot; ++j) nw.push_back(w[(size_t)j]);
            nw.push_back(mon_mul(vm, w2[0]));
            nw.push_back(w2[1]);
            for (int j = slot + 1; j < x.len; ++j) nw.push_back(w[(size_t)j]);
            if (!word_ok(nw, t)) continue;
            auto cc = c * c2;
            auto it = out.t.find(nw);
            if (it == out.t.end()) {
                if (R::nz(cc)) out.t.emplace(std::move(nw), cc);
            } else {
                it->second = it->second + cc;
                if (!R::nz(it->second)) out.t.erase(it);
            }
        }
    }
    return out;
}

QPoly eps_part(const QPoly& x) {
    QPoly r;
    for (const auto& [m, c] : x.t) {
        bool pure = true;
        for (const auto& [g, e] : m)
            if (is_t(g)) pure = false;
        if (pure) r.t.emplace(m, c);
    }
    return r;
}

void verify_presentation(const Presentation& pres) {
    Trunc t = pres.tr();
    RatRing R;
    // counit inverts the right unit, and eta_R fixes v_k below the gamma index
    for (const auto& [k, P] : pres.etaRv) {
        QPoly vk = pfilter(pmon(R, mon_gen(gen_v(k))), t);
        if (!(eps_part(P).t == vk.t))
            fail(Err::internal, "counit check failed for eta_R(v" + std::to_string(k) + ")");
        if (k < pres.spec.gamma_index && !(P.t == vk.t))
            fail(Err::internal, "eta_R(v" + std::to_string(k) + ") is not central here");
    }
    // right unit is multiplicative on generator products
    if (pres.etaRv.size() >= 2) {
        int k1 = pres.etaRv.begin()->first;
        int k2 = std::next(pres.etaRv.begin())->first;
        QPoly prod = pmul(pres.etaRv.at(k1), pres.etaRv.at(k2), t);
        Mon m = mon_mul(mon_gen(gen_v(k1)), mon_gen(gen_v(k2)));
        if (!(etaR_vmon_tab(R, pres.etaRv, m, t).t == prod.t))
            fail(Err::internal, "right unit not multiplicative");
    }
    auto eta = [&](const Mon& vm) { return etaR_vmon_tab(R, pres.etaRv, vm, t); };
    for (const auto& [k, D] : pres.diagT) {
        QPoly tk = pfilter(pmon(R, mon_gen(gen_t(k))), t);
        // (eps x 1) Delta(t_k) = t_k = (1 x eps) Delta(t_k)
        QPoly left, right;
        for (const auto& [w, c] : D.t) {
            Mon vm, tm;
            split_vt(w[0], vm, tm);
            if (tm.empty()) {
                Mon m = mon_mul(vm, w[1]);
                if (t.ok(m)) padd_into(left, pscale(pmon(R, m), c));
            }
            split_vt(w[1], vm, tm);
            if (tm.empty()) {
                // eps of the right slot maps through eta_R back into the left
                QPoly img = pmul(pscale(pmon(R, w[0]), c), eta(vm), t);
                padd_into(right, img);
            }
        }
        if (!(left.t == tk.t) || !(right.t == tk.t))
            fail(Err::internal, "comultiplication not counital at t" + std::to_string(k));
        // coassociativity, compared in slid canonical form
        QTensor a = slide_core(R, diag_core(R, pres.diagT, D, 0, t), eta, t);
        QTensor b = slide_core(R, diag_core(R, pres.diagT, D, 1, t), eta, t);
        if (!(a.t == b.t))
            fail(Err::internal, "comultiplication not coassociative at t" + std::to_string(k));
    }
}

}  // namespace

PresPtr make_algebroid(const AlgebroidSpec& spec, const Window& win) {
    AlgebroidSpec s = spec;
    if (s.p < 2) fail(Err::bad_config, "prime must be at least 2");
    if (s.gamma_index < 1) fail(Err::bad_config, "gamma index must be at least 1");
    int base_cap;
    if (s.kind == AlgKind::sigma) {
        if (s.n < 1 || s.m < 0) fail(Err::bad_config, "sigma presentation needs n >= 1, m >= 0");
        if (s.gamma_index > s.m + 1)
            fail(Err::bad_config, "gamma index would kill base generators");
        base_cap = s.n + s.m;
        if (!s.kmax_v) s.kmax_v = s.gamma_index == s.m + 1 ? s.n + s.m + 1 : s.n + s.m;
    } else {
        if (!s.v_cap) s.v_cap = std::max(s.n + s.m + 2, 2);
        base_cap = s.v_cap;
        if (!s.kmax_v) s.kmax_v = s.v_cap;
    }
    if (!s.kmax_t) s.kmax_t = s.kmax_v;
    auto pres = std::make_shared<Presentation>();
    pres->spec = s;
    pres->tab = GenTable{s.p, std::max(base_cap, s.kmax_v), s.kmax_t,
                         s.kind == AlgKind::sigma ? s.n : 0};
    pres->win = win;
    pres->quo.kill_t_upto = s.gamma_index - 1;
    pres->quo.kill_t_above = s.kmax_t;
    pres->quo.kill_v_above = base_cap;
    LogCtx ctx(pres->tab, pres->win, pres->quo);
    for (int k = 1; k <= s.kmax_v; ++k) pres->etaRv[k] = ctx.etaR_v(k);
    for (int k = s.gamma_index; k <= s.kmax_t; ++k) pres->diagT[k] = ctx.diag_t(k);
    verify_presentation(*pres);
    return pres;
}

const QPoly& right_unit(const Presentation& pres, int k) {
    auto it = pres.etaRv.find(k);
    if (it == pres.etaRv.end())
        fail(Err::bad_config, "right unit of v" + std::to_string(k) + " not materialized");
    return it->second;
}

const QTensor& diagonal(const Presentation& pres, int k) {
    auto it = pres.diagT.find(k);
    if (it == pres.diagT.end())
        fail(Err::bad_config, "comultiplication of t" + std::to_string(k) + " not materialized");
    return it->second;
}

// ---- ideals ----

std::string IdealSpec::str(long p) const {
    if (is_unit()) return "1";
    std::string s;
    auto push = [&s](const std::string& x) {
        if (!s.empty()) s += ",";
        s += x;
    };
    if (pinf) push(std::to_string(p) + "^inf");
    if (p_power == 1) push(std::to_string(p));
    if (p_power > 1) push(std::to_string(p) + "^" + std::to_string(p_power));
    for (const auto& [i, a] : v_gens)
        push("v" + std::to_string(i) + (a == 1 ? "" : "^" + std::to_string(a)));
    if (s.empty()) s = "0";
    return s;
}

IdealSpec parse_ideal(const std::string& text, long p) {
    IdealSpec J;
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            toks.push_back(cur);
            cur.clear();
        } else if (!isspace((unsigned char)ch)) {
            cur += ch;
        }
    }
    toks.push_back(cur);
    if (toks.size() == 1 && (toks[0].empty() || toks[0] == "0")) return J;
    bool seen_v = false;
    for (size_t idx = 0; idx < toks.size(); ++idx) {
        const std::string& tk = toks[idx];
        if (tk.empty()) fail(Err::bad_config, "empty ideal generator in '" + text + "'");
        if (tk == "1") {
            if (toks.size() != 1) fail(Err::bad_config, "unit ideal must be written alone");
            J.p_power = 0;
            return J;
        }
        if (tk[0] == 'v') {
            size_t caret = tk.find('^');
            std::string is = tk.substr(1, caret == std::string::npos ? caret : caret - 1);
            int i = 0, a = 1;
            try {
                i = std::stoi(is);
                if (caret != std::string::npos) a = std::stoi(tk.substr(caret + 1));
            } catch (...) {
                fail(Err::bad_config, "bad ideal generator '" + tk + "'");
            }
            if (i < 1 || a < 1) fail(Err::bad_config, "bad ideal generator '" + tk + "'");
            for (const auto& [j, b] : J.v_gens)
                if (j == i) fail(Err::bad_config, "repeated ideal generator v" + is);
            J.v_gens.emplace_back(i, a);
            seen_v = true;
            continue;
        }
        if (!isdigit((unsigned char)tk[0])) fail(Err::bad_config, "bad ideal generator '" + tk + "'");
        size_t caret = tk.find('^');
        long base = 0;
        try {
            base = std::stol(tk.substr(0, caret));
        } catch (...) {
            fail(Err::bad_config, "bad ideal generator '" + tk + "'");
        }
        if (caret != std::string::npos && tk.substr(caret + 1) == "inf") {
            if (base != p) fail(Err::bad_config, "tower marker must use the working prime");
            if (idx != 0) fail(Err::bad_config, "tower marker must come first");
            J.pinf = true;
            continue;
        }
        // scalar generator: a literal power of p
        long val = base;
        if (caret != std::string::npos) {
            int e = 0;
            try {
                e = std::stoi(tk.substr(caret + 1));
            } catch (...) {
                fail(Err::bad_config, "bad ideal generator '" + tk + "'");
            }
            if (base != p || e < 1) fail(Err::bad_config, "scalar generator must be a power of " +
                                                              std::to_string(p));
            J.p_power = e;
            val = -1;
        }
        if (val > 0) {
            int e = 0;
            long v = val;
            while (v % p == 0) v /= p, ++e;
            if (v != 1 || e < 1)
                fail(Err::bad_config, "scalar generator must be a power of " + std::to_string(p));
            J.p_power = e;
        }
        if (seen_v) fail(Err::bad_config, "scalar generator must precede v-generators");
        if (J.pinf) fail(Err::bad_config, "tower marker already fixes the scalar part");
    }
    return J;
}

namespace {

bool invariance_holds(const IdealSpec& J, int kill_t, long p, const Window& win) {
    int K = 0;
    for (const auto& [i, a] : J.v_gens) K = std::max(K, i);
    if (K == 0) return true;  // scalar generators are always central
    GenTable tab{p, K, K, 0};
    Quotient quo;
    quo.kill_t_upto = kill_t;
    // the congruences are decided on exact homogeneous elements
    for (const auto& [i, a] : J.v_gens)
        if (win.degree_max >= 0 && (long)a * tab.degree(gen_v(i)) > win.degree_max)
            fail(Err::window_too_small, "window cannot see eta_R(v" + std::to_string(i) + "^" +
                                            std::to_string(a) + ")");
    LogCtx ctx(tab, Window{}, quo);
    Trunc t = ctx.tr();
    RatRing R;
    int mod_p_exp = J.pinf ? 1 : (J.p_power > 0 ? J.p_power : 0);
    std::vector<std::pair<int, int>> prev;
    for (const auto& [i, a] : J.v_gens) {
        QPoly diff = psub(ppow(R, ctx.etaR_v(i), a, t),
                          ppow(R, pmon(R, mon_gen(gen_v(i))), a, t));
        for (const auto& [m, c] : diff.t) {
            bool in_ideal = false;
            if (mod_p_exp > 0 && val_p(Int(c.get_num()), p) >= mod_p_exp) in_ideal = true;
            for (const auto& [j, b] : prev)
                if (!in_ideal && mon_exp(m, gen_v(j)) >= b) in_ideal = true;
            if (!in_ideal) return false;
        }
        prev.emplace_back(i, a);
    }
    return true;
}

}  // namespace

IdealClass classify_ideal(const IdealSpec& J, int m, long p, const Window& win) {
    if (J.is_unit() || J.trivial()) return IdealClass::invariant;
    if (invariance_holds(J, 0, p, win)) return IdealClass::invariant;
    if (m > 0 && invariance_holds(J, m, p, win)) return IdealClass::unusual;
    return IdealClass::neither;
}

Comodule make_comodule(PresPtr pres, const IdealSpec& J) {
    Comodule c;
    c.pres = pres;
    c.ideal = J;
    c.quo = pres->quo;
    if (J.is_unit()) {
        c.zero = true;
        return c;
    }
    long p = pres->spec.p;
    if (classify_ideal(J, pres->spec.gamma_index - 1, p, pres->win) == IdealClass::neither)
        fail(Err::not_a_coideal, "ideal (" + J.str(p) + ") is not a coideal here");
    for (const auto& [i, a] : J.v_gens) {
        if (a != 1)
            fail(Err::bad_config, "only exponent-1 v-generators define quotient comodules");
        c.quo.kill_v.insert(i);
    }
    return c;
}

// ---- p-adic reduction and rewrite rules ----

PPoly reduce_poly(const PadicRing& ring, const QPoly& x, const Trunc& tr) {
    PPoly r;
    for (const auto& [m, c] : x.t) {
        if (!tr.ok(m)) continue;
        Padic pc = Padic::from_rat(ring.p, ring.N, c);
        if (!pc.is_zero()) r.t.emplace(m, pc);
    }
    return r;
}

PTensor reduce_tensor(const PadicRing& ring, const QTensor& x, const Trunc& tr) {
    PTensor r;
    r.len = x.len;
    for (const auto& [w, c] : x.t) {
        if (!word_ok(w, tr)) continue;
        Padic pc = Padic::from_rat(ring.p, ring.N, c);
        if (!pc.is_zero()) r.t.emplace(w, pc);
    }
    return r;
}

PPoly pinvert(const PadicRing& ring, const PPoly& c, const Trunc& tr) {
    const Mon* lead = nullptr;
    Padic uc(ring.p, ring.N, 0);
    for (const auto& [m, cf] : c.t) {
        if (cf.val() == 0) {
            if (lead) fail(Err::rule_gap, "valuation-zero part is not a single monomial");
            lead = &m;
            uc = cf;
        }
    }
    if (!lead) fail(Err::rule_gap, "no unit part to invert");
    PPoly linv;
    linv.t.emplace(mon_pow(*lead, -1), uc.inverse());
    PPoly w = psub(pmul(linv, c, tr), pconst(ring, ring.one()));
    PPoly geo = pconst(ring, ring.one());
    PPoly wp = pconst(ring, ring.one());
    PPoly nw = pneg(w);
    for (int i = 1; i < ring.N && !wp.zero(); ++i) {
        wp = pmul(wp, nw, tr);
        padd_into(geo, wp);
    }
    return pmul(geo, linv, tr);
}

namespace {

/* one rewrite pass: the first reducible t-power of each monomial is
   substituted; lenient mode leaves monomials with no solved rule alone */
PPoly rules_pass(const ReducedPres& rp, const PPoly& x, bool strict, bool& changed) {
    Trunc t = rp.tr();
    PPoly out;
    for (const auto& [m, c] : x.t) {
        int j = 0;
        for (const auto& [g, e] : m) {
            if (!is_t(g) || e < rp.rule_pow) continue;
            if (rp.rules.count(gen_index(g))) {
                j = gen_index(g);
                break;
            }
            if (strict)
                fail(Err::rule_gap, "no rule for " + gen_name(g) + "^" +
                                        std::to_string(rp.rule_pow) + " at " + mon_str(m));
        }
        if (!j) {
            padd_into(out, pscale(pmon(rp.ring, m), c));
            continue;
        }
        Mon rest = mon_mul(m, mon_gen(gen_t(j), -(int)rp.rule_pow));
        padd_into(out, pscale(pmul(rp.rules.at(j), pmon(rp.ring, rest), t), c));
        changed = true;
    }
    return out;
}

PPoly rules_fix(const ReducedPres& rp, PPoly x, bool strict) {
    if (!rp.rule_pow) return x;
    for (int iter = 0; iter < 200; ++iter) {
        bool changed = false;
        x = rules_pass(rp, x, strict, changed);
        if (!changed) return x;
    }
    fail(Err::rule_gap, "rewriting did not reach a normal form");
}

}  // namespace

PPoly rules_reduce(const ReducedPres& rp, PPoly x) { return rules_fix(rp, std::move(x), true); }

ReducedPres reduce_presentation(PresPtr pres, int N, const IdealSpec& J, const Window& win) {
    if (J.is_unit()) fail(Err::bad_config, "cannot reduce by the unit ideal");
    if (J.p_power > 0 && J.p_power != N)
        fail(Err::bad_config, "precision must match the scalar ideal generator");
    ReducedPres rp;
    rp.base = pres;
    rp.ring = PadicRing{pres->spec.p, N};
    rp.win = win;
    rp.quo = pres->quo;
    for (const auto& [i, a] : J.v_gens) {
        if (a != 1) fail(Err::bad_config, "only exponent-1 v-generators reduce presentations");
        rp.quo.kill_v.insert(i);
    }
    Trunc t = rp.tr();
    for (const auto& [k, P] : pres->etaRv) rp.etaRv[k] = reduce_poly(rp.ring, P, t);
    for (const auto& [k, T] : pres->diagT) rp.diagT[k] = reduce_tensor(rp.ring, T, t);
    const auto& s = pres->spec;
    if (s.kind == AlgKind::sigma && s.gamma_index == s.m + 1) {
        rp.rule_pow = pres->rule_pow();
        for (int j = s.m + 1;; ++j) {
            auto rel_it = rp.etaRv.find(s.n + j);
            if (rel_it == rp.etaRv.end()) break;
            /* solve from the raw relation: reducing it by earlier rules first
               would smear other unit terms into the leading coefficient */
            const PPoly& rel = rel_it->second;
            GenId tg = gen_t(j);
            PPoly c, rest;
            for (const auto& [m, cf] : rel.t) {
                bool head = mon_exp(m, tg) == rp.rule_pow;
                for (const auto& [g, e] : m)
                    if (is_t(g) && g != tg) head = false;
                if (head) {
                    c.t.emplace(mon_mul(m, mon_gen(tg, -(int)rp.rule_pow)), cf);
                } else {
                    rest.t.emplace(m, cf);
                }
            }
            if (c.zero()) break;  // the window no longer reaches this rule
            int unit_terms = 0;
            for (const auto& [m, cf] : c.t) {
                if (cf.val() != 0) continue;
                ++unit_terms;
                for (const auto& [g, e] : m)
                    if (g != gen_v(s.n) || e < 0)
                        fail(Err::rule_gap, "leading coefficient of the t" + std::to_string(j) +
                                                " relation is not a power of v" +
                                                std::to_string(s.n));
            }
            if (unit_terms != 1)
                fail(Err::rule_gap, "t" + std::to_string(j) +
                                        " relation has no unique unit leading term");
            PPoly rhs = pneg(pmul(pinvert(rp.ring, c, t), rest, t));
            rp.rules[j] = rhs;
            rp.rules[j] = rules_fix(rp, rhs, false);
            // the solved rule must reduce its own defining relation to zero
            if (!rules_fix(rp, rel_it->second, false).zero())
                fail(Err::rule_gap, "rule for t" + std::to_string(j) +
                                        " does not close its defining relation");
        }
    }
    return rp;
}

PPoly etaR_vmon(const ReducedPres& rp, const Mon& vm) {
    Trunc t = rp.tr();
    PPoly r = pconst(rp.ring, rp.ring.one());
    for (const auto& [g, e] : vm) {
        if (!is_v(g)) fail(Err::internal, "t-generator in a base monomial");
        int k = gen_index(g);
        auto it = rp.etaRv.find(k);
        if (it == rp.etaRv.end())
            fail(Err::bad_config, "right unit of v" + std::to_string(k) + " not materialized");
        if (e >= 0) {
            r = pmul(r, ppow(rp.ring, it->second, e, t), t);
        } else {
            auto ci = rp.vinv_cache.find(k);
            if (ci == rp.vinv_cache.end())
                ci = rp.vinv_cache.emplace(k, pinvert(rp.ring, it->second, t)).first;
            r = pmul(r, ppow(rp.ring, ci->second, -e, t), t);
        }
        if (r.zero()) break;
    }
    return r;
}

PTensor drop_degenerate(const PTensor& x) {
    PTensor r;
    r.len = x.len;
    for (const auto& [w, c] : x.t) {
        bool keep = true;
        for (const auto& m : w) {
            bool has_t = false;
            for (const auto& [g, e] : m)
                if (is_t(g)) has_t = true;
            if (!has_t) keep = false;
        }
        if (keep) r.t.emplace(w, c);
    }
    return r;
}

PTensor slide_left(const ReducedPres& rp, const PTensor& x) {
    return slide_core(rp.ring, x, [&](const Mon& vm) { return etaR_vmon(rp, vm); }, rp.tr());
}

PTensor diag_expand(const ReducedPres& rp, const PTensor& x, int slot) {
    return diag_core(rp.ring, rp.diagT, x, slot, rp.tr());
}

PTensor canonicalize(const ReducedPres& rp, const PTensor& x) {
    Trunc t = rp.tr();
    PTensor cur = x;
    for (int iter = 0; iter < 64; ++iter) {
        cur = drop_degenerate(slide_left(rp, cur));
        if (!rp.rule_pow) return cur;
        bool changed = false;
        PTensor next;
        next.len = cur.len;
        for (const auto& [w, c] : cur.t) {
            int slot = -1, j = 0;
            for (int i = 0; i < cur.len && slot < 0; ++i) {
                for (const auto& [g, e] : w[(size_t)i]) {
                    if (!is_t(g) || e < rp.rule_pow) continue;
                    if (!rp.rules.count(gen_index(g)))
                        fail(Err::rule_gap, "no rule for " + gen_name(g) + "^" +
                                                std::to_string(rp.rule_pow) + " in a word");
                    slot = i;
                    j = gen_index(g);
                    break;
                }
            }
            if (slot < 0) {
                PTensor one;
                one.len = cur.len;
                one.t.emplace(w, c);
                tadd_into(next, one);
                continue;
            }
            changed = true;
            Mon base = mon_mul(w[(size_t)slot], mon_gen(gen_t(j), -(int)rp.rule_pow));
            for (const auto& [mm, cc] : rp.rules.at(j).t) {
                std::vector<Mon> w2 = w;
                w2[(size_t)slot] = mon_mul(base, mm);
                if (!word_ok(w2, t)) continue;
                auto cv = c * cc;
                auto it = next.t.find(w2);
                if (it == next.t.end()) {
                    if (PadicRing::nz(cv)) next.t.emplace(std::move(w2), cv);
                } else {
                    it->second = it->second + cv;
                    if (!PadicRing::nz(it->second)) next.t.erase(it);
                }
            }
        }
        cur = std::move(next);
        if (!changed) return drop_degenerate(cur);
    }
    fail(Err::rule_gap, "canonical form did not stabilize");
}

// ---- b and c elements ----

QTensor b_element(int i, int j, const GenTable& tab, const Trunc& tr) {
    if (i < 1 || j < 0) fail(Err::bad_config, "bad b-element index");
    if (!tab.contains(gen_t(i)))
        fail(Err::bad_config, "t" + std::to_string(i) + " not in the generator table");
    RatRing R;
    long q = pow_l(tab.p, j + 1);
    QTensor s;
    s.len = 2;
    QPoly ti = pfilter(pmon(R, mon_gen(gen_t(i))), tr);
    tadd_into(s, tensor_of(ti, 2, 0));
    tadd_into(s, tensor_of(ti, 2, 1));
    QPoly tiq = pfilter(pmon(R, mon_gen(gen_t(i), (int)q)), tr);
    QTensor pw = tsub(tadd(tensor_of(tiq, 2, 0), tensor_of(tiq, 2, 1)), tpow(R, s, q, tr));
    QTensor out;
    out.len = 2;
    for (const auto& [w, c] : pw.t) {
        Rat c2 = c / Rat(tab.p);
        if (c2.get_den() != 1)
            fail(Err::insufficient_divisibility, "b-element numerator not divisible by p");
        out.t.emplace(w, c2);
    }
    return out;
}

QPoly c_element(int i, int j, const Presentation& pres) {
    Trunc t = pres.tr();
    RatRing R;
    long q = pow_l(pres.spec.p, j + 1);
    QPoly d = psub(pfilter(pmon(R, mon_gen(gen_v(i), (int)q)), t),
                   ppow(R, right_unit(pres, i), q, t));
    QPoly out;
    for (const auto& [m, c] : d.t) {
        Rat c2 = c / Rat(pres.spec.p);
        if (c2.get_den() != 1)
            fail(Err::insufficient_divisibility, "c-element numerator not divisible by p");
        out.t.emplace(m, c2);
    }
    return out;
}

}  // namespace cbx
