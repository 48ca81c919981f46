#include "graded.hpp"

#include <algorithm>

namespace cbx {

std::string gen_name(GenId g) {
    return (is_v(g) ? "v" : "t") + std::to_string(gen_index(g));
}

long GenTable::degree(GenId g) const {
    long pw = 1;
    for (int i = 0; i < gen_index(g); ++i) pw *= p;
    return 2 * (pw - 1);
}

bool GenTable::contains(GenId g) const {
    int i = gen_index(g);
    if (is_v(g)) return i >= 1 && i <= v_max;
    return i >= 1 && i <= t_max;
}

Mon mon_mul(const Mon& a, const Mon& b) {
    Mon r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            r.push_back(a[i++]);
        } else if (b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            int e = a[i].second + b[j].second;
            if (e != 0) r.emplace_back(a[i].first, e);
            ++i, ++j;
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
}

Mon mon_pow(const Mon& a, int e) {
    if (e == 0) return {};
    Mon r = a;
    for (auto& [g, x] : r) x *= e;
    return r;
}

Mon mon_gen(GenId g, int e) {
    if (e == 0) return {};
    return Mon{{g, e}};
}

long mon_degree(const Mon& m, const GenTable& tab) {
    long d = 0;
    for (const auto& [g, e] : m) d += tab.degree(g) * e;
    return d;
}

int mon_factors(const Mon& m) {
    int f = 0;
    for (const auto& [g, e] : m)
        if (e > 0) f += e;
    return f;
}

int mon_exp(const Mon& m, GenId g) {
    for (const auto& [h, e] : m)
        if (h == g) return e;
    return 0;
}

std::string mon_str(const Mon& m) {
    if (m.empty()) return "1";
    std::string s;
    for (const auto& [g, e] : m) {
        if (!s.empty()) s += "*";
        s += gen_name(g);
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

static bool quo_ok(const Mon& m, const Quotient& q) {
    for (const auto& [g, e] : m) {
        int i = gen_index(g);
        if (is_t(g)) {
            if (i <= q.kill_t_upto || i > q.kill_t_above) return false;
        } else {
            if (i > q.kill_v_above || q.kill_v.count(i)) return false;
        }
    }
    return true;
}

static bool box_ok(const Mon& m, const Window& w) {
    for (const auto& [g, lohi] : w.box) {
        int e = mon_exp(m, g);
        if (e < lohi.first || e > lohi.second) return false;
    }
    return true;
}

long win_degree(const Mon& m, const GenTable& tab, const Window& w) {
    long d = mon_degree(m, tab);
    if (w.zero_degree_gen) d -= tab.degree(w.zero_degree_gen) * mon_exp(m, w.zero_degree_gen);
    return d;
}

bool Trunc::ok(const Mon& m) const {
    if (quo && !quo_ok(m, *quo)) return false;
    if (win) {
        if (win->degree_max >= 0 && tab && win_degree(m, *tab, *win) > win->degree_max) return false;
        if (win->factor_max >= 0 && mon_factors(m) > win->factor_max) return false;
        if (!win->box.empty() && !box_ok(m, *win)) return false;
    }
    return true;
}

bool word_ok(const std::vector<Mon>& w, const Trunc& tr) {
    long dtot = 0;
    int ftot = 0;
    for (const auto& m : w) {
        if (tr.quo && !quo_ok(m, *tr.quo)) return false;
        if (tr.win && !tr.win->box.empty() && !box_ok(m, *tr.win)) return false;
        if (tr.win && tr.tab && tr.win->degree_max >= 0) dtot += win_degree(m, *tr.tab, *tr.win);
        if (tr.win && tr.win->factor_max >= 0) ftot += mon_factors(m);
    }
    if (tr.win) {
        if (tr.win->degree_max >= 0 && dtot > tr.win->degree_max) return false;
        if (tr.win->factor_max >= 0 && ftot > tr.win->factor_max) return false;
    }
    return true;
}

std::string scal_str(const Rat& c) { return c.get_str(); }

std::string scal_str(const Padic& c) { return std::to_string(c.residue()); }

/* minsuf[k] = least degree the generators from position k on can contribute;
   it makes the exponent range at each level finite and correct even when a
   later boxed generator may carry a negative exponent */
static void enum_rec(const GenTable& tab, const std::vector<GenId>& subset, size_t k,
                     long rem, const Window& w, const std::vector<long>& minsuf,
                     std::vector<std::pair<GenId, int>>& acc, std::vector<Mon>& out) {
    if (k == subset.size()) {
        if (rem != 0) return;
        Mon m;
        for (const auto& [g, e] : acc)
            if (e != 0) m.emplace_back(g, e);
        std::sort(m.begin(), m.end());
        if (w.factor_max >= 0 && mon_factors(m) > w.factor_max) return;
        out.push_back(std::move(m));
        return;
    }
    GenId g = subset[k];
    long dg = tab.degree(g);
    int lo = 0, hi;
    if (w.has_box(g)) {
        auto [blo, bhi] = w.box.at(g);
        lo = blo;
        hi = bhi;
        if (!tab.invertible(g) && lo < 0) lo = 0;
    } else if (tab.invertible(g)) {
        fail(Err::infinite_basis, "unbounded invertible generator " + gen_name(g));
    } else {
        long room = rem - minsuf[k + 1];
        if (room < 0) return;
        hi = dg > 0 ? (int)(room / dg) : 0;
    }
    for (int e = lo; e <= hi; ++e) {
        long rem2 = rem - dg * e;
        if (rem2 < minsuf[k + 1] && dg > 0) break;
        acc.emplace_back(g, e);
        enum_rec(tab, subset, k + 1, rem2, w, minsuf, acc, out);
        acc.pop_back();
    }
}

std::vector<Mon> enumerate_basis(const GenTable& tab, const std::vector<GenId>& subset,
                                 long d, const Window& w) {
    for (size_t i = 0; i < subset.size(); ++i)
        for (size_t j = i + 1; j < subset.size(); ++j)
            if (subset[i] == subset[j]) fail(Err::bad_config, "duplicate generator in basis subset");
    if (w.degree_max >= 0 && d > w.degree_max) return {};
    std::vector<long> minsuf(subset.size() + 1, 0);
    for (size_t k = subset.size(); k-- > 0;) {
        GenId g = subset[k];
        long dg = tab.degree(g);
        long lo = 0;
        if (w.has_box(g)) {
            lo = w.box.at(g).first;
            if (!tab.invertible(g) && lo < 0) lo = 0;
        }
        minsuf[k] = minsuf[k + 1] + (lo < 0 ? dg * lo : 0);
    }
    std::vector<Mon> out;
    std::vector<std::pair<GenId, int>> acc;
    enum_rec(tab, subset, 0, d, w, minsuf, acc, out);
    return out;
}

}  // namespace cbx
