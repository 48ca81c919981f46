#include "linalg.hpp"

#include <algorithm>

namespace cbx {

PnMat::PnMat(long p_, int N_, int r, int c) : p(p_), N(N_), rows(r), cols(c) {
    if (N_ < 1 || N_ > max_precision(p_)) fail(Err::bad_config, "modulus exponent out of range");
    mod = 1;
    for (int i = 0; i < N_; ++i) mod *= (uint64_t)p_;
    a.assign((size_t)r * c, 0);
}

static uint64_t addm(uint64_t x, uint64_t y, uint64_t m) {
    uint64_t s = x + y;
    return s >= m ? s - m : s;
}
static uint64_t subm(uint64_t x, uint64_t y, uint64_t m) { return addm(x, m - y >= m ? 0 : m - y, m); }
static uint64_t mulm(uint64_t x, uint64_t y, uint64_t m) { return mulmod_u64(x, y, m); }

int pn_val(const PnMat& m, uint64_t x) {
    if (x == 0) return m.N;
    int v = 0;
    while (x % (uint64_t)m.p == 0) {
        x /= (uint64_t)m.p;
        ++v;
    }
    return v;
}

PnMat pn_mul(const PnMat& x, const PnMat& y) {
    if (x.cols != y.rows || x.p != y.p || x.N != y.N)
        fail(Err::internal, "matrix shape or modulus mismatch in product");
    PnMat r(x.p, x.N, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            uint64_t xa = x.at(i, k);
            if (!xa) continue;
            for (int j = 0; j < y.cols; ++j)
                r.at(i, j) = addm(r.at(i, j), mulm(xa, y.at(k, j), r.mod), r.mod);
        }
    return r;
}

PnVec pn_apply(const PnMat& x, const PnVec& v) {
    if ((int)v.size() != x.cols) fail(Err::internal, "vector length mismatch");
    PnVec r((size_t)x.rows, 0);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j)
            if (x.at(i, j) && v[(size_t)j])
                r[(size_t)i] = addm(r[(size_t)i], mulm(x.at(i, j), v[(size_t)j], x.mod), x.mod);
    return r;
}

bool pn_is_zero(const PnMat& x) {
    for (uint64_t e : x.a)
        if (e) return false;
    return true;
}

namespace {

/* Column echelon over Z/p^N with Howell closures.  Each working column
   carries its preimage v with col = A*v throughout; columns that finish at
   zero hand their v to the kernel. */
struct HowPiv {
    int row;
    int e;
    PnVec col, v;
};
struct HowellResult {
    std::vector<HowPiv> pivots;
    std::vector<PnVec> kernel;
};

HowellResult howell(const PnMat& A) {
    uint64_t m = A.mod;
    long p = A.p;
    int N = A.N;
    struct WC {
        PnVec col, v;
    };
    std::vector<WC> act;
    act.reserve((size_t)A.cols);
    for (int j = 0; j < A.cols; ++j) {
        WC w;
        w.col.resize((size_t)A.rows);
        for (int i = 0; i < A.rows; ++i) w.col[(size_t)i] = A.at(i, j);
        w.v.assign((size_t)A.cols, 0);
        w.v[(size_t)j] = 1;
        act.push_back(std::move(w));
    }
    HowellResult res;
    for (int row = 0; row < A.rows; ++row) {
        int best = -1, beste = N;
        for (size_t j = 0; j < act.size(); ++j) {
            uint64_t x = act[j].col[(size_t)row];
            if (!x) continue;
            int e = 0;
            while (x % (uint64_t)p == 0) x /= (uint64_t)p, ++e;
            if (e < beste) {
                beste = e;
                best = (int)j;
            }
            if (beste == 0) break;
        }
        if (best < 0) continue;
        WC piv = std::move(act[(size_t)best]);
        act.erase(act.begin() + best);
        uint64_t pe = 1;
        for (int i = 0; i < beste; ++i) pe *= (uint64_t)p;
        uint64_t unit = piv.col[(size_t)row] / pe;
        uint64_t ui = invmod_u64(unit, m);
        for (int i = row; i < A.rows; ++i) piv.col[(size_t)i] = mulm(piv.col[(size_t)i], ui, m);
        for (auto& x : piv.v) x = mulm(x, ui, m);
        for (auto& w : act) {
            uint64_t b = w.col[(size_t)row];
            if (!b) continue;
            uint64_t q = b / pe;  // exact: pivot had minimal valuation
            for (int i = row; i < A.rows; ++i)
                w.col[(size_t)i] = subm(w.col[(size_t)i], mulm(q, piv.col[(size_t)i], m), m);
            for (size_t i = 0; i < w.v.size(); ++i)
                w.v[i] = subm(w.v[i], mulm(q, piv.v[i], m), m);
        }
        if (beste > 0) {
            // closure column keeps the span property of the echelon form
            uint64_t pf = 1;
            for (int i = 0; i < N - beste; ++i) pf *= (uint64_t)p;
            WC cl;
            cl.col.resize((size_t)A.rows);
            for (int i = 0; i < A.rows; ++i) cl.col[(size_t)i] = mulm(pf, piv.col[(size_t)i], m);
            cl.v.resize(piv.v.size());
            for (size_t i = 0; i < piv.v.size(); ++i) cl.v[i] = mulm(pf, piv.v[i], m);
            act.push_back(std::move(cl));
        }
        res.pivots.push_back({row, beste, std::move(piv.col), std::move(piv.v)});
    }
    for (auto& w : act) {
        bool nz = false;
        for (uint64_t x : w.v)
            if (x) nz = true;
        if (nz) res.kernel.push_back(std::move(w.v));
    }
    return res;
}

// eliminate b against the pivot list; returns false if b is not in the span
bool eliminate(const HowellResult& H, const PnMat& A, PnVec b, PnVec& x) {
    uint64_t m = A.mod;
    long p = A.p;
    x.assign((size_t)A.cols, 0);
    for (const auto& piv : H.pivots) {
        uint64_t bi = b[(size_t)piv.row];
        if (!bi) continue;
        uint64_t pe = 1;
        for (int i = 0; i < piv.e; ++i) pe *= (uint64_t)p;
        if (bi % pe) return false;
        uint64_t q = bi / pe;
        for (int i = piv.row; i < A.rows; ++i)
            b[(size_t)i] = subm(b[(size_t)i], mulm(q, piv.col[(size_t)i], m), m);
        for (size_t i = 0; i < x.size(); ++i)
            x[i] = addm(x[i], mulm(q, piv.v[i], m), m);
    }
    for (uint64_t e : b)
        if (e) return false;
    return true;
}

}  // namespace

std::vector<PnVec> pn_kernel(const PnMat& A) { return howell(A).kernel; }

bool pn_solve(const PnMat& A, const PnVec& b, PnVec& x) {
    if ((int)b.size() != A.rows) fail(Err::internal, "rhs length mismatch");
    return eliminate(howell(A), A, b, x);
}

PnSmith pn_smith(PnMat m) {
    uint64_t md = m.mod;
    long p = m.p;
    int N = m.N;
    PnSmith res;
    res.uinv = PnMat(p, N, m.rows, m.rows);
    for (int i = 0; i < m.rows; ++i) res.uinv.at(i, i) = 1;
    int corner = 0;
    int lim = std::min(m.rows, m.cols);
    while (corner < lim) {
        int bi = -1, bj = -1, be = N;
        for (int i = corner; i < m.rows && be > 0; ++i)
            for (int j = corner; j < m.cols; ++j) {
                uint64_t x = m.at(i, j);
                if (!x) continue;
                int e = pn_val(m, x);
                if (e < be) {
                    be = e;
                    bi = i;
                    bj = j;
                    if (be == 0) break;
                }
            }
        if (bi < 0) break;
        if (bi != corner) {
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(bi, j), m.at(corner, j));
            for (int i = 0; i < m.rows; ++i) std::swap(res.uinv.at(i, bi), res.uinv.at(i, corner));
        }
        if (bj != corner)
            for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, bj), m.at(i, corner));
        uint64_t pe = 1;
        for (int i = 0; i < be; ++i) pe *= (uint64_t)p;
        uint64_t unit = m.at(corner, corner) / pe;
        uint64_t ui = invmod_u64(unit, md);
        for (int j = corner; j < m.cols; ++j) m.at(corner, j) = mulm(m.at(corner, j), ui, md);
        for (int i = 0; i < m.rows; ++i)
            res.uinv.at(i, corner) = mulm(res.uinv.at(i, corner), unit, md);
        for (int i = corner + 1; i < m.rows; ++i) {
            uint64_t x = m.at(i, corner);
            if (!x) continue;
            uint64_t q = x / pe;
            for (int j = corner; j < m.cols; ++j)
                m.at(i, j) = subm(m.at(i, j), mulm(q, m.at(corner, j), md), md);
            for (int r = 0; r < m.rows; ++r)
                res.uinv.at(r, corner) =
                    addm(res.uinv.at(r, corner), mulm(q, res.uinv.at(r, i), md), md);
        }
        for (int j = corner + 1; j < m.cols; ++j) {
            uint64_t x = m.at(corner, j);
            if (!x) continue;
            uint64_t q = x / pe;
            for (int i = corner; i < m.rows; ++i)
                m.at(i, j) = subm(m.at(i, j), mulm(q, m.at(i, corner), md), md);
        }
        res.diag.push_back(be);
        ++corner;
    }
    return res;
}

Int PnModule::size(long p) const {
    Int s = 1;
    for (int e : orders)
        for (int i = 0; i < e; ++i) s *= p;
    return s;
}

PnModule pn_cokernel(const PnMat& m) {
    PnSmith s = pn_smith(m);
    PnModule out;
    struct Summand {
        int order;
        PnVec gen;
    };
    std::vector<Summand> sums;
    for (int i = 0; i < m.rows; ++i) {
        int order = i < (int)s.diag.size() ? s.diag[(size_t)i] : m.N;
        if (order == 0) continue;
        PnVec g((size_t)m.rows);
        for (int r = 0; r < m.rows; ++r) g[(size_t)r] = s.uinv.at(r, i);
        sums.push_back({order, std::move(g)});
    }
    std::stable_sort(sums.begin(), sums.end(),
                     [](const Summand& a, const Summand& b) { return a.order > b.order; });
    for (auto& su : sums) {
        out.orders.push_back(su.order);
        out.gens.push_back(std::move(su.gen));
    }
    return out;
}

PnModule pn_cohomology(const PnMat& dout, const PnMat& din) {
    if (dout.cols != din.rows || dout.p != din.p || dout.N != din.N)
        fail(Err::internal, "complex shape or modulus mismatch");
    if (!pn_is_zero(pn_mul(dout, din))) fail(Err::internal, "maps do not compose to zero");
    auto K = pn_kernel(dout);
    int k = (int)K.size();
    PnModule out;
    if (k == 0) return out;
    PnMat Kmat(dout.p, dout.N, dout.cols, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < dout.cols; ++i) Kmat.at(i, j) = K[(size_t)j][(size_t)i];
    HowellResult HK = howell(Kmat);
    std::vector<PnVec> rels = HK.kernel;
    int nc = din.cols + (int)rels.size();
    PnMat pres(dout.p, dout.N, k, nc);
    for (int j = 0; j < din.cols; ++j) {
        PnVec b((size_t)din.rows);
        for (int i = 0; i < din.rows; ++i) b[(size_t)i] = din.at(i, j);
        PnVec x;
        if (!eliminate(HK, Kmat, std::move(b), x))
            fail(Err::internal, "image vector escapes the kernel");
        for (int i = 0; i < k; ++i) pres.at(i, j) = x[(size_t)i];
    }
    for (size_t r = 0; r < rels.size(); ++r)
        for (int i = 0; i < k; ++i) pres.at(i, din.cols + (int)r) = rels[r][(size_t)i];
    PnModule q = pn_cokernel(pres);
    for (size_t i = 0; i < q.orders.size(); ++i) {
        PnVec amb = pn_apply(Kmat, q.gens[i]);
        out.orders.push_back(q.orders[i]);
        out.gens.push_back(std::move(amb));
    }
    return out;
}

}  // namespace cbx
