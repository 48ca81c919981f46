#ifndef COBAREXT_HOPF_HPP
#define COBAREXT_HOPF_HPP

#include <functional>
#include <memory>

#include "graded.hpp"

namespace cbx {

/* Structure-map recursions over exact rationals.  The quotient and window
   must be monomial-ideal filters, so every intermediate division by p is
   the image of the exact division and p-integrality of the results is a
   meaningful assertion, not an artifact of truncation. */
class LogCtx {
  public:
    LogCtx(GenTable tab, Window win, Quotient quo);
    const QPoly& lam(int k);        // log coefficient lambda_k (denominators p-powers)
    const QPoly& etaR_lam(int k);   // right-unit image of lambda_k
    const QPoly& etaR_v(int k);     // right-unit image of v_k; p-integral by hard check
    const QTensor& diag_t(int k);   // full comultiplication of t_k; p-integral likewise
    const GenTable& table() const { return tab_; }
    Trunc tr() const { return Trunc{&tab_, &win_, &quo_}; }

  private:
    GenTable tab_;
    Window win_;
    Quotient quo_;
    RatRing ring_;
    std::map<int, QPoly> lam_, etalam_, etav_;
    std::map<int, QTensor> diagt_;
};

// throws Err::integrality_failure naming `what` if any denominator is not 1
void check_integral(const QPoly& x, const std::string& what);
void check_integral(const QTensor& x, const std::string& what);

// lambda_1..lambda_kmax over the full base ring
std::vector<QPoly> log_coefficients(long p, int kmax);

/* The algebroid family: `bp` is the full base with the first gamma_index-1
   t-generators killed; `sigma` additionally truncates the base to
   v_1..v_{n+m} and inverts v_n.  kmax_v / kmax_t bound which structure-map
   images are materialized (for sigma this includes the relation images
   eta_R(v_k) for k > n+m that the rewrite rules are solved from). */
enum class AlgKind { bp, sigma };

struct AlgebroidSpec {
    long p = 2;
    AlgKind kind = AlgKind::bp;
    int n = 0;
    int m = 0;
    int gamma_index = 1;
    int v_cap = 0;   // bp only: base generators v_1..v_cap (0: derived)
    int kmax_v = 0;  // right-unit images materialized up to this index
    int kmax_t = 0;  // comultiplications materialized up to this index
};

struct Presentation {
    AlgebroidSpec spec;
    GenTable tab;
    Window win;
    Quotient quo;  // structural kills only (gamma and base truncation)
    std::map<int, QPoly> etaRv;
    std::map<int, QTensor> diagT;
    Trunc tr() const { return Trunc{&tab, &win, &quo}; }
    long rule_pow() const;  // p^n, the exponent the sigma rewrite rules solve
};

using PresPtr = std::shared_ptr<const Presentation>;

/* Builds the presentation and verifies its axioms inside the window:
   counit inverts both units on generators, the comultiplication is
   coassociative and counital, the right unit is multiplicative, and
   eta_R(v_k) = v_k exactly for k < gamma_index. */
PresPtr make_algebroid(const AlgebroidSpec& spec, const Window& win);

/* Ideal in the base ring, ordered: an optional p^inf tower marker first,
   then an optional scalar p^k, then v-power generators. */
struct IdealSpec {
    bool pinf = false;
    int p_power = -1;  // exponent k of a scalar generator p^k; -1 none, 0 the unit ideal
    std::vector<std::pair<int, int>> v_gens;  // (index, exponent)
    bool is_unit() const { return p_power == 0; }
    bool trivial() const { return !pinf && p_power < 0 && v_gens.empty(); }
    std::string str(long p) const;
};

// text form: comma-separated "2^inf", "p", "p^k", "vi", "vi^a", or "1"
IdealSpec parse_ideal(const std::string& text, long p);

/* invariant: each generator satisfies eta_R(w) == w modulo the previous
   generators in the full algebroid; unusual: only after killing t_1..t_m;
   neither otherwise. */
enum class IdealClass { invariant, unusual, neither };
IdealClass classify_ideal(const IdealSpec& J, int m, long p, const Window& win);

struct Comodule {
    PresPtr pres;
    IdealSpec ideal;
    bool zero = false;  // quotient by the unit ideal
    Quotient quo;       // structural kills plus the ideal's v-generators
};

// rejects ideals that classify as neither; J = (1) yields the zero comodule
Comodule make_comodule(PresPtr pres, const IdealSpec& J);

/* p-adic reduction of a presentation at precision N modulo an ideal, with
   the sigma rewrite rules t_j^{p^n} -> image solved from the relations
   eta_R(v_{n+j}) = 0.  Rules are solved for ascending j as long as the
   window still sees the rewritten monomial. */
struct ReducedPres {
    PresPtr base;
    PadicRing ring{2, 1};
    Window win;
    Quotient quo;
    std::map<int, PPoly> etaRv;
    std::map<int, PTensor> diagT;
    long rule_pow = 0;
    std::map<int, PPoly> rules;
    Trunc tr() const { return Trunc{&base->tab, &win, &quo}; }
    mutable std::map<int, PPoly> vinv_cache;
};

ReducedPres reduce_presentation(PresPtr pres, int N, const IdealSpec& J, const Window& win);

// coefficientwise p-adic reduction; coefficients must be p-local
PPoly reduce_poly(const PadicRing& ring, const QPoly& x, const Trunc& tr);
PTensor reduce_tensor(const PadicRing& ring, const QTensor& x, const Trunc& tr);

/* Inverse of a polynomial whose valuation-zero part is a single monomial
   with unit coefficient, by a geometric series that terminates at the
   working precision.  Err::rule_gap if the leading part is not of that shape. */
PPoly pinvert(const PadicRing& ring, const PPoly& c, const Trunc& tr);

// right-unit image of a pure-v monomial (negative exponents via pinvert)
PPoly etaR_vmon(const ReducedPres& rp, const Mon& vm);

/* Rewrites every t_j^{rule_pow}-divisible monomial by the solved rules
   until none remains.  Err::rule_gap if a reducible monomial survives the
   iteration cap or has no solved rule. */
PPoly rules_reduce(const ReducedPres& rp, PPoly x);

/* Tensor words are canonical when every base (v) factor sits in the leftmost
   slot; a v-factor in slot i moves to slot i-1 as its right-unit image.
   Words with a slot whose t-part is empty are zero in the counit-reduced
   complex and are dropped. */
PTensor drop_degenerate(const PTensor& x);
PTensor slide_left(const ReducedPres& rp, const PTensor& x);

// slide_left followed by rules_reduce on every slot, iterated to a fixpoint
PTensor canonicalize(const ReducedPres& rp, const PTensor& x);

/* Full comultiplication applied to slot `slot` of each word: the slot's
   t-part expands through the tables, its v-part multiplies the left half.
   The result is neither slid nor reduced. */
PTensor diag_expand(const ReducedPres& rp, const PTensor& x, int slot);

// in-window right-unit and comultiplication images from the exact tables
const QPoly& right_unit(const Presentation& pres, int k);
const QTensor& diagonal(const Presentation& pres, int k);

/* (t_i x 1 + 1 x t_i)^{p^{j+1}} minus its two end terms, divided by p.
   Err::insufficient_divisibility if the division does not clear. */
QTensor b_element(int i, int j, const GenTable& tab, const Trunc& tr);

// (v_i^{p^{j+1}} - eta_R(v_i)^{p^{j+1}}) / p from the presentation tables
QPoly c_element(int i, int j, const Presentation& pres);

}  // namespace cbx

#endif
