#ifndef COBAREXT_LINALG_HPP
#define COBAREXT_LINALG_HPP

#include <cstdint>
#include <vector>

#include "scalars.hpp"

namespace cbx {

/* Dense matrix over Z/p^N, row-major, entries canonical in [0, p^N).
   N = 1 covers the prime-field case; the same echelon routines then reduce
   to ordinary Gaussian elimination. */
struct PnMat {
    long p = 2;
    int N = 1;
    uint64_t mod = 2;
    int rows = 0, cols = 0;
    std::vector<uint64_t> a;

    PnMat() = default;
    PnMat(long p_, int N_, int r, int c);
    uint64_t& at(int i, int j) { return a[(size_t)i * cols + j]; }
    uint64_t at(int i, int j) const { return a[(size_t)i * cols + j]; }
};

using PnVec = std::vector<uint64_t>;

PnMat pn_mul(const PnMat& x, const PnMat& y);
PnVec pn_apply(const PnMat& x, const PnVec& v);
bool pn_is_zero(const PnMat& x);

// p-adic valuation of a residue, with val(0) = N
int pn_val(const PnMat& m, uint64_t x);

// generators of { x : A x = 0 } as a Z/p^N-module, deterministic order
std::vector<PnVec> pn_kernel(const PnMat& A);

// solve A x = b; false when b is outside the column span
bool pn_solve(const PnMat& A, const PnVec& b, PnVec& x);

/* Finite p-module in cyclic form: orders[i] is the exponent e of the i-th
   summand Z/p^e, descending; gens[i] is a representative in ambient
   coordinates. */
struct PnModule {
    std::vector<int> orders;
    std::vector<PnVec> gens;
    int length() const { return (int)orders.size(); }
    Int size(long p) const;
};

/* ker(dout)/im(din) for consecutive maps with dout*din = 0.  din may have
   zero columns (bottom of a complex).  At N = 1 every order is 1 and
   length() is the F_p-dimension. */
PnModule pn_cohomology(const PnMat& dout, const PnMat& din);

/* Smith form over Z/p^N: returns the diagonal valuations (ascending) and
   the inverse row transform whose columns generate the cokernel summands. */
struct PnSmith {
    std::vector<int> diag;  // valuations of the nonzero diagonal entries
    PnMat uinv;
};
PnSmith pn_smith(PnMat m);

// cokernel (Z/p^N)^rows / colspan(m) in cyclic form
PnModule pn_cokernel(const PnMat& m);

}  // namespace cbx

#endif
