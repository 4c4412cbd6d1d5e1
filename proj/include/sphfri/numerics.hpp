#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace sphfri {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = std::vector<std::complex<double>>;

// Central tolerance record. The CLI layer maps environment variables and
// --tolerance flags onto these fields; the library never reads the
// environment itself.
struct Tolerances {
    // Advertised backward-residual bound for the direct solvers at the sizes
    // used here (<= 32); enforced by the test suite, not at run time.
    double residual = 1e-12;
    // Ceiling on the ratio of the two smallest singular values; above it the
    // null space counts as ambiguous rather than one-dimensional.
    double null_gap = 1e-6;
    // Relative floor under which an end coefficient of the annihilating
    // filter counts as vanished.
    double degenerate_coeff = 1e-14;
    // Estimated amplitudes with modulus at or below this cannot be divided
    // into the colatitude ratio.
    double amplitude_floor = 1e-12;
    // Gautschi condition bound above which a Vandermonde solve is flagged as
    // ill-conditioned.
    double vandermonde_cond_warn = 1e12;
};

// Solves A x = b for lower-triangular A by forward substitution.
ComplexVector solve_lower_triangular(const ComplexMatrix& A,
                                     const ComplexVector& b);

struct VandermondeInfo {
    // Gautschi's lower bound on the infinity-norm condition number:
    // max_j prod_{k != j} (1 + |x_k|) / |x_j - x_k|.
    double cond_bound = 0.0;
    bool ill_conditioned = false;
};

// Solves sum_k a_k x_k^m = rhs[m] for m = 0..K-1 (powers run down the rows)
// by the Bjorck-Pereyra progressive algorithm, which is markedly more
// accurate than generic LU on the clustered node sets showing up at large K.
// Nodes must be pairwise distinct. Conditioning information is reported
// through `info` when given; it never aborts the solve.
ComplexVector solve_vandermonde(const ComplexVector& nodes,
                                const ComplexVector& rhs,
                                const Tolerances& tol = {},
                                VandermondeInfo* info = nullptr);

struct SingularVectorResult {
    ComplexVector vector;       // unit right singular vector of sigma_min
    double gap = 0.0;           // sigma_min / sigma_second
    double sigma_min = 0.0;
    double sigma_second = 0.0;  // second-smallest singular value
};

// Smallest right singular pair of M. Requires cols >= 2 and rows >= cols - 1;
// with rows = cols - 1 the missing singular value is an exact structural zero
// and is treated as such. Throws AmbiguousNullSpaceError when the kernel is
// not isolated: sigma_min / sigma_second above tol.null_gap, or, in the
// rows = cols - 1 case, sigma_second down at the decomposition's own noise
// floor.
SingularVectorResult smallest_right_singular_vector(const ComplexMatrix& M,
                                                    const Tolerances& tol = {});

// Filter coefficients v_0..v_K of V(z) = sum_n v_n z^{-n}.
struct PolynomialCoeffs {
    ComplexVector coeffs;
};

// The K roots of V(z) = prod_k (1 - x_k z^{-1}), i.e. the roots of
// z^K V(z) = sum_n v_n z^{K-n}, via balanced companion-matrix eigenvalues.
// Both end coefficients must be nonzero within tol.degenerate_coeff relative
// to max |v_n|: v_0 because it normalizes the companion matrix, v_K because a
// vanishing tail means a root at zero (a node on the polar axis). Output is
// unordered. `newton_polish` applies one Newton step per root.
ComplexVector polynomial_roots(const PolynomialCoeffs& p,
                               const Tolerances& tol = {},
                               bool newton_polish = false);

}  // namespace sphfri
