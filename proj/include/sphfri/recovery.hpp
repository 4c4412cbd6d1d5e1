#pragma once

#include <complex>
#include <vector>

#include "sphfri/fri_model.hpp"
#include "sphfri/numerics.hpp"
#include "sphfri/sh_core.hpp"

namespace sphfri {

// Exponential-mixture sequences recovered from the coefficients:
//   d_{p,m} = sum_k alpha_k cos^p(theta_k) x_k^m            for m >= 0,
//   d_{p,m} = sum_k alpha_k cos^p(theta_k) conj(x_k)^|m|    for m < 0,
// defined for |m| < L, 0 <= p < L - |m|.
class DpmSequences {
public:
    DpmSequences() = default;
    explicit DpmSequences(int L);

    int bandlimit() const { return L_; }

    // Number of stored p values for order m, i.e. L - |m|.
    int depth(int m) const;

    std::complex<double>& at(int p, int m);
    const std::complex<double>& at(int p, int m) const;

private:
    int L_ = 0;
    std::vector<std::vector<std::complex<double>>> rows_;  // index m + L - 1
};

struct BandlimitPlan {
    int K = 0;
    int L_required = 0;  // smallest L with ceil(K + sqrt(K + 1/4) - 1/2) <= L
    int max_rows = 0;    // (L-K)(L-K+1), every constructible matrix row
    int two_k = 0;       // 2K, the classic annihilating-filter requirement
    int k_plus_sqrt = 0;  // ceil(K + sqrt(K)), the sparse-recovery requirement
};

// Smallest bandlimit at which K Diracs are recoverable, in exact integer
// arithmetic: L = K + t with the smallest t >= 1 satisfying t(t+1) >= K.
// The comparison bounds of the two reference methods come along for tables.
BandlimitPlan required_bandlimit(int K);

// Recovers every d_{p,m} from the coefficient triangle by one lower
// triangular solve per order m (row l of the system states
// f_{l,m} = sum_p c^p_{l,m} d_{p,m}). The table must cover flm's bandlimit.
DpmSequences extract_dpm(const ShCoefficients& flm, int K,
                         const LegendrePolyTable& table);
DpmSequences extract_dpm(const ShCoefficients& flm, int K);

// Inverse of extract_dpm: f_{l,m} = sum_p c^p_{l,m} d_{p,m}.
ShCoefficients synthesize_from_dpm(const DpmSequences& d,
                                   const LegendrePolyTable& table);

// Stacks every constructible sliding window of the sequences into the
// annihilating matrix with K+1 columns: for each p while L-K-p >= 1, the rows
// [d_{p,s}, d_{p,s-1}, ..., d_{p,s-K}] for s = L-1-p down to K, then the
// conjugated negative-order rows [conj(d_{p,-s}), ..., conj(d_{p,-(s-K)})]
// over the same s range. Using all (L-K)(L-K+1) rows rather than the minimum
// K over-determines the null space and is where the accuracy of this method
// comes from.
ComplexMatrix build_annihilating_matrix(const DpmSequences& d, int K);

struct XkEstimate {
    ComplexVector xk;                    // unordered
    double null_gap = 0.0;               // sigma_{K+1} / sigma_K
    double annihilation_residual = 0.0;  // max_q |row_q . v|
};

// Nodes from the annihilating matrix: the unit null vector v of Z gives the
// filter V(z) = sum_n v_n z^{-n}, whose roots are the node estimates.
XkEstimate estimate_xk(const ComplexMatrix& Z, int K,
                       const Tolerances& tol = {});

// phi_k = -Phase(x_k), normalized into [0, 2pi).
std::vector<double> recover_phi(const ComplexVector& xk);

// Amplitudes from the order-progression of d at p = 0:
// sum_k alpha_k x_k^m = d_{0,m} for m = 0..K-1.
ComplexVector recover_alpha(const ComplexVector& xk, const DpmSequences& d,
                            const Tolerances& tol = {});

struct ThetaEstimate {
    std::vector<double> theta;
    // Solution of the p = 1 system, beta_k = alpha_k cos(theta_k).
    ComplexVector beta;
    // Times the arccos argument had to be clamped into [-1, 1].
    int arccos_clamped = 0;
    // Largest |Im(beta_k / alpha_k)| discarded before the arccos; zero in
    // exact arithmetic.
    double max_imag_residue = 0.0;
};

// Colatitudes via the same node system at p = 1, whose solution is
// beta_k = alpha_k cos(theta_k); then theta_k = arccos(Re(beta_k / alpha_k))
// with the argument clamped into [-1, 1] and the clamp counted.
ThetaEstimate recover_theta(const ComplexVector& xk,
                            const ComplexVector& alpha_est,
                            const DpmSequences& d, const Tolerances& tol = {});

struct RecoveryDiagnostics {
    double null_gap = 0.0;
    double annihilation_residual = 0.0;
    double vand_res_alpha = 0.0;  // max_m |sum_k alpha_k x_k^m - d_{0,m}|
    double vand_res_theta = 0.0;  // max_m |sum_k beta_k x_k^m - d_{1,m}|
    int arccos_clamped = 0;
    // Debug-only companion to arccos_clamped; not serialized.
    double max_imag_residue = 0.0;
};

struct RecoveryResult {
    DiracEnsemble diracs_est;  // unordered; serialization sorts
    RecoveryDiagnostics diagnostics;
};

// Full pipeline: extract_dpm -> build_annihilating_matrix -> estimate_xk ->
// recover_phi / recover_alpha / recover_theta. Errors from any stage escape
// with their concrete type, tagged with the stage name.
RecoveryResult recover(const ShCoefficients& flm, int K,
                       const LegendrePolyTable& table,
                       const Tolerances& tol = {});
RecoveryResult recover(const ShCoefficients& flm, int K,
                       const Tolerances& tol = {});

}  // namespace sphfri
