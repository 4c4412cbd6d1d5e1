#include "sphfri/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

#include "sphfri/errors.hpp"

namespace sphfri {

namespace {

// Runs one pipeline phase; errors keep their concrete type but gain the
// stage name, so a failed recovery says where it failed.
template <typename F>
auto run_stage(const char* stage, F&& f) {
    try {
        return f();
    } catch (Error& e) {
        e.tag_stage(stage);
        throw;
    }
}

// max_m |sum_k coeffs_k nodes_k^m - rhs[m]|, the backward residual of the
// power-progression systems solved below.
double power_system_residual(const ComplexVector& nodes,
                             const ComplexVector& coeffs,
                             const ComplexVector& rhs) {
    ComplexVector powers(nodes.size(), {1.0, 0.0});
    double residual = 0.0;
    for (std::size_t m = 0; m < rhs.size(); ++m) {
        std::complex<double> sum = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            sum += coeffs[k] * powers[k];
            powers[k] *= nodes[k];
        }
        residual = std::max(residual, std::abs(sum - rhs[m]));
    }
    return residual;
}

}  // namespace

DpmSequences::DpmSequences(int L) : L_(L) {
    if (L < 1) {
        throw std::invalid_argument("DpmSequences: bandlimit must be >= 1");
    }
    rows_.resize(2 * static_cast<std::size_t>(L) - 1);
    for (int m = -(L - 1); m <= L - 1; ++m) {
        rows_[static_cast<std::size_t>(m + L - 1)].assign(
            static_cast<std::size_t>(L - std::abs(m)), {0.0, 0.0});
    }
}

int DpmSequences::depth(int m) const {
    if (std::abs(m) >= L_) {
        throw std::invalid_argument("DpmSequences::depth: order " +
                                    std::to_string(m) +
                                    " out of range for L=" +
                                    std::to_string(L_));
    }
    return L_ - std::abs(m);
}

std::complex<double>& DpmSequences::at(int p, int m) {
    if (std::abs(m) >= L_ || p < 0 || p >= L_ - std::abs(m)) {
        throw std::invalid_argument(
            "DpmSequences::at: indices p=" + std::to_string(p) +
            " m=" + std::to_string(m) + " out of range for L=" +
            std::to_string(L_));
    }
    return rows_[static_cast<std::size_t>(m + L_ - 1)]
                [static_cast<std::size_t>(p)];
}

const std::complex<double>& DpmSequences::at(int p, int m) const {
    return const_cast<DpmSequences*>(this)->at(p, m);
}

BandlimitPlan required_bandlimit(int K) {
    if (K < 1) {
        throw std::invalid_argument("required_bandlimit: K must be >= 1");
    }
    // L = K + t with the smallest t >= 1 such that t(t+1) >= K; equivalent to
    // the closed form ceil(K + sqrt(K + 1/4) - 1/2) but exact in integers.
    int t = 1;
    while (t * (t + 1) < K) ++t;

    // ceil(K + sqrt(K)): sqrt(K) is an integer exactly when K is a perfect
    // square, otherwise the ceiling adds one to the integer part.
    int u = static_cast<int>(std::sqrt(static_cast<double>(K)));
    while ((u + 1) * (u + 1) <= K) ++u;
    while (u * u > K) --u;

    BandlimitPlan plan;
    plan.K = K;
    plan.L_required = K + t;
    plan.max_rows = t * (t + 1);
    plan.two_k = 2 * K;
    plan.k_plus_sqrt = (u * u == K) ? K + u : K + u + 1;
    return plan;
}

DpmSequences extract_dpm(const ShCoefficients& flm, int K,
                         const LegendrePolyTable& table) {
    const int L = flm.bandlimit();
    const BandlimitPlan plan = required_bandlimit(K);
    if (L < plan.L_required) {
        throw BandlimitError("extract_dpm: bandlimit " + std::to_string(L) +
                             " is below the required " +
                             std::to_string(plan.L_required) + " for K=" +
                             std::to_string(K));
    }
    if (table.bandlimit() < L) {
        throw std::invalid_argument(
            "extract_dpm: table covers bandlimit " +
            std::to_string(table.bandlimit()) + " but coefficients need " +
            std::to_string(L));
    }

    DpmSequences d(L);
    for (int m = -(L - 1); m <= L - 1; ++m) {
        const int n = L - std::abs(m);
        ComplexMatrix A = ComplexMatrix::Zero(n, n);
        ComplexVector b(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const int l = std::abs(m) + i;
            for (int p = 0; p <= i; ++p) {
                A(i, p) = table.coeff(l, m, p);
            }
            b[static_cast<std::size_t>(i)] = flm.at(l, m);
        }
        const ComplexVector x = solve_lower_triangular(A, b);
        for (int p = 0; p < n; ++p) {
            d.at(p, m) = x[static_cast<std::size_t>(p)];
        }
    }
    return d;
}

DpmSequences extract_dpm(const ShCoefficients& flm, int K) {
    return extract_dpm(flm, K, LegendrePolyTable(flm.bandlimit()));
}

ShCoefficients synthesize_from_dpm(const DpmSequences& d,
                                   const LegendrePolyTable& table) {
    const int L = d.bandlimit();
    if (table.bandlimit() < L) {
        throw std::invalid_argument(
            "synthesize_from_dpm: table covers bandlimit " +
            std::to_string(table.bandlimit()) + " but sequences need " +
            std::to_string(L));
    }
    ShCoefficients flm(L);
    for (int l = 0; l < L; ++l) {
        for (int m = -l; m <= l; ++m) {
            std::complex<double> sum = 0.0;
            for (int p = 0; p <= l - std::abs(m); ++p) {
                sum += table.coeff(l, m, p) * d.at(p, m);
            }
            flm.at(l, m) = sum;
        }
    }
    return flm;
}

ComplexMatrix build_annihilating_matrix(const DpmSequences& d, int K) {
    if (K < 1) {
        throw std::invalid_argument(
            "build_annihilating_matrix: K must be >= 1");
    }
    const int L = d.bandlimit();
    const int span = L - K;  // window positions per block at p = 0
    const int total_rows = span > 0 ? span * (span + 1) : 0;
    if (total_rows < K) {
        throw InsufficientRowsError(
            "build_annihilating_matrix: bandlimit " + std::to_string(L) +
            " yields " + std::to_string(total_rows) +
            " rows, fewer than K=" + std::to_string(K));
    }

    ComplexMatrix Z(total_rows, K + 1);
    int row = 0;
    for (int p = 0; L - K - p >= 1; ++p) {
        for (int s = L - 1 - p; s >= K; --s) {
            for (int j = 0; j <= K; ++j) {
                Z(row, j) = d.at(p, s - j);
            }
            ++row;
        }
        for (int s = L - 1 - p; s >= K; --s) {
            for (int j = 0; j <= K; ++j) {
                Z(row, j) = std::conj(d.at(p, j - s));
            }
            ++row;
        }
    }
    return Z;
}

XkEstimate estimate_xk(const ComplexMatrix& Z, int K, const Tolerances& tol) {
    if (static_cast<int>(Z.cols()) != K + 1) {
        throw std::invalid_argument("estimate_xk: matrix has " +
                                    std::to_string(Z.cols()) +
                                    " columns, expected K+1=" +
                                    std::to_string(K + 1));
    }
    const SingularVectorResult nullspace =
        smallest_right_singular_vector(Z, tol);

    Eigen::Map<const Eigen::VectorXcd> v(nullspace.vector.data(), K + 1);
    const double annihilation_residual = (Z * v).cwiseAbs().maxCoeff();

    XkEstimate est;
    est.xk = polynomial_roots(PolynomialCoeffs{nullspace.vector}, tol);
    est.null_gap = nullspace.gap;
    est.annihilation_residual = annihilation_residual;
    return est;
}

std::vector<double> recover_phi(const ComplexVector& xk) {
    std::vector<double> phi(xk.size());
    for (std::size_t k = 0; k < xk.size(); ++k) {
        if (xk[k] == std::complex<double>(0.0, 0.0)) {
            throw ZeroNodeError("recover_phi: node " + std::to_string(k) +
                                " is zero, longitude undefined");
        }
        phi[k] = normalize_phi(-std::arg(xk[k]));
    }
    return phi;
}

ComplexVector recover_alpha(const ComplexVector& xk, const DpmSequences& d,
                            const Tolerances& tol) {
    const int K = static_cast<int>(xk.size());
    if (K < 1 || d.bandlimit() < K) {
        throw std::invalid_argument(
            "recover_alpha: need d_{0,m} for m = 0.." + std::to_string(K - 1) +
            ", bandlimit is " + std::to_string(d.bandlimit()));
    }
    ComplexVector rhs(static_cast<std::size_t>(K));
    for (int m = 0; m < K; ++m) rhs[static_cast<std::size_t>(m)] = d.at(0, m);
    return solve_vandermonde(xk, rhs, tol);
}

ThetaEstimate recover_theta(const ComplexVector& xk,
                            const ComplexVector& alpha_est,
                            const DpmSequences& d, const Tolerances& tol) {
    const int K = static_cast<int>(xk.size());
    if (alpha_est.size() != xk.size()) {
        throw std::invalid_argument(
            "recover_theta: node and amplitude counts differ");
    }
    if (K < 1 || d.bandlimit() < K + 1) {
        throw std::invalid_argument(
            "recover_theta: need d_{1,m} for m = 0.." + std::to_string(K - 1) +
            ", bandlimit is " + std::to_string(d.bandlimit()));
    }
    ComplexVector rhs(static_cast<std::size_t>(K));
    for (int m = 0; m < K; ++m) rhs[static_cast<std::size_t>(m)] = d.at(1, m);
    const ComplexVector beta = solve_vandermonde(xk, rhs, tol);

    ThetaEstimate est;
    est.beta = beta;
    est.theta.resize(xk.size());
    for (std::size_t k = 0; k < xk.size(); ++k) {
        if (std::abs(alpha_est[k]) <= tol.amplitude_floor) {
            throw SmallAmplitudeError(
                "recover_theta: amplitude " + std::to_string(k) +
                " has modulus " + std::to_string(std::abs(alpha_est[k])) +
                ", at or below the floor " +
                std::to_string(tol.amplitude_floor));
        }
        // The ratio is alpha_k cos(theta_k) / alpha_k, real in exact
        // arithmetic; the imaginary residue is rounding noise and reported,
        // not used.
        const std::complex<double> ratio = beta[k] / alpha_est[k];
        est.max_imag_residue =
            std::max(est.max_imag_residue, std::abs(ratio.imag()));
        double c = ratio.real();
        if (c < -1.0 || c > 1.0) {
            c = std::clamp(c, -1.0, 1.0);
            ++est.arccos_clamped;
        }
        est.theta[k] = std::acos(c);
    }
    return est;
}

RecoveryResult recover(const ShCoefficients& flm, int K,
                       const LegendrePolyTable& table, const Tolerances& tol) {
    const DpmSequences d = run_stage(
        "dpm-extraction", [&] { return extract_dpm(flm, K, table); });
    const ComplexMatrix Z = run_stage(
        "annihilating-matrix", [&] { return build_annihilating_matrix(d, K); });
    const XkEstimate nodes =
        run_stage("node-estimation", [&] { return estimate_xk(Z, K, tol); });
    const std::vector<double> phi =
        run_stage("longitude", [&] { return recover_phi(nodes.xk); });
    const ComplexVector alpha = run_stage(
        "amplitude", [&] { return recover_alpha(nodes.xk, d, tol); });
    const ThetaEstimate theta = run_stage("colatitude", [&] {
        return recover_theta(nodes.xk, alpha, d, tol);
    });

    RecoveryResult result;
    result.diracs_est.resize(nodes.xk.size());
    for (std::size_t k = 0; k < nodes.xk.size(); ++k) {
        result.diracs_est[k] = {theta.theta[k], phi[k], alpha[k]};
    }

    ComplexVector rhs0(static_cast<std::size_t>(K));
    ComplexVector rhs1(static_cast<std::size_t>(K));
    for (int m = 0; m < K; ++m) {
        rhs0[static_cast<std::size_t>(m)] = d.at(0, m);
        rhs1[static_cast<std::size_t>(m)] = d.at(1, m);
    }

    result.diagnostics.null_gap = nodes.null_gap;
    result.diagnostics.annihilation_residual = nodes.annihilation_residual;
    result.diagnostics.vand_res_alpha =
        power_system_residual(nodes.xk, alpha, rhs0);
    result.diagnostics.vand_res_theta =
        power_system_residual(nodes.xk, theta.beta, rhs1);
    result.diagnostics.arccos_clamped = theta.arccos_clamped;
    result.diagnostics.max_imag_residue = theta.max_imag_residue;
    return result;
}

RecoveryResult recover(const ShCoefficients& flm, int K,
                       const Tolerances& tol) {
    return recover(flm, K, LegendrePolyTable(flm.bandlimit()), tol);
}

}  // namespace sphfri
