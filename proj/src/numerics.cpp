#include "sphfri/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sphfri/errors.hpp"

namespace sphfri {

namespace {

// Parlett-Reinsch balancing ("Balancing a Matrix for Calculation of
// Eigenvalues and Eigenvectors", Numer. Math. 13, 1969): scale row/column
// pairs by powers of two until the off-diagonal 1-norms stop improving.
// Powers of two keep the scaling exact in floating point.
void balance_companion(ComplexMatrix& m) {
    const int n = static_cast<int>(m.rows());
    const double gamma = 0.9;  // required improvement factor; 1 can cycle
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            double row_norm = 0.0;
            double col_norm = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                row_norm += std::abs(m(i, j));
                col_norm += std::abs(m(j, i));
            }
            if (row_norm == 0.0 || col_norm == 0.0) continue;
            int exponent = 0;
            std::frexp(row_norm / col_norm, &exponent);
            exponent /= 2;
            if (exponent == 0) continue;
            const double scale = std::ldexp(1.0, exponent);
            if (row_norm / scale + col_norm * scale <
                gamma * (row_norm + col_norm)) {
                m.row(i) /= scale;
                m.col(i) *= scale;
                changed = true;
            }
        }
    }
}

// Value and derivative of sum_n v_n z^{K-n} at z, by Horner.
void horner_with_derivative(const ComplexVector& v, std::complex<double> z,
                            std::complex<double>& value,
                            std::complex<double>& derivative) {
    value = v[0];
    derivative = 0.0;
    for (std::size_t n = 1; n < v.size(); ++n) {
        derivative = derivative * z + value;
        value = value * z + v[n];
    }
}

}  // namespace

ComplexVector solve_lower_triangular(const ComplexMatrix& A,
                                     const ComplexVector& b) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) {
        throw std::invalid_argument("solve_lower_triangular: matrix is " +
                                    std::to_string(A.rows()) + "x" +
                                    std::to_string(A.cols()) + ", not square");
    }
    if (static_cast<int>(b.size()) != n) {
        throw std::invalid_argument(
            "solve_lower_triangular: rhs length does not match");
    }
    ComplexVector x(b.size());
    for (int i = 0; i < n; ++i) {
        if (A(i, i) == std::complex<double>(0.0, 0.0)) {
            throw SingularDiagonalError(
                "solve_lower_triangular: zero diagonal at row " +
                std::to_string(i));
        }
        std::complex<double> acc = b[i];
        for (int j = 0; j < i; ++j) acc -= A(i, j) * x[j];
        x[i] = acc / A(i, i);
    }
    return x;
}

ComplexVector solve_vandermonde(const ComplexVector& nodes,
                                const ComplexVector& rhs,
                                const Tolerances& tol, VandermondeInfo* info) {
    const std::size_t n = nodes.size();
    if (n == 0) {
        throw std::invalid_argument("solve_vandermonde: no nodes");
    }
    if (rhs.size() != n) {
        throw std::invalid_argument(
            "solve_vandermonde: rhs length " + std::to_string(rhs.size()) +
            " does not match node count " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (nodes[i] == nodes[j]) {
                throw DuplicateNodeError("solve_vandermonde: nodes " +
                                         std::to_string(i) + " and " +
                                         std::to_string(j) + " coincide");
            }
        }
    }
    if (info != nullptr) {
        double bound = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double prod = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                prod *= (1.0 + std::abs(nodes[k])) /
                        std::abs(nodes[j] - nodes[k]);
            }
            bound = std::max(bound, prod);
        }
        info->cond_bound = bound;
        info->ill_conditioned = bound > tol.vandermonde_cond_warn;
    }

    // Bjorck-Pereyra progressive elimination for the primal system (powers of
    // the nodes run down the rows): stage one folds the Newton basis into the
    // rhs, stage two back-substitutes the divided differences.
    ComplexVector a = rhs;
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(n) - 1;
    for (std::ptrdiff_t k = 0; k < last; ++k) {
        for (std::ptrdiff_t j = last; j > k; --j) {
            a[j] -= nodes[k] * a[j - 1];
        }
    }
    for (std::ptrdiff_t k = last - 1; k >= 0; --k) {
        for (std::ptrdiff_t j = k + 1; j <= last; ++j) {
            a[j] /= (nodes[j] - nodes[j - k - 1]);
        }
        for (std::ptrdiff_t j = k; j < last; ++j) {
            a[j] -= a[j + 1];
        }
    }
    return a;
}

SingularVectorResult smallest_right_singular_vector(const ComplexMatrix& M,
                                                    const Tolerances& tol) {
    const int rows = static_cast<int>(M.rows());
    const int cols = static_cast<int>(M.cols());
    if (cols < 2 || rows < cols - 1) {
        throw std::invalid_argument(
            "smallest_right_singular_vector: need cols >= 2 and rows >= "
            "cols - 1, got " +
            std::to_string(rows) + "x" + std::to_string(cols));
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();  // descending
    const double sigma_max = sv(0);
    // With one row short of square, the kernel contributes a singular value
    // the decomposition cannot list; it is an exact zero and sv's last entry
    // becomes the second-smallest.
    const double sigma_min = (rows >= cols) ? sv(cols - 1) : 0.0;
    const double sigma_second = sv(cols - 2);

    if (rows >= cols) {
        // The null space is one-dimensional only when the smallest singular
        // value sits far below the next one. Comparing their ratio (rather
        // than their difference against sigma_max) keeps legitimately
        // ill-conditioned inputs alive: a genuine sigma_{min+1} of 1e-6 over
        // a rounding-noise sigma_min of 1e-15 is a healthy isolated kernel.
        if (sigma_second == 0.0 || sigma_min > tol.null_gap * sigma_second) {
            throw AmbiguousNullSpaceError(
                "smallest_right_singular_vector: two smallest singular "
                "values " +
                std::to_string(sigma_min) + " and " +
                std::to_string(sigma_second) +
                " coincide within tolerance, null space is not "
                "one-dimensional");
        }
    } else {
        // Here the kernel direction is exact by count, so ambiguity means
        // the computed smallest singular value has itself collapsed to the
        // decomposition's noise floor: a second null direction.
        const double noise = 256.0 * std::numeric_limits<double>::epsilon() *
                             std::max(rows, cols) * sigma_max;
        if (sigma_second <= noise) {
            throw AmbiguousNullSpaceError(
                "smallest_right_singular_vector: smallest computed singular "
                "value " +
                std::to_string(sigma_second) +
                " is at rounding noise next to the exact kernel, null space "
                "is not one-dimensional");
        }
    }

    SingularVectorResult result;
    result.sigma_min = sigma_min;
    result.sigma_second = sigma_second;
    result.gap = sigma_min / sigma_second;
    const auto v = svd.matrixV().col(cols - 1);
    result.vector.assign(v.data(), v.data() + cols);
    return result;
}

ComplexVector polynomial_roots(const PolynomialCoeffs& p, const Tolerances& tol,
                               bool newton_polish) {
    const ComplexVector& v = p.coeffs;
    if (v.size() < 2) {
        throw std::invalid_argument(
            "polynomial_roots: need at least two coefficients");
    }
    const int K = static_cast<int>(v.size()) - 1;
    double max_mag = 0.0;
    for (const auto& c : v) max_mag = std::max(max_mag, std::abs(c));
    if (std::abs(v[0]) <= tol.degenerate_coeff * max_mag) {
        throw DegenerateCoefficientError(
            "polynomial_roots: leading coefficient " +
            std::to_string(std::abs(v[0])) +
            " vanishes relative to the largest coefficient");
    }
    if (std::abs(v[K]) <= tol.degenerate_coeff * max_mag) {
        throw DegenerateCoefficientError(
            "polynomial_roots: trailing coefficient " +
            std::to_string(std::abs(v[K])) +
            " vanishes relative to the largest coefficient (root at zero)");
    }

    // Companion matrix of the monic z^K + (v_1/v_0) z^{K-1} + ... + v_K/v_0.
    ComplexMatrix companion = ComplexMatrix::Zero(K, K);
    for (int i = 1; i < K; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < K; ++i) companion(i, K - 1) = -v[K - i] / v[0];
    balance_companion(companion);

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw Error("polynomial_roots: eigenvalue iteration failed");
    }
    ComplexVector roots(solver.eigenvalues().data(),
                        solver.eigenvalues().data() + K);

    if (newton_polish) {
        for (auto& z : roots) {
            std::complex<double> value, derivative;
            horner_with_derivative(v, z, value, derivative);
            if (derivative != std::complex<double>(0.0, 0.0)) {
                z -= value / derivative;
            }
        }
    }
    return roots;
}

}  // namespace sphfri
