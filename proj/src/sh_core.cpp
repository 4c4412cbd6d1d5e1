#include "sphfri/sh_core.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sphfri {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sqrt((2l+1)/(4pi) * (l-m)!/(l+m)!) with the factorial ratio in the log
// domain; safe for any degree a double can hold.
double norm_lm(int l, int m) {
    return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi)) *
           std::exp(0.5 * (std::lgamma(static_cast<double>(l - m + 1)) -
                           std::lgamma(static_cast<double>(l + m + 1))));
}

std::complex<double> unit_phase(double angle) {
    return {std::cos(angle), std::sin(angle)};
}

// norm_lm in extended precision, for the table constructor: there the scale
// multiplies coefficients that are later summed with heavy cancellation, so
// every spare bit counts.
long double norm_lm_ext(int l, int m) {
    constexpr long double pi = 3.141592653589793238462643383279502884L;
    return std::sqrt((2.0L * l + 1.0L) / (4.0L * pi)) *
           std::exp(0.5L * (std::lgamma(static_cast<long double>(l - m + 1)) -
                            std::lgamma(static_cast<long double>(l + m + 1))));
}

// P_m^m(nu) = (-1)^m (2m-1)!! (1-nu^2)^{m/2}, then two-term upward recurrence
// in the degree: (l-m) P_l^m = nu (2l-1) P_{l-1}^m - (l+m-1) P_{l-2}^m.
double assoc_legendre_nonneg(int l, int m, double nu) {
    const double somx2 = std::sqrt((1.0 - nu) * (1.0 + nu));
    double pmm = 1.0;
    double fact = 1.0;
    for (int i = 0; i < m; ++i) {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if (l == m) return pmm;
    double pmmp1 = nu * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = (nu * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) /
              (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

}  // namespace

double normalize_phi(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double eval_associated_legendre(int l, int m, double nu) {
    if (l < 0 || std::abs(m) > l) {
        throw std::invalid_argument(
            "eval_associated_legendre: invalid degree/order l=" +
            std::to_string(l) + " m=" + std::to_string(m));
    }
    if (!(std::abs(nu) <= 1.0)) {
        throw std::invalid_argument(
            "eval_associated_legendre: argument outside [-1,1]: " +
            std::to_string(nu));
    }
    if (m >= 0) return assoc_legendre_nonneg(l, m, nu);
    const int mu = -m;
    const double ratio = std::exp(std::lgamma(static_cast<double>(l - mu + 1)) -
                                  std::lgamma(static_cast<double>(l + mu + 1)));
    const double sign = (mu % 2 == 0) ? 1.0 : -1.0;
    return sign * ratio * assoc_legendre_nonneg(l, mu, nu);
}

std::complex<double> eval_ylm(int l, int m, const SphDirection& dir) {
    if (l < 0 || std::abs(m) > l) {
        throw std::invalid_argument("eval_ylm: invalid degree/order l=" +
                                    std::to_string(l) +
                                    " m=" + std::to_string(m));
    }
    const int am = std::abs(m);
    const double val =
        norm_lm(l, am) * assoc_legendre_nonneg(l, am, std::cos(dir.theta));
    std::complex<double> y = val * unit_phase(am * dir.phi);
    if (m < 0) {
        y = std::conj(y);
        if (am % 2 != 0) y = -y;
    }
    return y;
}

std::vector<std::complex<double>> eval_ylm_all(int L, const SphDirection& dir) {
    if (L < 1) {
        throw std::invalid_argument("eval_ylm_all: bandlimit must be >= 1");
    }
    const double nu = std::cos(dir.theta);
    const double somx2 = std::sqrt((1.0 - nu) * (1.0 + nu));
    std::vector<std::complex<double>> out(static_cast<std::size_t>(L) * L);

    // March the Legendre recurrence once per order; each step fills the whole
    // degree line for that order.
    double pmm = 1.0;
    double fact = 1.0;
    for (int m = 0; m < L; ++m) {
        const std::complex<double> phase = unit_phase(m * dir.phi);
        double plm2 = pmm;  // P_m^m
        double plm1 = 0.0;
        for (int l = m; l < L; ++l) {
            double p;
            if (l == m) {
                p = plm2;
            } else if (l == m + 1) {
                p = nu * (2.0 * m + 1.0) * plm2;
                plm1 = p;
            } else {
                p = (nu * (2.0 * l - 1.0) * plm1 - (l + m - 1.0) * plm2) /
                    (l - m);
                plm2 = plm1;
                plm1 = p;
            }
            std::complex<double> y = norm_lm(l, m) * p * phase;
            out[static_cast<std::size_t>(l) * l + l + m] = y;
            if (m > 0) {
                std::complex<double> yneg = std::conj(y);
                if (m % 2 != 0) yneg = -yneg;
                out[static_cast<std::size_t>(l) * l + l - m] = yneg;
            }
        }
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    return out;
}

LegendrePolyTable::LegendrePolyTable(int L) : L_(L) {
    if (L < 1) {
        throw std::invalid_argument(
            "LegendrePolyTable: bandlimit must be >= 1");
    }
    degraded_ = L > precision_cap;
    if (degraded_) {
        std::cerr << "LegendrePolyTable: bandlimit " << L
                  << " exceeds the double-precision cap " << precision_cap
                  << ", coefficients degrade\n";
    }

    // Monomial coefficients of the Legendre polynomials by the Bonnet
    // recurrence (l+1) P_{l+1} = (2l+1) nu P_l - l P_{l-1}, run directly on
    // coefficient vectors (ascending powers). The whole construction stays in
    // extended precision and rounds to double once, at storage: the stored
    // values enter sums whose terms reach ~1e10 while the result is O(1), so
    // per-step double rounding here would be visible in the reconstruction.
    std::vector<std::vector<long double>> legendre(static_cast<std::size_t>(L));
    legendre[0] = {1.0L};
    if (L > 1) legendre[1] = {0.0L, 1.0L};
    for (int l = 1; l + 1 < L; ++l) {
        std::vector<long double> next(static_cast<std::size_t>(l) + 2, 0.0L);
        for (int p = 0; p <= l; ++p) {
            next[static_cast<std::size_t>(p) + 1] +=
                (2.0L * l + 1.0L) * legendre[l][p];
        }
        for (int p = 0; p + 1 <= l; ++p) {
            next[p] -= static_cast<long double>(l) * legendre[l - 1][p];
        }
        for (long double& c : next) c /= (l + 1.0L);
        legendre[static_cast<std::size_t>(l) + 1] = std::move(next);
    }

    // For each order, m-fold formal differentiation gives the polynomial
    // factor of P_l^m; the (-1)^m Condon-Shortley sign and the orthonormal
    // scale fold into the stored coefficients.
    rows_.resize(static_cast<std::size_t>(L) * (L + 1) / 2);
    for (int l = 0; l < L; ++l) {
        std::vector<long double> q = legendre[l];
        for (int m = 0; m <= l; ++m) {
            if (m > 0) {
                std::vector<long double> dq(q.size() - 1);
                for (std::size_t p = 1; p < q.size(); ++p) {
                    dq[p - 1] = static_cast<long double>(p) * q[p];
                }
                q = std::move(dq);
            }
            const long double scale =
                norm_lm_ext(l, m) * ((m % 2 == 0) ? 1.0L : -1.0L);
            std::vector<double> row(q.size());
            for (std::size_t p = 0; p < q.size(); ++p) {
                row[p] = static_cast<double>(scale * q[p]);
            }
            rows_[static_cast<std::size_t>(l) * (l + 1) / 2 + m] =
                std::move(row);
        }
    }
}

double LegendrePolyTable::coeff(int l, int m, int p) const {
    const int am = std::abs(m);
    if (l < 0 || l >= L_ || am > l || p < 0) {
        throw std::invalid_argument("LegendrePolyTable::coeff: indices l=" +
                                    std::to_string(l) + " m=" +
                                    std::to_string(m) + " p=" +
                                    std::to_string(p) + " out of range");
    }
    if (p > l - am) return 0.0;
    const double c = rows_[static_cast<std::size_t>(l) * (l + 1) / 2 + am][p];
    if (m < 0 && am % 2 != 0) return -c;
    return c;
}

const std::vector<double>& LegendrePolyTable::coeffs(int l, int m) const {
    if (l < 0 || l >= L_ || m < 0 || m > l) {
        throw std::invalid_argument(
            "LegendrePolyTable::coeffs: indices l=" + std::to_string(l) +
            " m=" + std::to_string(m) + " out of range");
    }
    return rows_[static_cast<std::size_t>(l) * (l + 1) / 2 + m];
}

LegendrePolyTable build_legendre_poly_table(int L) {
    return LegendrePolyTable(L);
}

ShCoefficients::ShCoefficients(int L) : L_(L) {
    if (L < 1) {
        throw std::invalid_argument("ShCoefficients: bandlimit must be >= 1");
    }
    values_.assign(static_cast<std::size_t>(L) * L, {0.0, 0.0});
}

std::complex<double>& ShCoefficients::at(int l, int m) {
    if (l < 0 || l >= L_ || std::abs(m) > l) {
        throw std::invalid_argument("ShCoefficients::at: indices l=" +
                                    std::to_string(l) +
                                    " m=" + std::to_string(m) +
                                    " out of range for L=" +
                                    std::to_string(L_));
    }
    return values_[static_cast<std::size_t>(l) * l + l + m];
}

const std::complex<double>& ShCoefficients::at(int l, int m) const {
    return const_cast<ShCoefficients*>(this)->at(l, m);
}

}  // namespace sphfri
