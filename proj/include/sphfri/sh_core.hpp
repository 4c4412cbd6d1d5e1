#pragma once

#include <complex>
#include <vector>

namespace sphfri {

// Point on the unit sphere: colatitude theta in [0,pi], longitude phi in
// [0,2pi).
struct SphDirection {
    double theta = 0.0;
    double phi = 0.0;
};

// Wraps an angle into [0, 2pi).
double normalize_phi(double phi);

// Associated Legendre function P_l^m(nu) with the Condon-Shortley phase,
// computed by the stable recurrence along fixed order m (never by direct
// differentiation). Accepts |m| <= l; negative orders use the parity identity
// P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
double eval_associated_legendre(int l, int m, double nu);

// Orthonormal spherical harmonic Y_l^m(theta, phi), Condon-Shortley phase
// included; factorial ratios go through lgamma so no intermediate overflows.
std::complex<double> eval_ylm(int l, int m, const SphDirection& dir);

// Every Y_l^m(dir) for l < L, packed at index l*l + l + m. One O(L^2) sweep
// sharing the Legendre recurrences, equivalent to L^2 eval_ylm calls.
std::vector<std::complex<double>> eval_ylm_all(int L, const SphDirection& dir);

// Monomial coefficients c^p_{l,m} of the colatitude polynomials
//   Y_l^m(theta, 0) = sum_{p=0}^{l-|m|} c^p_{l,m} (cos theta)^p (sin theta)^|m|.
// Rows are stored for m >= 0 only; the coefficients for -m differ by the
// factor (-1)^m. Every leading coefficient c^{l-m}_{l,m} is nonzero, which is
// what makes the per-order extraction systems triangular and invertible.
class LegendrePolyTable {
public:
    // Monomial coefficient mass grows roughly geometrically with the degree
    // (the m = 0 row at l = 31 already sums to ~1.5e11), so merely rounding
    // the stored values to double perturbs evaluations near |cos theta| = 1
    // by the mass times one ulp. Up to this bandlimit that floor stays far
    // below what the triangular extraction systems notice; past it,
    // construction still succeeds but callers get a warning flag (and a
    // stderr note) instead of an error.
    static constexpr int precision_cap = 32;

    explicit LegendrePolyTable(int L);

    int bandlimit() const { return L_; }
    bool precision_degraded() const { return degraded_; }

    // c^p_{l,m} for |m| <= l < L; zero for p > l - |m|.
    double coeff(int l, int m, int p) const;

    // Coefficients of (l, m) with m >= 0, ascending in p, length l - m + 1.
    const std::vector<double>& coeffs(int l, int m) const;

private:
    int L_ = 0;
    bool degraded_ = false;
    std::vector<std::vector<double>> rows_;  // index l*(l+1)/2 + m
};

LegendrePolyTable build_legendre_poly_table(int L);

// Complete coefficient triangle f_{l,m} for 0 <= l < L, |m| <= l, packed at
// index l*l + l + m (L^2 entries).
class ShCoefficients {
public:
    ShCoefficients() = default;
    explicit ShCoefficients(int L);

    int bandlimit() const { return L_; }

    std::complex<double>& at(int l, int m);
    const std::complex<double>& at(int l, int m) const;

    const std::vector<std::complex<double>>& values() const { return values_; }

private:
    int L_ = 0;
    std::vector<std::complex<double>> values_;
};

}  // namespace sphfri
