#pragma once

// Independent oracles for the test suite. Everything here is computed by a
// different route than the library uses, so agreement between the two is
// evidence of correctness rather than a tautology.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace testsup {

inline constexpr double kPi = 3.14159265358979323846;

// Binomial coefficient, exact in double for the small arguments used here.
inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * double(n - k + j) / double(j);
    return r;
}

// Associated Legendre P_l^m (m >= 0) by term-by-term differentiation of the
// Rodrigues product (nu^2 - 1)^l. All intermediate integers stay below 2^53
// for l <= 10, so every term is exact; only the final sum rounds.
//
//   P_l^m(nu) = (-1)^m / (2^l l!) (1-nu^2)^{m/2} d^{l+m}/dnu^{l+m} (nu^2-1)^l
inline double rodrigues_assoc_legendre(int l, int m, double nu) {
    if (l < 0 || m < 0 || m > l || l > 10)
        throw std::invalid_argument("rodrigues_assoc_legendre: out of range");
    double sum = 0.0;
    for (int i = 0; i <= l; ++i) {
        int e = 2 * i - l - m;          // exponent after l+m derivatives
        if (e < 0) continue;
        double term = binom(l, i);
        for (int j = e + 1; j <= 2 * i; ++j) term *= double(j);   // (2i)!/e!
        if ((l - i) % 2 != 0) term = -term;
        sum += term * std::pow(nu, double(e));
    }
    double scale = 1.0;
    for (int j = 1; j <= l; ++j) scale *= 2.0 * double(j);        // 2^l l!
    double r = sum / scale * std::pow(std::sqrt((1.0 - nu) * (1.0 + nu)), double(m));
    return (m % 2 != 0) ? -r : r;
}

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
// Exact for polynomial integrands of degree <= 2n-1.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (double(i) + 0.75) / (double(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - double(j) * p2) / double(j + 1);
            }
            pp = double(n) * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

// Compensated Horner evaluation (error-free transformations via fma).
// Accurate to ~1 ulp even when plain double evaluation loses ten digits to
// cancellation, which is exactly the regime of high-degree monomial tables.
// Coefficients ascending: c[0] + c[1] x + ...
inline double compensated_horner(const std::vector<double>& c, double x) {
    if (c.empty()) return 0.0;
    double hi = c.back();
    double lo = 0.0;
    for (int i = int(c.size()) - 2; i >= 0; --i) {
        double p = hi * x;
        double pe = std::fma(hi, x, -p);        // exact product error
        double s = p + c[size_t(i)];
        double bb = s - p;
        double se = (p - (s - bb)) + (c[size_t(i)] - bb);  // exact sum error
        lo = lo * x + (pe + se);
        hi = s;
    }
    return hi + lo;
}

// Monic expansion from roots: returns v with v[0] = 1 and
// v[0] z^K + v[1] z^{K-1} + ... + v[K] = prod_k (z - r_k).
inline std::vector<std::complex<double>>
poly_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> v{1.0};
    for (const auto& r : roots) {
        v.push_back(0.0);
        for (size_t j = v.size() - 1; j >= 1; --j) v[j] -= r * v[j - 1];
    }
    return v;
}

// Exhaustive minimum-cost assignment over all permutations (n <= 8).
// Ties keep the lexicographically first permutation, because
// next_permutation enumerates in lexicographic order and only a strictly
// smaller cost replaces the incumbent.
inline std::vector<int> brute_force_match(const std::vector<std::vector<double>>& cost) {
    size_t n = cost.size();
    if (n > 8) throw std::invalid_argument("brute_force_match: too large");
    std::vector<int> perm(n), best(n);
    std::iota(perm.begin(), perm.end(), 0);
    best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) total += cost[i][size_t(perm[i])];
        if (total < best_cost) {
            best_cost = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Greatest distance between paired-off elements of two same-size multisets
// of complex numbers: each a is matched to its nearest unused b. Adequate
// when true separations dwarf the perturbations under test.
inline double multiset_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const auto& av : a) {
        double best = std::numeric_limits<double>::infinity();
        size_t best_j = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(av - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace testsup
