#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sphfri/sh_core.hpp"

namespace sphfri {

struct Dirac {
    double theta = 0.0;
    double phi = 0.0;
    std::complex<double> alpha;
};

// Ground-truth signal: K weighted point masses. Valid ensembles keep every
// theta_k strictly inside (0, pi) and the nodes x_k = sin(theta_k) e^{-i phi_k}
// pairwise distinct; mirrored colatitudes at equal longitude share a node and
// make the annihilating filter non-unique.
using DiracEnsemble = std::vector<Dirac>;

// The node x_k = sin(theta_k) e^{-i phi_k} encoding a Dirac's location.
std::complex<double> dirac_node(const Dirac& d);

// arccos of the dot product of the two unit vectors.
double great_circle_distance(const SphDirection& a, const SphDirection& b);

enum class ThetaDistribution {
    UniformSphere,      // cos(theta) uniform in (-1, 1)
    UniformColatitude,  // theta uniform in (0, pi)
};

struct InstanceGenConfig {
    int K = 1;
    // Minimum pairwise great-circle distance; 0 selects the default pi/(3K).
    double min_separation = 0.0;
    // Bounds for both the real and imaginary part of each amplitude.
    double amplitude_lo = -1.0;
    double amplitude_hi = 1.0;
    // Candidates with |alpha| below this are redrawn; 0 disables the floor.
    double amplitude_floor = 0.0;
    std::uint64_t rng_seed = 0;
    // Total candidate-draw budget for rejection sampling.
    int max_attempts = 100000;
    ThetaDistribution theta_distribution = ThetaDistribution::UniformSphere;
};

// Rejection-samples K Diracs: locations per cfg.theta_distribution, phi
// uniform, amplitude parts uniform in [amplitude_lo, amplitude_hi]. Enforces
// the pairwise great-circle separation and additionally keeps the nodes x_k
// at least 1e-6 apart, since distinct locations alone do not guarantee
// distinct nodes. Deterministic per seed.
DiracEnsemble generate_instance(const InstanceGenConfig& cfg);

// Exact coefficients of the ensemble by the sifting property:
// f_{l,m} = sum_k alpha_k conj(Y_l^m(theta_k, phi_k)) for all l < L.
ShCoefficients forward_sh_coefficients(const DiracEnsemble& sig, int L);

// The bandlimited expansion sum_{l<L} sum_m f_{l,m} Y_l^m(dir); a diagnostic
// view of the ensemble for rendering, not part of recovery.
std::complex<double> eval_bandlimited(const DiracEnsemble& sig, int L,
                                      const SphDirection& dir);
std::complex<double> eval_bandlimited(const ShCoefficients& flm,
                                      const SphDirection& dir);

}  // namespace sphfri
