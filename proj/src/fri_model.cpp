#include "sphfri/fri_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sphfri/errors.hpp"
#include "sphfri/rng.hpp"

namespace sphfri {

namespace {

constexpr double kPi = std::numbers::pi;

// Distinct locations do not imply distinct nodes (mirrored colatitudes at
// equal longitude collide), so node gaps are enforced separately.
constexpr double kMinNodeSeparation = 1e-6;

std::array<double, 3> unit_vector(const SphDirection& dir) {
    const double s = std::sin(dir.theta);
    return {s * std::cos(dir.phi), s * std::sin(dir.phi),
            std::cos(dir.theta)};
}

}  // namespace

std::complex<double> dirac_node(const Dirac& d) {
    const double s = std::sin(d.theta);
    return {s * std::cos(d.phi), -s * std::sin(d.phi)};
}

double great_circle_distance(const SphDirection& a, const SphDirection& b) {
    const auto u = unit_vector(a);
    const auto v = unit_vector(b);
    const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    return std::acos(std::clamp(dot, -1.0, 1.0));
}

DiracEnsemble generate_instance(const InstanceGenConfig& cfg) {
    if (cfg.K < 1) {
        throw std::invalid_argument("generate_instance: K must be >= 1");
    }
    if (cfg.min_separation < 0.0) {
        throw std::invalid_argument(
            "generate_instance: min_separation must be >= 0");
    }
    if (!(cfg.amplitude_lo < cfg.amplitude_hi)) {
        throw std::invalid_argument(
            "generate_instance: amplitude range is empty");
    }
    if (cfg.amplitude_floor < 0.0) {
        throw std::invalid_argument(
            "generate_instance: amplitude_floor must be >= 0");
    }
    if (cfg.max_attempts < 1) {
        throw std::invalid_argument(
            "generate_instance: max_attempts must be >= 1");
    }

    const double separation =
        cfg.min_separation > 0.0 ? cfg.min_separation : kPi / (3.0 * cfg.K);
    Rng rng(cfg.rng_seed);
    DiracEnsemble sig;
    sig.reserve(static_cast<std::size_t>(cfg.K));

    int attempts = 0;
    while (static_cast<int>(sig.size()) < cfg.K) {
        if (attempts >= cfg.max_attempts) {
            throw GenerationError(
                "generate_instance: could not place " +
                std::to_string(cfg.K) + " Diracs with separation " +
                std::to_string(separation) + " within " +
                std::to_string(cfg.max_attempts) + " draws");
        }
        ++attempts;

        Dirac cand;
        if (cfg.theta_distribution == ThetaDistribution::UniformSphere) {
            cand.theta = std::acos(rng.uniform(-1.0, 1.0));
        } else {
            cand.theta = rng.uniform(0.0, kPi);
        }
        cand.phi = normalize_phi(rng.uniform(0.0, 2.0 * kPi));
        cand.alpha = {rng.uniform(cfg.amplitude_lo, cfg.amplitude_hi),
                      rng.uniform(cfg.amplitude_lo, cfg.amplitude_hi)};

        if (!(cand.theta > 0.0 && cand.theta < kPi)) continue;
        if (std::sin(cand.theta) == 0.0) continue;
        if (cfg.amplitude_floor > 0.0 &&
            std::abs(cand.alpha) < cfg.amplitude_floor) {
            continue;
        }

        bool ok = true;
        for (const Dirac& placed : sig) {
            if (great_circle_distance({cand.theta, cand.phi},
                                      {placed.theta, placed.phi}) <
                separation) {
                ok = false;
                break;
            }
            if (std::abs(dirac_node(cand) - dirac_node(placed)) <
                kMinNodeSeparation) {
                ok = false;
                break;
            }
        }
        if (ok) sig.push_back(cand);
    }
    return sig;
}

ShCoefficients forward_sh_coefficients(const DiracEnsemble& sig, int L) {
    if (L < 1) {
        throw std::invalid_argument(
            "forward_sh_coefficients: bandlimit must be >= 1");
    }
    ShCoefficients flm(L);
    for (const Dirac& d : sig) {
        const auto ys = eval_ylm_all(L, {d.theta, d.phi});
        for (int l = 0; l < L; ++l) {
            for (int m = -l; m <= l; ++m) {
                flm.at(l, m) +=
                    d.alpha *
                    std::conj(ys[static_cast<std::size_t>(l) * l + l + m]);
            }
        }
    }
    return flm;
}

std::complex<double> eval_bandlimited(const ShCoefficients& flm,
                                      const SphDirection& dir) {
    const int L = flm.bandlimit();
    if (L < 1) return {0.0, 0.0};
    const auto ys = eval_ylm_all(L, dir);
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        sum += flm.values()[i] * ys[i];
    }
    return sum;
}

std::complex<double> eval_bandlimited(const DiracEnsemble& sig, int L,
                                      const SphDirection& dir) {
    if (sig.empty()) return {0.0, 0.0};
    return eval_bandlimited(forward_sh_coefficients(sig, L), dir);
}

}  // namespace sphfri
