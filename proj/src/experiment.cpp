#include "sphfri/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sphfri/errors.hpp"
#include "sphfri/rng.hpp"

namespace sphfri {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Shortest-augmenting-path assignment (Hungarian method with potentials),
// O(n^3). cost is row-major n x n; returns for each row the assigned column.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, int n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur =
                    cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] -
                    u[static_cast<std::size_t>(i0)] -
                    v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(
                        p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j) {
        if (p[static_cast<std::size_t>(j)] > 0) {
            row_to_col[static_cast<std::size_t>(
                p[static_cast<std::size_t>(j)] - 1)] = j - 1;
        }
    }
    return row_to_col;
}

struct TrialOutcome {
    bool ok = false;
    ErrorTriple errors;
};

TrialOutcome run_trial(int K, int L, std::uint64_t trial_seed,
                       const LegendrePolyTable& table, const Tolerances& tol) {
    TrialOutcome outcome;
    try {
        InstanceGenConfig gen;
        gen.K = K;
        gen.rng_seed = trial_seed;
        const DiracEnsemble truth = generate_instance(gen);
        const ShCoefficients flm = forward_sh_coefficients(truth, L);
        const RecoveryResult rec = recover(flm, K, table, tol);
        const std::vector<int> perm = match_diracs(truth, rec.diracs_est);
        outcome.errors = compute_errors(truth, rec.diracs_est, perm);
        outcome.ok = true;
    } catch (const Error&) {
        outcome.ok = false;
    }
    return outcome;
}

}  // namespace

std::vector<int> match_diracs(const DiracEnsemble& truth,
                              const DiracEnsemble& est) {
    if (truth.size() != est.size()) {
        throw CountMismatchError("match_diracs: truth has " +
                                 std::to_string(truth.size()) +
                                 " Diracs, estimate has " +
                                 std::to_string(est.size()));
    }
    const int n = static_cast<int>(truth.size());
    if (n == 0) return {};
    std::vector<double> cost(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cost[static_cast<std::size_t>(i) * n + j] = great_circle_distance(
                {truth[static_cast<std::size_t>(i)].theta,
                 truth[static_cast<std::size_t>(i)].phi},
                {est[static_cast<std::size_t>(j)].theta,
                 est[static_cast<std::size_t>(j)].phi});
        }
    }
    return min_cost_assignment(cost, n);
}

ErrorTriple compute_errors(const DiracEnsemble& truth, const DiracEnsemble& est,
                           const std::vector<int>& perm) {
    if (perm.size() != truth.size() || truth.size() != est.size()) {
        throw std::invalid_argument(
            "compute_errors: permutation and ensembles must agree in size");
    }
    ErrorTriple e;
    const std::size_t K = truth.size();
    for (std::size_t i = 0; i < K; ++i) {
        const Dirac& t = truth[i];
        const Dirac& r = est[static_cast<std::size_t>(perm[i])];
        const double dtheta = r.theta - t.theta;
        double dphi = std::fmod(std::abs(r.phi - t.phi), kTwoPi);
        dphi = std::min(dphi, kTwoPi - dphi);
        e.e_theta += dtheta * dtheta;
        e.e_phi += dphi * dphi;
        e.e_alpha += std::norm(r.alpha - t.alpha);
    }
    e.e_theta /= static_cast<double>(K);
    e.e_phi /= static_cast<double>(K);
    e.e_alpha /= static_cast<double>(K);
    return e;
}

std::uint64_t derive_trial_seed(std::uint64_t seed, int K, int trial) {
    const std::uint64_t per_k =
        splitmix64(seed ^ (0x9E3779B97F4A7C15ULL *
                           static_cast<std::uint64_t>(K + 1)));
    return splitmix64(per_k ^ static_cast<std::uint64_t>(trial));
}

double pairwise_sum(const std::vector<double>& xs) {
    // Fixed reduction tree, so the total never depends on accumulation order
    // elsewhere in the program.
    struct Reduce {
        static double run(const double* data, std::size_t n) {
            if (n == 0) return 0.0;
            if (n <= 8) {
                double s = data[0];
                for (std::size_t i = 1; i < n; ++i) s += data[i];
                return s;
            }
            const std::size_t half = n / 2;
            return run(data, half) + run(data + half, n - half);
        }
    };
    return Reduce::run(xs.data(), xs.size());
}

std::vector<ErrorRecord> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) {
        throw std::invalid_argument("run_experiment: trials must be >= 1");
    }
    if (cfg.K_values.empty()) {
        throw std::invalid_argument("run_experiment: no K values");
    }
    for (int K : cfg.K_values) {
        if (K < 1) {
            throw std::invalid_argument("run_experiment: K must be >= 1");
        }
    }
    if (!cfg.explicit_L.empty() && cfg.explicit_L.size() != 1 &&
        cfg.explicit_L.size() != cfg.K_values.size()) {
        throw std::invalid_argument(
            "run_experiment: explicit_L must be empty, one value, or one per "
            "K");
    }
    if (cfg.workers < 0) {
        throw std::invalid_argument("run_experiment: workers must be >= 0");
    }

    std::vector<ErrorRecord> records;
    records.reserve(cfg.K_values.size());
    for (std::size_t ik = 0; ik < cfg.K_values.size(); ++ik) {
        const int K = cfg.K_values[ik];
        int L;
        if (cfg.explicit_L.empty()) {
            L = required_bandlimit(K).L_required;
        } else if (cfg.explicit_L.size() == 1) {
            L = cfg.explicit_L[0];
        } else {
            L = cfg.explicit_L[ik];
        }
        if (L < 1) {
            throw std::invalid_argument("run_experiment: L must be >= 1");
        }

        const LegendrePolyTable table(L);
        std::vector<TrialOutcome> outcomes(
            static_cast<std::size_t>(cfg.trials));

        int workers = cfg.workers;
        if (workers == 0) {
            workers = static_cast<int>(std::thread::hardware_concurrency());
            if (workers < 1) workers = 1;
        }
        workers = std::min(workers, cfg.trials);

        if (workers == 1) {
            for (int t = 0; t < cfg.trials; ++t) {
                outcomes[static_cast<std::size_t>(t)] =
                    run_trial(K, L, derive_trial_seed(cfg.seed, K, t), table,
                              cfg.tolerances);
            }
        } else {
            std::atomic<int> next{0};
            auto worker = [&] {
                for (;;) {
                    const int t = next.fetch_add(1);
                    if (t >= cfg.trials) break;
                    outcomes[static_cast<std::size_t>(t)] =
                        run_trial(K, L, derive_trial_seed(cfg.seed, K, t),
                                  table, cfg.tolerances);
                }
            };
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        // Aggregate in trial order; with the fixed reduction tree the means
        // are identical for every worker count.
        std::vector<double> et, ep, ea;
        et.reserve(outcomes.size());
        ep.reserve(outcomes.size());
        ea.reserve(outcomes.size());
        for (const TrialOutcome& o : outcomes) {
            if (!o.ok) continue;
            et.push_back(o.errors.e_theta);
            ep.push_back(o.errors.e_phi);
            ea.push_back(o.errors.e_alpha);
        }

        ErrorRecord rec;
        rec.K = K;
        rec.L = L;
        rec.trials_succeeded = static_cast<int>(et.size());
        const double count = static_cast<double>(et.size());
        rec.e_theta = pairwise_sum(et) / count;
        rec.e_phi = pairwise_sum(ep) / count;
        rec.e_alpha = pairwise_sum(ea) / count;
        records.push_back(rec);
    }

    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("run_experiment: cannot open '" +
                                     cfg.output_path + "' for writing");
        }
        out << error_records_to_csv(records);
        if (!out) {
            throw std::runtime_error("run_experiment: write to '" +
                                     cfg.output_path + "' failed");
        }
    }
    return records;
}

std::string error_records_to_csv(const std::vector<ErrorRecord>& records) {
    std::string csv = "K,L,E_theta,E_phi,E_alpha,trials_succeeded\n";
    char line[256];
    for (const ErrorRecord& r : records) {
        std::snprintf(line, sizeof(line), "%d,%d,%.16e,%.16e,%.16e,%d\n", r.K,
                      r.L, r.e_theta, r.e_phi, r.e_alpha, r.trials_succeeded);
        csv += line;
    }
    return csv;
}

}  // namespace sphfri
