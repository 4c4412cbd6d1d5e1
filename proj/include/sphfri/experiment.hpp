#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sphfri/fri_model.hpp"
#include "sphfri/numerics.hpp"
#include "sphfri/recovery.hpp"

namespace sphfri {

// Minimum-total-cost assignment of estimates to truth, cost being the
// great-circle distance between locations (amplitudes deliberately excluded
// so they cannot bias the location metrics). perm[i] is the index of the
// estimate paired with truth Dirac i.
std::vector<int> match_diracs(const DiracEnsemble& truth,
                              const DiracEnsemble& est);

struct ErrorTriple {
    double e_theta = 0.0;
    double e_phi = 0.0;
    double e_alpha = 0.0;
};

// Mean-squared parameter errors over matched pairs, (1/K) sum |est - true|^2
// per parameter; longitude differences use the shortest circular distance so
// wrap-around near 0/2pi is not misreported.
ErrorTriple compute_errors(const DiracEnsemble& truth, const DiracEnsemble& est,
                           const std::vector<int>& perm);

struct ExperimentConfig {
    std::vector<int> K_values = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    int trials = 1000;
    std::uint64_t seed = 0;
    // Empty: the bandlimit formula per K. One entry: that L for every K.
    // Otherwise one entry per K value.
    std::vector<int> explicit_L;
    // CSV destination; empty writes no file.
    std::string output_path;
    // Worker threads; 0 picks the hardware concurrency.
    int workers = 0;
    Tolerances tolerances;
};

struct ErrorRecord {
    int K = 0;
    int L = 0;
    double e_theta = 0.0;
    double e_phi = 0.0;
    double e_alpha = 0.0;
    int trials_succeeded = 0;
};

// Seed for one trial of one sweep point, derived so that trial streams are
// independent of scheduling and of each other.
std::uint64_t derive_trial_seed(std::uint64_t seed, int K, int trial);

// Sums in a fixed pairwise order, so the result is independent of how the
// values were produced across workers.
double pairwise_sum(const std::vector<double>& xs);

// For each K: `trials` seeded instances (separation pi/(3K), amplitude parts
// uniform in [-1,1]), forward coefficients at the planned bandlimit, full
// recovery, matching, error accumulation. Failed trials are excluded from the
// means and counted. Trials run on cfg.workers threads; per-trial seeds and
// ordered aggregation make the output identical for every worker count.
// Writes the CSV to cfg.output_path when set.
std::vector<ErrorRecord> run_experiment(const ExperimentConfig& cfg);

// CSV with header K,L,E_theta,E_phi,E_alpha,trials_succeeded; one row per
// sweep point, errors in scientific notation with 17 significant digits.
std::string error_records_to_csv(const std::vector<ErrorRecord>& records);

}  // namespace sphfri
