#include <cctype>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "sphfri/errors.hpp"
#include "sphfri/experiment.hpp"
#include "sphfri/fri_model.hpp"
#include "sphfri/json_io.hpp"
#include "sphfri/numerics.hpp"
#include "sphfri/recovery.hpp"

namespace {

using sphfri::Tolerances;

// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// Tolerance overrides come from the environment first, then from repeated
// --tolerance key=value flags, so flags win.
const std::vector<std::pair<std::string, double Tolerances::*>>
    kToleranceKeys = {
        {"residual", &Tolerances::residual},
        {"null_gap", &Tolerances::null_gap},
        {"degenerate_coeff", &Tolerances::degenerate_coeff},
        {"amplitude_floor", &Tolerances::amplitude_floor},
        {"vandermonde_cond_warn", &Tolerances::vandermonde_cond_warn},
};

double parse_double(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not a number: '" + text + "'");
    }
    if (pos != text.size()) {
        throw std::invalid_argument(what + ": trailing characters in '" +
                                    text + "'");
    }
    return value;
}

Tolerances tolerances_from_env() {
    Tolerances tol;
    for (const auto& [key, member] : kToleranceKeys) {
        std::string var = "SPHFRI_TOL_";
        for (char c : key) {
            var += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        if (const char* value = std::getenv(var.c_str())) {
            tol.*member = parse_double(value, var);
        }
    }
    return tol;
}

Tolerances apply_tolerance_flags(Tolerances tol,
                                 const std::vector<std::string>& overrides) {
    for (const std::string& item : overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(
                "--tolerance expects key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        bool known = false;
        for (const auto& [name, member] : kToleranceKeys) {
            if (name == key) {
                tol.*member = parse_double(value, "--tolerance " + key);
                known = true;
                break;
            }
        }
        if (!known) {
            std::string names;
            for (const auto& [name, member] : kToleranceKeys) {
                if (!names.empty()) names += ", ";
                names += name;
            }
            throw std::invalid_argument("--tolerance: unknown key '" + key +
                                        "' (known: " + names + ")");
        }
    }
    return tol;
}

void emit(const std::string& output_path, const std::string& text) {
    if (output_path.empty()) {
        std::cout << text;
    } else {
        sphfri::write_text_file(output_path, text);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Recovers ensembles of Dirac deltas on the sphere from bandlimited "
        "spherical-harmonic coefficients via annihilating-filter recovery"};
    app.require_subcommand(1);

    std::vector<std::string> tolerance_flags;
    app.add_option("--tolerance", tolerance_flags,
                   "override a tolerance as key=value (repeatable); also "
                   "settable via SPHFRI_TOL_* environment variables");

    // synthesize
    auto* synthesize = app.add_subcommand(
        "synthesize", "generate a random instance and write its JSON");
    int syn_K = 1;
    std::uint64_t syn_seed = 0;
    double syn_min_sep = 0.0;
    double syn_amp_lo = -1.0;
    double syn_amp_hi = 1.0;
    double syn_amp_floor = 0.0;
    std::string syn_theta_dist = "sphere";
    std::string syn_output;
    synthesize->add_option("--K", syn_K, "number of Diracs")
        ->required()
        ->check(CLI::PositiveNumber);
    synthesize->add_option("--seed", syn_seed, "generator seed");
    synthesize->add_option("--min-sep", syn_min_sep,
                           "minimum pairwise great-circle distance "
                           "(default pi/(3K))");
    synthesize->add_option("--amp-lo", syn_amp_lo,
                           "lower bound for amplitude re/im parts");
    synthesize->add_option("--amp-hi", syn_amp_hi,
                           "upper bound for amplitude re/im parts");
    synthesize->add_option("--amp-floor", syn_amp_floor,
                           "redraw amplitudes with |alpha| below this");
    synthesize
        ->add_option("--theta-dist", syn_theta_dist,
                     "colatitude distribution: sphere (uniform on the "
                     "sphere) or colatitude (uniform in theta)")
        ->check(CLI::IsMember({"sphere", "colatitude"}));
    synthesize->add_option("--output", syn_output,
                           "output path (default stdout)");

    // shc
    auto* shc = app.add_subcommand(
        "shc", "compute the coefficients of an instance JSON");
    std::string shc_input;
    std::string shc_output;
    int shc_L = 0;
    shc->add_option("--input", shc_input, "instance JSON path")->required();
    shc->add_option("--L", shc_L,
                    "bandlimit (default: the required bandlimit for the "
                    "instance's K)")
        ->check(CLI::PositiveNumber);
    shc->add_option("--output", shc_output, "output path (default stdout)");

    // recover
    auto* rec = app.add_subcommand(
        "recover", "recover Dirac parameters from a coefficients JSON");
    std::string rec_input;
    std::string rec_output;
    int rec_K = 0;
    rec->add_option("--input", rec_input, "coefficients JSON path")
        ->required();
    rec->add_option("--K", rec_K, "number of Diracs to recover")
        ->required()
        ->check(CLI::PositiveNumber);
    rec->add_option("--output", rec_output, "output path (default stdout)");

    // bandlimit
    auto* band = app.add_subcommand(
        "bandlimit",
        "print the required bandlimit for K and the comparison bounds");
    int band_K = 0;
    band->add_option("--K", band_K, "number of Diracs")
        ->required()
        ->check(CLI::PositiveNumber);

    // experiment
    auto* exp = app.add_subcommand(
        "experiment",
        "run the seeded error-vs-K sweep and write the CSV");
    std::vector<int> exp_K;
    std::vector<int> exp_L;
    int exp_trials = 1000;
    std::uint64_t exp_seed = 0;
    int exp_jobs = 0;
    std::string exp_output;
    exp->add_option("--K", exp_K,
                    "K values to sweep (default 2,4,...,20; repeatable)");
    exp->add_option("--L", exp_L,
                    "explicit bandlimit(s): one value for all K or one per K "
                    "(default: the required bandlimit per K)");
    exp->add_option("--trials", exp_trials, "trials per K")
        ->check(CLI::PositiveNumber);
    exp->add_option("--seed", exp_seed, "root seed");
    exp->add_option("--jobs", exp_jobs,
                    "worker threads (0 = hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    exp->add_option("--output", exp_output, "CSV path (default stdout)");

    // render
    auto* render = app.add_subcommand(
        "render",
        "evaluate the bandlimited expansion of an instance on a grid CSV");
    std::string render_input;
    std::string render_output;
    int render_L = 0;
    int render_grid_theta = 64;
    int render_grid_phi = 128;
    render->add_option("--input", render_input, "instance JSON path")
        ->required();
    render->add_option("--L", render_L, "bandlimit of the expansion")
        ->required()
        ->check(CLI::PositiveNumber);
    render->add_option("--grid-theta", render_grid_theta,
                       "rows: theta samples over [0, pi]")
        ->check(CLI::Range(2, 100000));
    render->add_option("--grid-phi", render_grid_phi,
                       "columns: phi samples over [0, 2pi)")
        ->check(CLI::PositiveNumber);
    render->add_option("--output", render_output,
                       "output path (default stdout)");

    // legendre-table
    auto* table_cmd = app.add_subcommand(
        "legendre-table",
        "dump the colatitude polynomial coefficient table as debug JSON");
    int table_L = 0;
    std::string table_output;
    table_cmd->add_option("--L", table_L, "bandlimit")
        ->required()
        ->check(CLI::PositiveNumber);
    table_cmd->add_option("--output", table_output,
                          "output path (default stdout)");

    // Let --tolerance appear after the subcommand name as well.
    for (CLI::App* sub : {synthesize, shc, rec, band, exp, render, table_cmd}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        Tolerances tol =
            apply_tolerance_flags(tolerances_from_env(), tolerance_flags);

        if (synthesize->parsed()) {
            sphfri::InstanceGenConfig cfg;
            cfg.K = syn_K;
            cfg.min_separation = syn_min_sep;
            cfg.amplitude_lo = syn_amp_lo;
            cfg.amplitude_hi = syn_amp_hi;
            cfg.amplitude_floor = syn_amp_floor;
            cfg.rng_seed = syn_seed;
            cfg.theta_distribution =
                syn_theta_dist == "colatitude"
                    ? sphfri::ThetaDistribution::UniformColatitude
                    : sphfri::ThetaDistribution::UniformSphere;
            emit(syn_output,
                 sphfri::instance_to_json(sphfri::generate_instance(cfg)));
        } else if (shc->parsed()) {
            const sphfri::DiracEnsemble sig =
                sphfri::instance_from_json(sphfri::read_text_file(shc_input));
            const int L =
                shc_L > 0 ? shc_L
                          : sphfri::required_bandlimit(
                                static_cast<int>(sig.size()))
                                .L_required;
            emit(shc_output, sphfri::coefficients_to_json(
                                 sphfri::forward_sh_coefficients(sig, L)));
        } else if (rec->parsed()) {
            const sphfri::ShCoefficients flm = sphfri::coefficients_from_json(
                sphfri::read_text_file(rec_input));
            emit(rec_output, sphfri::recovery_to_json(
                                 sphfri::recover(flm, rec_K, tol)));
        } else if (band->parsed()) {
            const sphfri::BandlimitPlan plan =
                sphfri::required_bandlimit(band_K);
            std::cout << "L=" << plan.L_required << " (proposed), "
                      << plan.two_k << " (2K), " << plan.k_plus_sqrt
                      << " (K+√K)\n";
        } else if (exp->parsed()) {
            sphfri::ExperimentConfig cfg;
            if (!exp_K.empty()) cfg.K_values = exp_K;
            cfg.explicit_L = exp_L;
            cfg.trials = exp_trials;
            cfg.seed = exp_seed;
            cfg.workers = exp_jobs;
            cfg.output_path = exp_output;
            cfg.tolerances = tol;
            const auto records = sphfri::run_experiment(cfg);
            if (exp_output.empty()) {
                std::cout << sphfri::error_records_to_csv(records);
            }
        } else if (render->parsed()) {
            const sphfri::DiracEnsemble sig = sphfri::instance_from_json(
                sphfri::read_text_file(render_input));
            const sphfri::ShCoefficients flm =
                sphfri::forward_sh_coefficients(sig, render_L);
            std::string csv = "theta,phi,re,im\n";
            char line[160];
            for (int i = 0; i < render_grid_theta; ++i) {
                const double theta = std::numbers::pi * i /
                                     (render_grid_theta - 1);
                for (int jj = 0; jj < render_grid_phi; ++jj) {
                    const double phi =
                        2.0 * std::numbers::pi * jj / render_grid_phi;
                    const std::complex<double> value =
                        sphfri::eval_bandlimited(flm, {theta, phi});
                    std::snprintf(line, sizeof(line),
                                  "%.16e,%.16e,%.16e,%.16e\n", theta, phi,
                                  value.real(), value.imag());
                    csv += line;
                }
            }
            emit(render_output, csv);
        } else if (table_cmd->parsed()) {
            emit(table_output, sphfri::table_to_json(
                                   sphfri::LegendrePolyTable(table_L)));
        }
    } catch (const sphfri::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
