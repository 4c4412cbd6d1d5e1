#include "sphfri/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include <numbers>

namespace sphfri {

namespace {

using nlohmann::ordered_json;

double require_number(const ordered_json& j, const char* key,
                      const char* where) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw std::invalid_argument(std::string(where) +
                                    ": missing or non-numeric field '" + key +
                                    "'");
    }
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(where) + ": field '" + key +
                                    "' is not finite");
    }
    return v;
}

int require_int(const ordered_json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw std::invalid_argument(std::string(where) +
                                    ": missing or non-integer field '" + key +
                                    "'");
    }
    return j[key].get<int>();
}

ordered_json parse(const std::string& text, const char* where) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string(where) +
                                    ": invalid JSON: " + e.what());
    }
}

ordered_json dirac_to_json(const Dirac& d) {
    ordered_json j;
    j["theta"] = d.theta;
    j["phi"] = d.phi;
    j["alpha_re"] = d.alpha.real();
    j["alpha_im"] = d.alpha.imag();
    return j;
}

}  // namespace

std::string instance_to_json(const DiracEnsemble& sig) {
    ordered_json j;
    j["K"] = sig.size();
    ordered_json diracs = ordered_json::array();
    for (const Dirac& d : sig) diracs.push_back(dirac_to_json(d));
    j["diracs"] = std::move(diracs);
    return j.dump(2) + "\n";
}

DiracEnsemble instance_from_json(const std::string& text) {
    const ordered_json j = parse(text, "instance_from_json");
    const int K = require_int(j, "K", "instance_from_json");
    if (K < 1) {
        throw std::invalid_argument("instance_from_json: K must be >= 1");
    }
    if (!j.contains("diracs") || !j["diracs"].is_array()) {
        throw std::invalid_argument(
            "instance_from_json: missing 'diracs' array");
    }
    if (static_cast<int>(j["diracs"].size()) != K) {
        throw std::invalid_argument(
            "instance_from_json: K=" + std::to_string(K) + " but " +
            std::to_string(j["diracs"].size()) + " diracs listed");
    }
    DiracEnsemble sig;
    sig.reserve(static_cast<std::size_t>(K));
    for (const auto& dj : j["diracs"]) {
        Dirac d;
        d.theta = require_number(dj, "theta", "instance_from_json");
        d.phi = normalize_phi(require_number(dj, "phi", "instance_from_json"));
        d.alpha = {require_number(dj, "alpha_re", "instance_from_json"),
                   require_number(dj, "alpha_im", "instance_from_json")};
        if (!(d.theta > 0.0 && d.theta < std::numbers::pi)) {
            throw std::invalid_argument(
                "instance_from_json: theta must lie strictly inside (0, pi), "
                "got " +
                std::to_string(d.theta));
        }
        sig.push_back(d);
    }
    return sig;
}

std::string coefficients_to_json(const ShCoefficients& flm) {
    ordered_json j;
    j["L"] = flm.bandlimit();
    ordered_json arr = ordered_json::array();
    for (int l = 0; l < flm.bandlimit(); ++l) {
        for (int m = -l; m <= l; ++m) {
            ordered_json e;
            e["l"] = l;
            e["m"] = m;
            e["re"] = flm.at(l, m).real();
            e["im"] = flm.at(l, m).imag();
            arr.push_back(std::move(e));
        }
    }
    j["flm"] = std::move(arr);
    return j.dump(2) + "\n";
}

ShCoefficients coefficients_from_json(const std::string& text) {
    const ordered_json j = parse(text, "coefficients_from_json");
    const int L = require_int(j, "L", "coefficients_from_json");
    if (L < 1) {
        throw std::invalid_argument("coefficients_from_json: L must be >= 1");
    }
    if (!j.contains("flm") || !j["flm"].is_array()) {
        throw std::invalid_argument(
            "coefficients_from_json: missing 'flm' array");
    }
    ShCoefficients flm(L);
    std::set<std::pair<int, int>> seen;
    for (const auto& ej : j["flm"]) {
        const int l = require_int(ej, "l", "coefficients_from_json");
        const int m = require_int(ej, "m", "coefficients_from_json");
        if (l < 0 || l >= L || std::abs(m) > l) {
            throw std::invalid_argument(
                "coefficients_from_json: entry (l=" + std::to_string(l) +
                ", m=" + std::to_string(m) + ") out of range for L=" +
                std::to_string(L));
        }
        if (!seen.insert({l, m}).second) {
            throw std::invalid_argument(
                "coefficients_from_json: duplicate entry (l=" +
                std::to_string(l) + ", m=" + std::to_string(m) + ")");
        }
        flm.at(l, m) = {require_number(ej, "re", "coefficients_from_json"),
                        require_number(ej, "im", "coefficients_from_json")};
    }
    if (static_cast<int>(seen.size()) != L * L) {
        throw std::invalid_argument(
            "coefficients_from_json: triangle incomplete, " +
            std::to_string(seen.size()) + " of " + std::to_string(L * L) +
            " entries present");
    }
    return flm;
}

std::string recovery_to_json(const RecoveryResult& result) {
    DiracEnsemble sorted = result.diracs_est;
    std::sort(sorted.begin(), sorted.end(), [](const Dirac& a, const Dirac& b) {
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.phi < b.phi;
    });

    ordered_json j;
    j["K"] = sorted.size();
    ordered_json diracs = ordered_json::array();
    for (const Dirac& d : sorted) diracs.push_back(dirac_to_json(d));
    j["diracs"] = std::move(diracs);

    ordered_json diag;
    diag["null_gap"] = result.diagnostics.null_gap;
    diag["annihilation_residual"] = result.diagnostics.annihilation_residual;
    diag["vand_res_alpha"] = result.diagnostics.vand_res_alpha;
    diag["vand_res_theta"] = result.diagnostics.vand_res_theta;
    diag["arccos_clamped"] = result.diagnostics.arccos_clamped;
    j["diagnostics"] = std::move(diag);
    return j.dump(2) + "\n";
}

std::string table_to_json(const LegendrePolyTable& table) {
    ordered_json j;
    j["L"] = table.bandlimit();
    ordered_json arr = ordered_json::array();
    for (int l = 0; l < table.bandlimit(); ++l) {
        for (int m = 0; m <= l; ++m) {
            const auto& row = table.coeffs(l, m);
            for (std::size_t p = 0; p < row.size(); ++p) {
                ordered_json e;
                e["l"] = l;
                e["m"] = m;
                e["p"] = p;
                e["c"] = row[p];
                arr.push_back(std::move(e));
            }
        }
    }
    j["coeffs"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_text_file: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw std::runtime_error("read_text_file: read from '" + path +
                                 "' failed");
    }
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_text_file: cannot open '" + path +
                                 "'");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write_text_file: write to '" + path +
                                 "' failed");
    }
}

}  // namespace sphfri
