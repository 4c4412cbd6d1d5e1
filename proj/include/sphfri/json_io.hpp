#pragma once

#include <string>

#include "sphfri/fri_model.hpp"
#include "sphfri/recovery.hpp"
#include "sphfri/sh_core.hpp"

namespace sphfri {

// JSON shapes:
//   instance     {"K": int, "diracs": [{"theta", "phi", "alpha_re", "alpha_im"}]}
//   coefficients {"L": int, "flm": [{"l", "m", "re", "im"}]}
//   recovery     {"K": int, "diracs": [...], "diagnostics": {"null_gap",
//                 "annihilation_residual", "vand_res_alpha", "vand_res_theta",
//                 "arccos_clamped"}}
//   table        {"L": int, "coeffs": [{"l", "m", "p", "c"}]}
// Parsers validate structure and ranges and throw std::invalid_argument with
// a reason; they do not enforce node distinctness, which is the recovery
// pipeline's job to detect.

std::string instance_to_json(const DiracEnsemble& sig);
DiracEnsemble instance_from_json(const std::string& text);

std::string coefficients_to_json(const ShCoefficients& flm);
ShCoefficients coefficients_from_json(const std::string& text);

// Estimates are sorted by (theta, phi) here and only here; RecoveryResult
// itself is unordered.
std::string recovery_to_json(const RecoveryResult& result);

std::string table_to_json(const LegendrePolyTable& table);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sphfri
