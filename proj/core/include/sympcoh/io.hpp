#pragma once

// JSON/CSV readers and writers for states, gates, channels and run configs.
// Every covariance-matrix document states its ordering and hbar:
//   {"format":"sympcoh-cm-v1","ordering":"qqpp","hbar":2,"m":1,
//    "matrix":[[...]],"displacement":[...]}

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "sympcoh/applications.hpp"
#include "sympcoh/gaussian_core.hpp"
#include "sympcoh/symplectic_ops.hpp"

namespace sympcoh {

using json = nlohmann::json;

inline constexpr std::string_view kCmFormat = "sympcoh-cm-v1";

// Reads a whole file; "-" reads standard input. Throws FormatError on failure.
std::string read_text(const std::string& path);
json parse_json(std::string_view text, std::string_view what = "input");

json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const json& j, std::string_view what = "matrix");
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j, std::string_view what = "vector");

json state_to_json(const GaussianState& state);
// Validates shape and header fields, then the covariance invariants
// (InvalidCovariance). Unknown keys are ignored.
GaussianState state_from_json(const json& j, double tol = kDefaultTol);

// 2m rows of 2m comma- or whitespace-separated numbers; '#' starts a comment.
GaussianState state_from_csv(std::string_view text, int m, double tol = kDefaultTol);

// `csv_m` set: parse as CSV with that mode count; otherwise as JSON.
GaussianState load_state(const std::string& path, std::optional<int> csv_m = std::nullopt,
                         double tol = kDefaultTol);

using GateOrLoss = std::variant<SympGate, LossSpec>;

// {"kind":"squeezer|phase|orthogonal|passive|displacement|active|loss","params":{...}}.
// `m` is the mode count of the state the gate will act on.
GateOrLoss gate_from_json(const json& j, int m);

// {"kind":"identity|loss|stinespring", ...} with fields at top level or under "params".
Channel channel_from_json(const json& j, const std::filesystem::path& base_dir = {});

// {"probe_file":"...", or "probe":{cm document}, "channels":[c1, c2], "delta", "n_samples",
//  "trials", "seed"}. Relative probe paths resolve against `base_dir`.
DiscriminationConfig discrimination_config_from_json(const json& j, const std::filesystem::path& base_dir = {});

json report_to_json(const DiscriminationReport& report);

}  // namespace sympcoh
