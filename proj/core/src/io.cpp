#include "sympcoh/io.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace sympcoh {
namespace {

[[noreturn]] void format_error(std::string_view what, std::string_view msg) {
  throw FormatError(std::string(what) + ": " + std::string(msg));
}

double number_from_json(const json& j, std::string_view what) {
  if (!j.is_number()) format_error(what, "expected a number");
  return j.get<double>();
}

const json& require_key(const json& obj, const char* key, std::string_view what) {
  if (!obj.is_object()) format_error(what, "expected a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) format_error(what, std::string("missing field '") + key + "'");
  return *it;
}

double number_field(const json& obj, const char* key, std::string_view what) {
  return number_from_json(require_key(obj, key, what), std::string(what) + "." + key);
}

double number_field_or(const json& obj, const char* key, double fallback, std::string_view what) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number_from_json(*it, std::string(what) + "." + key);
}

int int_field_or(const json& obj, const char* key, int fallback, std::string_view what) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) format_error(std::string(what) + "." + key, "expected an integer");
  return it->get<int>();
}

const json& params_of(const json& j, std::string_view what) {
  if (!j.is_object()) format_error(what, "expected a JSON object");
  const auto it = j.find("params");
  if (it == j.end()) return j;
  if (!it->is_object()) format_error(what, "'params' must be an object");
  return *it;
}

std::string kind_of(const json& j, std::string_view what) {
  const json& k = require_key(j, "kind", what);
  if (!k.is_string()) format_error(what, "'kind' must be a string");
  return k.get<std::string>();
}

}  // namespace

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FormatError("error reading file '" + path + "'");
  return ss.str();
}

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    format_error(what, std::string("malformed JSON: ") + e.what());
  }
}

json matrix_to_json(const Matrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) format_error(what, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) format_error(what, "rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  Matrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) format_error(what, "rows have inconsistent lengths");
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = number_from_json(j[r][c], what);
  }
  return a;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const json& j, std::string_view what) {
  if (!j.is_array()) format_error(what, "expected an array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = number_from_json(j[i], what);
  return v;
}

json state_to_json(const GaussianState& state) {
  return json{{"format", kCmFormat},
              {"ordering", "qqpp"},
              {"hbar", 2},
              {"m", state.modes()},
              {"matrix", matrix_to_json(state.cov().matrix())},
              {"displacement", vector_to_json(state.mean())}};
}

GaussianState state_from_json(const json& j, double tol) {
  constexpr std::string_view what = "covariance document";
  if (!j.is_object()) format_error(what, "expected a JSON object");
  if (const auto it = j.find("format"); it != j.end() && *it != kCmFormat) {
    format_error(what, "unsupported format " + it->dump() + ", expected \"sympcoh-cm-v1\"");
  }
  if (const auto it = j.find("ordering"); it != j.end() && *it != "qqpp") {
    format_error(what, "ordering must be \"qqpp\"");
  }
  if (const auto it = j.find("hbar"); it != j.end() && (!it->is_number() || it->get<double>() != 2.0)) {
    format_error(what, "hbar must be 2");
  }
  const json& mj = require_key(j, "m", what);
  if (!mj.is_number_integer() || mj.get<long long>() < 1) format_error(what, "'m' must be a positive integer");
  const int m = mj.get<int>();
  Matrix v = matrix_from_json(require_key(j, "matrix", what), "matrix");
  if (v.rows() != 2 * m || v.cols() != 2 * m) {
    std::ostringstream os;
    os << "matrix is " << v.rows() << "x" << v.cols() << ", expected " << 2 * m << "x" << 2 * m;
    throw DimensionError(os.str());
  }
  Vector d;
  if (const auto it = j.find("displacement"); it != j.end() && !it->is_null()) {
    d = vector_from_json(*it, "displacement");
  }
  return GaussianState(CovMat(std::move(v), tol), std::move(d));
}

GaussianState state_from_csv(std::string_view text, int m, double tol) {
  if (m < 1) throw DimensionError("--m must be a positive integer");
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line)
      if (ch == ',' || ch == ';') ch = ' ';
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        format_error("CSV", "not a number: '" + tok + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const std::size_t n = 2 * static_cast<std::size_t>(m);
  if (rows.size() != n) {
    std::ostringstream os;
    os << "CSV has " << rows.size() << " rows, expected " << n;
    throw DimensionError(os.str());
  }
  Matrix v(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) {
      std::ostringstream os;
      os << "CSV row " << r + 1 << " has " << rows[r].size() << " entries, expected " << n;
      throw DimensionError(os.str());
    }
    for (std::size_t c = 0; c < n; ++c) v(r, c) = rows[r][c];
  }
  return GaussianState(CovMat(std::move(v), tol));
}

GaussianState load_state(const std::string& path, std::optional<int> csv_m, double tol) {
  const std::string text = read_text(path);
  if (csv_m) return state_from_csv(text, *csv_m, tol);
  return state_from_json(parse_json(text, path), tol);
}

GateOrLoss gate_from_json(const json& j, int m) {
  constexpr std::string_view what = "gate";
  const std::string kind = kind_of(j, what);
  const json& p = params_of(j, what);
  const int pm = int_field_or(p, "m", m, what);
  if (pm != m) {
    std::ostringstream os;
    os << "gate declares m = " << pm << " but the state has m = " << m;
    throw DimensionError(os.str());
  }
  if (kind == "squeezer") return squeezer(m, int_field_or(p, "mode", 1, what), number_field(p, "r", what));
  if (kind == "phase") return phase_shifter(m, int_field_or(p, "mode", 1, what), number_field(p, "theta", what));
  if (kind == "orthogonal") return block_orthogonal(matrix_from_json(require_key(p, "O", what), "O"));
  if (kind == "passive") {
    return passive_from_unitary(matrix_from_json(require_key(p, "X", what), "X"),
                                matrix_from_json(require_key(p, "Y", what), "Y"));
  }
  if (kind == "displacement") return displacement(vector_from_json(require_key(p, "d", what), "d"));
  if (kind == "active") return block_diagonal_active(matrix_from_json(require_key(p, "A", what), "A"));
  if (kind == "loss") return LossSpec{LossChannel(number_field(p, "eta", what)).eta()};
  format_error(what, "unknown kind '" + kind + "'");
}

Channel channel_from_json(const json& j, const std::filesystem::path& base_dir) {
  constexpr std::string_view what = "channel";
  const std::string kind = kind_of(j, what);
  const json& p = params_of(j, what);
  if (kind == "identity") return IdentityChannel{};
  if (kind == "loss") return LossSpec{LossChannel(number_field(p, "eta", what)).eta()};
  if (kind == "stinespring") {
    Matrix o = matrix_from_json(require_key(p, "O", what), "O");
    std::optional<CovMat> env;
    if (const auto it = p.find("env"); it != p.end()) {
      env = state_from_json(*it).cov();
    } else if (const auto f = p.find("env_file"); f != p.end()) {
      if (!f->is_string()) format_error(what, "'env_file' must be a string");
      const std::filesystem::path path = base_dir / f->get<std::string>();
      env = load_state(path.string()).cov();
    } else {
      env = CovMat::vacuum(int_field_or(p, "env_modes", 1, what));
    }
    Vector disp;
    if (const auto it = p.find("disp"); it != p.end()) disp = vector_from_json(*it, "disp");
    return StinespringSpec{std::move(o), std::move(*env), std::move(disp)};
  }
  format_error(what, "unknown kind '" + kind + "'");
}

DiscriminationConfig discrimination_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  constexpr std::string_view what = "discrimination config";
  if (!j.is_object()) format_error(what, "expected a JSON object");
  std::optional<GaussianState> probe;
  if (const auto it = j.find("probe"); it != j.end()) {
    probe = state_from_json(*it);
  } else {
    const json& f = require_key(j, "probe_file", what);
    if (!f.is_string()) format_error(what, "'probe_file' must be a string");
    std::filesystem::path path = f.get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    probe = load_state(path.string());
  }
  const json& ch = require_key(j, "channels", what);
  if (!ch.is_array() || ch.size() != 2) format_error(what, "'channels' must be an array of two channels");

  DiscriminationConfig config{*probe, {channel_from_json(ch[0], base_dir), channel_from_json(ch[1], base_dir)}};
  config.delta = number_field_or(j, "delta", config.delta, what);
  if (const auto it = j.find("n_samples"); it != j.end()) {
    if (!it->is_number_unsigned()) format_error(what, "'n_samples' must be a nonnegative integer");
    config.n_samples = it->get<std::size_t>();
  }
  if (const auto it = j.find("trials"); it != j.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() == 0) format_error(what, "'trials' must be a positive integer");
    config.trials = it->get<std::size_t>();
  }
  if (const auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) format_error(what, "'seed' must be a nonnegative integer");
    config.seed = it->get<std::uint64_t>();
  }
  return config;
}

json report_to_json(const DiscriminationReport& r) {
  json out{{"mu1", r.mu1},
           {"mu2", r.mu2},
           {"var1", r.var1},
           {"var2", r.var2},
           {"threshold", r.threshold},
           {"n_thres", r.n_thres},
           {"n_thres_kind", r.n_thres_kind},
           {"n_samples", r.n_samples},
           {"blocks", r.blocks},
           {"trials", r.trials},
           {"failures", r.failures},
           {"empirical_error", r.empirical_error},
           {"wilson95", {r.wilson.lo, r.wilson.hi}},
           {"outcome_model", "normal with the exact mean and variance of M; not the true outcome law"}};
  return out;
}

}  // namespace sympcoh
