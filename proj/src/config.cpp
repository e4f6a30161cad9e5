#include "skewdim/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "skewdim/error.hpp"

namespace skewdim {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ConfigError, key + ": " + why);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= v.size(); ++i) {
    if (i == v.size() || v[i] == ',' || v[i] == ' ' || v[i] == '\t') {
      const auto tok = trim(v.substr(start, i - start));
      if (!tok.empty()) out.push_back(tok);
      start = i + 1;
    }
  }
  return out;
}

double strict_double(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "not a number: " + s);
  }
  if (used != s.size()) throw Error(ErrorCode::ConfigError, "not a number: " + s);
  return x;
}

template <class Int>
Int parse_int(const std::string& key, std::string_view v) {
  Int x{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) fail(key, "expected an integer, got '" + std::string(v) + "'");
  return x;
}

bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(key, "expected true or false");
}

double real_of(const std::string& key, std::string_view v) {
  try {
    return parse_real(v);
  } catch (const Error&) {
    fail(key, "expected a real number, got '" + std::string(v) + "'");
  }
}

/// "forcing.lattice_modes.3.re" -> index 3 and field "re".
std::pair<int, std::string> indexed_field(const std::string& key, std::string_view rest) {
  const auto dot = rest.find('.');
  if (dot == std::string_view::npos) fail(key, "expected <index>.<field>");
  const int idx = parse_int<int>(key, rest.substr(0, dot));
  if (idx < 1) fail(key, "indices start at 1");
  return {idx, std::string(rest.substr(dot + 1))};
}

}  // namespace

double parse_real(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw Error(ErrorCode::ConfigError, "empty number");
  const auto p = s.find("pi");
  if (p == std::string::npos) return strict_double(s);
  // [sign][coef[*]]pi[/den]
  std::string head = s.substr(0, p);
  std::string tail = s.substr(p + 2);
  double sign = 1.0;
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
    sign = head[0] == '-' ? -1.0 : 1.0;
    head.erase(0, 1);
  }
  if (!head.empty() && head.back() == '*') head.pop_back();
  const double coef = head.empty() ? 1.0 : strict_double(head);
  double den = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/') throw Error(ErrorCode::ConfigError, "malformed pi expression: " + std::string(text));
    den = strict_double(tail.substr(1));
    if (den == 0.0) throw Error(ErrorCode::ConfigError, "division by zero in " + std::string(text));
  }
  return sign * coef * std::numbers::pi / den;
}

AnalysisConfig parse_config(std::string_view text) {
  AnalysisConfig cfg;
  std::map<int, LatticeMode> lattice;
  std::map<int, std::array<std::optional<double>, 2>> lattice_values;
  std::map<int, EigenModeSpec> eigen;
  std::map<int, bool> eigen_has_direction;
  std::optional<std::string> matrix_text, base_text;
  bool have_k = false, have_lambda = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": empty key");
    cfg.entries.emplace_back(key, std::string(value));
    auto& est = cfg.estimation;

    if (key == "matrix.k") {
      cfg.k = parse_int<int>(key, value);
      have_k = true;
    } else if (key == "matrix.entries") {
      matrix_text = std::string(value);
    } else if (key == "lambda") {
      cfg.lambda = real_of(key, value);
      have_lambda = true;
    } else if (key == "base_point") {
      base_text = std::string(value);
    } else if (key == "truncation_tol") {
      est.truncation_tol = real_of(key, value);
    } else if (key == "seed") {
      est.seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "outputs.directory") {
      cfg.output_directory = std::string(value);
    } else if (key == "verify.tamper_eigenvector_sign") {
      cfg.tamper_eigenvector_sign = parse_bool(key, value);
    } else if (key == "render.target") {
      cfg.render.target = std::string(value);
    } else if (key == "render.resolution") {
      cfg.render.resolution = parse_int<int>(key, value);
    } else if (key == "render.delta") {
      cfg.render.delta = real_of(key, value);
    } else if (key == "render.domain") {
      cfg.render.domain = real_of(key, value);
    } else if (key.starts_with("estimation.")) {
      const std::string f = key.substr(11);
      if (f == "delta_min_log2") est.delta_min_log2 = parse_int<int>(key, value);
      else if (f == "delta_max_log2") est.delta_max_log2 = parse_int<int>(key, value);
      else if (f == "graph_delta_min_log2") est.graph_delta_min_log2 = parse_int<int>(key, value);
      else if (f == "samples_per_column") est.samples_per_column = parse_int<int>(key, value);
      else if (f == "graph_box_samples") est.graph_box_samples = parse_int<int>(key, value);
      else if (f == "anchors") est.anchors = parse_int<int>(key, value);
      else if (f == "interval_levels") est.interval_levels = parse_int<int>(key, value);
      else if (f == "interval_max_log2") est.interval_max_log2 = parse_int<int>(key, value);
      else if (f == "samples_per_interval") est.samples_per_interval = parse_int<int>(key, value);
      else if (f == "graph_samples_per_edge") est.graph_samples_per_edge = parse_int<int>(key, value);
      else if (f == "slice_domain") est.slice_domain = real_of(key, value);
      else if (f == "box_counting") est.box_counting = parse_bool(key, value);
      else fail(key, "unknown estimation key");
    } else if (key.starts_with("forcing.lattice_modes.")) {
      const auto [idx, field] = indexed_field(key, std::string_view(key).substr(22));
      if (field == "j") {
        IntVec j(static_cast<Eigen::Index>(split_list(value).size()));
        Eigen::Index c = 0;
        for (auto tok : split_list(value)) j(c++) = parse_int<std::int64_t>(key, tok);
        lattice[idx].j = j;
      } else if (field == "re") {
        lattice_values[idx][0] = real_of(key, value);
      } else if (field == "im") {
        lattice_values[idx][1] = real_of(key, value);
      } else {
        fail(key, "unknown lattice mode field");
      }
    } else if (key.starts_with("forcing.eigen_modes.")) {
      const auto [idx, field] = indexed_field(key, std::string_view(key).substr(20));
      auto& m = eigen[idx];
      if (field == "direction") {
        m.direction = parse_int<int>(key, value) - 1;
        eigen_has_direction[idx] = true;
      } else if (field == "amplitude") {
        m.amplitude = real_of(key, value);
      } else if (field == "frequency") {
        if (value == "inverse_modulus") m.frequency.reset();
        else m.frequency = real_of(key, value);
      } else if (field == "phase") {
        m.phase = real_of(key, value);
      } else {
        fail(key, "unknown eigen mode field");
      }
    } else {
      fail(key, "unknown key");
    }
  }

  if (!have_k) fail("matrix.k", "required");
  if (!matrix_text) fail("matrix.entries", "required");
  if (!have_lambda) fail("lambda", "required");
  if (cfg.k < 2 || cfg.k > kMaxDim) fail("matrix.k", "must lie in 2..6");
  for (auto tok : split_list(*matrix_text)) cfg.matrix.push_back(parse_int<std::int64_t>("matrix.entries", tok));
  if (cfg.matrix.size() != static_cast<std::size_t>(cfg.k * cfg.k)) fail("matrix.entries", "expected k*k integers");
  if (!(cfg.lambda > 0.0 && cfg.lambda < 1.0)) fail("lambda", "must lie in (0,1)");

  cfg.base_point = Vec::Zero(cfg.k);
  if (base_text) {
    const auto toks = split_list(*base_text);
    if (toks.size() != static_cast<std::size_t>(cfg.k)) fail("base_point", "expected k reals");
    for (int i = 0; i < cfg.k; ++i) cfg.base_point(i) = real_of("base_point", toks[i]);
  }

  for (auto& [idx, m] : lattice) {
    const std::string key = "forcing.lattice_modes." + std::to_string(idx);
    if (m.j.size() != cfg.k) fail(key + ".j", "expected k integers");
    const auto& vals = lattice_values[idx];
    m.coeff = {vals[0].value_or(0.0), vals[1].value_or(0.0)};
    cfg.lattice_modes.push_back(m);
  }
  for (const auto& [idx, vals] : lattice_values)
    if (!lattice.count(idx)) fail("forcing.lattice_modes." + std::to_string(idx), "missing j");
  for (auto& [idx, m] : eigen) {
    const std::string key = "forcing.eigen_modes." + std::to_string(idx);
    if (!eigen_has_direction[idx]) fail(key + ".direction", "required");
    if (m.direction < 0 || m.direction >= cfg.k) fail(key + ".direction", "must lie in 1..k");
    cfg.eigen_modes.push_back(m);
  }

  const auto& e = cfg.estimation;
  if (!(e.truncation_tol > 0.0)) fail("truncation_tol", "must be positive");
  if (e.delta_min_log2 > e.delta_max_log2) fail("estimation.delta_min_log2", "must not exceed delta_max_log2");
  if (e.anchors < 8) fail("estimation.anchors", "at least 8 required");
  if (e.interval_levels < 6) fail("estimation.interval_levels", "at least 6 required");
  if (e.samples_per_column < 16) fail("estimation.samples_per_column", "at least 16 required");
  if (e.samples_per_interval < 2) fail("estimation.samples_per_interval", "at least 2 required");
  if (!(e.slice_domain > 0.0)) fail("estimation.slice_domain", "must be positive");
  return cfg;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SkewProduct build_product(const AnalysisConfig& config) {
  const HyperbolicToralMatrix m = validate(config.k, config.matrix);
  const Spectrum sp = spectrum(m);
  std::vector<EigenMode> eigen;
  for (const auto& e : config.eigen_modes)
    eigen.push_back({e.direction, e.amplitude, e.frequency.value_or(1.0 / sp.modulus(e.direction)), e.phase});
  ForcingFunction p = ForcingFunction::lattice(config.lattice_modes).plus(ForcingFunction::eigen(std::move(eigen)));
  return SkewProduct(m, config.lambda, std::move(p), config.base_point);
}

}  // namespace skewdim
