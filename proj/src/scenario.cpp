#include "liscrb/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "liscrb/errors.hpp"

namespace liscrb {

Scenario Scenario::paper_default() {
  Scenario s;
  s.d_spacing_m = s.wavelength() / 2.0;
  return s;
}

double Scenario::snr_db() const { return 10.0 * std::log10(snr()); }

Scenario Scenario::with_snr_db(double db) const {
  Scenario out = *this;
  out.power = std::pow(10.0, db / 10.0);
  out.noise_var = 1.0;
  return out;
}

Scenario Scenario::with_n_l(int count) const {
  Scenario out = *this;
  out.n_l = count;
  return out;
}

std::vector<int> Scenario::subcarriers() const {
  std::vector<int> out;
  const int half = (n_sub - 1) / 2;
  out.reserve(static_cast<std::size_t>(n_sub));
  for (int n = -half; n <= half; ++n) out.push_back(n);
  return out;
}

bool Scenario::valid_subcarrier(int n) const {
  const int half = (n_sub - 1) / 2;
  return n >= -half && n <= half;
}

void Scenario::validate() const {
  auto finite2 = [](const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); };
  if (!finite2(b) || !finite2(l) || !finite2(m) || !std::isfinite(alpha))
    throw InvalidInputError("scenario positions and alpha must be finite");
  if (n_sub < 1 || n_sub % 2 == 0)
    throw InvalidInputError("n_sub must be a positive odd integer, got " + std::to_string(n_sub));
  if (n_b < 1 || n_m < 1 || n_l < 1) throw InvalidInputError("array sizes must be >= 1");
  if (!(mu > 0.0)) throw InvalidInputError("path-loss exponent mu must be > 0");
  if (!(power > 0.0)) throw InvalidInputError("power must be > 0");
  if (!(noise_var > 0.0)) throw InvalidInputError("noise_var must be > 0");
  if (!(c > 0.0)) throw InvalidInputError("speed of light must be > 0");
  if (!(fc_hz > 0.0) || !(bandwidth_hz > 0.0))
    throw InvalidInputError("carrier and bandwidth must be > 0");
  if (!(bandwidth_hz / fc_hz < 0.05))
    throw InvalidInputError("narrowband model requires bandwidth_hz / fc_hz < 0.05");
  if (!(d_spacing_m > 0.0)) throw InvalidInputError("d_spacing_m must be > 0");
  if ((b - l).norm() <= 0.0 || (l - m).norm() <= 0.0 || (b - m).norm() <= 0.0)
    throw DegenerateGeometryError("BS, LIS and MS positions must be pairwise distinct");
}

namespace {

Vec2 read_vec2(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2)
    throw InvalidInputError(std::string("scenario key '") + key + "' must be a 2-element array");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInputError(std::string("scenario file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInputError("scenario file must hold a JSON object");

  static const char* const kKnown[] = {"b",     "l",       "m",     "alpha",        "mu",
                                       "n_b",   "n_m",     "n_l",   "n_sub",        "bandwidth_hz",
                                       "fc_hz", "d_spacing_m", "power", "noise_var", "c"};
  for (const auto& [key, _] : j.items()) {
    bool found = false;
    for (const char* k : kKnown) found = found || key == k;
    if (!found) throw InvalidInputError("unknown scenario key '" + key + "'");
  }

  Scenario s = Scenario::paper_default();
  try {
    if (j.contains("b")) s.b = read_vec2(j, "b");
    if (j.contains("l")) s.l = read_vec2(j, "l");
    if (j.contains("m")) s.m = read_vec2(j, "m");
    if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
    if (j.contains("mu")) s.mu = j["mu"].get<double>();
    if (j.contains("n_b")) s.n_b = j["n_b"].get<int>();
    if (j.contains("n_m")) s.n_m = j["n_m"].get<int>();
    if (j.contains("n_l")) s.n_l = j["n_l"].get<int>();
    if (j.contains("n_sub")) s.n_sub = j["n_sub"].get<int>();
    if (j.contains("bandwidth_hz")) s.bandwidth_hz = j["bandwidth_hz"].get<double>();
    if (j.contains("fc_hz")) s.fc_hz = j["fc_hz"].get<double>();
    if (j.contains("power")) s.power = j["power"].get<double>();
    if (j.contains("noise_var")) s.noise_var = j["noise_var"].get<double>();
    if (j.contains("c")) s.c = j["c"].get<double>();
    s.d_spacing_m = j.contains("d_spacing_m") ? j["d_spacing_m"].get<double>() : s.wavelength() / 2.0;
  } catch (const nlohmann::json::type_error& e) {
    throw InvalidInputError(std::string("scenario value has the wrong type: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["b"] = {s.b.x(), s.b.y()};
  j["l"] = {s.l.x(), s.l.y()};
  j["m"] = {s.m.x(), s.m.y()};
  j["alpha"] = s.alpha;
  j["mu"] = s.mu;
  j["n_b"] = s.n_b;
  j["n_m"] = s.n_m;
  j["n_l"] = s.n_l;
  j["n_sub"] = s.n_sub;
  j["bandwidth_hz"] = s.bandwidth_hz;
  j["fc_hz"] = s.fc_hz;
  j["d_spacing_m"] = s.d_spacing_m;
  j["power"] = s.power;
  j["noise_var"] = s.noise_var;
  j["c"] = s.c;
  return j.dump(2);
}

}  // namespace liscrb
