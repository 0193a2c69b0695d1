#include "swff/params.hpp"

#include <cmath>
#include <stdexcept>

namespace swff {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("parameter out of range: " + what);
}

}  // namespace

void ParameterSet::validate() const {
  require(std::isfinite(W_max) && W_max > 0.0, "W_max");
  require(std::isfinite(S_max) && S_max > 0.0, "S_max");
  require(std::isfinite(SCN_max) && SCN_max > 0.0, "SCN_max");
  require(tau_W > 0.0, "tau_W");
  require(tau_S > 0.0, "tau_S");
  require(tau_SCN > 0.0, "tau_SCN");
  require(alpha_W > 0.0, "alpha_W");
  require(alpha_S > 0.0, "alpha_S");
  require(alpha_SCN > 0.0 && alpha_SCN <= 3.0, "alpha_SCN");
  require(tau_hw > 0.0, "tau_hw");
  require(tau_hs > 0.0, "tau_hs");
  require(h_min < h_max, "h_min/h_max");
  require(k > 0.0 && k <= 1.0, "k");
  require(std::isfinite(phi), "phi");
  require(std::isfinite(beta_W), "beta_W");
  require(std::isfinite(beta_SCN), "beta_SCN");
  require(std::isfinite(k1) && std::isfinite(k2), "k1/k2");
  require(g_sw >= 0.0 && g_scnw >= 0.0 && g_ws >= 0.0 && g_scns >= 0.0,
          "coupling strengths");
  require(theta_W > 0.0 && theta_W < W_max, "theta_W");
}

namespace {

struct Field {
  const char* key;
  double ParameterSet::* member;
};

constexpr Field kFields[] = {
    {"W_max", &ParameterSet::W_max},     {"tau_W", &ParameterSet::tau_W},
    {"alpha_W", &ParameterSet::alpha_W}, {"beta_W", &ParameterSet::beta_W},
    {"S_max", &ParameterSet::S_max},     {"tau_S", &ParameterSet::tau_S},
    {"alpha_S", &ParameterSet::alpha_S}, {"SCN_max", &ParameterSet::SCN_max},
    {"tau_SCN", &ParameterSet::tau_SCN}, {"alpha_SCN", &ParameterSet::alpha_SCN},
    {"beta_SCN", &ParameterSet::beta_SCN}, {"g_sw", &ParameterSet::g_sw},
    {"g_scnw", &ParameterSet::g_scnw},   {"g_ws", &ParameterSet::g_ws},
    {"g_scns", &ParameterSet::g_scns},   {"h_max", &ParameterSet::h_max},
    {"h_min", &ParameterSet::h_min},     {"tau_hw", &ParameterSet::tau_hw},
    {"tau_hs", &ParameterSet::tau_hs},   {"k1", &ParameterSet::k1},
    {"k2", &ParameterSet::k2},           {"theta_W", &ParameterSet::theta_W},
    {"k", &ParameterSet::k},             {"phi", &ParameterSet::phi},
};

}  // namespace

nlohmann::json to_json(const ParameterSet& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : kFields) j[f.key] = p.*(f.member);
  return j;
}

ParameterSet params_from_json(const nlohmann::json& j) {
  if (!j.is_object())
    throw std::invalid_argument("parameters must be a JSON object");
  ParameterSet p;
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& f : kFields) {
      if (key == f.key) {
        if (!value.is_number())
          throw std::invalid_argument("parameter '" + key +
                                      "' must be a number");
        p.*(f.member) = value.get<double>();
        known = true;
        break;
      }
    }
    if (!known) throw std::invalid_argument("unknown parameter key: " + key);
  }
  p.validate();
  return p;
}

}  // namespace swff
