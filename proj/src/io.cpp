#include "ibrw/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ibrw/errors.hpp"

namespace ibrw {

namespace {

Eigen::VectorXd vector_field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("profile is missing \"") + key + "\"");
  const Json& arr = doc.at(key);
  if (!arr.is_array()) throw InputError(std::string("\"") + key + "\" must be an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw InputError(std::string("\"") + key + "\" must contain only numbers");
    out[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return out;
}

template <class Vec>
Json array_of(const Vec& v) {
  Json arr = Json::array();
  for (auto x : v) arr.push_back(x);
  return arr;
}

}  // namespace

VarianceProfile profile_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("profile must be a JSON object");
  return VarianceProfile(vector_field(doc, "sigmas"), vector_field(doc, "lambdas"));
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

VarianceProfile read_profile(const std::filesystem::path& path) {
  return profile_from_json(read_json(path));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

Json to_json(const VarianceProfile& profile) {
  Json doc;
  doc["sigmas"] = array_of(profile.sigmas());
  doc["lambdas"] = array_of(profile.lambdas());
  return doc;
}

Json to_json(const EffectiveProfile& eff) {
  Json doc;
  doc["m"] = eff.segments();
  doc["eff_lambdas"] = array_of(eff.lambdas);
  doc["eff_sigmas"] = array_of(eff.sigmas);
  doc["sigma_bar"] = array_of(eff.sigmas);
  doc["delta"] = eff.delta;
  doc["delta_left"] = eff.delta_left;
  doc["delta_right"] = eff.delta_right;
  doc["pi"] = eff.pi;
  doc["coincidence_points"] = eff.coincidence_points;
  doc["restricted"] = eff.restricted;
  doc["tol"] = eff.tol;
  return doc;
}

Json to_json(const PredictionReport& report) {
  Json doc;
  doc["n"] = report.n;
  doc["branching"] = report.branching;
  doc["mode"] = to_string(report.mode);
  doc["g"] = report.g;
  doc["first_order"] = report.first_order;
  doc["log_correction"] = report.log_correction;
  doc["second_order_total"] = report.second_order_total;
  Json segments = Json::array();
  for (const auto& s : report.per_segment) {
    Json row;
    row["j"] = s.segment;
    row["dt"] = s.length;
    row["sigma_bar"] = s.sigma_bar;
    row["flags"] = s.flags;
    row["first_order"] = s.first_order;
    row["log_correction"] = s.log_correction;
    row["contribution"] = s.contribution;
    segments.push_back(row);
  }
  doc["per_segment"] = segments;
  return doc;
}

Json to_json(const EstimateSample& e) {
  return Json{{"hits", e.hits}, {"trials", e.trials}, {"p_hat", e.p_hat},
              {"ci_low", e.ci_low}, {"ci_high", e.ci_high}};
}

std::string to_string(CorrectionMode mode) {
  return mode == CorrectionMode::restricted ? "restricted" : "unrestricted";
}

CorrectionMode correction_mode_from_string(const std::string& name) {
  if (name == "restricted") return CorrectionMode::restricted;
  if (name == "unrestricted") return CorrectionMode::unrestricted;
  throw InputError("unknown correction mode '" + name + "'");
}

std::string to_string(TimeMode mode) {
  return mode == TimeMode::strict ? "strict" : "rounding";
}

TimeMode time_mode_from_string(const std::string& name) {
  if (name == "strict") return TimeMode::strict;
  if (name == "rounding") return TimeMode::rounding;
  throw InputError("unknown time mode '" + name + "'");
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace ibrw
