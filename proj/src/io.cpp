#include "swbin/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace swbin {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("invalid JSON input");
  return j;
}

std::vector<std::string> parse_alphabet(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    throw Error(std::string("source JSON: missing or empty \"") + key + "\"");
  std::vector<std::string> out;
  for (const auto& v : j[key]) {
    if (v.is_string())
      out.push_back(v.get<std::string>());
    else
      out.push_back(v.dump());
  }
  return out;
}

std::vector<double> parse_matrix(const json& j, const char* key,
                                 std::size_t nx, std::size_t ny) {
  if (!j.contains(key) || !j[key].is_array())
    throw Error(std::string("source JSON: missing \"") + key + "\"");
  const json& m = j[key];
  if (m.size() != nx)
    throw Error(std::string("source JSON: \"") + key + "\" must have " +
                std::to_string(nx) + " rows");
  std::vector<double> p;
  p.reserve(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    const json& row = m[x];
    if (!row.is_array() || row.size() != ny)
      throw Error(std::string("source JSON: \"") + key + "\" row " +
                  std::to_string(x) + " must have " + std::to_string(ny) +
                  " columns");
    for (std::size_t y = 0; y < ny; ++y) {
      if (!row[y].is_number())
        throw Error(std::string("source JSON: \"") + key + "\" entry (" +
                    std::to_string(x) + "," + std::to_string(y) +
                    ") is not a number");
      p.push_back(row[y].get<double>());
    }
  }
  return p;
}

}  // namespace

SourceFile parse_source_json(const std::string& text) {
  json j = parse_or_throw(text);
  auto ax = parse_alphabet(j, "alphabet_x");
  auto ay = parse_alphabet(j, "alphabet_y");
  auto p = parse_matrix(j, "p", ax.size(), ay.size());
  JointSource src(std::move(ax), std::move(ay), std::move(p));
  std::optional<MismatchModel> model;
  if (j.contains("p_tilde"))
    model.emplace(src,
                  parse_matrix(j, "p_tilde", src.nx(), src.ny()));
  return SourceFile{std::move(src), std::move(model)};
}

SourceFile load_source(const std::string& path) {
  return parse_source_json(read_file(path));
}

bool is_closed_form_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  return !j.is_discarded() && j.is_object() && j.contains("closed_form");
}

HarmonicSpectrum parse_harmonic_json(const std::string& text) {
  json j = parse_or_throw(text);
  if (!j.contains("closed_form") || j["closed_form"] != "harmonic")
    throw Error("closed-form JSON: only \"harmonic\" is supported");
  if (!j.contains("kappa") || !j.contains("a"))
    throw Error("closed-form JSON: \"kappa\" and \"a\" are required");
  return HarmonicSpectrum(j["kappa"].get<double>(), j["a"].get<double>());
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string spectrum_table_csv(const std::vector<SpectrumPoint>& pts) {
  std::ostringstream os;
  os << "alpha,epsilon,entropy\n";
  for (const auto& p : pts)
    os << format_double(p.alpha) << ',' << format_double(p.epsilon) << ','
       << format_double(p.entropy) << '\n';
  return os.str();
}

std::string boundaries_csv(std::vector<BoundaryPoint> pts) {
  std::stable_sort(pts.begin(), pts.end(),
                   [](const BoundaryPoint& a, const BoundaryPoint& b) {
                     if (a.curve_id != b.curve_id) return a.curve_id < b.curve_id;
                     return a.rate < b.rate;
                   });
  std::ostringstream os;
  os << "curve_id,R,T\n";
  for (const auto& p : pts)
    os << p.curve_id << ',' << format_double(p.rate) << ','
       << format_double(p.temperature) << '\n';
  return os.str();
}

std::string dominance_csv(const std::vector<DominanceCell>& cells) {
  std::ostringstream os;
  os << "R,T,dominance_fraction\n";
  for (const auto& c : cells)
    os << format_double(c.rate) << ',' << format_double(c.temperature) << ','
       << format_double(c.fraction) << '\n';
  return os.str();
}

namespace {

json finite_or_string(double v) {
  if (std::isfinite(v)) return std::stod(format_double(v));
  return format_double(v);
}

double from_finite_or_string(const json& j) {
  if (j.is_number()) return j.get<double>();
  std::string s = j.get<std::string>();
  if (s == "inf") return kInf;
  if (s == "-inf") return kNegInf;
  throw Error("report JSON: bad numeric field");
}

}  // namespace

std::string sim_report_to_json(const SimReport& rep) {
  json j;
  j["ber"] = finite_or_string(rep.ber);
  j["ci_low"] = finite_or_string(rep.ci_low);
  j["ci_high"] = finite_or_string(rep.ci_high);
  j["mean_log_zc_per_n"] = finite_or_string(rep.mean_log_zc_per_n);
  j["mean_log_ze_per_n"] = finite_or_string(rep.mean_log_ze_per_n);
  j["fraction_ze_zero"] = finite_or_string(rep.fraction_ze_zero);
  j["dominance_fraction"] = finite_or_string(rep.dominance_fraction);
  j["trials"] = rep.trials;
  j["positions_scored"] = rep.positions_scored;
  j["error_units"] = rep.error_units;
  j["n"] = rep.n;
  j["rate"] = finite_or_string(rep.rate);
  j["beta"] = finite_or_string(rep.beta);
  j["bins"] = rep.bins;
  j["seeds"] = {{"seed", rep.seed}};
  return j.dump(2) + "\n";
}

SimReport sim_report_from_json(const std::string& text) {
  json j = parse_or_throw(text);
  SimReport rep;
  rep.ber = j.at("ber").get<double>();
  rep.ci_low = j.at("ci_low").get<double>();
  rep.ci_high = j.at("ci_high").get<double>();
  rep.mean_log_zc_per_n = from_finite_or_string(j.at("mean_log_zc_per_n"));
  rep.mean_log_ze_per_n = from_finite_or_string(j.at("mean_log_ze_per_n"));
  rep.fraction_ze_zero = j.at("fraction_ze_zero").get<double>();
  rep.dominance_fraction = j.at("dominance_fraction").get<double>();
  rep.trials = j.at("trials").get<std::uint64_t>();
  rep.positions_scored = j.at("positions_scored").get<std::uint64_t>();
  rep.error_units = j.at("error_units").get<std::uint64_t>();
  rep.n = j.at("n").get<int>();
  rep.rate = j.at("rate").get<double>();
  rep.beta = from_finite_or_string(j.at("beta"));
  rep.bins = j.at("bins").get<std::uint64_t>();
  rep.seed = j.at("seeds").at("seed").get<std::uint64_t>();
  return rep;
}

std::string dilution_report_to_json(const DilutionReport& rep) {
  json j;
  j["rate"] = finite_or_string(rep.rate);
  j["n"] = rep.n;
  j["realizations"] = rep.realizations;
  j["beta_c_analytic"] = finite_or_string(rep.beta_c_analytic);
  j["beta_c_estimate"] = finite_or_string(rep.beta_c_estimate);
  j["mean_survivors"] = finite_or_string(rep.mean_survivors);
  j["seeds"] = {{"seed", rep.seed}};
  j["points"] = json::array();
  for (const auto& p : rep.points)
    j["points"].push_back({{"beta", finite_or_string(p.beta)},
                           {"measured", finite_or_string(p.measured)},
                           {"analytic", finite_or_string(p.analytic)}});
  return j.dump(2) + "\n";
}

DilutionReport dilution_report_from_json(const std::string& text) {
  json j = parse_or_throw(text);
  DilutionReport rep;
  rep.rate = j.at("rate").get<double>();
  rep.n = j.at("n").get<int>();
  rep.realizations = j.at("realizations").get<int>();
  rep.beta_c_analytic = from_finite_or_string(j.at("beta_c_analytic"));
  rep.beta_c_estimate = j.at("beta_c_estimate").get<double>();
  rep.mean_survivors = j.at("mean_survivors").get<double>();
  rep.seed = j.at("seeds").at("seed").get<std::uint64_t>();
  for (const auto& p : j.at("points"))
    rep.points.push_back({p.at("beta").get<double>(),
                          from_finite_or_string(p.at("measured")),
                          from_finite_or_string(p.at("analytic"))});
  return rep;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
  if (!f) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace swbin
