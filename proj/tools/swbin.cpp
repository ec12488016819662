#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swbin/exponent.hpp"
#include "swbin/io.hpp"
#include "swbin/phase.hpp"
#include "swbin/simulate.hpp"
#include "swbin/source.hpp"
#include "swbin/spectrum.hpp"

namespace {

using namespace swbin;

constexpr std::uint64_t kDefaultSeed = 0x5eedb15eedULL;  // fixed, not time-based

struct Axis {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const {
    std::vector<double> v;
    if (count == 1) {
      v.push_back(start);
      return v;
    }
    for (int i = 0; i < count; ++i)
      v.push_back(start + (stop - start) * double(i) / double(count - 1));
    return v;
  }
};

// "a:b:n" with inclusive endpoints.
Axis parse_axis(const std::string& s) {
  Axis ax;
  char extra;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &ax.start, &ax.stop, &ax.count,
                  &extra) != 3 ||
      ax.count < 1)
    throw CLI::ValidationError("sweep", "expected start:stop:count, got " + s);
  return ax;
}

// "rate=a:b:n,beta=a:b:n" (either axis optional).
void parse_sweep(const std::string& s, std::optional<Axis>& rate,
                 std::optional<Axis>& beta) {
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("sweep", "expected axis=start:stop:count");
    std::string axis = part.substr(0, eq);
    Axis ax = parse_axis(part.substr(eq + 1));
    if (axis == "rate")
      rate = ax;
    else if (axis == "beta")
      beta = ax;
    else
      throw CLI::ValidationError("sweep", "unknown axis " + axis);
  }
}

double parse_beta(const std::string& s) {
  if (s == "inf") return kInf;
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("beta", "expected a number or 'inf'");
  }
}

MetricKind parse_metric(const std::string& s) {
  if (s == "matched") return MetricKind::matched;
  if (s == "mismatched") return MetricKind::mismatched;
  if (s == "mce") return MetricKind::min_conditional_entropy;
  throw CLI::ValidationError("metric", "expected matched|mismatched|mce");
}

DecoderKind parse_decoder(const std::string& s) {
  if (s == "matched") return DecoderKind::matched;
  if (s == "universal") return DecoderKind::universal;
  if (s == "mismatched") return DecoderKind::mismatched;
  throw CLI::ValidationError("decoder", "expected matched|universal|mismatched");
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    write_file(out, content);
}

int run(int argc, char** argv) {
  CLI::App app{"finite-temperature random-binning analytics"};
  app.require_subcommand(1);

  std::string source_path, out_path, metric_str = "matched";
  std::string decoder_str = "matched", beta_str = "1", sweep_str, kind_str =
      "x_given_y";
  double rate = 0.5, temperature = 1.0, rate_x = 0.0, rate_y = 0.0;
  double t_max = 4.0;
  int grid = 256, n = 8, realizations = 32;
  std::uint64_t trials = 1000, seed = kDefaultSeed;
  std::string betas_str = "0.2:3:29";
  bool all_positions = false, pessimistic = false;

  auto add_source = [&](CLI::App* c) {
    c->add_option("--source", source_path, "source JSON file")
        // Existence is checked at load time so a missing file surfaces as an
        // I/O error (exit 1) rather than a usage error.
        ->required();
  };

  CLI::App* c_spectrum = app.add_subcommand("spectrum", "entropy-energy table");
  add_source(c_spectrum);
  c_spectrum->add_option("--kind", kind_str, "x_given_y|y_given_x|joint");
  c_spectrum->add_option("--out", out_path, "output CSV path");

  CLI::App* c_phase = app.add_subcommand("phase", "phase boundary curves");
  add_source(c_phase);
  c_phase->add_option("--decoder", decoder_str, "matched|universal|mismatched");
  c_phase->add_option("--grid", grid, "points per curve")->check(CLI::Range(2, 100000));
  c_phase->add_option("--tmax", t_max, "largest sampled temperature");
  c_phase->add_option("--out", out_path, "output CSV path");

  CLI::App* c_classify = app.add_subcommand("classify", "label an (R, T) point");
  add_source(c_classify);
  c_classify->add_option("--rate", rate, "code rate (nats)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  c_classify->add_option("--temperature", temperature, "temperature T = 1/beta")
      ->required()
      ->check(CLI::PositiveNumber);
  c_classify->add_option("--decoder", decoder_str, "matched|universal|mismatched");
  c_classify->add_option("--out", out_path, "output JSON path");

  CLI::App* c_exp = app.add_subcommand("exponent", "bit-error exponent");
  add_source(c_exp);
  c_exp->add_option("--rate", rate, "code rate (nats)")
      ->check(CLI::NonNegativeNumber);
  c_exp->add_option("--beta", beta_str, "inverse temperature or 'inf'");
  c_exp->add_option("--metric", metric_str, "matched|mismatched|mce");
  c_exp->add_option("--sweep", sweep_str, "rate=a:b:n,beta=a:b:n");
  c_exp->add_option("--out", out_path, "output CSV path");

  CLI::App* c_sim = app.add_subcommand("simulate", "random-binning Monte Carlo");
  add_source(c_sim);
  // No parse-time cap: the simulator enforces its own memory budget and an
  // oversized blocklength surfaces as a computation error (exit 1).
  c_sim->add_option("--n", n, "blocklength")->check(CLI::Range(1, 1000));
  c_sim->add_option("--rate", rate, "code rate (nats)")
      ->check(CLI::NonNegativeNumber);
  c_sim->add_option("--beta", beta_str, "inverse temperature or 'inf'");
  c_sim->add_option("--trials", trials, "Monte Carlo trials");
  c_sim->add_option("--seed", seed, "RNG seed");
  c_sim->add_option("--metric", metric_str, "matched|mismatched|mce");
  c_sim->add_flag("--all-positions", all_positions, "score every symbol");
  c_sim->add_flag("--pessimistic-ties", pessimistic, "ties count as full errors");
  c_sim->add_option("--out", out_path, "output JSON path");

  CLI::App* c_dil = app.add_subcommand("dilution", "random dilution free energy");
  add_source(c_dil);
  c_dil->add_option("--n", n, "blocklength")->check(CLI::Range(1, 26));
  c_dil->add_option("--rate", rate, "dilution rate (nats)")
      ->check(CLI::NonNegativeNumber);
  c_dil->add_option("--betas", betas_str, "beta grid start:stop:count");
  c_dil->add_option("--realizations", realizations, "dilution draws")
      ->check(CLI::Range(1, 100000));
  c_dil->add_option("--seed", seed, "RNG seed");
  c_dil->add_option("--out", out_path, "output JSON path");

  CLI::App* c_two = app.add_subcommand("two-sided", "two-sided dominance query");
  add_source(c_two);
  c_two->add_option("--rate-x", rate_x, "rate for X (nats)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  c_two->add_option("--rate-y", rate_y, "rate for Y (nats)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  c_two->add_option("--beta", beta_str, "inverse temperature (<= 1)");
  c_two->add_option("--out", out_path, "output JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (c_spectrum->parsed()) {
    std::string text = read_file(source_path);
    if (is_closed_form_json(text)) {
      HarmonicSpectrum hs = parse_harmonic_json(text);
      std::vector<SpectrumPoint> pts;
      for (int i = 0; i < 2048; ++i) {
        double r = 3.0 * double(i) / 2047.0;
        double eps = hs.s_inverse(r);
        pts.push_back({hs.s_prime(eps), eps, hs.s_at(eps)});
      }
      emit(out_path, spectrum_table_csv(pts));
      return 0;
    }
    SpectrumKind kind;
    if (kind_str == "x_given_y")
      kind = SpectrumKind::conditional_x_given_y;
    else if (kind_str == "y_given_x")
      kind = SpectrumKind::conditional_y_given_x;
    else if (kind_str == "joint")
      kind = SpectrumKind::joint_xy;
    else
      throw CLI::ValidationError("kind", "expected x_given_y|y_given_x|joint");
    TiltedSpectrum spec(parse_source_json(text).source, kind);
    emit(out_path, spectrum_table_csv(spec.table()));
    return 0;
  }

  SourceFile sf = load_source(source_path);

  if (c_phase->parsed()) {
    DecoderKind dec = parse_decoder(decoder_str);
    PhaseDiagram pd = sf.model ? PhaseDiagram(sf.source, *sf.model)
                               : PhaseDiagram(sf.source);
    emit(out_path, boundaries_csv(pd.sample_boundaries(dec, grid, t_max)));
    return 0;
  }

  if (c_classify->parsed()) {
    DecoderKind dec = parse_decoder(decoder_str);
    PhaseDiagram pd = sf.model ? PhaseDiagram(sf.source, *sf.model)
                               : PhaseDiagram(sf.source);
    PhaseLabel label = pd.classify(rate, temperature, dec);
    nlohmann::json j;
    j["phase"] = phase_name(label.phase);
    j["on_boundary"] = label.on_boundary;
    emit(out_path, j.dump(2) + "\n");
    return 0;
  }

  if (c_exp->parsed()) {
    MetricKind metric = parse_metric(metric_str);
    if (metric == MetricKind::mismatched && !sf.model)
      throw CLI::ValidationError("metric", "mismatched metric needs p_tilde");
    ExponentSolver solver(sf.source, metric, sf.model);
    std::optional<Axis> rate_ax, beta_ax;
    if (!sweep_str.empty()) parse_sweep(sweep_str, rate_ax, beta_ax);
    std::vector<double> rates =
        rate_ax ? rate_ax->values() : std::vector<double>{rate};
    std::vector<double> betas = beta_ax ? beta_ax->values()
                                        : std::vector<double>{parse_beta(beta_str)};
    std::ostringstream os;
    os << "R,beta,E,phase\n";
    for (double rr : rates)
      for (double bb : betas) {
        ExponentResult res = solver.exponent(rr, bb);
        os << format_double(rr) << ',' << format_double(bb) << ','
           << format_double(res.value) << ',' << exponent_phase_name(res.phase)
           << '\n';
      }
    emit(out_path, os.str());
    return 0;
  }

  if (c_sim->parsed()) {
    SimConfig cfg{sf.source};
    cfg.n = n;
    cfg.rate = rate;
    cfg.beta = parse_beta(beta_str);
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.metric = parse_metric(metric_str);
    cfg.model = sf.model;
    cfg.average_all_positions = all_positions;
    cfg.pessimistic_ties = pessimistic;
    if (cfg.metric == MetricKind::mismatched && !cfg.model)
      throw CLI::ValidationError("metric", "mismatched metric needs p_tilde");
    emit(out_path, sim_report_to_json(estimate_ber(cfg)));
    return 0;
  }

  if (c_dil->parsed()) {
    Axis betas = parse_axis(betas_str);
    DilutionReport rep = rdm_dilution_experiment(sf.source, n, rate,
                                                 betas.values(), realizations,
                                                 seed);
    emit(out_path, dilution_report_to_json(rep));
    return 0;
  }

  if (c_two->parsed()) {
    PhaseDiagram pd(sf.source);
    TwoSidedQuery q{rate_x, rate_y, parse_beta(beta_str)};
    nlohmann::json j;
    j["dominant"] = dominant_term_name(pd.two_sided_dominance(q));
    j["reliable"] = pd.reliability_region_check(q);
    emit(out_path, j.dump(2) + "\n");
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const swbin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
