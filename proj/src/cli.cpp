#include "rsc/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsc/collapse.hpp"
#include "rsc/experiments.hpp"
#include "rsc/homology.hpp"
#include "rsc/phase.hpp"
#include "rsc/sampler.hpp"

namespace rsc {

namespace {

struct CoefficientChoice {
  bool integral = false;
  Coefficients field = Coefficients::rationals();
};

CoefficientChoice parse_coefficients(const std::string& text) {
  if (text == "q" || text == "Q") return {};
  if (text == "z" || text == "Z") return {true, Coefficients::rationals()};
  if (text.rfind("gf:", 0) == 0) {
    std::uint64_t p = 0;
    try {
      p = std::stoull(text.substr(3));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "bad modulus in '" + text + "'");
    }
    return {false, Coefficients::modulo(p)};
  }
  throw Error(ErrorCode::InvalidConfig, "coefficients must be q, z or gf:P");
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidConfig, "range must look like lo:hi");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "bad range '" + text + "'");
  }
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidConfig, "cannot write " + path);
  file << text;
}

nlohmann::json describe_alpha(const ExponentVector& alpha) {
  nlohmann::json j;
  const DomainLabel label = classify(alpha);
  j["r"] = alpha.r();
  j["alpha"] = std::vector<double>(alpha.values().begin(), alpha.values().end());
  j["psi"] = psi_all(alpha);
  j["label"] = label.to_string();
  j["margin"] = domination_margin(alpha);
  const ExponentVector phi = phi_map(alpha);
  j["phi"] = std::vector<double>(phi.values().begin(), phi.values().end());
  j["predicted_dimension"] = predicted_dimension(alpha).to_string();
  const ConnectivityPrediction conn = connectivity_prediction(alpha);
  j["connected"] = verdict_name(conn.connected);
  j["simply_connected"] = verdict_name(conn.simply_connected);
  if (label.is_domain() && label.index >= 0) {
    const BettiPrediction prediction = betti_prediction(1, alpha);
    j["critical_dimension"] = prediction.critical_dimension;
    j["growth_exponent"] = prediction.growth_exponent;
    j["leading_coefficient"] = prediction.leading_coefficient;
  }
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random simplicial complexes: sampling, homology, phase domains and experiments", "rsc"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw one complex and write it in the text format");
  int sample_n = 0, sample_r = 0;
  std::vector<double> sample_alpha, sample_p;
  std::string sample_preset, sample_out;
  double sample_value = 0.0;
  std::uint64_t sample_seed = 0, sample_trial = 0;
  sample->add_option("--n", sample_n, "Number of vertices")->required();
  sample->add_option("--r", sample_r, "Dimension cap")->required();
  auto* a_opt = sample->add_option("--alpha", sample_alpha, "Exponents a0,a1,..")->delimiter(',');
  auto* p_opt = sample->add_option("--p", sample_p, "Probabilities p0,p1,..")->delimiter(',');
  auto* preset_opt = sample->add_option("--preset", sample_preset,
                                        "erdos-renyi | linial-meshulam | meshulam-wallach | clique");
  sample->add_option("--value", sample_value, "Free probability of the preset");
  sample->add_option("--seed", sample_seed, "Master seed");
  sample->add_option("--trial", sample_trial, "Trial index");
  sample->add_option("--out", sample_out, "Output file (stdout if omitted)");
  a_opt->excludes(p_opt)->excludes(preset_opt);
  p_opt->excludes(preset_opt);

  // betti
  auto* betti = app.add_subcommand("betti", "Homology of a complex file");
  std::string betti_file, betti_coeff = "q";
  bool betti_reduced = false;
  betti->add_option("file", betti_file)->required();
  betti->add_option("--coeff", betti_coeff, "q | gf:P | z");
  betti->add_flag("--reduced", betti_reduced, "Reduced homology");

  // boundary
  auto* boundary = app.add_subcommand("boundary", "Dump a boundary matrix as triplets");
  std::string boundary_file, boundary_out;
  int boundary_dim = 1;
  boundary->add_option("file", boundary_file)->required();
  boundary->add_option("--dim", boundary_dim, "Dimension d of the map C_d -> C_{d-1}")->required();
  boundary->add_option("--out", boundary_out, "Output file (stdout if omitted)");

  // phase
  auto* phase = app.add_subcommand("phase", "Threshold algebra on exponent vectors");
  phase->require_subcommand(1);
  auto* classify_cmd = phase->add_subcommand("classify", "Domain, margin and predictions for alpha");
  std::vector<double> classify_alpha;
  int classify_r = -1;
  classify_cmd->add_option("--alpha", classify_alpha)->delimiter(',')->required();
  classify_cmd->add_option("--r", classify_r, "Pad alpha with zeros up to length r+1");
  auto* slice_cmd = phase->add_subcommand("slice", "Domain labels on a 2D grid (CSV)");
  std::vector<double> slice_fix;
  std::vector<int> slice_axes;
  std::vector<std::string> slice_ranges;
  int slice_res = 2;
  std::string slice_out;
  slice_cmd->add_option("--fix", slice_fix, "Full exponent vector; axis entries are overwritten")
      ->delimiter(',')
      ->required();
  slice_cmd->add_option("--axes", slice_axes, "i,j")->delimiter(',')->required()->expected(2);
  slice_cmd->add_option("--range", slice_ranges, "lo1:hi1,lo2:hi2")->delimiter(',')->required()->expected(2);
  slice_cmd->add_option("--res", slice_res, "Grid points per axis")->required();
  slice_cmd->add_option("--out", slice_out, "CSV output (stdout if omitted)");

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "Probability of a complex under P_{r,p}");
  std::string measure_file;
  std::vector<std::string> measure_p;
  bool measure_exact_flag = false;
  measure_cmd->add_option("file", measure_file)->required();
  measure_cmd->add_option("--p", measure_p, "p0,p1,.. (rationals like 7/10 allowed)")->delimiter(',')->required();
  measure_cmd->add_flag("--exact", measure_exact_flag, "Exact rational arithmetic");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Seeded Monte Carlo experiment");
  std::string exp_kind, exp_out_dir = ".", exp_coeff = "q";
  std::vector<double> exp_alpha, exp_p;
  std::vector<int> exp_n_list;
  int exp_trials = 0;
  std::uint64_t exp_seed = 0;
  unsigned exp_threads = 0;
  bool exp_allow_boundary = false;
  double exp_threshold = 0.9, exp_slope_tol = 0.15;
  experiment->add_option("kind", exp_kind, "faces | domination | dimension | connectivity | probe-a | probe-b")
      ->required();
  auto* ea = experiment->add_option("--alpha", exp_alpha)->delimiter(',');
  auto* ep = experiment->add_option("--p", exp_p)->delimiter(',');
  ea->excludes(ep);
  experiment->add_option("--n-list", exp_n_list)->delimiter(',')->required();
  experiment->add_option("--trials", exp_trials)->required();
  experiment->add_option("--seed", exp_seed);
  experiment->add_option("--out-dir", exp_out_dir);
  experiment->add_option("--threads", exp_threads, "Worker threads (0: all cores)");
  experiment->add_option("--coeff", exp_coeff, "q | gf:P");
  experiment->add_option("--threshold", exp_threshold, "Frequency threshold for a.a.s. claims");
  experiment->add_option("--slope-tol", exp_slope_tol, "Allowed growth-exponent deviation");
  experiment->add_flag("--allow-boundary", exp_allow_boundary, "Accept alpha on a hyperplane");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("rsc");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample) {
      ProbabilityVector p({1.0});
      if (!sample_alpha.empty()) {
        p = probabilities_from_exponents(sample_n, ExponentVector(sample_alpha));
      } else if (!sample_p.empty()) {
        p = ProbabilityVector(sample_p);
      } else if (!sample_preset.empty()) {
        p = preset_probabilities(parse_model(sample_preset), sample_r, sample_value);
      } else {
        throw Error(ErrorCode::InvalidConfig, "one of --alpha, --p, --preset is required");
      }
      const auto y = sample_complex(sample_n, sample_r, p, Seed{sample_seed, sample_trial});
      write_text(sample_out, encode_complex(y), out);
    } else if (*betti) {
      const auto y = read_complex_file(betti_file);
      const CoefficientChoice coeff = parse_coefficients(betti_coeff);
      if (coeff.integral) {
        IntegralHomology h = integral_homology(y);
        if (betti_reduced) {
          if (y.empty()) throw Error(ErrorCode::EmptyComplex, "reduced homology of the empty complex");
          h.groups.front().free_rank -= 1;
        }
        for (std::size_t d = 0; d < h.groups.size(); ++d) {
          out << (betti_reduced ? "~H_" : "H_") << d << ": " << h.groups[d].to_string() << '\n';
        }
      } else {
        const BettiVector b = betti_reduced ? reduced_betti(y, coeff.field) : betti_numbers(y, coeff.field);
        out << b.to_string() << '\n';
      }
    } else if (*boundary) {
      const auto y = read_complex_file(boundary_file);
      write_text(boundary_out, boundary_matrix(y, boundary_dim).matrix.to_triplets(), out);
    } else if (*phase) {
      if (*classify_cmd) {
        if (classify_r >= 0) {
          if (static_cast<int>(classify_alpha.size()) > classify_r + 1) {
            throw Error(ErrorCode::InvalidConfig, "--alpha is longer than r+1");
          }
          classify_alpha.resize(static_cast<std::size_t>(classify_r) + 1, 0.0);
        }
        out << describe_alpha(ExponentVector(classify_alpha)).dump(2) << '\n';
      } else {
        SliceSpec spec;
        spec.base = slice_fix;
        spec.axis1 = slice_axes.at(0);
        spec.axis2 = slice_axes.at(1);
        std::tie(spec.lo1, spec.hi1) = parse_range(slice_ranges.at(0));
        std::tie(spec.lo2, spec.hi2) = parse_range(slice_ranges.at(1));
        spec.resolution = slice_res;
        const auto points = phase_slice(spec);
        write_text(slice_out, slice_csv(points), out);
      }
    } else if (*measure_cmd) {
      const auto y = read_complex_file(measure_file);
      const auto exact = RationalProbabilityVector::parse(measure_p);
      if (measure_exact_flag) {
        out << measure_exact(y, exact).get_str() << '\n';
      } else {
        out << format_double(measure(y, exact.to_double())) << '\n';
      }
    } else if (*experiment) {
      ExperimentConfig config;
      config.kind = parse_experiment_kind(exp_kind);
      if (!exp_alpha.empty()) config.alpha = ExponentVector(exp_alpha);
      if (!exp_p.empty()) config.p = ProbabilityVector(exp_p);
      config.n_list = exp_n_list;
      config.trials = exp_trials;
      config.seed = exp_seed;
      config.threads = exp_threads;
      config.allow_boundary = exp_allow_boundary;
      config.frequency_threshold = exp_threshold;
      config.slope_tolerance = exp_slope_tol;
      const CoefficientChoice coeff = parse_coefficients(exp_coeff);
      if (coeff.integral) throw Error(ErrorCode::InvalidConfig, "experiments take q or gf:P coefficients");
      config.coefficients = coeff.field;
      const ExperimentReport report = run_experiment(config);
      write_report(report, exp_out_dir);
      out << report.name << ": " << (report.pass ? "PASS" : "FAIL") << " (" << exp_out_dir << "/"
          << report.name << ".json)\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConsistencyGate ? kExitConsistency : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace rsc
