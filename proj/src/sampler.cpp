#include "rsc/sampler.hpp"

#include <cmath>

namespace rsc {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

mpq_class parse_rational(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    mpq_class value;
    if (value.set_str(text, 10) != 0) {
      throw Error(ErrorCode::InvalidProbability, "cannot parse '" + text + "' as a rational");
    }
    value.canonicalize();
    return value;
  }
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  mpz_class numerator, denominator;
  if (numerator.set_str(whole + frac, 10) != 0 || frac.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::InvalidProbability, "cannot parse '" + text + "' as a decimal");
  }
  mpz_ui_pow_ui(denominator.get_mpz_t(), 10, frac.size());
  mpq_class value(numerator, denominator);
  value.canonicalize();
  return value;
}

double power(double base, std::int64_t exponent) {
  if (exponent == 0) return 1.0;
  return std::pow(base, static_cast<double>(exponent));
}

mpq_class power(const mpq_class& base, std::int64_t exponent) {
  mpq_class out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  out.canonicalize();
  return out;
}

void check_rank(int r, int expected) {
  if (r != expected) {
    throw Error(ErrorCode::InvalidConfig, "probability vector has length " + std::to_string(r + 1) +
                                              ", expected " + std::to_string(expected + 1));
  }
}

}  // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::InvalidProbability, "empty probability vector");
  for (double p : values_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::InvalidProbability, "probability " + std::to_string(p) + " outside [0,1]");
    }
  }
}

RationalProbabilityVector::RationalProbabilityVector(std::vector<mpq_class> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::InvalidProbability, "empty probability vector");
  for (auto& p : values_) {
    p.canonicalize();
    if (p < 0 || p > 1) {
      throw Error(ErrorCode::InvalidProbability, "probability " + p.get_str() + " outside [0,1]");
    }
  }
}

RationalProbabilityVector RationalProbabilityVector::parse(std::span<const std::string> entries) {
  std::vector<mpq_class> values;
  values.reserve(entries.size());
  for (const auto& e : entries) values.push_back(parse_rational(e));
  return RationalProbabilityVector(std::move(values));
}

ProbabilityVector RationalProbabilityVector::to_double() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const auto& p : values_) out.push_back(p.get_d());
  return ProbabilityVector(std::move(out));
}

ExponentVector::ExponentVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::NegativeExponent, "empty exponent vector");
  for (double a : values_) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::NegativeExponent, "exponent " + std::to_string(a) + " is not >= 0");
    }
  }
}

ProbabilityVector probabilities_from_exponents(int n, const ExponentVector& alpha) {
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "n must be at least 1");
  std::vector<double> p;
  p.reserve(alpha.values().size());
  const double log_n = std::log(static_cast<double>(n));
  for (double a : alpha.values()) p.push_back(a == 0.0 ? 1.0 : std::exp(-a * log_n));
  return ProbabilityVector(std::move(p));
}

double candidate_uniform(const Seed& seed, std::span<const Vertex> simplex) noexcept {
  std::uint64_t h = splitmix64(seed.master);
  h = splitmix64(h ^ seed.trial);
  h = splitmix64(h ^ static_cast<std::uint64_t>(simplex.size()));
  for (Vertex v : simplex) h = splitmix64(h ^ v);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SimplicialComplex sample_complex(int n, int r, const ProbabilityVector& p, const Seed& seed) {
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "n must be at least 1");
  check_rank(p.r(), r);

  std::vector<FaceTable> levels;
  levels.reserve(static_cast<std::size_t>(r) + 1);

  std::vector<Vertex> flat;
  for (Vertex v = 1; v <= static_cast<Vertex>(n); ++v) {
    if (candidate_uniform(seed, std::span<const Vertex>(&v, 1)) < p.p(0)) flat.push_back(v);
  }
  levels.push_back(FaceTable::from_unsorted(0, std::move(flat)));

  std::vector<std::vector<Vertex>> adjacency;
  for (int d = 1; d <= r; ++d) {
    if (d == 2) adjacency = adjacency_lists(n, levels[1]);
    const double threshold = p.p(d);
    std::vector<Vertex> kept;
    if (threshold > 0.0) {
      for_each_supported_simplex(levels.back(), adjacency, [&](std::span<const Vertex> s) {
        if (candidate_uniform(seed, s) < threshold) kept.insert(kept.end(), s.begin(), s.end());
      });
    }
    levels.push_back(FaceTable::from_unsorted(d, std::move(kept)));
  }
  return SimplicialComplex::from_levels(n, r, std::move(levels));
}

double measure(const SimplicialComplex& complex, const ProbabilityVector& p) {
  check_rank(p.r(), complex.r());
  const FVector f = f_vector(complex);
  const ExternalVector e = external_face_counts(complex);
  double value = 1.0;
  for (int i = 0; i <= complex.r(); ++i) {
    value *= power(p.p(i), f[static_cast<std::size_t>(i)]) * power(p.q(i), e[static_cast<std::size_t>(i)]);
  }
  return value;
}

mpq_class measure_exact(const SimplicialComplex& complex, const RationalProbabilityVector& p) {
  check_rank(p.r(), complex.r());
  const FVector f = f_vector(complex);
  const ExternalVector e = external_face_counts(complex);
  mpq_class value = 1;
  for (int i = 0; i <= complex.r(); ++i) {
    value *= power(p.p(i), f[static_cast<std::size_t>(i)]) * power(p.q(i), e[static_cast<std::size_t>(i)]);
  }
  return value;
}

namespace {

void enumerate_level(int n, int r, int d, std::vector<FaceTable>& levels,
                     const std::function<void(const SimplicialComplex&)>& visit) {
  if (d > r) {
    visit(SimplicialComplex::from_levels(n, r, levels));
    return;
  }
  std::vector<std::vector<Vertex>> candidates;
  if (d == 0) {
    for (Vertex v = 1; v <= static_cast<Vertex>(n); ++v) candidates.push_back({v});
  } else {
    const auto adjacency = adjacency_lists(n, levels.size() > 1 ? levels[1] : FaceTable(1));
    for_each_supported_simplex(levels.back(), adjacency, [&](std::span<const Vertex> s) {
      candidates.emplace_back(s.begin(), s.end());
    });
  }
  if (candidates.size() >= 63) {
    throw Error(ErrorCode::TooLargeToEnumerate, "too many candidate faces at one level");
  }
  const std::uint64_t masks = std::uint64_t{1} << candidates.size();
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    std::vector<Vertex> flat;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (mask & (std::uint64_t{1} << k)) flat.insert(flat.end(), candidates[k].begin(), candidates[k].end());
    }
    levels.push_back(FaceTable::from_unsorted(d, std::move(flat)));
    enumerate_level(n, r, d + 1, levels, visit);
    levels.pop_back();
  }
}

}  // namespace

void for_each_subcomplex(int n, int r, const std::function<void(const SimplicialComplex&)>& visit,
                         int cap) {
  if (n > cap) {
    throw Error(ErrorCode::TooLargeToEnumerate,
                "n=" + std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap));
  }
  if (n < 0 || r < 0) throw Error(ErrorCode::InvalidConfig, "n and r must be nonnegative");
  std::vector<FaceTable> levels;
  enumerate_level(n, r, 0, levels, visit);
}

std::vector<SimplicialComplex> enumerate_subcomplexes(int n, int r, int cap) {
  std::vector<SimplicialComplex> out;
  for_each_subcomplex(n, r, [&](const SimplicialComplex& y) { out.push_back(y); }, cap);
  return out;
}

Model parse_model(std::string_view name) {
  if (name == "erdos-renyi") return Model::ErdosRenyi;
  if (name == "linial-meshulam") return Model::LinialMeshulam;
  if (name == "meshulam-wallach") return Model::MeshulamWallach;
  if (name == "clique") return Model::Clique;
  throw Error(ErrorCode::InvalidConfig, "unknown model '" + std::string(name) + "'");
}

std::string_view model_name(Model model) {
  switch (model) {
    case Model::ErdosRenyi: return "erdos-renyi";
    case Model::LinialMeshulam: return "linial-meshulam";
    case Model::MeshulamWallach: return "meshulam-wallach";
    case Model::Clique: return "clique";
  }
  return "unknown";
}

namespace {

// `value` in the model's free slot, `filler` everywhere else.
std::vector<double> preset_pattern(Model model, int r, double value, double filler) {
  int slot = 0;
  switch (model) {
    case Model::ErdosRenyi:
      if (r != 1) throw Error(ErrorCode::InvalidModelRank, "erdos-renyi requires r=1");
      slot = 1;
      break;
    case Model::LinialMeshulam:
      if (r != 2) throw Error(ErrorCode::InvalidModelRank, "linial-meshulam requires r=2");
      slot = 2;
      break;
    case Model::MeshulamWallach:
      if (r < 1) throw Error(ErrorCode::InvalidModelRank, "meshulam-wallach requires r>=1");
      slot = r;
      break;
    case Model::Clique:
      if (r < 1) throw Error(ErrorCode::InvalidModelRank, "clique requires r>=1");
      slot = 1;
      break;
  }
  std::vector<double> out(static_cast<std::size_t>(r) + 1, filler);
  out[static_cast<std::size_t>(slot)] = value;
  return out;
}

}  // namespace

ProbabilityVector preset_probabilities(Model model, int r, double value) {
  return ProbabilityVector(preset_pattern(model, r, value, 1.0));
}

ExponentVector preset_exponents(Model model, int r, double value) {
  return ExponentVector(preset_pattern(model, r, value, 0.0));
}

}  // namespace rsc
