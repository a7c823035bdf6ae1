#pragma once

// Random complexes drawn from the multi-parameter measure on subcomplexes of
// the r-skeleton of the (n-1)-simplex, plus exact evaluation of that measure
// and brute-force enumeration of the whole sample space for tiny n.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "rsc/complex.hpp"

namespace rsc {

/// (p_0, ..., p_r) with every entry in [0, 1]; q_i = 1 - p_i.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> values);

  int r() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double p(int i) const { return values_.at(static_cast<std::size_t>(i)); }
  double q(int i) const { return 1.0 - p(i); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Exact counterpart of ProbabilityVector for oracle-grade computations.
class RationalProbabilityVector {
 public:
  explicit RationalProbabilityVector(std::vector<mpq_class> values);
  /// Parses entries like "7/10", "1/2", "1", "0.25".
  static RationalProbabilityVector parse(std::span<const std::string> entries);

  int r() const noexcept { return static_cast<int>(values_.size()) - 1; }
  const mpq_class& p(int i) const { return values_.at(static_cast<std::size_t>(i)); }
  mpq_class q(int i) const { return 1 - p(i); }
  ProbabilityVector to_double() const;

 private:
  std::vector<mpq_class> values_;
};

/// (alpha_0, ..., alpha_r), all nonnegative.
class ExponentVector {
 public:
  explicit ExponentVector(std::vector<double> values);

  int r() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// A sample is a pure function of (master, trial).
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;
};

/// p_i = n^(-alpha_i).
ProbabilityVector probabilities_from_exponents(int n, const ExponentVector& alpha);

/// The uniform in [0, 1) attached to one candidate simplex. It depends only on
/// the seed and the vertex tuple, so samples do not depend on iteration order
/// and raising any p_i can only add faces.
double candidate_uniform(const Seed& seed, std::span<const Vertex> simplex) noexcept;

/// Level-wise sampler: vertices kept with probability p_0, then every
/// i-simplex whose facets are all present is kept with probability p_i.
SimplicialComplex sample_complex(int n, int r, const ProbabilityVector& p, const Seed& seed);

/// prod p_i^f_i * prod q_i^e_i with 0^0 = 1.
double measure(const SimplicialComplex& complex, const ProbabilityVector& p);
mpq_class measure_exact(const SimplicialComplex& complex, const RationalProbabilityVector& p);

inline constexpr int kDefaultEnumerationCap = 4;

/// Visits every subcomplex of the r-skeleton of the simplex on n vertices
/// exactly once.
void for_each_subcomplex(int n, int r, const std::function<void(const SimplicialComplex&)>& visit,
                         int cap = kDefaultEnumerationCap);
std::vector<SimplicialComplex> enumerate_subcomplexes(int n, int r,
                                                      int cap = kDefaultEnumerationCap);

enum class Model { ErdosRenyi, LinialMeshulam, MeshulamWallach, Clique };

Model parse_model(std::string_view name);
std::string_view model_name(Model model);

/// Probability pattern of a classical special case with `value` in its free
/// slot: ER (1, p), LM (1, 1, p), MW (1, ..., 1, p), clique (1, p, 1, ..., 1).
ProbabilityVector preset_probabilities(Model model, int r, double value);
/// Same patterns in exponent form (probability 1 is exponent 0).
ExponentVector preset_exponents(Model model, int r, double value);

}  // namespace rsc
