#pragma once

// Threshold algebra on exponent vectors alpha (p_i = n^-alpha_i): the linear
// forms psi_k, the open domains D_k between consecutive hyperplanes
// psi_k = 1, the domination margin, the dimension rescaling, and the
// asymptotic predictions derived from them.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rsc/sampler.hpp"

namespace rsc {

inline constexpr double kDefaultHyperplaneTolerance = 1e-12;

/// Either the open domain D_k (k in -1..r) or the hyperplane psi_j = 1.
struct DomainLabel {
  enum class Kind { Domain, Hyperplane };

  Kind kind = Kind::Domain;
  int index = 0;

  static DomainLabel domain(int k) { return {Kind::Domain, k}; }
  static DomainLabel hyperplane(int j) { return {Kind::Hyperplane, j}; }

  bool is_domain() const noexcept { return kind == Kind::Domain; }
  /// "k" for D_k (so "-1" for the empty regime), "H<j>" for a hyperplane.
  std::string to_string() const;

  bool operator==(const DomainLabel&) const = default;
};

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// psi_k(alpha) = sum_i C(k, i) alpha_i.
template <class T>
T psi_value(int k, std::span<const T> alpha) {
  const int r = static_cast<int>(alpha.size()) - 1;
  if (k < 0 || k > r) {
    throw Error(ErrorCode::IndexOutOfRange, "psi index " + std::to_string(k) + " outside 0..r");
  }
  T total = 0;
  for (int i = 0; i <= k; ++i) {
    total += T(static_cast<unsigned long>(binomial(static_cast<std::uint64_t>(k),
                                                   static_cast<std::uint64_t>(i)))) *
             alpha[static_cast<std::size_t>(i)];
  }
  return total;
}

/// Hyperplane test first (smallest j with |psi_j - 1| <= tolerance), then the
/// domain bracketing 1 in the monotone chain psi_0 <= ... <= psi_r.
template <class T>
DomainLabel classify_values(std::span<const T> alpha, const T& tolerance) {
  const int r = static_cast<int>(alpha.size()) - 1;
  std::vector<T> psi;
  psi.reserve(alpha.size());
  for (int k = 0; k <= r; ++k) psi.push_back(psi_value<T>(k, alpha));
  for (int j = 0; j <= r; ++j) {
    T gap = psi[static_cast<std::size_t>(j)] - 1;
    if (gap < 0) gap = -gap;
    if (gap <= tolerance) return DomainLabel::hyperplane(j);
  }
  if (psi.front() > 1) return DomainLabel::domain(-1);
  if (psi.back() < 1) return DomainLabel::domain(r);
  for (int k = 0; k < r; ++k) {
    if (psi[static_cast<std::size_t>(k)] < 1 && 1 < psi[static_cast<std::size_t>(k) + 1]) {
      return DomainLabel::domain(k);
    }
  }
  throw Error(ErrorCode::ConsistencyGate, "psi chain is not monotone");
}

double psi(int k, const ExponentVector& alpha);
std::vector<double> psi_all(const ExponentVector& alpha);

DomainLabel classify(const ExponentVector& alpha, double tolerance = kDefaultHyperplaneTolerance);
/// Exact comparisons; zero tolerance.
DomainLabel classify_exact(std::span<const mpq_class> alpha);

/// e(alpha) = min_k |1 - psi_k(alpha)|.
double domination_margin(const ExponentVector& alpha);

/// alpha_i -> alpha_i / (i + 1).
ExponentVector phi_map(const ExponentVector& alpha);

/// Label of phi_map(alpha): D_k means dimension k a.a.s. (D_-1: empty
/// complex); a hyperplane label means phi_map(alpha) is on a boundary.
DomainLabel predicted_dimension(const ExponentVector& alpha,
                                double tolerance = kDefaultHyperplaneTolerance);

/// E(f_l) = C(n, l+1) * prod_{i<=l} p_i^C(l+1, i+1).
double expected_face_count(int n, int ell, const ProbabilityVector& p);

struct BettiPrediction {
  int critical_dimension = 0;
  double growth_exponent = 0.0;      // k + 1 - sum_{i<=k} psi_i
  double leading_coefficient = 0.0;  // 1 / (k+1)!
  double margin = 0.0;               // e(alpha)
  double leading_estimate = 0.0;     // coefficient * n^exponent
  double domination_factor = 0.0;    // n^e(alpha) / (r+1)!
};

BettiPrediction betti_prediction(int n, const ExponentVector& alpha);

enum class Verdict { Yes, Unknown };
std::string_view verdict_name(Verdict v);

/// One-sided: the sufficient conditions alpha_0 + alpha_1 < 1 (r >= 1) for
/// connectivity and alpha_0 + 3 alpha_1 + 2 alpha_2 < 1 (r >= 2) for simple
/// connectivity. Anything else is Unknown.
struct ConnectivityPrediction {
  Verdict connected = Verdict::Unknown;
  Verdict simply_connected = Verdict::Unknown;
};

ConnectivityPrediction connectivity_prediction(const ExponentVector& alpha);

struct SliceSpec {
  std::vector<double> base;  // full exponent vector; the two axes are overwritten
  int axis1 = 0;
  int axis2 = 1;
  double lo1 = 0.0, hi1 = 1.0;
  double lo2 = 0.0, hi2 = 1.0;
  int resolution = 2;
  double tolerance = kDefaultHyperplaneTolerance;
};

struct SlicePoint {
  double x = 0.0;
  double y = 0.0;
  DomainLabel label;
};

std::vector<SlicePoint> phase_slice(const SliceSpec& spec);
/// Header `axis1,axis2,label`.
std::string slice_csv(std::span<const SlicePoint> points);

}  // namespace rsc
