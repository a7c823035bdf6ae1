#include "rsc/phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rsc {

std::string DomainLabel::to_string() const {
  if (kind == Kind::Hyperplane) return "H" + std::to_string(index);
  return std::to_string(index);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

double psi(int k, const ExponentVector& alpha) { return psi_value<double>(k, alpha.values()); }

std::vector<double> psi_all(const ExponentVector& alpha) {
  std::vector<double> out;
  for (int k = 0; k <= alpha.r(); ++k) out.push_back(psi(k, alpha));
  return out;
}

DomainLabel classify(const ExponentVector& alpha, double tolerance) {
  if (tolerance < 0.0) throw Error(ErrorCode::InvalidConfig, "tolerance must be >= 0");
  return classify_values<double>(alpha.values(), tolerance);
}

DomainLabel classify_exact(std::span<const mpq_class> alpha) {
  if (alpha.empty()) throw Error(ErrorCode::NegativeExponent, "empty exponent vector");
  for (const auto& a : alpha) {
    if (a < 0) throw Error(ErrorCode::NegativeExponent, "exponent " + a.get_str() + " is not >= 0");
  }
  return classify_values<mpq_class>(alpha, mpq_class(0));
}

double domination_margin(const ExponentVector& alpha) {
  double margin = std::numeric_limits<double>::infinity();
  for (double value : psi_all(alpha)) margin = std::min(margin, std::abs(1.0 - value));
  return margin;
}

ExponentVector phi_map(const ExponentVector& alpha) {
  std::vector<double> out;
  for (int i = 0; i <= alpha.r(); ++i) out.push_back(alpha[i] / static_cast<double>(i + 1));
  return ExponentVector(std::move(out));
}

DomainLabel predicted_dimension(const ExponentVector& alpha, double tolerance) {
  return classify(phi_map(alpha), tolerance);
}

double expected_face_count(int n, int ell, const ProbabilityVector& p) {
  if (ell < 0 || ell > p.r()) {
    throw Error(ErrorCode::IndexOutOfRange, "face dimension " + std::to_string(ell) + " outside 0..r");
  }
  const auto size = static_cast<std::uint64_t>(ell) + 1;
  if (n < 0 || static_cast<std::uint64_t>(n) < size) return 0.0;
  double count = 1.0;
  for (std::uint64_t i = 1; i <= size; ++i) {
    count *= static_cast<double>(static_cast<std::uint64_t>(n) - size + i) / static_cast<double>(i);
  }
  for (int i = 0; i <= ell; ++i) {
    const auto exponent = binomial(size, static_cast<std::uint64_t>(i) + 1);
    count *= std::pow(p.p(i), static_cast<double>(exponent));
  }
  return count;
}

BettiPrediction betti_prediction(int n, const ExponentVector& alpha) {
  const DomainLabel label = classify(alpha);
  if (!label.is_domain() || label.index < 0) {
    throw Error(ErrorCode::NotInOpenDomain, "alpha lies in " + label.to_string());
  }
  const int k = label.index;
  BettiPrediction out;
  out.critical_dimension = k;
  double psi_sum = 0.0;
  for (int i = 0; i <= k; ++i) psi_sum += psi(i, alpha);
  out.growth_exponent = static_cast<double>(k + 1) - psi_sum;
  double factorial = 1.0;
  for (int i = 2; i <= k + 1; ++i) factorial *= i;
  out.leading_coefficient = 1.0 / factorial;
  out.margin = domination_margin(alpha);
  out.leading_estimate = out.leading_coefficient * std::pow(static_cast<double>(n), out.growth_exponent);
  double r_factorial = 1.0;
  for (int i = 2; i <= alpha.r() + 1; ++i) r_factorial *= i;
  out.domination_factor = std::pow(static_cast<double>(n), out.margin) / r_factorial;
  return out;
}

std::string_view verdict_name(Verdict v) { return v == Verdict::Yes ? "yes" : "unknown"; }

ConnectivityPrediction connectivity_prediction(const ExponentVector& alpha) {
  ConnectivityPrediction out;
  const int r = alpha.r();
  if (r >= 1 && alpha[0] + alpha[1] < 1.0) out.connected = Verdict::Yes;
  if (r >= 2 && alpha[0] + 3.0 * alpha[1] + 2.0 * alpha[2] < 1.0) out.simply_connected = Verdict::Yes;
  return out;
}

std::vector<SlicePoint> phase_slice(const SliceSpec& spec) {
  const int size = static_cast<int>(spec.base.size());
  if (spec.axis1 == spec.axis2 || spec.axis1 < 0 || spec.axis2 < 0 || spec.axis1 >= size ||
      spec.axis2 >= size) {
    throw Error(ErrorCode::InvalidAxes, "need two distinct axes within 0.." + std::to_string(size - 1));
  }
  if (spec.resolution < 2) throw Error(ErrorCode::InvalidAxes, "resolution must be at least 2");
  std::vector<SlicePoint> out;
  out.reserve(static_cast<std::size_t>(spec.resolution) * static_cast<std::size_t>(spec.resolution));
  std::vector<double> alpha = spec.base;
  const double steps = spec.resolution - 1;
  for (int a = 0; a < spec.resolution; ++a) {
    const double x = spec.lo1 + (spec.hi1 - spec.lo1) * a / steps;
    for (int b = 0; b < spec.resolution; ++b) {
      const double y = spec.lo2 + (spec.hi2 - spec.lo2) * b / steps;
      alpha[static_cast<std::size_t>(spec.axis1)] = x;
      alpha[static_cast<std::size_t>(spec.axis2)] = y;
      out.push_back({x, y, classify(ExponentVector(alpha), spec.tolerance)});
    }
  }
  return out;
}

std::string slice_csv(std::span<const SlicePoint> points) {
  std::string out = "axis1,axis2,label\n";
  char buffer[96];
  for (const auto& pt : points) {
    std::snprintf(buffer, sizeof buffer, "%.10g,%.10g,", pt.x, pt.y);
    out += buffer;
    out += pt.label.to_string();
    out += '\n';
  }
  return out;
}

}  // namespace rsc
