#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rsc/phase.hpp"
#include "rsc/sampler.hpp"

using namespace rsc;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an rsc::Error");
  return ErrorCode::ConsistencyGate;
}

std::vector<double> values(const ExponentVector& a) { return {a.values().begin(), a.values().end()}; }

// psi_k computed independently from the definition, using a Pascal triangle.
double psi_reference(int k, const std::vector<double>& alpha) {
  std::vector<double> row{1.0};
  for (int j = 0; j < k; ++j) {
    std::vector<double> next(row.size() + 1, 1.0);
    for (std::size_t i = 1; i < row.size(); ++i) next[i] = row[i - 1] + row[i];
    row = next;
  }
  double total = 0.0;
  for (int i = 0; i <= k; ++i) total += row[static_cast<std::size_t>(i)] * alpha[static_cast<std::size_t>(i)];
  return total;
}

}  // namespace

TEST_CASE("binomial coefficients") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(60, 3) == 34220);
}

TEST_CASE("psi examples") {
  const ExponentVector a({0.1, 0.2, 0.3, 0.4});
  CHECK(psi(0, a) == doctest::Approx(0.1));
  CHECK(psi(1, a) == doctest::Approx(0.3));
  CHECK(psi(2, a) == doctest::Approx(0.1 + 0.4 + 0.3));
  CHECK(psi(3, a) == doctest::Approx(0.1 + 0.6 + 0.9 + 0.4));
  for (double v : psi_all(ExponentVector({0, 0, 0}))) CHECK(v == 0.0);
  CHECK(code_of([&] { psi(4, a); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] { psi(-1, a); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("classify examples") {
  CHECK(classify(ExponentVector({0, 0, 1.5})) == DomainLabel::domain(1));
  CHECK(classify(ExponentVector({0, 0, 0.5})) == DomainLabel::domain(2));
  CHECK(classify(ExponentVector({0, 0.4, 0, 0})) == DomainLabel::domain(2));
  CHECK(classify(ExponentVector({1, 0, 0})) == DomainLabel::hyperplane(0));
  CHECK(classify(ExponentVector({1.5, 0})) == DomainLabel::domain(-1));
  CHECK(classify(ExponentVector({0, 1.2})) == DomainLabel::domain(0));
  CHECK(DomainLabel::domain(-1).to_string() == "-1");
  CHECK(DomainLabel::domain(2).to_string() == "2");
  CHECK(DomainLabel::hyperplane(1).to_string() == "H1");
}

TEST_CASE("hyperplane ties go to the smallest index") {
  // psi_0 = psi_1 = psi_2 = 1.
  CHECK(classify(ExponentVector({1, 0, 0})) == DomainLabel::hyperplane(0));
  // psi_0 = psi_1 = 1 < psi_2.
  CHECK(classify(ExponentVector({1, 0, 0.3})) == DomainLabel::hyperplane(0));
  CHECK(classify(ExponentVector({0.5, 0.5, 0.0})) == DomainLabel::hyperplane(1));
}

TEST_CASE("exact classification on rational input") {
  std::vector<mpq_class> third{0, mpq_class(1, 3), 0, 0};
  CHECK(classify_exact(third) == DomainLabel::hyperplane(3));
  std::vector<mpq_class> inside{0, mpq_class(2, 5), 0, 0};
  CHECK(classify_exact(inside) == DomainLabel::domain(2));
  std::vector<mpq_class> negative{mpq_class(-1, 2)};
  CHECK(code_of([&] { classify_exact(negative); }) == ErrorCode::NegativeExponent);
  // Tolerance matters for floats: 1/3 is not representable.
  CHECK(classify(ExponentVector({0, 1.0 / 3.0, 0, 0})) == DomainLabel::hyperplane(3));
  CHECK(classify(ExponentVector({0, 1.0 / 3.0 + 1e-9, 0, 0})) == DomainLabel::domain(2));
}

TEST_CASE("domination margin") {
  CHECK(domination_margin(ExponentVector({0.2, 0.3, 0.5})) == doctest::Approx(0.3));
  CHECK(domination_margin(ExponentVector({0, 0, 1.5})) == doctest::Approx(0.5));
  CHECK(domination_margin(ExponentVector({0, 0.5, 0})) == doctest::Approx(0.0));
}

TEST_CASE("phi map and predicted dimension") {
  CHECK(values(phi_map(ExponentVector({0, 0, 1.8})))[2] == doctest::Approx(0.6));
  const auto ones = values(phi_map(ExponentVector({1, 1, 1})));
  CHECK(ones[0] == doctest::Approx(1.0));
  CHECK(ones[1] == doctest::Approx(0.5));
  CHECK(ones[2] == doctest::Approx(1.0 / 3.0));
  for (double v : values(phi_map(ExponentVector({0, 0, 0, 0})))) CHECK(v == 0.0);

  CHECK(predicted_dimension(ExponentVector({0, 0, 1.8})) == DomainLabel::domain(2));
  CHECK(predicted_dimension(ExponentVector({0, 0, 3.3})) == DomainLabel::domain(1));
  CHECK(predicted_dimension(ExponentVector({2, 0, 0})) == DomainLabel::domain(-1));
  CHECK(predicted_dimension(ExponentVector({0, 0, 3.0})) == DomainLabel::hyperplane(2));
}

TEST_CASE("expected face counts") {
  CHECK(expected_face_count(4, 1, ProbabilityVector({1, 0.5})) == doctest::Approx(3.0));
  CHECK(expected_face_count(5, 2, ProbabilityVector({1, 1, 0.1})) == doctest::Approx(1.0));
  // C(6,3) p0^3 p1^3 p2 with p = (0.5, 0.5, 0.5).
  CHECK(expected_face_count(6, 2, ProbabilityVector({0.5, 0.5, 0.5})) ==
        doctest::Approx(20.0 * std::pow(0.5, 7)));
  CHECK(expected_face_count(2, 2, ProbabilityVector({1, 1, 1})) == 0.0);
  CHECK(code_of([] { expected_face_count(5, 3, ProbabilityVector({1, 1, 1})); }) ==
        ErrorCode::IndexOutOfRange);
}

TEST_CASE("expected face counts match exact enumeration means") {
  // E(f_l) from the formula equals the exact expectation under the measure.
  const std::vector<std::string> text{"3/5", "1/3", "1/2"};
  const auto rp = RationalProbabilityVector::parse(text);
  for (int n = 1; n <= 4; ++n) {
    std::vector<mpq_class> mean(3, 0);
    for_each_subcomplex(n, 2, [&](const SimplicialComplex& y) {
      const auto w = measure_exact(y, rp);
      const auto f = f_vector(y);
      for (int l = 0; l <= 2; ++l) mean[static_cast<std::size_t>(l)] += w * f[static_cast<std::size_t>(l)];
    });
    for (int l = 0; l <= 2; ++l) {
      CHECK(expected_face_count(n, l, rp.to_double()) ==
            doctest::Approx(mean[static_cast<std::size_t>(l)].get_d()).epsilon(1e-12));
    }
  }
}

TEST_CASE("betti predictions") {
  const auto lm = betti_prediction(100, ExponentVector({0, 0, 1.5}));
  CHECK(lm.critical_dimension == 1);
  CHECK(lm.growth_exponent == doctest::Approx(2.0));
  CHECK(lm.leading_coefficient == doctest::Approx(0.5));
  CHECK(lm.leading_estimate == doctest::Approx(5000.0));
  CHECK(lm.margin == doctest::Approx(0.5));
  CHECK(lm.domination_factor == doctest::Approx(10.0 / 6.0));

  const auto er = betti_prediction(50, ExponentVector({0, 0.4}));
  CHECK(er.critical_dimension == 1);
  CHECK(er.growth_exponent == doctest::Approx(1.6));

  const auto sparse = betti_prediction(50, ExponentVector({0, 1.2}));
  CHECK(sparse.critical_dimension == 0);
  CHECK(sparse.growth_exponent == doctest::Approx(1.0));
  CHECK(sparse.leading_coefficient == doctest::Approx(1.0));

  CHECK(code_of([] { betti_prediction(50, ExponentVector({0, 0.5, 0})); }) ==
        ErrorCode::NotInOpenDomain);
  CHECK(code_of([] { betti_prediction(50, ExponentVector({2, 0})); }) == ErrorCode::NotInOpenDomain);
}

TEST_CASE("connectivity predictions") {
  const auto a = connectivity_prediction(ExponentVector({0.3, 0.5, 0.1}));
  CHECK(a.connected == Verdict::Yes);
  CHECK(a.simply_connected == Verdict::Unknown);
  const auto b = connectivity_prediction(ExponentVector({0, 0.1, 0.2}));
  CHECK(b.connected == Verdict::Yes);
  CHECK(b.simply_connected == Verdict::Yes);
  const auto c = connectivity_prediction(ExponentVector({0.6, 0.5}));
  CHECK(c.connected == Verdict::Unknown);
  CHECK(c.simply_connected == Verdict::Unknown);
  // Simple connectivity needs a 2-dimensional cap.
  const auto d = connectivity_prediction(ExponentVector({0, 0.1}));
  CHECK(d.connected == Verdict::Yes);
  CHECK(d.simply_connected == Verdict::Unknown);
  CHECK(verdict_name(Verdict::Yes) == "yes");
  CHECK(verdict_name(Verdict::Unknown) == "unknown");
}

TEST_CASE("phase slices") {
  SliceSpec spec;
  spec.base = {0, 0, 0, 0};
  spec.axis1 = 1;
  spec.axis2 = 2;
  spec.lo1 = 0.0;
  spec.hi1 = 0.4;
  spec.lo2 = 0.0;
  spec.hi2 = 1.0;
  spec.resolution = 3;
  const auto grid = phase_slice(spec);
  REQUIRE(grid.size() == 9);
  bool found = false;
  for (const auto& pt : grid) {
    if (pt.x == doctest::Approx(0.4) && pt.y == 0.0) {
      CHECK(pt.label == DomainLabel::domain(2));
      found = true;
    }
  }
  CHECK(found);

  SliceSpec lm;
  lm.base = {0, 0, 0};
  lm.axis1 = 1;
  lm.axis2 = 2;
  lm.lo1 = 0.0;
  lm.hi1 = 1.2;
  lm.lo2 = 0.5;
  lm.hi2 = 1.5;
  lm.resolution = 2;
  const auto corners = phase_slice(lm);
  REQUIRE(corners.size() == 4);
  for (const auto& pt : corners) {
    if (pt.x == 0.0 && pt.y == doctest::Approx(1.5)) CHECK(pt.label == DomainLabel::domain(1));
    if (pt.x == doctest::Approx(1.2) && pt.y == doctest::Approx(0.5)) {
      CHECK(pt.label == DomainLabel::domain(0));
    }
  }

  const auto csv = slice_csv(corners);
  CHECK(csv.rfind("axis1,axis2,label\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  SliceSpec bad = lm;
  bad.axis2 = 1;
  CHECK(code_of([&] { phase_slice(bad); }) == ErrorCode::InvalidAxes);
  bad = lm;
  bad.axis2 = 3;
  CHECK(code_of([&] { phase_slice(bad); }) == ErrorCode::InvalidAxes);
  bad = lm;
  bad.resolution = 1;
  CHECK(code_of([&] { phase_slice(bad); }) == ErrorCode::InvalidAxes);
}

TEST_CASE("property: psi agrees with a Pascal-triangle reference and is monotone") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const int r = 1 + static_cast<int>(rng() % 5);
    std::vector<double> a(static_cast<std::size_t>(r) + 1);
    for (auto& v : a) v = unit(rng) * (rng() % 3 == 0 ? 0.0 : 1.0);
    const ExponentVector alpha(a);
    const auto all = psi_all(alpha);
    for (int k = 0; k <= r; ++k) {
      CHECK(all[static_cast<std::size_t>(k)] == doctest::Approx(psi_reference(k, a)));
      if (k > 0) CHECK(all[static_cast<std::size_t>(k) - 1] <= all[static_cast<std::size_t>(k)]);
    }
  }
}

TEST_CASE("property: strictness propagates up the chain") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const int r = 2 + static_cast<int>(rng() % 4);
    const int zeros = static_cast<int>(rng() % static_cast<unsigned>(r + 1));
    std::vector<double> a(static_cast<std::size_t>(r) + 1, 0.0);
    for (int i = zeros; i <= r; ++i) a[static_cast<std::size_t>(i)] = unit(rng) < 0.5 ? 0.0 : unit(rng);
    const auto all = psi_all(ExponentVector(a));
    for (int j = 0; j < r; ++j) {
      if (all[static_cast<std::size_t>(j)] < all[static_cast<std::size_t>(j) + 1]) {
        for (int i = j; i < r; ++i) {
          CHECK(all[static_cast<std::size_t>(i)] < all[static_cast<std::size_t>(i) + 1]);
        }
        break;
      }
    }
  }
}

TEST_CASE("property: domains partition the orthant off the hyperplanes") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(0.0, 1.2);
  for (int t = 0; t < 1000; ++t) {
    const int r = 1 + static_cast<int>(rng() % 4);
    std::vector<double> a(static_cast<std::size_t>(r) + 1);
    for (auto& v : a) v = unit(rng) / (1 + static_cast<double>(rng() % 3));
    const ExponentVector alpha(a);
    const auto label = classify(alpha);
    const auto all = psi_all(alpha);
    const double margin = domination_margin(alpha);
    if (label.is_domain()) {
      CHECK(margin > 0.0);
      const int k = label.index;
      int matches = 0;
      for (int j = -1; j <= r; ++j) {
        const bool below = j < 0 || all[static_cast<std::size_t>(j)] < 1.0;
        const bool above = j == r || all[static_cast<std::size_t>(j) + 1] > 1.0;
        if (below && above) {
          ++matches;
          CHECK(j == k);
        }
      }
      CHECK(matches == 1);
    } else {
      CHECK(margin <= kDefaultHyperplaneTolerance);
    }
  }
}

TEST_CASE("property: Case II scan matches the closed-form intervals") {
  for (int r = 2; r <= 5; ++r) {
    for (int s = 0; s < 1000; ++s) {
      const double a1 = 0.001 + 1.2 * s / 1000.0;
      std::vector<double> a(static_cast<std::size_t>(r) + 1, 0.0);
      a[1] = a1;
      const auto label = classify(ExponentVector(a));
      // psi_k = k * a1, so the domain is the i with 1/(i+1) < a1 < 1/i.
      bool on_boundary = false;
      for (int i = 1; i <= r; ++i) on_boundary = on_boundary || std::abs(i * a1 - 1.0) < 1e-12;
      if (on_boundary) {
        CHECK_FALSE(label.is_domain());
        continue;
      }
      int expected = r;
      if (a1 > 1.0) {
        expected = 0;
      } else {
        for (int i = 1; i < r; ++i) {
          if (1.0 / (i + 1) < a1 && a1 < 1.0 / i) expected = i;
        }
      }
      CHECK(label == DomainLabel::domain(expected));
    }
  }
}
