#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "rsc/complex.hpp"
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

RationalProbabilityVector rationals(std::initializer_list<const char*> entries) {
  std::vector<std::string> text(entries.begin(), entries.end());
  return RationalProbabilityVector::parse(text);
}

bool is_subcomplex(const SimplicialComplex& a, const SimplicialComplex& b) {
  for (int d = 0; d <= a.r(); ++d) {
    for (const auto& s : a.simplices(d)) {
      if (!b.contains(s)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("probability and exponent vectors validate their entries") {
  CHECK(code_of([] { ProbabilityVector p({0.5, 1.5}); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { ProbabilityVector p({-0.1}); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { ProbabilityVector p(std::vector<double>{}); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { ExponentVector a({0.0, -1.0}); }) == ErrorCode::NegativeExponent);
  CHECK(code_of([] { rationals({"3/2"}); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { rationals({"x"}); }) == ErrorCode::InvalidProbability);

  const auto q = rationals({"7/10", "0.25", "1"});
  CHECK(q.p(0) == mpq_class(7, 10));
  CHECK(q.p(1) == mpq_class(1, 4));
  CHECK(q.q(2) == 0);
  CHECK(q.to_double().p(0) == doctest::Approx(0.7));
}

TEST_CASE("probabilities from exponents") {
  const auto lm = probabilities_from_exponents(100, ExponentVector({0, 0, 1.5}));
  CHECK(lm.p(0) == 1.0);
  CHECK(lm.p(1) == 1.0);
  CHECK(lm.p(2) == doctest::Approx(0.001).epsilon(1e-12));

  for (int n : {1, 7, 1000}) {
    const auto p = probabilities_from_exponents(n, ExponentVector({0, 0, 0, 0}));
    for (double v : p.values()) CHECK(v == 1.0);
  }

  const auto er = probabilities_from_exponents(10, ExponentVector({1, 0}));
  CHECK(er.p(0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(er.p(1) == 1.0);
}

TEST_CASE("sampler extremes") {
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto full = sample_complex(6, 2, ProbabilityVector({1, 1, 1}), Seed{t, t});
    CHECK(f_vector(full) == FVector{6, 15, 20});
    const auto none = sample_complex(6, 2, ProbabilityVector({0, 1, 1}), Seed{t, t});
    CHECK(none.empty());
    CHECK(f_vector(none) == FVector{0, 0, 0});
  }
}

TEST_CASE("sampler is deterministic in the seed") {
  const ProbabilityVector p({0.8, 0.4, 0.3});
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto a = sample_complex(12, 2, p, Seed{42, t});
    const auto b = sample_complex(12, 2, p, Seed{42, t});
    CHECK(encode_complex(a) == encode_complex(b));
  }
  int differing = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    differing += sample_complex(12, 2, p, Seed{42, t}) != sample_complex(12, 2, p, Seed{43, t});
  }
  CHECK(differing > 15);
}

TEST_CASE("candidate uniforms lie in [0, 1) and look uniform") {
  double sum = 0.0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) {
    const Vertex a = static_cast<Vertex>(1 + i % 97);
    const Vertex b = static_cast<Vertex>(200 + i);
    const Vertex face[2] = {a, b};
    const double u = candidate_uniform(Seed{9, 3}, face);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  // Mean of 20000 uniforms has standard deviation ~0.002.
  CHECK(std::abs(sum / count - 0.5) < 0.01);
}

TEST_CASE("property: monotone coupling") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const int r = 1 + static_cast<int>(t % 3);
    std::vector<double> lo(static_cast<std::size_t>(r) + 1), hi(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] = unit(rng);
      hi[i] = lo[i] + (1.0 - lo[i]) * unit(rng);
    }
    const Seed seed{123, t};
    const auto small = sample_complex(10, r, ProbabilityVector(lo), seed);
    const auto large = sample_complex(10, r, ProbabilityVector(hi), seed);
    CHECK(is_subcomplex(small, large));
  }
}

TEST_CASE("measure examples") {
  const auto half = rationals({"1/2", "1/2"});
  const auto edge = build_complex(2, 1, {{1, 2}});
  CHECK(measure_exact(edge, half) == mpq_class(1, 8));
  CHECK(measure(edge, half.to_double()) == doctest::Approx(0.125));

  const SimplicialComplex empty(2, 1);
  CHECK(measure_exact(empty, half) == mpq_class(1, 4));
  CHECK(measure(empty, half.to_double()) == doctest::Approx(0.25));

  const auto zero_edge = rationals({"1/2", "0"});
  const auto vertex = build_complex(2, 1, {{1}});
  CHECK(measure_exact(vertex, zero_edge) == mpq_class(1, 4));
  CHECK(measure(vertex, zero_edge.to_double()) == doctest::Approx(0.25));

  CHECK(code_of([&] { measure(edge, ProbabilityVector({0.5, 0.5, 0.5})); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_subcomplexes(2, 1).size() == 5);
  CHECK(enumerate_subcomplexes(3, 1).size() == 18);
  CHECK(enumerate_subcomplexes(3, 2).size() == 19);
  // Independent count for n = 3, r = 1: sum over vertex subsets S of 2^(edges on S).
  std::size_t expected = 0;
  for (unsigned mask = 0; mask < 8; ++mask) {
    const int k = std::popcount(mask);
    expected += std::size_t{1} << (k * (k - 1) / 2);
  }
  CHECK(expected == 18);
  CHECK(code_of([] { enumerate_subcomplexes(5, 1); }) == ErrorCode::TooLargeToEnumerate);
}

TEST_CASE("enumeration matches power-set filtering") {
  for (int n = 1; n <= 4; ++n) {
    for (int r = 0; r <= std::min(n - 1, 3); ++r) {
      std::set<std::set<oracle::Face>> got;
      std::size_t visits = 0;
      for_each_subcomplex(n, r, [&](const SimplicialComplex& y) {
        got.insert(oracle::face_set(y));
        ++visits;
      });
      const auto expected = oracle::brute_force_subcomplexes(n, r);
      CHECK(visits == expected.size());
      CHECK(got == std::set<std::set<oracle::Face>>(expected.begin(), expected.end()));
    }
  }
}

TEST_CASE("property: exact normalization over the whole sample space") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 12; ++round) {
    const int n = 1 + round % 4;
    const int r = round % 3;
    std::vector<mpq_class> p;
    for (int i = 0; i <= r; ++i) {
      const long den = 2 + static_cast<long>(rng() % 9);
      p.emplace_back(static_cast<long>(rng() % static_cast<unsigned long>(den + 1)), den);
      p.back().canonicalize();
    }
    const RationalProbabilityVector rp(p);
    mpq_class total = 0;
    for_each_subcomplex(n, r, [&](const SimplicialComplex& y) { total += measure_exact(y, rp); });
    CHECK(total == 1);
  }
}

TEST_CASE("empirical frequencies track the measure at n = 3") {
  const auto rp = rationals({"7/10", "1/2"});
  const auto p = rp.to_double();
  std::map<std::string, int> counts;
  const int samples = 40000;
  for (int t = 0; t < samples; ++t) {
    ++counts[encode_complex(sample_complex(3, 1, p, Seed{5, static_cast<std::uint64_t>(t)}))];
  }
  double tv = 0.0;
  std::size_t space = 0;
  for_each_subcomplex(3, 1, [&](const SimplicialComplex& y) {
    ++space;
    const double exact = measure_exact(y, rp).get_d();
    const auto it = counts.find(encode_complex(y));
    const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / samples;
    tv += std::abs(freq - exact);
  });
  CHECK(space == 18);
  CHECK(counts.size() <= 18);
  // Looser than the acceptance run (200k samples, 0.01); expected TV here is ~0.01.
  CHECK(0.5 * tv < 0.02);
}

TEST_CASE("model presets") {
  const auto lm = preset_probabilities(Model::LinialMeshulam, 2, 0.01);
  CHECK(std::vector<double>(lm.values().begin(), lm.values().end()) ==
        std::vector<double>{1, 1, 0.01});
  const auto er = preset_probabilities(Model::ErdosRenyi, 1, 0.3);
  CHECK(std::vector<double>(er.values().begin(), er.values().end()) == std::vector<double>{1, 0.3});
  const auto clique = preset_probabilities(Model::Clique, 3, 0.5);
  CHECK(std::vector<double>(clique.values().begin(), clique.values().end()) ==
        std::vector<double>{1, 0.5, 1, 1});
  const auto mw = preset_probabilities(Model::MeshulamWallach, 3, 0.2);
  CHECK(std::vector<double>(mw.values().begin(), mw.values().end()) ==
        std::vector<double>{1, 1, 1, 0.2});

  const auto lm_alpha = preset_exponents(Model::LinialMeshulam, 2, 1.5);
  CHECK(std::vector<double>(lm_alpha.values().begin(), lm_alpha.values().end()) ==
        std::vector<double>{0, 0, 1.5});

  CHECK(code_of([] { preset_probabilities(Model::ErdosRenyi, 2, 0.3); }) ==
        ErrorCode::InvalidModelRank);
  CHECK(code_of([] { preset_probabilities(Model::LinialMeshulam, 1, 0.3); }) ==
        ErrorCode::InvalidModelRank);
  CHECK(code_of([] { preset_exponents(Model::Clique, 0, 0.3); }) == ErrorCode::InvalidModelRank);

  for (auto m : {Model::ErdosRenyi, Model::LinialMeshulam, Model::MeshulamWallach, Model::Clique}) {
    CHECK(parse_model(model_name(m)) == m);
  }
  CHECK(code_of([] { parse_model("gnp"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("clique preset yields flag complexes") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto y = sample_complex(12, 3, preset_probabilities(Model::Clique, 3, 0.5), Seed{2, t});
    // Every triangle and tetrahedron of the graph is filled.
    const auto full = sample_complex(12, 3, ProbabilityVector({1, 1, 1, 1}), Seed{2, t});
    for (int d = 2; d <= 3; ++d) {
      for (const auto& s : full.simplices(d)) {
        bool all_edges = true;
        const auto vs = s.vertices();
        for (std::size_t i = 0; i < vs.size(); ++i) {
          for (std::size_t j = i + 1; j < vs.size(); ++j) {
            all_edges = all_edges && y.contains(Simplex{vs[i], vs[j]});
          }
        }
        CHECK(y.contains(s) == all_edges);
      }
    }
  }
}
