#include <doctest.h>

#include <chandef/projection.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace chandef;

TEST_CASE("projection onto a single atom is the plain KL divergence") {
  ProbVector t({0.5, 0.5});
  auto res = ri_project(t, std::vector<ProbVector>{ProbVector({0.25, 0.75})});
  double expected = 0.5 * std::log2(0.5 / 0.25) + 0.5 * std::log2(0.5 / 0.75);
  CHECK(res.converged);
  CHECK(res.divergence_bits == doctest::Approx(expected).epsilon(1e-10));
  CHECK(res.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("target inside the hull projects to zero divergence") {
  // (0.5, 0.5) is the midpoint of the two atoms below.
  std::vector<ProbVector> atoms = {ProbVector({0.8, 0.2}), ProbVector({0.2, 0.8})};
  auto res = ri_project(ProbVector({0.5, 0.5}), atoms);
  CHECK(res.converged);
  CHECK(res.divergence_bits == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(res.weights[0] == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("target equal to an atom short-circuits to a point mass") {
  std::vector<ProbVector> atoms = {ProbVector({0.8, 0.2}), ProbVector({0.2, 0.8})};
  auto res = ri_project(ProbVector({0.2, 0.8}), atoms);
  CHECK(res.converged);
  CHECK(res.divergence_bits == doctest::Approx(0.0));
  CHECK(res.weights[1] == doctest::Approx(1.0));
}

TEST_CASE("projection divergence is infinite outside the union of supports") {
  std::vector<ProbVector> atoms = {ProbVector({1.0, 0.0, 0.0}), ProbVector({0.5, 0.5, 0.0})};
  auto res = ri_project(ProbVector({0.0, 0.0, 1.0}), atoms);
  CHECK(res.divergence_bits == kInf);
}

TEST_CASE("projection matches a simplex-grid scan") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t natoms = 2 + rng() % 2;  // 2 or 3 atoms keeps the grid cheap
    std::size_t ny = 2 + rng() % 2;
    std::vector<ProbVector> atoms;
    std::vector<std::vector<double>> raw;
    for (std::size_t z = 0; z < natoms; ++z) {
      atoms.push_back(oracles::random_prob(rng, ny));
      raw.push_back(atoms.back().probs());
    }
    ProbVector target = oracles::random_prob(rng, ny);
    auto res = ri_project(target, atoms);
    double ref = oracles::grid_ri_projection(target.probs(), raw, 400);
    CHECK(res.converged);
    // The grid value is an upper bound up to grid resolution; the solver
    // should match it to within the certificate tolerance plus grid error.
    CHECK(res.divergence_bits <= ref + 1e-8);
    CHECK(res.divergence_bits >= ref - 5e-4);
  }
}

TEST_CASE("projection trace is non-increasing") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    auto atoms_ch = oracles::random_channel(rng, 3, 4);
    ProbVector target = oracles::random_prob(rng, 4);
    auto res = ri_project(target, atoms_ch);
    REQUIRE(!res.divergence_trace.empty());
    for (std::size_t i = 1; i < res.divergence_trace.size(); ++i)
      CHECK(res.divergence_trace[i] <= res.divergence_trace[i - 1] + 1e-12);
    CHECK(res.divergence_trace.back() == doctest::Approx(res.divergence_bits));
  }
}

TEST_CASE("deficiency of a channel with respect to itself is zero") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto k = oracles::random_channel(rng, 3, 3);
    auto pi = oracles::random_prob(rng, 3);
    auto res = deficiency(k, k, pi);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(0.0).epsilon(1e-8));
  }
}

TEST_CASE("deficiency matches the per-input grid scan") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 8; ++trial) {
    auto d = oracles::random_channel(rng, 2, 3);
    auto kappa = oracles::random_channel(rng, 3, 3);
    auto pi = oracles::random_prob(rng, 3);
    auto res = deficiency(d, kappa, pi);
    double ref = oracles::grid_deficiency(d, kappa, pi, 2000);
    CHECK(res.converged);
    CHECK(res.value <= ref + 1e-8);
    CHECK(res.value >= ref - 1e-4);
  }
}

TEST_CASE("deficiency decomposes as prior-weighted projections") {
  std::mt19937_64 rng(303);
  auto d = oracles::random_channel(rng, 3, 4);
  auto kappa = oracles::random_channel(rng, 2, 4);
  auto pi = oracles::random_prob(rng, 2);
  auto res = deficiency(d, kappa, pi);
  double sum = 0.0;
  for (const auto& pp : res.per_input) sum += pi[pp.x] * pp.divergence_bits;
  CHECK(res.value == doctest::Approx(sum).epsilon(1e-10));
  // The produced encoder must reproduce the objective when composed with d.
  double kl = conditional_kl(kappa, compose(d, res.encoder), pi);
  CHECK(kl == doctest::Approx(res.value).epsilon(1e-6).scale(1.0));
}

TEST_CASE("exact degradations are certified as sufficient") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = oracles::random_channel(rng, 3, 4);
    auto e = oracles::random_channel(rng, 2, 3);
    Channel kappa = compose(d, e);
    auto res = blackwell_sufficient(d, kappa);
    CHECK(res.sufficient);
    CHECK(res.max_residual <= 1e-8);
    // The witness must reproduce kappa.
    REQUIRE(res.witness_encoder.has_value());
    Channel rebuilt = compose(d, *res.witness_encoder);
    for (std::size_t x = 0; x < kappa.input_size(); ++x)
      for (std::size_t y = 0; y < kappa.output_size(); ++y)
        CHECK(rebuilt.at(x, y) == doctest::Approx(kappa.at(x, y)).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("informative targets are not degradations of a constant channel") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 20; ++trial) {
    Channel d = Channel::constant(3, oracles::random_prob(rng, 3));
    Channel kappa(2, 3, {1.0, 0.0, 0.0, 0.0, 1.0, 0.0});
    auto res = blackwell_sufficient(d, kappa);
    CHECK(!res.sufficient);
    // Deficiency must then be strictly positive as well.
    auto def = deficiency(d, kappa, ProbVector({0.5, 0.5}));
    CHECK(def.value > 1e-3);
  }
}

TEST_CASE("blackwell agrees with zero deficiency") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = oracles::random_channel(rng, 2, 3);
    auto kappa = oracles::random_channel(rng, 2, 3);
    auto pi = oracles::random_prob(rng, 2);
    bool suff = blackwell_sufficient(d, kappa).sufficient;
    double def = deficiency(d, kappa, pi).value;
    if (suff) CHECK(def <= 1e-6);
    if (def > 1e-4) CHECK(!suff);
  }
}
