#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gda/errors.hpp"
#include "gda/games.hpp"
#include "support/oracles.hpp"

using namespace gda;
using games::QuadraticGame;
using linalg::Matrix;

TEST_CASE("game_jacobian block form on the three 1x1 reference games") {
  CHECK(games::game_jacobian(games::scalar_game(1, 10, 1)) == Matrix{{1, 10}, {-10, 1}});
  CHECK(games::game_jacobian(games::scalar_game(0, 10, 0)) == Matrix{{0, 10}, {-10, 0}});
  CHECK(games::game_jacobian(games::scalar_game(0, 10, 2)) == Matrix{{0, 10}, {-10, 2}});
}

TEST_CASE("game validation rejects broken invariants") {
  CHECK_THROWS_AS(games::make_game(Matrix{{0, 1}, {0, 0}}, Matrix::identity(2),
                                   Matrix::identity(2)),
                  ParameterError);  // asymmetric A
  CHECK_THROWS_AS(games::make_game(Matrix{{-1}}, Matrix{{1}}, Matrix{{1}}),
                  ParameterError);  // A not PSD
  CHECK_THROWS_AS(games::make_game(Matrix::identity(2), Matrix{{1}}, Matrix{{1}}),
                  DimensionError);
  CHECK_THROWS_AS(games::make_game(Matrix(), Matrix(), Matrix()), DimensionError);
}

TEST_CASE("class_bounds on scalar games") {
  const auto b1 = games::class_bounds(games::scalar_game(1, 10, 1));
  CHECK(b1.mu == doctest::Approx(1.0));
  CHECK(b1.l == doctest::Approx(10.0));
  REQUIRE(b1.kappa.has_value());
  CHECK(*b1.kappa == doctest::Approx(10.0));

  const auto b2 = games::class_bounds(games::scalar_game(0, 10, 2));
  CHECK(b2.mu_x == 0.0);
  CHECK(b2.mu_y == doctest::Approx(2.0));
  CHECK(b2.mu_xy == doctest::Approx(10.0));
  CHECK(b2.l == doctest::Approx(10.0));
  CHECK(!b2.kappa.has_value());
  CHECK(!b2.kappa_x.has_value());
  REQUIRE(b2.kappa_y.has_value());
  CHECK(*b2.kappa_y == doctest::Approx(5.0));
  REQUIRE(b2.kappa_xy.has_value());
  CHECK(*b2.kappa_xy == doctest::Approx(1.0));

  const auto b3 = games::class_bounds(
      games::make_game(Matrix::identity(2), Matrix::zero(2, 2), Matrix::identity(2)));
  CHECK(b3.mu == doctest::Approx(1.0));
  CHECK(b3.l == doctest::Approx(1.0));
  CHECK(*b3.kappa == doctest::Approx(1.0));
}

TEST_CASE("regime classification") {
  CHECK(games::classify(games::scalar_game(0, 10, 0)) == games::Regime::Bilinear);
  CHECK(games::classify(games::scalar_game(1, 10, 1)) == games::Regime::Scsc);
  CHECK(games::classify(games::scalar_game(0, 10, 2)) == games::Regime::StrongConcaveOnly);
  // mu_y = 0 with coupling present: none of the three structured regimes.
  CHECK(games::classify(games::scalar_game(1, 10, 0)) == games::Regime::General);
}

TEST_CASE("condition_number_empirical") {
  // J = [[1, 10], [-10, 1]]: eigenvalues 1 +- 10i.
  CHECK(games::condition_number_empirical(games::scalar_game(1, 10, 1)) ==
        doctest::Approx(std::sqrt(101.0)).epsilon(1e-12));
  CHECK(games::condition_number_empirical(
            games::make_game(Matrix::identity(1), Matrix::zero(1, 1), Matrix::identity(1))) ==
        doctest::Approx(1.0));
  // Fig-2 game: J eigenvalues 0.6 +- 1.2i -> sqrt(1.8)/0.6.
  CHECK(games::condition_number_empirical(games::scalar_game(0.6, 1.2, 0.6)) ==
        doctest::Approx(std::sqrt(1.8) / 0.6).epsilon(1e-12));
  CHECK_THROWS_AS(games::condition_number_empirical(games::scalar_game(0, 10, 0)),
                  ConditioningError);
}

TEST_CASE("equilibrium is the origin and distance is the squared norm") {
  const auto g = games::scalar_game(1, 10, 1);
  const auto [xs, ys] = games::equilibrium(g);
  CHECK(xs == linalg::Vector{0.0});
  CHECK(ys == linalg::Vector{0.0});
  CHECK(games::distance_to_equilibrium(g, {1}, {1}) == doctest::Approx(2.0));
  CHECK(games::distance_to_equilibrium(g, {0}, {0}) == 0.0);
  CHECK(games::distance_to_equilibrium(g, {0.45}, {1.175}) ==
        doctest::Approx(1.583125).epsilon(1e-15));
  CHECK_THROWS_AS(games::distance_to_equilibrium(g, {1, 2}, {1}), DimensionError);
}

TEST_CASE("check_set_k on reference games and regime guard") {
  const auto r1 = games::check_set_k(games::scalar_game(1, 10, 1));
  CHECK(r1.pass);
  CHECK(r1.mu == doctest::Approx(1.0));
  for (const auto& m : r1.margins) {
    CHECK(m.re_margin >= -1e-8);
    CHECK(m.mod_margin >= -1e-8);
  }

  const auto r2 = games::check_set_k(
      games::make_game(Matrix::identity(2), Matrix::zero(2, 2), Matrix::identity(2)));
  CHECK(r2.pass);

  CHECK_THROWS_AS(games::check_set_k(games::scalar_game(0, 10, 2)), RegimeError);
}

TEST_CASE("property: set-K containment over random SCSC instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int d = 1 + static_cast<int>(seed % 5);
    const int p = 1 + static_cast<int>((seed / 5) % 5);
    const auto g = oracles::random_scsc(seed, d, p, seed % 3 == 0);
    const auto report = games::check_set_k(g);
    CHECK(report.pass);
    CHECK(games::condition_number_empirical(g) >= 1.0);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("gen_scsc: spectrum, determinism, kappa at the experiment scale") {
  const auto g1 = games::gen_scsc(1, 3, 0.1);
  CHECK(g1.a == Matrix{{1.0}});
  CHECK(g1.c == Matrix{{1.0}});

  const auto a = games::gen_scsc(3, 7, 0.1);
  const auto b = games::gen_scsc(3, 7, 0.1);
  CHECK(a.a == b.a);
  CHECK(a.b == b.b);  // bit-identical under equal seeds
  CHECK(a.c == b.c);

  const auto g3 = games::gen_scsc(3, 7, 0.1);
  CHECK(g3.a(0, 0) == doctest::Approx(1.0));
  CHECK(g3.a(1, 1) == doctest::Approx(0.5));
  CHECK(g3.a(2, 2) == doctest::Approx(1.0 / 3.0));

  // d=100 with coupling std 0.01: sigma_max(B) stays below 1, so the class
  // constants give kappa_x = kappa_y = kappa = 100 exactly.
  const auto big = games::gen_scsc(100, 1, 0.01);
  const auto cb = games::class_bounds(big);
  CHECK(cb.l_xy < 1.0);
  CHECK(cb.l == doctest::Approx(1.0));
  REQUIRE(cb.kappa_x.has_value());
  CHECK(*cb.kappa_x == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(*cb.kappa_y == doctest::Approx(100.0).epsilon(1e-9));

  // Conjugated variant keeps the invariants and the spectrum.
  const auto rot = games::gen_scsc(4, 9, 0.1, true);
  CHECK(rot.a.asymmetry() <= games::kSymmetryTol);
  const auto [amin, amax] = linalg::symmetric_eig_range(rot.a);
  CHECK(amin == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(amax == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gen_scaling_instance: eigenvalue spacing and coupling normalization") {
  const auto g = games::gen_scaling_instance(2, 10.0, 5);
  CHECK(g.a(0, 0) == doctest::Approx(1.0));
  CHECK(g.a(1, 1) == doctest::Approx(0.1));

  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    const auto gi = games::gen_scaling_instance(7, 50.0, seed);
    CHECK(std::abs(linalg::singular_values(gi.b).front() - 1.0) <= 1e-12);
  }

  const auto gid = games::gen_scaling_instance(3, 1.0, 2);
  CHECK(gid.a == Matrix::identity(3));
  CHECK(gid.c == Matrix::identity(3));
}

TEST_CASE("gen_bilinear and gen_strong_concave_only") {
  const auto fig1 = games::gen_bilinear(1, 1, 0, 10.0);
  CHECK(fig1.a == Matrix{{0.0}});
  CHECK(fig1.c == Matrix{{0.0}});
  CHECK(fig1.b == Matrix{{10.0}});
  CHECK(games::classify(fig1) == games::Regime::Bilinear);

  const auto r1 = games::gen_bilinear(2, 3, 11);
  const auto r2 = games::gen_bilinear(2, 3, 11);
  CHECK(r1.b == r2.b);

  const auto sc = games::gen_strong_concave_only(3, 3, 13);
  const auto cb = games::class_bounds(sc);
  CHECK(cb.mu_x == 0.0);
  CHECK(cb.mu_y > 0.0);
  CHECK(cb.mu_xy > 0.0);
  CHECK(games::classify(sc) == games::Regime::StrongConcaveOnly);

  const auto sc2 = games::gen_strong_concave_only(2, 4, 17);
  CHECK(games::classify(sc2) == games::Regime::StrongConcaveOnly);

  CHECK_THROWS_AS(games::gen_strong_concave_only(3, 2, 1), ParameterError);
}

TEST_CASE("game file format round-trips") {
  const auto g = games::gen_scsc(3, 21, 0.1, true);
  std::stringstream ss;
  games::write_game(ss, g);
  const auto back = games::read_game(ss);
  CHECK(back.a == g.a);
  CHECK(back.b == g.b);
  CHECK(back.c == g.c);
  CHECK(back.provenance.generator == g.provenance.generator);
  CHECK(back.provenance.params == g.provenance.params);
  CHECK(back.provenance.seed == g.provenance.seed);

  std::stringstream bad("not-a-game\n");
  CHECK_THROWS_AS(games::read_game(bad), ParseError);

  // header/block dimension disagreement
  std::stringstream mismatched(
      "gda-game 1\nd 2\np 1\ngenerator manual\nparams -\nseed 0\n"
      "A\n1 1\n1\nB\n1 1\n1\nC\n1 1\n1\n");
  CHECK_THROWS_AS(games::read_game(mismatched), ParseError);

  // absurd dimensions in a matrix block are rejected before allocation
  std::stringstream huge("999999999 999999999\n");
  CHECK_THROWS_AS(linalg::read_matrix(huge), ParseError);
}

TEST_CASE("property: generated games satisfy their invariants, bounds agree with linalg") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto g = games::gen_scsc(2 + static_cast<int>(seed % 4), seed, 0.2, seed % 2 == 0);
    CHECK(g.a.asymmetry() <= games::kSymmetryTol);
    CHECK(g.c.asymmetry() <= games::kSymmetryTol);
    const auto cb = games::class_bounds(g);
    const auto [amin, amax] = linalg::symmetric_eig_range(g.a);
    CHECK(std::abs(cb.mu_x - std::max(0.0, amin)) <= 1e-9);
    CHECK(std::abs(cb.l_x - amax) <= 1e-9);
    const auto sv = linalg::singular_values(g.b);
    CHECK(std::abs(cb.l_xy - sv.front()) <= 1e-9);
    CHECK(std::abs(cb.mu_xy - sv.back()) <= 1e-9);
    if (cb.kappa) CHECK(*cb.kappa >= 1.0);
  }
  // kappa equals L/mu exactly for diagonal uncoupled games.
  const auto g0 = games::make_game(Matrix::diagonal({0.5, 2.0}), Matrix::zero(2, 2),
                                   Matrix::diagonal({1.0, 4.0}));
  CHECK(games::condition_number_empirical(g0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(*games::class_bounds(g0).kappa == doctest::Approx(8.0).epsilon(1e-12));
}
