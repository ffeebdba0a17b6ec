#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "lrq/bounds.hpp"

using namespace lrq;

namespace {

const double kCalpha2d3 = 9.0336216831;  // frozen lattice-sum value, d = 2, alpha = 3

SpinConfig single_flip(const Region& w, int q, Color c) {
  SpinConfig s = SpinConfig::uniform(w, q, 0);
  s.set(w.index_of(Site(w.dim())), c);
  return s;
}

}  // namespace

TEST_CASE("constants examples") {
  const auto c = compute_constants(2, 3.0, 1.0, 3, 1.0, 1.0);
  CHECK(c.a == 9.0);
  CHECK(c.c_alpha == doctest::Approx(kCalpha2d3).epsilon(1e-10));
  CHECK(c.c2 == doctest::Approx(1.0 / 640).epsilon(1e-14));
  CHECK(c.beta0 == doctest::Approx(2373.15).epsilon(1e-5));
  CHECK(c.beta0 * c.c2 - c.c1 - std::log(3.0) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  // kappa2 and M_min from their formulas with zeta(a / 3 - 1) = zeta(2)
  const double z2 = std::numbers::pi * std::numbers::pi / 6;
  const double kappa = 2.0 * (16.0 * std::exp(1.0) + 3.0 * z2);
  CHECK(c.kappa2 == doctest::Approx(kappa).epsilon(1e-12));
  CHECK(c.M_min == doctest::Approx(256.0 * 5 * kappa).epsilon(1e-12));

  // m doubled: c2 doubles, M_min^{gap} halves
  const auto h = compute_constants(2, 2.5, 1.0, 3, 0.5, 1.0);
  const auto f = compute_constants(2, 2.5, 1.0, 3, 1.0, 1.0);
  CHECK(f.c2 == doctest::Approx(2 * h.c2).epsilon(1e-14));
  CHECK(std::pow(f.M_min, 0.5) == doctest::Approx(std::pow(h.M_min, 0.5) / 2).epsilon(1e-12));

  CHECK_THROWS_AS(compute_constants(2, 2.0, 1.0, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(compute_constants(2, 3.0, 1.0, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_constants(2, 3.0, 1.0, 3, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("property: constants round trip") {
  gen::Rng g(51);
  for (int t = 0; t < 200; ++t) {
    const int d = gen::uniform(g, 1, 3);
    const double alpha = d + gen::real(g, 0.1, 3.0);
    const int q = gen::uniform(g, 2, 6);
    const auto c = compute_constants(d, alpha, gen::real(g, 0.2, 3), q, gen::real(g, 0.1, 1), gen::real(g, 0.1, 3));
    CHECK(c.beta0 * c.c2 - c.c1 - std::log(q) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
    CHECK(peierls_tail(c.beta0, c, q) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c.kappa2 > 0);
    CHECK(c.M_min > 0);
    CHECK(c.c2 <= c.m / ((2 * d + 1) * std::pow(2.0, alpha + 1)) / 8 * (1 + 1e-15));
  }
}

TEST_CASE("peierls tail") {
  const auto c = compute_constants(2, 3.0, 1.0, 3, 1.0, 1.0);
  CHECK(peierls_tail(c.beta0, c, 3) == doctest::Approx(0.25).epsilon(1e-13));
  const double b2 = (c.c1 + std::log(3.0) + std::log(2.0)) / c.c2;
  CHECK(peierls_tail(b2, c, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(peierls_tail(1e7, c, 3) < 1e-300 + 1e-6);
  CHECK_THROWS_AS(peierls_tail((c.c1 + std::log(3.0)) / c.c2 * (1 - 1e-9), c, 3), std::domain_error);
  CHECK_THROWS_AS(peierls_tail(1.0, c, 3), std::domain_error);
  double prev = 1e300;
  for (double b = 0.6 * c.beta0; b < 4 * c.beta0; b *= 1.1) {
    const double v = peierls_tail(b, c, 3);
    CHECK(v < prev);
    prev = v;
  }
  // at equal beta the bound is larger for q = 3 than q = 2
  const auto c2 = compute_constants(2, 3.0, 1.0, 2, 1.0, 1.0);
  CHECK(peierls_tail(c.beta0, c, 3) > peierls_tail(c.beta0, c2, 2));
}

TEST_CASE("geometric lemma examples") {
  const Region w = box_region(centered_box(2, 3));
  const CouplingKernel k(1.0, 3.0, w);
  const auto r = check_lemma_geometric(Site{0, 0}, Site{3, 0}, k);
  CHECK(r.lhs == doctest::Approx(1.0 / 27).epsilon(1e-14));
  CHECK(r.rhs == doctest::Approx((1.0 / 27 + 1.0 / 8 + 1.0 / 64 + 2 * std::pow(10.0, -1.5)) / 40).epsilon(1e-14));
  CHECK(r.holds);
  for (const auto& y : l1_ball(Site{0, 0}, 1))
    if (y != Site{0, 0}) CHECK(check_lemma_geometric(Site{0, 0}, y, k).holds);
  CHECK_THROWS_AS(check_lemma_geometric(Site{1, 1}, Site{1, 1}, k), std::invalid_argument);
}

TEST_CASE("property: geometric lemma on random pairs") {
  gen::Rng g(52);
  for (int d = 2; d <= 3; ++d)
    for (double da : {0.5, 1.0, 2.0}) {
      const CouplingKernel k(1.0, d + da, box_region(centered_box(d, 2)));
      int bad = 0;
      for (int t = 0; t < 20000; ++t) {
        const Site x = gen::site(g, d, -25, 25), y = gen::site(g, d, -25, 25);
        if (x == y) continue;
        bad += check_lemma_geometric(x, y, k).holds ? 0 : 1;
      }
      CHECK(bad == 0);
    }
}

TEST_CASE("incorrect-point lemma examples") {
  const Region w = box_region(centered_box(2, 5));
  const auto spec = InteractionSpec::potts(3);
  const CouplingKernel k(1.0, 3.0, w);
  const SpinConfig s = single_flip(w, 3, 1);
  const auto f = extract_contours(s, {1.0, 9.0});
  REQUIRE(f.contours.size() == 1);
  const Contour& g = f.contours[0];
  CHECK(check_lemma_incorrect(s, g, Site{12, 5}, k, spec).holds);
  for (const auto& y : g.support) CHECK(check_lemma_incorrect(s, g, y, k, spec).holds);
  Contour empty;
  empty.support = Region(2);
  const auto e = check_lemma_incorrect(s, empty, Site{0, 0}, k, spec);
  CHECK(e.lhs == 0.0);
  CHECK(e.rhs == 0.0);
  CHECK(e.holds);
  CHECK_THROWS_AS(check_lemma_incorrect(SpinConfig::uniform(w, 3, 0), g, Site{3, 3}, k, spec), std::invalid_argument);
}

TEST_CASE("energy bound for a single flip") {
  const Region w = box_region(centered_box(2, 5));
  const auto spec = InteractionSpec::potts(3);
  const CouplingKernel k(1.0, 3.0, w);
  const auto c = compute_constants(2, 3.0, 1.0, 3, spec.m(), 1.0);
  const SpinConfig s = single_flip(w, 3, 2);
  const auto f = extract_contours(s, {c.M_min, c.a});
  REQUIRE(f.contours.size() == 1);
  const auto r = verify_energy_bound(s, f, 0, k, spec, c.M_min, c);
  CHECK(r.gamma_size == 5);
  CHECK(r.lhs == doctest::Approx(kCalpha2d3).epsilon(1e-9));
  // F of the unit ball: 5 c_alpha minus twice its 4 + 4 / 2^{3/2} + 2 / 8 internal couplings
  const double F = 5 * kCalpha2d3 - 2 * (4 + 4 * std::pow(2.0, -1.5) + 0.25);
  CHECK(r.rhs == doctest::Approx((5 + F) / 640).epsilon(1e-9));
  CHECK(r.holds);
  CHECK(r.mode == BoundMode::theorem);
  CHECK(verify_energy_bound(s, f, 0, k, spec, 1.0, c).mode == BoundMode::diagnostic);
  CHECK_THROWS_AS(verify_energy_bound(s, f, 3, k, spec, c.M_min, c), std::invalid_argument);
}

TEST_CASE("decode configuration") {
  CHECK(decode_configuration(0, 3, 3) == std::vector<Color>{0, 0, 0});
  CHECK(decode_configuration(5, 3, 3) == std::vector<Color>{2, 1, 0});
  CHECK(decode_configuration(26, 3, 3) == std::vector<Color>{2, 2, 2});
}

TEST_CASE("exhaustive kernel agrees with the generic verifier") {
  ExhaustiveOptions opt;
  opt.sides = {3, 3};
  opt.q = 3;
  opt.alphas = {2.5, 3.0, 4.0};
  opt.interaction = InteractionSpec::potts(3);
  const auto par = verify_exhaustive(opt);
  REQUIRE(par.size() == 3);

  std::vector<ExhaustiveRecord> recs;
  opt.sink = [&](const ExhaustiveRecord& r) { recs.push_back(r); };
  const auto ser = verify_exhaustive(opt);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(par[a].configurations == 19682);
    CHECK(par[a].violations == 0);
    CHECK(par[a].mode == BoundMode::theorem);
    CHECK(ser[a].configurations == par[a].configurations);
    CHECK(ser[a].min_margin == par[a].min_margin);
    CHECK(par[a].min_margin > 0);
  }
  REQUIRE(recs.size() == 3 * 19682u);

  const Region w = box_region(centered_box(opt.sides));
  gen::Rng g(53);
  for (int t = 0; t < 150; ++t) {
    const auto& rec = recs[g() % recs.size()];
    const double alpha = opt.alphas[rec.alpha_index];
    const auto c = compute_constants(2, alpha, 1.0, 3, 1.0, 1.0);
    const SpinConfig s(w, 3, 0, decode_configuration(rec.config_index, w.size(), 3));
    const auto f = extract_contours(s, {c.M_min, c.a});
    REQUIRE(f.contours.size() == 1);
    const auto r = verify_energy_bound(s, f, 0, CouplingKernel(1.0, alpha, w), opt.interaction, c.M_min, c);
    CHECK(r.gamma_size == rec.gamma_size);
    CHECK(r.lhs == doctest::Approx(rec.lhs).epsilon(1e-10));
    CHECK(r.rhs == doctest::Approx(rec.rhs).epsilon(1e-10));
  }
}

TEST_CASE("exhaustive 2x2 and q = 2") {
  ExhaustiveOptions opt;
  opt.sides = {2, 2};
  opt.q = 2;
  opt.interaction = InteractionSpec::potts(2);
  const auto r = verify_exhaustive(opt);
  CHECK(r[0].configurations == 15);
  CHECK(r[0].violations == 0);
  opt.M_used = 1.0;
  CHECK_THROWS_AS(verify_exhaustive(opt), std::invalid_argument);
}

TEST_CASE("truncation radius and decaying fields") {
  CHECK(truncation_radius(0.0, 1.0, 0.1) == 1.0);
  // (2 h / c2) = 100; delta = 2 -> R^2 > 100 -> R = 11
  CHECK(truncation_radius(5.0, 2.0, 0.1) == 11.0);
  CHECK(truncation_radius(5.0, 1.0, 0.1) == 101.0);
  CHECK_THROWS_AS(truncation_radius(1.0, 0.0, 0.1), std::invalid_argument);
  gen::Rng g(54);
  for (int t = 0; t < 200; ++t) {
    const double h = gen::real(g, 0, 2), dl = gen::real(g, 0.1, 2), c2 = gen::real(g, 1e-3, 1);
    const double R = truncation_radius(h, dl, c2);
    CHECK(std::pow(R, dl) > 2 * h / c2);
    if (R > 1) CHECK(!(std::pow(R - 1, dl) > 2 * h / c2));
  }

  const Region w = box_region(centered_box(2, 3));
  const CouplingKernel k(1.0, 3.0, w);
  const auto c = compute_constants(2, 3.0, 1.0, 3, 1.0, 1.0);
  FieldParams fp;
  fp.h_star = 0.01;
  fp.delta = 1.5;
  fp.R = truncation_radius(fp.h_star, fp.delta, c.c2);
  const auto hhat = make_field(FieldKind::truncated, fp, w, 3);
  const Region L(2, {Site{0, 0}, Site{1, 0}});
  const auto rep = check_decaying_field(L, hhat, k, c.c2);
  CHECK(rep.surface == doctest::Approx(c.c2 * surface_coupling(L, k).value).epsilon(1e-14));
  CHECK(rep.slack == doctest::Approx(rep.surface - rep.field_sum).epsilon(1e-14));
  CHECK(rep.holds == (rep.slack >= 0));
  CHECK(check_decaying_field(L, make_field(FieldKind::zero, fp, w, 3), k, c.c2).field_sum == 0.0);
}
