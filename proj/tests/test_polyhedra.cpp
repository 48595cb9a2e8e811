#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "logdr/polyhedra.hpp"

using namespace logdr;

namespace {
QVec qv(std::vector<long> xs) {
  QVec v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}
}  // namespace

TEST_CASE("cone from constraints", "[polyhedra]") {
  // dim 2, orthant only
  auto c = cone_from_constraints(2, {}, orthant_ineqs(2));
  REQUIRE(c.rays.size() == 2);
  CHECK(c.rays[0] == qv({0, 1}));
  CHECK(c.rays[1] == qv({1, 0}));

  // x - 2y = 0 within the orthant: single ray (2,1)
  auto c2 = cone_from_constraints(2, {qv({1, -2})}, orthant_ineqs(2));
  REQUIRE(c2.rays.size() == 1);
  CHECK(c2.rays[0] == qv({2, 1}));

  // l1 = l2 = l3 within the orthant: ray (1,1,1)
  auto c3 = cone_from_constraints(3, {qv({1, -1, 0}), qv({0, 1, -1})}, orthant_ineqs(3));
  REQUIRE(c3.rays.size() == 1);
  CHECK(c3.rays[0] == qv({1, 1, 1}));

  CHECK_THROWS_AS(cone_from_constraints(2, {qv({1, 2, 3})}, {}), std::invalid_argument);
}

TEST_CASE("H to V to H roundtrip preserves the set", "[polyhedra]") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    int dim = 2 + trial % 3;
    QMat ineqs = orthant_ineqs(dim);
    for (int i = 0; i < 2; ++i) {
      QVec a = qvec(dim);
      for (auto& x : a) x = coef(rng);
      ineqs.push_back(a);
    }
    auto c = cone_from_constraints(dim, {}, ineqs);
    auto c2 = cone_from_constraints(dim, c.eqs, c.ineqs);
    CHECK(c == c2);
    // all rays satisfy the original constraints
    for (auto& r : c.rays)
      for (auto& a : ineqs) CHECK(dot(a, r) >= 0);
  }
}

TEST_CASE("linear images and sections", "[polyhedra]") {
  auto c = cone_from_constraints(2, {}, orthant_ineqs(2));
  QMat id = {qv({1, 0}), qv({0, 1})};
  auto li = linear_image(c, id);
  CHECK(li.cone == c);
  CHECK(li.injective_on_span);

  // projection of the orthant to the x-axis: ray (1), not injective
  QMat proj = {qv({1, 0})};
  auto li2 = linear_image(c, proj);
  REQUIRE(li2.cone.rays.size() == 1);
  CHECK(li2.cone.rays[0] == qv({1}));
  CHECK(!li2.injective_on_span);

  // subdivided banana edge: pr sums the two halves; the cycle equation
  // l1a + 2 l1b - 2 l2 = 0 cuts a 2-dimensional cone with a unique section.
  auto tau = cone_from_constraints(3, {qv({1, 2, -2})}, orthant_ineqs(3));
  QMat pr = {qv({1, 1, 0}), qv({0, 0, 1})};  // l1 = l1a + l1b, l2
  auto li3 = linear_image(tau, pr);
  CHECK(li3.injective_on_span);
  CHECK(li3.cone.dim() == 2);
  // section * pr == identity on random points of tau
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> lam(0, 9);
  for (int t = 0; t < 20; ++t) {
    QVec x = qvec(3);
    for (auto& r : tau.rays) x = vec_add(x, vec_scale(r, lam(rng)));
    auto back = mat_apply(li3.section, mat_apply(pr, x));
    CHECK(back == x);
  }
}

TEST_CASE("fan cover verification", "[polyhedra]") {
  auto sigma = orthant_cone(2);
  auto lower = cone_from_rays(2, {qv({1, 0}), qv({1, 1})});
  auto upper = cone_from_rays(2, {qv({1, 1}), qv({0, 1})});
  CHECK(verify_fan_cover(sigma, {lower, upper}).ok);

  // split by (2,1) and (1,2): slice volumes 1/3 each
  auto a = cone_from_rays(2, {qv({1, 0}), qv({2, 1})});
  auto b = cone_from_rays(2, {qv({2, 1}), qv({1, 2})});
  auto c = cone_from_rays(2, {qv({1, 2}), qv({0, 1})});
  CHECK(slice_volume(a) == Rat(1, 3));
  CHECK(slice_volume(b) == Rat(1, 3));
  CHECK(slice_volume(c) == Rat(1, 3));
  CHECK(verify_fan_cover(sigma, {a, b, c}).ok);

  // overlapping pair fails with the pair named
  auto o1 = cone_from_rays(2, {qv({1, 0}), qv({1, 1})});
  auto o2 = cone_from_rays(2, {qv({2, 1}), qv({0, 1})});
  auto rep = verify_fan_cover(sigma, {o1, o2});
  CHECK(!rep.ok);
  CHECK(rep.bad_i == 0);
  CHECK(rep.bad_j == 1);

  // deleting a maximal cone leaves a volume deficit
  auto rep2 = verify_fan_cover(sigma, {a, c});
  CHECK(!rep2.ok);
  CHECK(rep2.got_volume == Rat(2, 3));
}

TEST_CASE("star subdivisions pass fan cover in higher dimension", "[polyhedra]") {
  // star subdivision of the 3-orthant at (1,1,1)
  auto sigma = orthant_cone(3);
  QVec b = qv({1, 1, 1});
  std::vector<RationalCone> cones;
  QMat axes = {qv({1, 0, 0}), qv({0, 1, 0}), qv({0, 0, 1})};
  for (int skip = 0; skip < 3; ++skip) {
    QMat gens{b};
    for (int i = 0; i < 3; ++i)
      if (i != skip) gens.push_back(axes[i]);
    cones.push_back(cone_from_rays(3, gens));
  }
  CHECK(verify_fan_cover(sigma, cones).ok);
  cones.pop_back();
  CHECK(!verify_fan_cover(sigma, cones).ok);
}

TEST_CASE("faces and non-simplicial volumes", "[polyhedra]") {
  // {x in R^4_{>=0} : x1 + x2 = x3 + x4} has four extreme rays
  auto c = cone_from_constraints(4, {qv({1, 1, -1, -1})}, orthant_ineqs(4));
  CHECK(c.rays.size() == 4);
  CHECK(c.dim() == 3);
  auto f = smallest_face_containing(c, c.rays[0]);
  CHECK(f.rays.size() == 1);
  CHECK(is_face_of(f, c));
  // placing triangulation covers it with two simplices
  CHECK(triangulate(c).size() == 2);
}
