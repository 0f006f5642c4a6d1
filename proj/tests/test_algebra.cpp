#include "doctest.h"

#include <random>

#include "symact/algebra.hpp"
#include "test_util.hpp"

using namespace symact;
using testutil::randomVec;

namespace {

Eigen::Vector3d v3(const VectorXd& v) { return Eigen::Vector3d(v[0], v[1], v[2]); }

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("so3 bracket is the cross product") {
  const LieAlgebra so3 = LieAlgebra::so3();
  CHECK(so3.dim() == 3);
  CHECK(so3.structure(0, 1, 2) == 1.0);
  CHECK(so3.structure(1, 0, 2) == -1.0);
  CHECK_FALSE(so3.abelian());

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd x = randomVec(rng, 3);
    const VectorXd y = randomVec(rng, 3);
    const Eigen::Vector3d expect = v3(x).cross(v3(y));
    CHECK((v3(so3.bracket(x, y)) - expect).norm() < 1e-14);
  }
}

TEST_CASE("structure residuals vanish on the shipped algebras") {
  CHECK(LieAlgebra::so3().jacobiResidual() <= 1e-12);
  CHECK(LieAlgebra::abelianAlgebra(4).jacobiResidual() == 0.0);
  CHECK(LieAlgebra::abelianAlgebra(4).abelian());
}

TEST_CASE("ad-star duality holds against the brute-force pairing") {
  const LieAlgebra so3 = LieAlgebra::so3();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd x = randomVec(rng, 3);
    const VectorXd p = randomVec(rng, 3);
    const VectorXd z = randomVec(rng, 3);
    const double lhs = so3.adStar(x, p).dot(z);
    const double rhs = p.dot(so3.bracket(x, z));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("corrupted structure tensors are rejected") {
  // break antisymmetry
  std::vector<double> t(27, 0.0);
  t[(0 * 3 + 1) * 3 + 2] = 1.0;
  CHECK_THROWS_AS(LieAlgebra(3, std::move(t)), ConstructionError);

  // antisymmetric but Jacobi fails: [e0,e1] = e1, [e1,e2] = e0 leaves
  // [[e0,e1],e2] + cyclic = e0
  std::vector<double> j(27, 0.0);
  auto set = [&](int a, int b, int c, double v) {
    j[(a * 3 + b) * 3 + c] = v;
    j[(b * 3 + a) * 3 + c] = -v;
  };
  set(0, 1, 1, 1.0);
  set(1, 2, 0, 1.0);
  CHECK_THROWS_AS(LieAlgebra(3, std::move(j)), ConstructionError);

  CHECK_THROWS_AS(LieAlgebra(3, std::vector<double>(5, 0.0)), ConstructionError);
}

TEST_CASE("so3 action on r3 contracts the table as a cross product") {
  const LieAlgebra so3 = LieAlgebra::so3();
  const LieAlgebra r3 = LieAlgebra::abelianAlgebra(3);
  const Representation rep = Representation::so3OnR3(so3, r3);
  CHECK_FALSE(rep.trivial());

  // basis check: e1 acting on f2 gives -f3
  VectorXd out = rep.rhoInf(VectorXd::Unit(3, 0), VectorXd::Unit(3, 1));
  CHECK((out - (-VectorXd::Unit(3, 2))).lpNorm<Eigen::Infinity>() < 1e-15);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const VectorXd u = randomVec(rng, 3);
    const VectorXd x = randomVec(rng, 3);
    const Eigen::Vector3d expect = v3(x).cross(v3(u));
    CHECK((v3(rep.rhoInf(u, x)) - expect).norm() < 1e-14);
  }
}

TEST_CASE("diamond and rho-star satisfy their defining pairings") {
  const LieAlgebra so3 = LieAlgebra::so3();
  const LieAlgebra r3 = LieAlgebra::abelianAlgebra(3);
  const Representation rep = Representation::so3OnR3(so3, r3);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd u = randomVec(rng, 3);
    const VectorXd x = randomVec(rng, 3);
    const VectorXd p = randomVec(rng, 3);
    // <x <> p, u> = <p, rho^u x>
    CHECK(std::abs(rep.diamond(x, p).dot(u) - p.dot(rep.rhoInf(u, x))) < 1e-12);
    // <rho_*^u p, x> = -<p, rho^u x>
    CHECK(std::abs(rep.rhoStar(u, p).dot(x) + p.dot(rep.rhoInf(u, x))) < 1e-12);
  }
}

TEST_CASE("trivial representation annihilates everything") {
  const LieAlgebra so3 = LieAlgebra::so3();
  const LieAlgebra g1 = LieAlgebra::abelianAlgebra(1);
  const Representation rep = Representation::trivialRep(so3, g1);
  CHECK(rep.trivial());
  std::mt19937_64 rng(3);
  const VectorXd u = randomVec(rng, 3);
  CHECK(rep.rhoInf(u, VectorXd::Constant(1, 2.5)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(rep.diamond(VectorXd::Constant(1, 1.0), VectorXd::Constant(1, 1.0))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("representation tables failing the commutator identity are rejected") {
  const LieAlgebra so3 = LieAlgebra::so3();
  const LieAlgebra r3 = LieAlgebra::abelianAlgebra(3);
  // +hat(e_a) is the left-action derivative: a homomorphism, so it must fail
  // the anti-homomorphism check required of right actions
  std::vector<double> table(27, 0.0);
  auto levi = [](int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    if ((i == 0 && j == 1 && k == 2) || (i == 1 && j == 2 && k == 0) ||
        (i == 2 && j == 0 && k == 1))
      return 1;
    return -1;
  };
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        table[(a * 3 + i) * 3 + j] = levi(i, j, a);
  CHECK_THROWS_AS(Representation(so3, r3, std::move(table)), ConstructionError);
}

TEST_CASE("transport of a constant spatial covector matches the rotation formula") {
  const LieAlgebra so3 = LieAlgebra::so3();
  const LieAlgebra r3 = LieAlgebra::abelianAlgebra(3);
  const Representation rep = Representation::so3OnR3(so3, r3);

  std::mt19937_64 rng(19);
  const VectorXd u = randomVec(rng, 3);
  const VectorXd Y = randomVec(rng, 3);  // abelian g: its transport term is 0
  const VectorXd qt0 = randomVec(rng, 3);

  // finite-difference consistency of the rate at t = 0
  auto exact = [&](double t) -> VectorXd {
    return groupExpSo3(t * v3(u)) * v3(qt0);
  };
  const double h = 1e-5;
  const VectorXd fd = (exact(h) - exact(-h)) / (2.0 * h);
  const VectorXd rate = transportRate(r3, rep, u, Y, qt0);
  CHECK((fd - rate).lpNorm<Eigen::Infinity>() < 1e-9);

  // RK4 integration of the rate over [0, 0.1] against the closed form
  VectorXd q = qt0;
  const double dt = 1e-3;
  for (int n = 0; n < 100; ++n) {
    const VectorXd k1 = transportRate(r3, rep, u, Y, q);
    const VectorXd k2 = transportRate(r3, rep, u, Y, q + 0.5 * dt * k1);
    const VectorXd k3 = transportRate(r3, rep, u, Y, q + 0.5 * dt * k2);
    const VectorXd k4 = transportRate(r3, rep, u, Y, q + dt * k3);
    q += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  CHECK((q - exact(0.1)).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("rotation exponential") {
  const Eigen::Matrix3d half_turn = groupExpSo3(Eigen::Vector3d(M_PI, 0, 0));
  Eigen::Matrix3d expect;
  expect << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  CHECK((half_turn - expect).lpNorm<Eigen::Infinity>() < 1e-14);

  // small-angle branch agrees with the generic one just above the switch
  const Eigen::Vector3d w(3e-9, -2e-9, 1e-9);
  const Eigen::Matrix3d lo = groupExpSo3(w);
  const Eigen::Matrix3d hi = groupExpSo3(1e3 * w);
  CHECK((lo * lo - groupExpSo3(2.0 * w)).lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK((hi.transpose() * hi - Eigen::Matrix3d::Identity())
            .lpNorm<Eigen::Infinity>() < 1e-14);

  std::mt19937_64 rng(23);
  const Eigen::Vector3d v = v3(randomVec(rng, 3));
  const Eigen::Matrix3d R = groupExpSo3(v);
  CHECK((R.transpose() * R - Eigen::Matrix3d::Identity()).lpNorm<Eigen::Infinity>() <
        1e-14);
  CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((hat(v) * v).norm() < 1e-15);  // axis is fixed
  CHECK((R * v - v).norm() < 1e-13);
}

TEST_CASE("polar projection restores orthogonality") {
  std::mt19937_64 rng(29);
  const Eigen::Matrix3d R = groupExpSo3(v3(randomVec(rng, 3)));
  Eigen::Matrix3d noisy = R;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) noisy(r, c) += 1e-4 * randomVec(rng, 1)[0];
  const Eigen::Matrix3d P = polarProject(noisy);
  CHECK((P.transpose() * P - Eigen::Matrix3d::Identity()).lpNorm<Eigen::Infinity>() <
        1e-12);
  CHECK(P.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((P - R).lpNorm<Eigen::Infinity>() < 1e-3);
}

TEST_CASE("hat matches the cross product") {
  std::mt19937_64 rng(31);
  const Eigen::Vector3d w = v3(randomVec(rng, 3));
  const Eigen::Vector3d v = v3(randomVec(rng, 3));
  CHECK((hat(w) * v - w.cross(v)).norm() < 1e-15);
}

TEST_CASE("algebra presets load from json") {
  const AlgebraPair a = algebraFromJson("\"so3\"");
  CHECK(a.m.dim() == 3);
  CHECK(a.g.dim() == 1);
  CHECK(a.rep.trivial());

  const AlgebraPair b = algebraFromJson("\"abelian:4\"");
  CHECK(b.m.dim() == 4);
  CHECK(b.m.abelian());

  const AlgebraPair c = algebraFromJson("\"so3_semidirect_r3\"");
  CHECK(c.m.dim() == 3);
  CHECK(c.g.dim() == 3);
  CHECK_FALSE(c.rep.trivial());

  CHECK_THROWS_AS(algebraFromJson("\"heisenberg\""), ConstructionError);
  CHECK_THROWS_AS(algebraFromJson("{\"dim_m\": 2}"), ConstructionError);
}

TEST_CASE("inline algebra tables round-trip the shipped so3 pair") {
  // spell out so(3) |x R^3 explicitly and compare actions
  std::string so3_structure =
      "[[[0,0,0],[0,0,1],[0,-1,0]],"
      " [[0,0,-1],[0,0,0],[1,0,0]],"
      " [[0,1,0],[-1,0,0],[0,0,0]]]";
  std::string zero3 =
      "[[[0,0,0],[0,0,0],[0,0,0]],"
      " [[0,0,0],[0,0,0],[0,0,0]],"
      " [[0,0,0],[0,0,0],[0,0,0]]]";
  std::string rep_table =
      "[[[0,0,0],[0,0,-1],[0,1,0]],"
      " [[0,0,1],[0,0,0],[-1,0,0]],"
      " [[0,-1,0],[1,0,0],[0,0,0]]]";
  const AlgebraPair inl = algebraFromJson(
      "{\"dim_m\":3,\"dim_g\":3,\"structure_m\":" + so3_structure +
      ",\"structure_g\":" + zero3 + ",\"rep\":" + rep_table + "}");
  const AlgebraPair ref = algebraFromJson("\"so3_semidirect_r3\"");

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const VectorXd x = randomVec(rng, 3);
    const VectorXd y = randomVec(rng, 3);
    CHECK((inl.m.bracket(x, y) - ref.m.bracket(x, y)).lpNorm<Eigen::Infinity>() <
          1e-15);
    CHECK((inl.rep.rhoInf(x, y) - ref.rep.rhoInf(x, y)).lpNorm<Eigen::Infinity>() <
          1e-15);
  }
}

}  // TEST_SUITE
