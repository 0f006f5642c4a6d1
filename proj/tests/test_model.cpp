#include "doctest.h"

#include <random>

#include "symact/matching.hpp"
#include "symact/satellite.hpp"
#include "test_util.hpp"

using namespace symact;
using testutil::randomVec;
using testutil::so3r3Model;

namespace {

SemidirectModel fullRankModel() {
  return so3r3Model(
      "\"A0\": [[1.0, 0.2, 0.0], [0.0, 0.9, -0.1], [0.3, 0.0, 1.1]],"
      "\"mu_M\": [[2.0, 0.1, 0.0], [0.1, 1.5, 0.2], [0.0, 0.2, 1.0]],"
      "\"I0\": [[0.4, 0, 0], [0, 0.4, 0], [0, 0, 0.4]]," +
      testutil::denseGainJson());
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("block metric inverse matches the dense inverse") {
  std::vector<SemidirectModel> models;
  models.push_back(buildSatellite(SatelliteParams{}));
  SatelliteParams sk;
  sk.k = 0.7;
  models.push_back(buildSatellite(sk));
  models.push_back(so3r3Model("\"gamma\": 0.2"));
  models.push_back(fullRankModel());

  for (const SemidirectModel& M : models) {
    const KKMetric& kk = M.kkMetric();
    const MatrixXd dense = kk.matrix.inverse();
    CHECK((kk.inverse - dense).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((kk.matrix * kk.inverse -
           MatrixXd::Identity(kk.matrix.rows(), kk.matrix.cols()))
              .lpNorm<Eigen::Infinity>() < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(kk.matrix);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("satellite metric reproduces the 4x4 rotor display") {
  const SemidirectModel M = buildSatellite(SatelliteParams{});
  MatrixXd expect(4, 4);
  expect << 3.3, 0, 0, 0,
            0, 2.3, 0, 0,
            0, 0, 1.2, 0.2,
            0, 0, 0.2, 0.2;
  CHECK((M.kkMetric().matrix - expect).lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK(M.conservedIsQt());
  CHECK(M.mIsSo3());
}

TEST_CASE("reduced hamiltonian on the satellite middle axis") {
  const SemidirectModel M = buildSatellite(SatelliteParams{});
  const VectorXd nu = VectorXd::Unit(3, 1);
  const VectorXd pt = VectorXd::Zero(1);
  CHECK(M.reducedHamiltonian(nu, pt) == doctest::Approx(1.0 / 4.6).epsilon(1e-14));
}

TEST_CASE("curvature pairing on the satellite connection") {
  const SemidirectModel M = buildSatellite(SatelliteParams{});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd u = randomVec(rng, 3);
    const VectorXd pt = randomVec(rng, 1);
    const VectorXd got = M.curvaturePairing(u, pt);
    Eigen::Vector3d expect(-pt[0] * u[1], pt[0] * u[0], 0.0);
    CHECK((got - VectorXd(expect)).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("curvature contraction is antisymmetric in the velocity") {
  const SemidirectModel M = fullRankModel();
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd u = randomVec(rng, 3);
    const VectorXd pt = randomVec(rng, 3);
    CHECK(std::abs(M.curvaturePairing(u, pt).dot(u)) < 1e-12);
    const MatrixXd A = MatrixXd::Random(3, 3);
    CHECK(std::abs(M.curvaturePairingWith(A, u, pt).dot(u)) < 1e-12);
  }
}

TEST_CASE("gain maps on the satellite at k = 0.5") {
  SatelliteParams p;
  p.k = 0.5;
  const SemidirectModel M = buildSatellite(p);
  CHECK(M.eMap()(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

  const VectorXd nu_c = Eigen::Vector3d(0.1, 2.3, 0.05);
  const VectorXd p_c = VectorXd::Constant(1, 0.02);
  CHECK(M.jBody(nu_c, p_c)[0] == doctest::Approx(-0.03).epsilon(1e-13));
  CHECK(M.conservedBody(nu_c, p_c)[0] == doctest::Approx(-0.01).epsilon(1e-13));
}

TEST_CASE("conserved quantity splits as momentum plus feedback part") {
  const SemidirectModel M = fullRankModel();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd nu_c = randomVec(rng, 3);
    const VectorXd p_c = randomVec(rng, 3);
    const VectorXd lhs = p_c + M.jBody(nu_c, p_c);
    CHECK((lhs - M.conservedBody(nu_c, p_c)).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("coordinate changes round-trip and compose") {
  const SemidirectModel M = fullRankModel();
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd nu = randomVec(rng, 3);
    const VectorXd pt = randomVec(rng, 3);
    const auto [nu_c, p_c] = M.cotangentFromW(nu, pt);
    const auto [nu2, pt2] = M.wFromCotangent(nu_c, p_c);
    CHECK((nu2 - nu).lpNorm<Eigen::Infinity>() < 1e-13);
    CHECK((pt2 - pt).lpNorm<Eigen::Infinity>() < 1e-13);

    // the conserved covector in fiber coordinates equals the shift inverse
    const VectorXd a = M.conservedBody(nu_c, p_c);
    const VectorXd b = M.phiJShiftInverse(nu, pt);
    CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-13);

    const VectorXd qt = M.phiJShiftInverse(nu, pt);
    CHECK((M.phiJShift(nu, qt) - pt).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("gain commutes through the connection transpose") {
  const SemidirectModel M = fullRankModel();
  const MatrixXd lhs = M.eMap() * M.C() * M.A0T();
  const MatrixXd rhs = M.C() * M.A0T() * M.eMap();
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("middle-axis equilibrium passes the stationarity gates") {
  SatelliteParams p;
  p.k = 0.7;
  const SemidirectModel M = buildSatellite(p);
  const VectorXd nu_e = Eigen::Vector3d(0.0, p.lambda2(), 0.0);
  const EquilibriumGates g = M.equilibriumGates(nu_e);
  CHECK(g.uncontrolled_residual < 1e-14);
  CHECK(g.controlled_residual < 1e-14);
  CHECK(g.gate_C == 0.0);

  // off-axis states fail the gates
  const EquilibriumGates bad = M.equilibriumGates(Eigen::Vector3d(0.4, 1.0, 0.3));
  CHECK(bad.uncontrolled_residual > 1e-3);
  CHECK(bad.gate_C > 1e-3);
}

TEST_CASE("gamma gain family satisfies its defining relation") {
  for (double gamma : {0.2, -0.3, 1.5}) {
    const SemidirectModel M =
        so3r3Model("\"gamma\": " + std::to_string(gamma));
    const MatrixXd lhs = M.EC() * M.kk().mu_M;
    const MatrixXd rhs = gamma * M.kk().I0 * M.kk().A0;
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12);
  }

  // gamma -> 0 collapses to the uncontrolled model
  const SemidirectModel M0 = so3r3Model("\"gamma\": 0.0");
  CHECK(M0.C().lpNorm<Eigen::Infinity>() == 0.0);

  // the family has a pole where 1 - gamma I0 A0 mu^-1 A0* loses rank
  const SemidirectModel base = so3r3Model();
  CHECK_THROWS_AS(gammaFamilyC(base.kk(), 6.0), SingularGainError);
  CHECK_NOTHROW(gammaFamilyC(base.kk(), 5.9));
}

TEST_CASE("construction rejects bad kaluza-klein data") {
  const AlgebraPair p = algebraFromJson("\"so3_semidirect_r3\"");
  auto make = [&](MatrixXd mu, MatrixXd I0, MatrixXd A0, MatrixXd C) {
    return SemidirectModel(p.m, p.g, p.rep, KKData{mu, I0, A0}, ControlGain{C});
  };
  const MatrixXd mu = 2.0 * MatrixXd::Identity(3, 3);
  const MatrixXd I0 = 0.3 * MatrixXd::Identity(3, 3);
  const MatrixXd A0 = MatrixXd::Zero(3, 3);
  const MatrixXd C = MatrixXd::Zero(3, 3);

  CHECK_NOTHROW(make(mu, I0, A0, C));

  MatrixXd asym = mu;
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(make(asym, I0, A0, C), ConstructionError);

  MatrixXd negdef = mu;
  negdef(2, 2) = -1.0;
  CHECK_THROWS_AS(make(negdef, I0, A0, C), ConstructionError);

  // I0 must be invariant under the rotation action: only scalar multiples
  // of the identity qualify on this pair
  MatrixXd aniso = I0;
  aniso(0, 0) = 0.9;
  CHECK_THROWS_AS(make(mu, aniso, A0, C), ConstructionError);

  CHECK_THROWS_AS(make(mu, I0, MatrixXd::Zero(2, 3), C), ConstructionError);
}

TEST_CASE("gains driving the feedback operator singular are rejected") {
  SatelliteParams p;
  CHECK_NOTHROW(buildSatellite(p));

  // C = (0,0,-1) makes 1 + C A0* vanish
  const AlgebraPair ap = algebraFromJson("\"so3\"");
  KKData kk;
  kk.mu_M = Eigen::Vector3d(3.3, 2.3, 1.0).asDiagonal();
  kk.I0 = MatrixXd::Constant(1, 1, 0.2);
  kk.A0 = MatrixXd::Zero(1, 3);
  kk.A0(0, 2) = 1.0;
  MatrixXd C = MatrixXd::Zero(1, 3);
  C(0, 2) = -1.0;
  CHECK_THROWS_AS(
      SemidirectModel(ap.m, ap.g, ap.rep, kk, ControlGain{C}),
      SingularGainError);
}

TEST_CASE("model dimensions are enforced at call boundaries") {
  const SemidirectModel M = buildSatellite(SatelliteParams{});
  CHECK_THROWS_AS(M.reducedHamiltonian(VectorXd::Zero(2), VectorXd::Zero(1)),
                  ContractError);
  CHECK_THROWS_AS(M.curvaturePairing(VectorXd::Zero(3), VectorXd::Zero(2)),
                  ContractError);
}

}  // TEST_SUITE
