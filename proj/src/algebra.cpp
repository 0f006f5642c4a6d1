#include "symact/algebra.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdlib>

namespace symact {

namespace {

constexpr double kStructureTol = 1e-12;
constexpr double kRepTol = 1e-10;

int levi(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  if ((i == 0 && j == 1 && k == 2) || (i == 1 && j == 2 && k == 0) ||
      (i == 2 && j == 0 && k == 1))
    return 1;
  return -1;
}

}  // namespace

LieAlgebra::LieAlgebra(int dim, std::vector<double> tensor)
    : dim_(dim), c_(std::move(tensor)) {
  if (dim <= 0) throw ConstructionError("LieAlgebra: dimension must be positive");
  const size_t want = static_cast<size_t>(dim) * dim * dim;
  if (c_.size() != want)
    throw ConstructionError("LieAlgebra: structure tensor has " +
                            std::to_string(c_.size()) + " entries, expected " +
                            std::to_string(want));

  ad_.reserve(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    MatrixXd A = MatrixXd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) A(k, j) = structure(i, j, k);
    ad_.push_back(std::move(A));
  }

  double anti = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        anti = std::max(anti, std::abs(structure(i, j, k) + structure(j, i, k)));
  if (anti > kStructureTol)
    throw ConstructionError("LieAlgebra: antisymmetry residual " +
                            std::to_string(anti) + " exceeds 1e-12");

  const double jac = jacobiResidual();
  if (jac > kStructureTol)
    throw ConstructionError("LieAlgebra: Jacobi residual " +
                            std::to_string(jac) + " exceeds 1e-12");

  abelian_ = true;
  for (double v : c_)
    if (v != 0.0) {
      abelian_ = false;
      break;
    }
}

MatrixXd LieAlgebra::ad(const VectorXd& X) const {
  requireDim(X, dim_, "ad: X");
  MatrixXd A = MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (X[i] != 0.0) A += X[i] * ad_[static_cast<size_t>(i)];
  return A;
}

VectorXd LieAlgebra::bracket(const VectorXd& X, const VectorXd& Y) const {
  requireDim(X, dim_, "bracket: X");
  requireDim(Y, dim_, "bracket: Y");
  return ad(X) * Y;
}

VectorXd LieAlgebra::adStar(const VectorXd& X, const VectorXd& p) const {
  requireDim(X, dim_, "adStar: X");
  requireDim(p, dim_, "adStar: p");
  return ad(X).transpose() * p;
}

double LieAlgebra::jacobiResidual() const {
  // [e_j, e_k] is column k of the ad(e_j) matrix
  auto bb = [this](int j, int k) -> VectorXd {
    return ad_[static_cast<size_t>(j)].col(k);
  };
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        VectorXd s = ad_[static_cast<size_t>(i)] * bb(j, k) +
                     ad_[static_cast<size_t>(j)] * bb(k, i) +
                     ad_[static_cast<size_t>(k)] * bb(i, j);
        worst = std::max(worst, s.lpNorm<Eigen::Infinity>());
      }
  return worst;
}

LieAlgebra LieAlgebra::so3() {
  std::vector<double> c(27, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        c[static_cast<size_t>((i * 3 + j) * 3 + k)] = levi(i, j, k);
  return LieAlgebra(3, std::move(c));
}

LieAlgebra LieAlgebra::abelianAlgebra(int n) {
  if (n <= 0) throw ConstructionError("abelian algebra: dimension must be positive");
  return LieAlgebra(n, std::vector<double>(static_cast<size_t>(n) * n * n, 0.0));
}

Representation::Representation(const LieAlgebra& m, const LieAlgebra& g,
                               std::vector<double> table)
    : dim_m_(m.dim()), dim_g_(g.dim()) {
  const size_t want = static_cast<size_t>(dim_m_) * dim_g_ * dim_g_;
  if (table.size() != want)
    throw ConstructionError("Representation: table has " +
                            std::to_string(table.size()) + " entries, expected " +
                            std::to_string(want));

  mats_.reserve(static_cast<size_t>(dim_m_));
  for (int a = 0; a < dim_m_; ++a) {
    MatrixXd M = MatrixXd::Zero(dim_g_, dim_g_);
    for (int i = 0; i < dim_g_; ++i)
      for (int j = 0; j < dim_g_; ++j)
        M(j, i) = table[static_cast<size_t>((a * dim_g_ + i) * dim_g_ + j)];
    mats_.push_back(std::move(M));
  }

  // Derivative of a right group representation: u -> rho^u is an
  // anti-homomorphism.
  double worst = 0.0;
  for (int a = 0; a < dim_m_; ++a)
    for (int b = 0; b < dim_m_; ++b) {
      VectorXd uv = m.bracket(VectorXd::Unit(dim_m_, a), VectorXd::Unit(dim_m_, b));
      MatrixXd lhs = rhoMatrix(uv);
      MatrixXd rhs = -(mats_[static_cast<size_t>(a)] * mats_[static_cast<size_t>(b)] -
                       mats_[static_cast<size_t>(b)] * mats_[static_cast<size_t>(a)]);
      worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
    }
  if (worst > kRepTol)
    throw ConstructionError(
        "Representation: anti-homomorphism residual " + std::to_string(worst) +
        " exceeds 1e-10");

  if (!g.abelian()) {
    double dworst = 0.0;
    for (int a = 0; a < dim_m_; ++a)
      for (int i = 0; i < dim_g_; ++i)
        for (int j = 0; j < dim_g_; ++j) {
          VectorXd fi = VectorXd::Unit(dim_g_, i), fj = VectorXd::Unit(dim_g_, j);
          const MatrixXd& Ra = mats_[static_cast<size_t>(a)];
          VectorXd lhs = Ra * g.bracket(fi, fj);
          VectorXd rhs = g.bracket(Ra * fi, fj) + g.bracket(fi, Ra * fj);
          dworst = std::max(dworst, (lhs - rhs).lpNorm<Eigen::Infinity>());
        }
    if (dworst > kRepTol)
      throw ConstructionError("Representation: derivation residual " +
                              std::to_string(dworst) + " exceeds 1e-10");
  }

  trivial_ = true;
  for (const MatrixXd& M : mats_)
    if (M.lpNorm<Eigen::Infinity>() != 0.0) {
      trivial_ = false;
      break;
    }
}

MatrixXd Representation::rhoMatrix(const VectorXd& u) const {
  requireDim(u, dim_m_, "rhoMatrix: u");
  MatrixXd M = MatrixXd::Zero(dim_g_, dim_g_);
  for (int a = 0; a < dim_m_; ++a)
    if (u[a] != 0.0) M += u[a] * mats_[static_cast<size_t>(a)];
  return M;
}

VectorXd Representation::rhoInf(const VectorXd& u, const VectorXd& X) const {
  requireDim(X, dim_g_, "rhoInf: X");
  return rhoMatrix(u) * X;
}

VectorXd Representation::rhoStar(const VectorXd& u, const VectorXd& p) const {
  requireDim(p, dim_g_, "rhoStar: p");
  return -(rhoMatrix(u).transpose() * p);
}

VectorXd Representation::diamond(const VectorXd& X, const VectorXd& p) const {
  requireDim(X, dim_g_, "diamond: X");
  requireDim(p, dim_g_, "diamond: p");
  VectorXd out(dim_m_);
  for (int a = 0; a < dim_m_; ++a)
    out[a] = p.dot(mats_[static_cast<size_t>(a)] * X);
  return out;
}

Representation Representation::trivialRep(const LieAlgebra& m, const LieAlgebra& g) {
  return Representation(
      m, g, std::vector<double>(static_cast<size_t>(m.dim()) * g.dim() * g.dim(), 0.0));
}

Representation Representation::so3OnR3(const LieAlgebra& so3, const LieAlgebra& r3) {
  if (so3.dim() != 3 || r3.dim() != 3)
    throw ConstructionError("so3OnR3: both algebras must be 3-dimensional");
  // rho^{e_a} f_i = f_i x e_a
  std::vector<double> r(27, 0.0);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r[static_cast<size_t>((a * 3 + i) * 3 + j)] = levi(i, a, j);
  return Representation(so3, r3, std::move(r));
}

VectorXd transportRate(const LieAlgebra& g, const Representation& rep,
                       const VectorXd& u, const VectorXd& Y,
                       const VectorXd& qt) {
  requireDim(Y, g.dim(), "transportRate: Y");
  requireDim(qt, g.dim(), "transportRate: qt");
  return -(g.adStar(Y, qt) + rep.rhoStar(u, qt));
}

Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d H;
  H << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return H;
}

Eigen::Matrix3d groupExpSo3(const Eigen::Vector3d& w) {
  const double th = w.norm();
  const Eigen::Matrix3d H = hat(w);
  if (th < 1e-8) {
    // two-term series keeps orthogonality error below rounding at this size
    return Eigen::Matrix3d::Identity() + H + 0.5 * (H * H);
  }
  const double a = std::sin(th) / th;
  const double b = (1.0 - std::cos(th)) / (th * th);
  return Eigen::Matrix3d::Identity() + a * H + b * (H * H);
}

Eigen::Matrix3d polarProject(const Eigen::Matrix3d& A) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0.0) {
    Eigen::Matrix3d U = svd.matrixU();
    U.col(2) *= -1.0;
    R = U * svd.matrixV().transpose();
  }
  return R;
}

namespace {

std::vector<double> flatten3(const nlohmann::json& j, int d1, int d2, int d3,
                             const std::string& key) {
  if (!j.is_array() || static_cast<int>(j.size()) != d1)
    throw ConstructionError(key + ": expected " + std::to_string(d1) +
                            " outer entries");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(d1) * d2 * d3);
  for (const auto& a : j) {
    if (!a.is_array() || static_cast<int>(a.size()) != d2)
      throw ConstructionError(key + ": expected " + std::to_string(d2) +
                              " middle entries");
    for (const auto& b : a) {
      if (!b.is_array() || static_cast<int>(b.size()) != d3)
        throw ConstructionError(key + ": expected " + std::to_string(d3) +
                                " inner entries");
      for (const auto& v : b) {
        if (!v.is_number())
          throw ConstructionError(key + ": non-numeric entry");
        out.push_back(v.get<double>());
      }
    }
  }
  return out;
}

AlgebraPair presetPair(const std::string& name) {
  if (name == "so3") {
    LieAlgebra m = LieAlgebra::so3();
    LieAlgebra g = LieAlgebra::abelianAlgebra(1);
    Representation rep = Representation::trivialRep(m, g);
    return AlgebraPair{std::move(m), std::move(g), std::move(rep)};
  }
  if (name.rfind("abelian:", 0) == 0) {
    const int n = std::atoi(name.c_str() + 8);
    if (n <= 0) throw ConstructionError("preset '" + name + "': bad dimension");
    LieAlgebra m = LieAlgebra::abelianAlgebra(n);
    LieAlgebra g = LieAlgebra::abelianAlgebra(1);
    Representation rep = Representation::trivialRep(m, g);
    return AlgebraPair{std::move(m), std::move(g), std::move(rep)};
  }
  if (name == "so3_semidirect_r3") {
    LieAlgebra m = LieAlgebra::so3();
    LieAlgebra g = LieAlgebra::abelianAlgebra(3);
    Representation rep = Representation::so3OnR3(m, g);
    return AlgebraPair{std::move(m), std::move(g), std::move(rep)};
  }
  throw ConstructionError("unknown algebra preset '" + name + "'");
}

}  // namespace

AlgebraPair algebraFromJson(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.is_string()) return presetPair(j.get<std::string>());
  if (!j.is_object())
    throw ConstructionError("algebra: expected preset name or object");
  for (const char* key : {"dim_m", "dim_g", "structure_m", "structure_g", "rep"})
    if (!j.contains(key))
      throw ConstructionError(std::string("algebra: missing key '") + key + "'");
  const int dm = j["dim_m"].get<int>();
  const int dg = j["dim_g"].get<int>();
  LieAlgebra m(dm, flatten3(j["structure_m"], dm, dm, dm, "structure_m"));
  LieAlgebra g(dg, flatten3(j["structure_g"], dg, dg, dg, "structure_g"));
  Representation rep(m, g, flatten3(j["rep"], dm, dg, dg, "rep"));
  return AlgebraPair{std::move(m), std::move(g), std::move(rep)};
}

}  // namespace symact
