#include "polybern/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polybern/error.hpp"

namespace polybern {

namespace {

// Softmax weights of log c(a) + <a - x, tau> over the face's points, together
// with the log-sum-exp of the unshifted exponents <a, tau> + log c(a).
struct Softmax {
  std::vector<double> w;
  double lse = 0.0;
};

Softmax face_softmax(const WeightedSupport& s, const Face& face, const Point& tau) {
  Softmax out;
  out.w.resize(face.indices.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < face.indices.size(); ++k) {
    const std::size_t i = face.indices[k];
    out.w[k] = std::log(s.weights[i]) + s.points[i].dot(tau);
    top = std::max(top, out.w[k]);
  }
  double total = 0.0;
  for (double& v : out.w) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : out.w) v /= total;
  out.lse = top + std::log(total);
  return out;
}

// F(xi) = log chi_K(B xi) - <x, B xi>; gradient B^T (mu_K - x), Hessian B^T Cov B.
struct Objective {
  double value;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

Objective objective(const WeightedSupport& s, const Face& face, const Point& x,
                    const Eigen::VectorXd& xi) {
  const Eigen::MatrixXd& B = face.tangent_basis;
  const Point tau = B * xi;
  const Softmax sm = face_softmax(s, face, tau);
  const Eigen::Index d = B.cols();
  Objective obj{sm.lse - x.dot(tau), Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
  std::vector<Eigen::VectorXd> q(face.indices.size());
  for (std::size_t k = 0; k < face.indices.size(); ++k) {
    q[k] = B.transpose() * (s.points[face.indices[k]] - x);
    obj.grad += sm.w[k] * q[k];
  }
  for (std::size_t k = 0; k < face.indices.size(); ++k) {
    const Eigen::VectorXd c = q[k] - obj.grad;
    obj.hess.noalias() += sm.w[k] * c * c.transpose();
  }
  return obj;
}

Eigen::VectorXd newton_on_face(const ExpFamily& fam, const Face& face, const Point& x) {
  const auto& cfg = fam.newton();
  const Eigen::Index d = face.tangent_basis.cols();
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(d);
  if (d == 0) return xi;

  Objective cur = objective(fam.support(), face, x, xi);
  for (int it = 0; it < cfg.max_iter; ++it) {
    double res = cur.grad.lpNorm<Eigen::Infinity>();
    if (res <= cfg.tol) {
      // One extra full step tightens the last few ulps.
      Eigen::LDLT<Eigen::MatrixXd> ldlt(cur.hess);
      const Eigen::VectorXd step = ldlt.solve(-cur.grad);
      if (step.allFinite()) {
        const Objective polished = objective(fam.support(), face, x, xi + step);
        if (polished.grad.lpNorm<Eigen::Infinity>() <= res) xi += step;
      }
      return xi;
    }
    // Levenberg shift ||grad|| keeps steps bounded where the softmax saturates
    // and vanishes at the root, so the local rate stays quadratic.
    const Eigen::MatrixXd shifted = cur.hess + cur.grad.norm() * Eigen::MatrixXd::Identity(d, d);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
    Eigen::VectorXd step = ldlt.solve(-cur.grad);
    if (!step.allFinite() || ldlt.info() != Eigen::Success || cur.grad.dot(step) >= 0.0) step = -cur.grad;

    // Armijo on F; a smaller residual alone only counts while F is flat to
    // rounding, otherwise the iterate can drift off towards a face.
    const double slope = cur.grad.dot(step);
    const double flat = 8 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(cur.value));
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Eigen::VectorXd trial = xi + t * step;
      Objective next = objective(fam.support(), face, x, trial);
      if (!std::isfinite(next.value)) continue;
      const bool armijo = next.value <= cur.value + 1e-4 * t * slope;
      const bool polish = next.value <= cur.value + flat && next.grad.lpNorm<Eigen::Infinity>() < res;
      if (armijo || polish) {
        xi = trial;
        cur = std::move(next);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (cur.grad.lpNorm<Eigen::Infinity>() <= cfg.tol) return xi;
  std::ostringstream os;
  os << "moment map inversion did not converge (residual " << cur.grad.lpNorm<Eigen::Infinity>()
     << ", boundary distance " << boundary_distance(fam.lattice(), x) << ")";
  throw Error(ErrorCode::NoConvergence, os.str());
}

void check_point(const ExpFamily& fam, const Point& x) {
  if (x.size() != fam.dim()) throw Error(ErrorCode::Validation, "point has wrong dimension");
  if (!x.allFinite()) throw Error(ErrorCode::Validation, "point is not finite");
}

}  // namespace

ExpFamily::ExpFamily(WeightedSupport support, NewtonConfig cfg)
    : support_(std::move(support)), cfg_(cfg) {
  lattice_ = build_face_lattice(support_);
}

ExpFamily::ExpFamily(WeightedSupport support, FaceLattice lattice, NewtonConfig cfg)
    : support_(std::move(support)), lattice_(std::move(lattice)), cfg_(cfg) {
  validate(support_);
  if (lattice_.dim() != support_.dim || lattice_.faces().empty() ||
      lattice_.top().indices.size() != support_.size())
    throw Error(ErrorCode::Validation, "face lattice does not match the support");
}

double ExpFamily::log_partition(const Face& face, const Point& tau) const {
  return face_softmax(support_, face, tau).lse;
}

std::size_t ExpFamily::evaluation_face(const Point& x) const {
  check_point(*this, x);
  const double dist = boundary_distance(lattice_, x);
  if (dist < -kGeomTol) throw Error(ErrorCode::OutsidePolytope, "point lies outside the polytope");
  if (dist >= cfg_.interior_threshold) return lattice_.top_index();
  return locate_face_index(lattice_, x, std::max(cfg_.interior_threshold, kGeomTol));
}

Point DiscreteMeasure::barycenter() const {
  Point b = Point::Zero(atoms.empty() ? 0 : atoms.front().size());
  for (std::size_t i = 0; i < atoms.size(); ++i) b += masses[i] * atoms[i];
  return b;
}

double DiscreteMeasure::total_mass() const {
  double t = 0.0;
  for (double m : masses) t += m;
  return t;
}

Point moment_map(const ExpFamily& fam, const Point& tau) {
  if (tau.size() != fam.dim()) throw Error(ErrorCode::Validation, "tau has wrong dimension");
  const Face& top = fam.lattice().top();
  const Softmax sm = face_softmax(fam.support(), top, tau);
  Point mu = Point::Zero(fam.dim());
  for (std::size_t k = 0; k < top.indices.size(); ++k) mu += sm.w[k] * fam.support().points[top.indices[k]];
  return mu;
}

Point inverse_moment_map(const ExpFamily& fam, const Point& x) {
  check_point(fam, x);
  if (boundary_distance(fam.lattice(), x) <= 0.0)
    throw Error(ErrorCode::OutsidePolytope, "inverse moment map needs an interior point");
  return newton_on_face(fam, fam.lattice().top(), x);
}

Eigen::VectorXd inverse_moment_map_on_face(const ExpFamily& fam, const Face& face, const Point& x) {
  check_point(fam, x);
  return newton_on_face(fam, face, x);
}

Point face_tau(const ExpFamily& fam, const Face& face, const Point& x) {
  return face.tangent_basis * inverse_moment_map_on_face(fam, face, x);
}

DiscreteMeasure measure_at(const ExpFamily& fam, const Point& x) {
  const Face& face = fam.lattice().face(fam.evaluation_face(x));
  const Softmax sm = face_softmax(fam.support(), face, face_tau(fam, face, x));
  DiscreteMeasure out;
  out.atoms = fam.support().points;
  out.masses.assign(out.atoms.size(), 0.0);
  for (std::size_t k = 0; k < face.indices.size(); ++k) out.masses[face.indices[k]] = sm.w[k];
  return out;
}

double legendre_delta(const ExpFamily& fam, const Point& x) {
  const Face& face = fam.lattice().face(fam.evaluation_face(x));
  const Point tau = face_tau(fam, face, x);
  return fam.log_partition(face, tau) - x.dot(tau);
}

MomentMatrices moment_matrices(const ExpFamily& fam, const Point& x) {
  const std::size_t fi = fam.evaluation_face(x);
  const DiscreteMeasure mu = measure_at(fam, x);
  const int m = fam.dim();
  MomentMatrices out{Eigen::MatrixXd::Zero(m, m), std::nullopt};
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    if (mu.masses[i] == 0.0) continue;
    const Point c = mu.atoms[i] - x;
    out.A.noalias() += mu.masses[i] * c * c.transpose();
  }
  if (fi == fam.lattice().top_index())
    out.K = out.A.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
  return out;
}

}  // namespace polybern
