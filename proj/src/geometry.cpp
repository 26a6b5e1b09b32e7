#include "polybern/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "polybern/error.hpp"

namespace polybern {

namespace {

using IndexSet = std::vector<std::size_t>;

// Orthonormal basis of span{p_i - p_first : i in idx}.
Eigen::MatrixXd span_basis(const WeightedSupport& s, const IndexSet& idx) {
  const int m = s.dim;
  if (idx.size() < 2) return Eigen::MatrixXd(m, 0);
  Eigen::MatrixXd diffs(m, static_cast<Eigen::Index>(idx.size() - 1));
  for (std::size_t k = 1; k < idx.size(); ++k) diffs.col(static_cast<Eigen::Index>(k - 1)) = s.points[idx[k]] - s.points[idx[0]];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

int affine_rank(const WeightedSupport& s, const IndexSet& idx) {
  return static_cast<int>(span_basis(s, idx).cols());
}

// Candidate hyperplane through the given points; returns the facet if every
// point of S lies on one side.
void try_hyperplane(const WeightedSupport& s, Point normal, std::map<IndexSet, FacetSpec>& out) {
  const double len = normal.norm();
  if (len < 1e-12) return;
  normal /= len;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : s.points) {
    const double v = p.dot(normal);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (int sign : {1, -1}) {
    const Point u = sign * normal;
    const double offset = sign > 0 ? lo : -hi;
    IndexSet on;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s.points[i].dot(u) - offset <= kGeomTol) on.push_back(i);
    if (affine_rank(s, on) != s.dim - 1) continue;
    out.try_emplace(on, FacetSpec{on, u, offset});
  }
}

std::vector<FacetSpec> hull_facets(const WeightedSupport& s) {
  std::map<IndexSet, FacetSpec> found;
  const std::size_t n = s.size();
  switch (s.dim) {
    case 1: {
      Point u(1);
      u << 1.0;
      try_hyperplane(s, u, found);
      break;
    }
    case 2:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const Point d = s.points[j] - s.points[i];
          Point u(2);
          u << -d(1), d(0);
          try_hyperplane(s, u, found);
        }
      break;
    case 3:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          for (std::size_t k = j + 1; k < n; ++k) {
            const Eigen::Vector3d a = s.points[j] - s.points[i];
            const Eigen::Vector3d b = s.points[k] - s.points[i];
            try_hyperplane(s, Point(a.cross(b)), found);
          }
      break;
    default:
      throw Error(ErrorCode::UnsupportedDimension,
                  "automatic hull only for dimension <= 3; supply \"faces\" in the polytope file");
  }
  std::vector<FacetSpec> facets;
  for (auto& [key, f] : found) facets.push_back(std::move(f));
  return facets;
}

FaceLattice complete_lattice(const WeightedSupport& s, const std::vector<FacetSpec>& facets) {
  const int m = s.dim;
  std::set<IndexSet> sets;
  for (const auto& f : facets) {
    IndexSet idx = f.indices;
    std::sort(idx.begin(), idx.end());
    sets.insert(idx);
  }
  // Close under pairwise intersection.
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<IndexSet> current(sets.begin(), sets.end());
    for (std::size_t a = 0; a < current.size(); ++a)
      for (std::size_t b = a + 1; b < current.size(); ++b) {
        IndexSet inter;
        std::set_intersection(current[a].begin(), current[a].end(), current[b].begin(),
                              current[b].end(), std::back_inserter(inter));
        if (!inter.empty() && sets.insert(inter).second) grew = true;
      }
  }

  std::vector<Face> faces;
  for (const auto& idx : sets) {
    Face face;
    face.indices = idx;
    face.tangent_basis = span_basis(s, idx);
    face.dim = static_cast<int>(face.tangent_basis.cols());
    Point u = Point::Zero(m);
    for (const auto& f : facets)
      if (std::includes(f.indices.begin(), f.indices.end(), idx.begin(), idx.end())) u += f.normal;
    u.normalize();
    face.normal = u;
    face.offset = s.points[idx.front()].dot(u);
    faces.push_back(std::move(face));
  }
  std::stable_sort(faces.begin(), faces.end(),
                   [](const Face& a, const Face& b) { return a.dim < b.dim; });

  Face top;
  for (std::size_t i = 0; i < s.size(); ++i) top.indices.push_back(i);
  top.normal = Point::Zero(m);
  top.dim = m;
  top.tangent_basis = Eigen::MatrixXd::Identity(m, m);
  faces.push_back(std::move(top));
  return FaceLattice(m, std::move(faces));
}

}  // namespace

bool WeightedSupport::is_lattice() const {
  for (const auto& p : points)
    for (Eigen::Index k = 0; k < p.size(); ++k)
      if (std::abs(p(k) - std::round(p(k))) > 1e-12) return false;
  return true;
}

void validate(const WeightedSupport& s) {
  if (s.dim < 1) throw Error(ErrorCode::Validation, "dimension must be positive");
  if (s.points.empty()) throw Error(ErrorCode::Validation, "support is empty");
  if (s.weights.size() != s.points.size())
    throw Error(ErrorCode::Validation, "one weight per support point required");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.points[i].size() != s.dim)
      throw Error(ErrorCode::Validation, "support point has wrong dimension");
    if (!(s.weights[i] > 0.0) || !std::isfinite(s.weights[i]))
      throw Error(ErrorCode::Validation, "weights must be strictly positive");
    for (std::size_t j = 0; j < i; ++j)
      if ((s.points[i] - s.points[j]).lpNorm<Eigen::Infinity>() <= kGeomTol) {
        std::ostringstream os;
        os << "duplicate support points " << j << " and " << i;
        throw Error(ErrorCode::Validation, os.str());
      }
  }
  IndexSet all(s.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (affine_rank(s, all) != s.dim)
    throw Error(ErrorCode::DegenerateHull, "support differences do not span R^m");
}

FaceLattice::FaceLattice(int dim, std::vector<Face> faces) : dim_(dim), faces_(std::move(faces)) {
  containing_.resize(faces_.size());
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    if (faces_[i].dim == dim_ - 1) facets_.push_back(i);
    for (std::size_t j = 0; j < faces_.size(); ++j) {
      if (i == j || faces_[j].dim <= faces_[i].dim) continue;
      const auto& a = faces_[i].indices;
      const auto& b = faces_[j].indices;
      if (std::includes(b.begin(), b.end(), a.begin(), a.end())) containing_[i].push_back(j);
    }
  }
}

std::vector<std::size_t> FaceLattice::boundary_faces(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < faces_.size(); ++j) {
    if (faces_[j].dim != faces_.at(i).dim - 1) continue;
    const auto& c = containing_[j];
    if (std::find(c.begin(), c.end(), i) != c.end()) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> FaceLattice::vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < faces_.size(); ++i)
    if (faces_[i].dim == 0) out.push_back(i);
  return out;
}

FaceLattice build_face_lattice(const WeightedSupport& support) {
  validate(support);
  return complete_lattice(support, hull_facets(support));
}

FaceLattice build_face_lattice(const WeightedSupport& support, const std::vector<FacetSpec>& facets) {
  validate(support);
  std::vector<FacetSpec> checked;
  for (const auto& f : facets) {
    if (f.normal.size() != support.dim || f.normal.norm() < 1e-12)
      throw Error(ErrorCode::Validation, "supplied face normal is zero or has wrong dimension");
    const double len = f.normal.norm();
    FacetSpec g{{}, f.normal / len, f.offset / len};
    for (std::size_t i = 0; i < support.size(); ++i) {
      const double slack = support.points[i].dot(g.normal) - g.offset;
      if (slack < -kGeomTol)
        throw Error(ErrorCode::Validation, "supplied face normal does not support the polytope");
      if (slack <= kGeomTol) g.indices.push_back(i);
    }
    IndexSet given = f.indices;
    std::sort(given.begin(), given.end());
    if (!given.empty() && given != g.indices)
      throw Error(ErrorCode::Validation, "supplied face indices disagree with normal/offset");
    if (g.indices.empty()) throw Error(ErrorCode::Validation, "supplied face touches no point of S");
    if (affine_rank(support, g.indices) == support.dim - 1) checked.push_back(std::move(g));
  }
  if (checked.empty()) throw Error(ErrorCode::Validation, "no facets among supplied faces");
  return complete_lattice(support, checked);
}

std::size_t locate_face_index(const FaceLattice& lattice, const Point& x, double tol) {
  if (boundary_distance(lattice, x) < -tol)
    throw Error(ErrorCode::OutsidePolytope, "point lies outside the polytope");
  const auto& faces = lattice.faces();
  std::size_t best = lattice.top_index();
  double best_slack = 0.0;
  for (std::size_t i = 0; i + 1 < faces.size(); ++i) {
    const double slack = std::abs(x.dot(faces[i].normal) - faces[i].offset);
    if (slack > tol) continue;
    if (faces[i].dim < faces[best].dim ||
        (faces[i].dim == faces[best].dim && slack < best_slack)) {
      best = i;
      best_slack = slack;
    }
  }
  return best;
}

const Face& locate_face(const FaceLattice& lattice, const Point& x, double tol) {
  return lattice.face(locate_face_index(lattice, x, tol));
}

bool contains(const FaceLattice& lattice, const Point& x, double tol) {
  if (x.size() != lattice.dim()) return false;
  return boundary_distance(lattice, x) >= -tol;
}

double boundary_distance(const FaceLattice& lattice, const Point& x) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i : lattice.facets()) {
    const auto& f = lattice.face(i);
    d = std::min(d, x.dot(f.normal) - f.offset);
  }
  return d;
}

Point face_centroid(const WeightedSupport& support, const FaceLattice& lattice, std::size_t i) {
  const auto& face = lattice.face(i);
  Point c = Point::Zero(support.dim);
  int count = 0;
  for (std::size_t v : lattice.vertices()) {
    const std::size_t p = lattice.face(v).indices.front();
    if (std::binary_search(face.indices.begin(), face.indices.end(), p)) {
      c += support.points[p];
      ++count;
    }
  }
  return c / count;
}

}  // namespace polybern
