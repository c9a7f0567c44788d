#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rv/errors.hpp"

namespace rv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Curvature-adapted sine/cosine pair: s solves s'' + delta*s = 0 with
// s(0)=0, s'(0)=1, and c = s'.  They satisfy c^2 + delta*s^2 = 1.
struct RadialProfile {
  double s = 0.0;
  double c = 1.0;
};

// Evaluates the profile for any curvature sign.  Near r*sqrt(|delta|) = 0
// a 4-term Taylor expansion keeps full relative accuracy.
RadialProfile radial_profile(double delta, double r);

// s(r)/r, continuous through r = 0 where it equals 1.
double radial_profile_over_r(double delta, double r);

// Simply connected model space of constant sectional curvature `delta` and
// dimension `dim`:
//   delta = 0  -> R^dim                  (points are plain vectors)
//   delta > 0  -> sphere of radius 1/sqrt(delta) in R^{dim+1}
//   delta < 0  -> upper hyperboloid <x,x>_L = 1/delta, x0 > 0 in R^{1,dim}
// All point/vector arguments live in the representation space R^{rep_dim}.
class SpaceForm {
 public:
  SpaceForm(double delta, int dim);

  double delta() const { return delta_; }
  int dim() const { return dim_; }
  int rep_dim() const { return rep_dim_; }
  bool flat() const { return delta_ == 0.0; }

  // Bilinear form of the representation space (Minkowski when delta < 0).
  double dot(const Vec& u, const Vec& v) const;
  double norm(const Vec& u) const;  // requires dot(u,u) >= 0

  // |delta*<x,x> - 1| for curved models (0 when flat); cheap validity gauge.
  double constraint_defect(const Vec& x) const;
  bool is_valid_point(const Vec& x, double tol = 1e-10) const;
  // Rescales onto the model (and checks the sheet for delta < 0).
  Vec project_to_model(const Vec& x) const;

  // pi/sqrt(delta) for delta > 0, +infinity otherwise.
  double injectivity_radius() const;

  double geodesic_distance(const Vec& a, const Vec& b) const;

  // Riemannian log: tangent vector at p pointing to x with |v| = dist(p,x).
  // DomainError when x is (numerically) antipodal to p on a sphere.
  Vec log_map(const Vec& p, const Vec& x) const;

  // Riemannian exp; v must be tangent at p (model-orthogonal to p).
  Vec exp_map(const Vec& p, const Vec& v) const;

  // Unit radial field grad dist(p, .) evaluated at x != p.
  Vec radial_gradient(const Vec& p, const Vec& x) const;

  // Position field of the distance from p: X(x) = s(r) * grad r.  Closed
  // form c(r)*x - p in the curved representations, x - p when flat.
  Vec position_field(const Vec& p, const Vec& x) const;

  // Columns form an orthonormal basis (w.r.t. `dot`) of the tangent space
  // at p; deterministic in p.  Shape: rep_dim x dim.
  Mat tangent_basis(const Vec& p) const;

 private:
  void check_point(const Vec& x, const char* what) const;

  double delta_ = 0.0;
  int dim_ = 0;
  int rep_dim_ = 0;
};

// Normal-coordinate chart of a vertex cloud around a base point, together
// with the radial quantities every distance-based estimate needs.
struct RadialFrame {
  Vec base_point;          // rep_dim
  Mat basis;               // rep_dim x dim, orthonormal tangent basis at base
  Vec r;                   // geodesic distance to each vertex
  Mat normal_coords;       // n x dim,   coordinates of log_p(x_i) in `basis`
  Mat position;            // n x rep_dim, X(x_i) = s(r_i) grad r
  Vec s, c;                // profile values at r_i
  double max_radius = 0;   // max r_i
  bool within_polar_cap = true;  // delta > 0: all r_i < pi/(2 sqrt(delta))
};

RadialFrame radial_frame(const SpaceForm& space, const Vec& p, const Mat& vertices);

}  // namespace rv
