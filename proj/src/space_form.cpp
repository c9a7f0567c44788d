#include "rv/space_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rv {

namespace {
constexpr double kTaylorCut = 1e-8;  // switch point for |delta|*r^2
}

RadialProfile radial_profile(double delta, double r) {
  if (!std::isfinite(delta) || !std::isfinite(r)) {
    throw DomainError("radial_profile: non-finite argument");
  }
  RadialProfile out;
  const double q = delta * r * r;  // signed (sqrt(|delta|)*r)^2
  if (std::abs(q) < kTaylorCut) {
    // 4-term series of sin/sinh and cos/cosh, uniform in the sign of delta.
    out.s = r * (1.0 - q / 6.0 + q * q / 120.0 - q * q * q / 5040.0);
    out.c = 1.0 - q / 2.0 + q * q / 24.0 - q * q * q / 720.0;
  } else if (delta > 0.0) {
    const double k = std::sqrt(delta);
    out.s = std::sin(k * r) / k;
    out.c = std::cos(k * r);
  } else {
    const double k = std::sqrt(-delta);
    out.s = std::sinh(k * r) / k;
    out.c = std::cosh(k * r);
  }
  return out;
}

double radial_profile_over_r(double delta, double r) {
  const double q = delta * r * r;
  if (std::abs(q) < kTaylorCut) {
    return 1.0 - q / 6.0 + q * q / 120.0 - q * q * q / 5040.0;
  }
  return radial_profile(delta, r).s / r;
}

SpaceForm::SpaceForm(double delta, int dim) : delta_(delta), dim_(dim) {
  if (!std::isfinite(delta)) throw DomainError("SpaceForm: curvature must be finite");
  if (dim < 1) throw DomainError("SpaceForm: dimension must be >= 1");
  rep_dim_ = (delta == 0.0) ? dim : dim + 1;
}

double SpaceForm::dot(const Vec& u, const Vec& v) const {
  if (u.size() != rep_dim_ || v.size() != rep_dim_) {
    throw DomainError("SpaceForm::dot: vector size mismatch");
  }
  double d = u.dot(v);
  if (delta_ < 0.0) d -= 2.0 * u[0] * v[0];  // Minkowski: -u0*v0 + sum u_i*v_i
  return d;
}

double SpaceForm::norm(const Vec& u) const {
  const double q = dot(u, u);
  if (q < 0.0) {
    if (q > -1e-12 * u.squaredNorm()) return 0.0;
    throw DomainError("SpaceForm::norm: vector has negative square length");
  }
  return std::sqrt(q);
}

double SpaceForm::constraint_defect(const Vec& x) const {
  if (x.size() != rep_dim_) throw DomainError("SpaceForm: point size mismatch");
  if (flat()) return 0.0;
  return std::abs(delta_ * dot(x, x) - 1.0);
}

bool SpaceForm::is_valid_point(const Vec& x, double tol) const {
  if (x.size() != rep_dim_) return false;
  if (!x.allFinite()) return false;
  if (flat()) return true;
  if (constraint_defect(x) > tol) return false;
  if (delta_ < 0.0 && x[0] <= 0.0) return false;
  return true;
}

Vec SpaceForm::project_to_model(const Vec& x) const {
  if (x.size() != rep_dim_) throw DomainError("SpaceForm: point size mismatch");
  if (flat()) return x;
  const double q = delta_ * dot(x, x);
  if (q <= 0.0) throw DomainError("project_to_model: point cannot be scaled onto the model");
  Vec y = x / std::sqrt(q);
  if (delta_ < 0.0) {
    if (y[0] < 0.0) throw DomainError("project_to_model: point is on the lower sheet");
  }
  return y;
}

double SpaceForm::injectivity_radius() const {
  if (delta_ > 0.0) return M_PI / std::sqrt(delta_);
  return std::numeric_limits<double>::infinity();
}

void SpaceForm::check_point(const Vec& x, const char* what) const {
  if (!is_valid_point(x, 1e-8)) {
    throw DomainError(std::string(what) + ": point does not satisfy the model constraint");
  }
}

double SpaceForm::geodesic_distance(const Vec& a, const Vec& b) const {
  if (flat()) {
    if (a.size() != rep_dim_ || b.size() != rep_dim_) {
      throw DomainError("geodesic_distance: size mismatch");
    }
    return (a - b).norm();
  }
  check_point(a, "geodesic_distance");
  check_point(b, "geodesic_distance");
  // In both curved representations delta*<a,b> equals cos(k d) resp. cosh(k d).
  const double u = delta_ * dot(a, b);
  if (delta_ > 0.0) {
    return std::acos(std::clamp(u, -1.0, 1.0)) / std::sqrt(delta_);
  }
  return std::acosh(std::max(u, 1.0)) / std::sqrt(-delta_);
}

Vec SpaceForm::log_map(const Vec& p, const Vec& x) const {
  if (flat()) {
    if (p.size() != rep_dim_ || x.size() != rep_dim_) {
      throw DomainError("log_map: size mismatch");
    }
    return x - p;
  }
  check_point(p, "log_map");
  check_point(x, "log_map");
  const double d = geodesic_distance(p, x);
  const double scale = 1.0 / std::sqrt(std::abs(delta_));
  if (d < 1e-15 * scale) return Vec::Zero(rep_dim_);
  const RadialProfile pr = radial_profile(delta_, d);
  if (std::abs(pr.s) < 1e-12 * scale) {
    throw DomainError("log_map: points are antipodal (log undefined)");
  }
  return (d / pr.s) * (x - pr.c * p);
}

Vec SpaceForm::exp_map(const Vec& p, const Vec& v) const {
  if (flat()) {
    if (p.size() != rep_dim_ || v.size() != rep_dim_) {
      throw DomainError("exp_map: size mismatch");
    }
    return p + v;
  }
  check_point(p, "exp_map");
  if (v.size() != rep_dim_) throw DomainError("exp_map: size mismatch");
  const double t = norm(v);
  const double scale = 1.0 / std::sqrt(std::abs(delta_));
  if (t <= 1e-300) return p;
  // Tangency: <p, v> must vanish in the model metric.
  const double tang = std::abs(dot(p, v)) / (scale * t);
  if (tang > 1e-10) throw DomainError("exp_map: vector is not tangent at p");
  // Remove the residual radial component before flowing.
  Vec u = v - (dot(p, v) * delta_) * p;
  const double tu = norm(u);
  if (tu <= 1e-300) return p;
  u /= tu;
  const RadialProfile pr = radial_profile(delta_, t);
  return pr.c * p + pr.s * u;
}

Vec SpaceForm::radial_gradient(const Vec& p, const Vec& x) const {
  const double d = geodesic_distance(p, x);
  const double scale = flat() ? 1.0 : 1.0 / std::sqrt(std::abs(delta_));
  if (d < 1e-14 * scale) {
    throw DomainError("radial_gradient: undefined at the base point");
  }
  if (flat()) return (x - p) / d;
  const RadialProfile pr = radial_profile(delta_, d);
  if (std::abs(pr.s) < 1e-12 * scale) {
    throw DomainError("radial_gradient: undefined at the antipode");
  }
  // gamma'(d) for the unit geodesic from p through x.
  return (pr.c * x - p) / pr.s;
}

Vec SpaceForm::position_field(const Vec& p, const Vec& x) const {
  if (flat()) {
    if (p.size() != rep_dim_ || x.size() != rep_dim_) {
      throw DomainError("position_field: size mismatch");
    }
    return x - p;
  }
  const double d = geodesic_distance(p, x);
  const RadialProfile pr = radial_profile(delta_, d);
  // s(r) grad r = c(r) x - p; exact because c^2 + delta s^2 = 1.
  return pr.c * x - p;
}

Mat SpaceForm::tangent_basis(const Vec& p) const {
  if (flat()) return Mat::Identity(rep_dim_, dim_);
  check_point(p, "tangent_basis");
  // Project the coordinate axes off p (w.r.t. the model form), then run a
  // modified Gram-Schmidt keeping the first dim_ independent directions.
  Mat basis(rep_dim_, dim_);
  int have = 0;
  for (int axis = 0; axis < rep_dim_ && have < dim_; ++axis) {
    Vec w = Vec::Zero(rep_dim_);
    w[axis] = 1.0;
    w -= (dot(w, p) * delta_) * p;  // <p,p> = 1/delta
    for (int j = 0; j < have; ++j) {
      w -= dot(w, basis.col(j)) * basis.col(j);
    }
    const double q = dot(w, w);
    if (q > 1e-12) {
      basis.col(have++) = w / std::sqrt(q);
    }
  }
  if (have != dim_) throw DomainError("tangent_basis: failed to complete basis");
  return basis;
}

RadialFrame radial_frame(const SpaceForm& space, const Vec& p, const Mat& vertices) {
  if (vertices.cols() != space.rep_dim()) {
    throw DomainError("radial_frame: vertex dimension mismatch");
  }
  const int n = static_cast<int>(vertices.rows());
  RadialFrame fr;
  fr.base_point = p;
  fr.basis = space.tangent_basis(p);
  fr.r.resize(n);
  fr.normal_coords.resize(n, space.dim());
  fr.position.resize(n, space.rep_dim());
  fr.s.resize(n);
  fr.c.resize(n);
  const double polar = space.delta() > 0.0
                           ? 0.5 * M_PI / std::sqrt(space.delta())
                           : std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const Vec x = vertices.row(i).transpose();
    const double d = space.geodesic_distance(p, x);
    fr.r[i] = d;
    const RadialProfile pr = radial_profile(space.delta(), d);
    fr.s[i] = pr.s;
    fr.c[i] = pr.c;
    const Vec v = space.log_map(p, x);
    for (int j = 0; j < space.dim(); ++j) {
      fr.normal_coords(i, j) = space.dot(v, fr.basis.col(j));
    }
    fr.position.row(i) = space.position_field(p, x).transpose();
    fr.max_radius = std::max(fr.max_radius, d);
    if (d >= polar) fr.within_polar_cap = false;
  }
  return fr;
}

}  // namespace rv
