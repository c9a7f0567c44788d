#include "rv/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rv/errors.hpp"
#include "rv/space_form.hpp"

namespace rv {

namespace {

// Closest orthogonal map between two model-orthonormal tangent frames,
// mapping coordinates in `from` to coordinates in `to`.
Mat2 frame_rotation(const SpaceForm& space, const Mat& to, const Mat& from) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = space.dot(to.col(i), from.col(j));
  Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

// Conjugate a symmetric tensor row (a11,a12,a22) by a rotation: R * T * R^T.
Eigen::Vector3d conjugate_row(const Mat2& r, const Eigen::Vector3d& row) {
  Mat2 t;
  t << row[0], row[1], row[1], row[2];
  Mat2 out = r * t * r.transpose();
  return {out(0, 0), 0.5 * (out(0, 1) + out(1, 0)), out(1, 1)};
}

std::vector<int> collect_rings(const ImmersedMesh& mesh, int v, int rings) {
  std::vector<int> frontier{v};
  std::set<int> seen{v};
  for (int depth = 0; depth < rings; ++depth) {
    std::vector<int> next;
    for (int w : frontier)
      for (int u : mesh.vertex_neighbors()[w])
        if (seen.insert(u).second) next.push_back(u);
    frontier = std::move(next);
  }
  seen.erase(v);
  return {seen.begin(), seen.end()};
}

}  // namespace

TangentTensorField identity_field(const ImmersedMesh& mesh, double scale) {
  TangentTensorField f;
  f.entries.resize(mesh.num_triangles(), 3);
  for (int t = 0; t < mesh.num_triangles(); ++t) f.entries.row(t) << scale, 0.0, scale;
  f.label = scale == 1.0 ? "identity" : "identity*" + std::to_string(scale);
  f.divergence_free = true;
  return f;
}

BoundaryTensorField boundary_identity_field(const ImmersedMesh& mesh, double scale) {
  BoundaryTensorField f;
  f.value = Vec::Constant(static_cast<int>(mesh.boundary_edges().size()), scale);
  f.label = scale == 1.0 ? "identity" : "identity*" + std::to_string(scale);
  return f;
}

double min_tensor_eigenvalue(const TangentTensorField& T) {
  double lo = std::numeric_limits<double>::infinity();
  for (int t = 0; t < T.num_elements(); ++t) {
    const double a = T.entries(t, 0), b = T.entries(t, 1), c = T.entries(t, 2);
    lo = std::min(lo, 0.5 * (a + c) - std::hypot(0.5 * (a - c), b));
  }
  return lo;
}

CurvatureField second_fundamental_form(const ImmersedMesh& mesh) {
  const SpaceForm& space = mesh.space();
  const int nv = mesh.num_vertices();
  const int dim = space.dim();        // model dimension
  const int rep = space.rep_dim();
  const int codim = dim - 2;
  if (codim < 0) throw DomainError("surface cannot be immersed in a model of dimension < 2");

  CurvatureField out;
  out.frame.resize(nv);
  out.b11 = Mat::Zero(nv, rep);
  out.b12 = Mat::Zero(nv, rep);
  out.b22 = Mat::Zero(nv, rep);
  out.mean_vector = Mat::Zero(nv, rep);
  out.hypersurface = (codim == 1);
  if (out.hypersurface) {
    out.unit_normal = Mat::Zero(nv, rep);
    out.shape_operator = Mat::Zero(nv, 3);
    out.kappa1 = Vec::Zero(nv);
    out.kappa2 = Vec::Zero(nv);
    out.h1 = Vec::Zero(nv);
    out.h2 = Vec::Zero(nv);
  }

  for (int v = 0; v < nv; ++v) {
    const Vec p = mesh.vertices().row(v).transpose();
    const Mat q = space.tangent_basis(p);  // rep x dim, model-orthonormal

    // Flat tangent plane coincides with the model: nothing to fit.
    if (codim == 0) {
      out.frame[v] = q;
      continue;
    }

    const int rings = mesh.is_boundary_vertex(v) ? 3 : 2;
    std::vector<int> nbrs = collect_rings(mesh, v, rings);
    if (static_cast<int>(nbrs.size()) < 5) {
      std::ostringstream msg;
      msg << "vertex " << v << " has only " << nbrs.size()
          << " usable neighbors for the curvature fit; refine the mesh";
      throw ValidationError(msg.str());
    }

    // Geodesic normal coordinates of the neighborhood, expressed in q.
    const int ns = static_cast<int>(nbrs.size());
    Mat coords(ns, dim);
    double sigma = 0;
    int ring1 = 0;
    for (int k = 0; k < ns; ++k) {
      const Vec y = space.log_map(p, mesh.vertices().row(nbrs[k]).transpose());
      for (int j = 0; j < dim; ++j) coords(k, j) = space.dot(q.col(j), y);
    }
    for (int u : mesh.vertex_neighbors()[v]) {
      sigma += space.geodesic_distance(p, mesh.vertices().row(u).transpose());
      ++ring1;
    }
    sigma /= ring1;

    // Split q-coordinates into a fitted tangent plane and normal directions
    // via the weighted covariance of the neighborhood.
    Vec w(ns);
    for (int k = 0; k < ns; ++k)
      w[k] = std::exp(-coords.row(k).squaredNorm() / (2.0 * sigma * sigma));
    Mat cov = Mat::Zero(dim, dim);
    for (int k = 0; k < ns; ++k)
      cov += w[k] * coords.row(k).transpose() * coords.row(k);
    Eigen::SelfAdjointEigenSolver<Mat> es(cov);
    Mat axes(dim, dim);  // columns: tangent t1,t2 then normals (ascending variance)
    axes.col(0) = es.eigenvectors().col(dim - 1);
    axes.col(1) = es.eigenvectors().col(dim - 2);
    for (int j = 0; j < codim; ++j) axes.col(2 + j) = es.eigenvectors().col(codim - 1 - j);

    // Weighted polynomial fit of the normal heights over the tangent plane.
    const bool cubic = mesh.is_boundary_vertex(v) && ns >= 16;
    const int ncoef = cubic ? 10 : 6;
    Mat design(ns + 1, ncoef);
    Mat rhs = Mat::Zero(ns + 1, codim);
    for (int k = 0; k <= ns; ++k) {
      double a = 0, b = 0, wk = 1.0;  // row ns is the (exact) center sample
      if (k < ns) {
        a = coords.row(k).dot(axes.col(0));
        b = coords.row(k).dot(axes.col(1));
        wk = w[k];
        for (int j = 0; j < codim; ++j) rhs(k, j) = coords.row(k).dot(axes.col(2 + j));
      }
      design(k, 0) = 1.0;
      design(k, 1) = a;
      design(k, 2) = b;
      design(k, 3) = 0.5 * a * a;
      design(k, 4) = a * b;
      design(k, 5) = 0.5 * b * b;
      if (cubic) {
        design(k, 6) = a * a * a / 6.0;
        design(k, 7) = 0.5 * a * a * b;
        design(k, 8) = 0.5 * a * b * b;
        design(k, 9) = b * b * b / 6.0;
      }
      const double sw = std::sqrt(wk);
      design.row(k) *= sw;
      rhs.row(k) *= sw;
    }
    Mat coef = design.colPivHouseholderQr().solve(rhs);  // ncoef x codim

    // Graph map Phi(a,b) = (a, b, h(a,b)): orthonormalize its differential to
    // get the true tangent frame and push the Hessians through.
    Mat dphi = Mat::Zero(dim, 2);
    dphi(0, 0) = dphi(1, 1) = 1.0;
    for (int j = 0; j < codim; ++j) {
      dphi(2 + j, 0) = coef(1, j);
      dphi(2 + j, 1) = coef(2, j);
    }
    Eigen::HouseholderQR<Mat> qr(dphi);
    Mat qfull = qr.householderQ();                      // dim x dim
    Mat rfact = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
    // Columns 0,1 of qfull: orthonormal tangent; columns 2..: orthonormal normals.
    Mat2 rinv = Mat2(rfact).inverse();

    Mat frame_rep = q * axes * qfull;  // rep x dim, orthonormal in the model form
    out.frame[v] = frame_rep.leftCols(2);

    // b per normal direction, as a form on the orthonormalized tangent plane.
    std::vector<Mat2> borth(codim);
    for (int j = 0; j < codim; ++j) {
      Mat2 hess;
      hess << coef(3, j), coef(4, j), coef(4, j), coef(5, j);
      Mat2 param = Mat2::Zero();
      for (int i = 0; i < codim; ++i) {
        Mat2 hi;
        hi << coef(3, i), coef(4, i), coef(4, i), coef(5, i);
        param += qfull(2 + i, 2 + j) * hi;  // normal component of Phi_ab
      }
      borth[j] = rinv.transpose() * param * rinv;
      Vec normal_rep = frame_rep.col(2 + j);
      out.b11.row(v) += borth[j](0, 0) * normal_rep.transpose();
      out.b12.row(v) += borth[j](0, 1) * normal_rep.transpose();
      out.b22.row(v) += borth[j](1, 1) * normal_rep.transpose();
    }
    out.mean_vector.row(v) = 0.5 * (out.b11.row(v) + out.b22.row(v));

    if (out.hypersurface) {
      // Outward = the orientation normal of the stored triangle winding.
      Eigen::Vector3d orient = Eigen::Vector3d::Zero();
      Mat local = axes * qfull;  // q-coords of the fitted frame (3x3 here)
      for (int t : mesh.vertex_triangles()[v]) {
        const Tri& tri = mesh.triangles()[t];
        int i0 = 0;
        while (tri[i0] != v) ++i0;
        const Vec ya = space.log_map(p, mesh.vertices().row(tri[(i0 + 1) % 3]).transpose());
        const Vec yb = space.log_map(p, mesh.vertices().row(tri[(i0 + 2) % 3]).transpose());
        Eigen::Vector3d ca, cb;
        for (int j = 0; j < 3; ++j) {
          ca[j] = space.dot(q.col(j), ya);
          cb[j] = space.dot(q.col(j), yb);
        }
        orient += ca.cross(cb);
      }
      const double sign = orient.dot(local.col(2)) >= 0 ? 1.0 : -1.0;
      out.unit_normal.row(v) = sign * frame_rep.col(2).transpose();
      // Inward-positive scalar form: A = -<B, nu_out>.
      Mat2 a = -sign * borth[0];
      out.shape_operator.row(v) << a(0, 0), 0.5 * (a(0, 1) + a(1, 0)), a(1, 1);
      const double mid = 0.5 * (a(0, 0) + a(1, 1));
      const double rad = std::hypot(0.5 * (a(0, 0) - a(1, 1)), 0.5 * (a(0, 1) + a(1, 0)));
      out.kappa1[v] = mid + rad;
      out.kappa2[v] = mid - rad;
      out.h1[v] = mid;
      out.h2[v] = out.kappa1[v] * out.kappa2[v];
    }
  }
  return out;
}

TangentTensorField newton_tensor(const ImmersedMesh& mesh, const CurvatureField& field, int r) {
  if (r != 0 && r != 1) throw DomainError("newton tensor order must be 0 or 1");
  if (r == 0) {
    TangentTensorField f = identity_field(mesh, 1.0);
    f.label = "newton(0)";
    return f;
  }
  if (!field.hypersurface)
    throw DomainError("newton tensor of order 1 requires a hypersurface immersion");
  const SpaceForm& space = mesh.space();
  TangentTensorField f;
  f.entries = Mat::Zero(mesh.num_triangles(), 3);
  f.label = "newton(1)";
  f.divergence_free = true;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Mat& ft = mesh.charts()[t].frame;
    for (int corner = 0; corner < 3; ++corner) {
      const int v = mesh.triangles()[t][corner];
      const auto& a = field.shape_operator.row(v);
      const Eigen::Vector3d t1(a[2], -a[1], a[0]);  // tr(A) I - A
      const Mat2 rot = frame_rotation(space, ft, field.frame[v]);
      f.entries.row(t) += conjugate_row(rot, t1).transpose() / 3.0;
    }
  }
  return f;
}

Mat vertex_tensor(const ImmersedMesh& mesh, const CurvatureField& field,
                  const TangentTensorField& T) {
  if (T.num_elements() != mesh.num_triangles())
    throw ValidationError("tensor field does not match the mesh element count");
  const SpaceForm& space = mesh.space();
  Mat out = Mat::Zero(mesh.num_vertices(), 3);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& tris = mesh.vertex_triangles()[v];
    for (int t : tris) {
      const Mat2 rot = frame_rotation(space, field.frame[v], mesh.charts()[t].frame);
      out.row(v) += conjugate_row(rot, T.entries.row(t).transpose()).transpose();
    }
    out.row(v) /= static_cast<double>(tris.size());
  }
  return out;
}

Mat generalized_mean_curvature(const ImmersedMesh& mesh, const CurvatureField& field,
                               const TangentTensorField& T) {
  const Mat tv = vertex_tensor(mesh, field, T);
  Mat h(mesh.num_vertices(), mesh.space().rep_dim());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    h.row(v) = tv(v, 0) * field.b11.row(v) + 2.0 * tv(v, 1) * field.b12.row(v) +
               tv(v, 2) * field.b22.row(v);
  return h;
}

DriftField drift_term(const ImmersedMesh& mesh, const CurvatureField& field,
                      const TangentTensorField& T) {
  if (min_tensor_eigenvalue(T) <= 0)
    throw DomainError("tensor field must be positive definite for drift computations");
  const SpaceForm& space = mesh.space();
  const int nv = mesh.num_vertices();
  const int rep = space.rep_dim();

  const Mat tv = vertex_tensor(mesh, field, T);
  DriftField d;
  d.h_t = generalized_mean_curvature(mesh, field, T);
  d.t_grad_f = Mat::Zero(nv, rep);
  d.trace = tv.col(0) + tv.col(2);

  // Area-weighted triangle gradients of the density, pushed to vertices.
  Mat grad_acc = Mat::Zero(nv, rep);
  Vec area_acc = Vec::Zero(nv);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleChart& ch = mesh.charts()[t];
    Eigen::Vector3d fvals;
    for (int c = 0; c < 3; ++c) fvals[c] = mesh.density()[mesh.triangles()[t][c]];
    const Vec2 g2 = ch.grad * fvals;
    const Vec g = ch.frame * g2;
    for (int c = 0; c < 3; ++c) {
      grad_acc.row(mesh.triangles()[t][c]) += ch.area * g.transpose();
      area_acc[mesh.triangles()[t][c]] += ch.area;
    }
  }
  d.grad_f_norm = Vec::Zero(nv);
  for (int v = 0; v < nv; ++v) {
    const Vec g = grad_acc.row(v).transpose() / area_acc[v];
    // Tangential projection in the fitted vertex frame.
    Vec2 gf;
    gf << space.dot(field.frame[v].col(0), g), space.dot(field.frame[v].col(1), g);
    d.grad_f_norm[v] = gf.norm();
    Mat2 tm;
    tm << tv(v, 0), tv(v, 1), tv(v, 1), tv(v, 2);
    const Vec2 tg = tm * gf;
    d.t_grad_f.row(v) = (field.frame[v] * tg).transpose();
  }
  d.drift = d.h_t - d.t_grad_f;
  d.norm = Vec::Zero(nv);
  for (int v = 0; v < nv; ++v) d.norm[v] = space.norm(d.drift.row(v).transpose());
  return d;
}

Mat curve_curvature(const ImmersedMesh& curve) {
  if (curve.num_segments() == 0)
    throw ValidationError("curve curvature requires a curve mesh");
  const SpaceForm& space = curve.space();
  const int nv = curve.num_vertices();
  std::vector<int> prev(nv, -1), next(nv, -1);
  for (const Seg& s : curve.segments()) {
    next[s[0]] = s[1];
    prev[s[1]] = s[0];
  }
  Mat kappa = Mat::Zero(nv, space.rep_dim());
  for (int v = 0; v < nv; ++v) {
    if (prev[v] < 0 || next[v] < 0)
      throw ValidationError("curve curvature requires closed loops (open endpoint found)");
    const Vec p = curve.vertices().row(v).transpose();
    const Vec ya = space.log_map(p, curve.vertices().row(prev[v]).transpose());
    const Vec yb = space.log_map(p, curve.vertices().row(next[v]).transpose());
    const double ha = space.norm(ya), hb = space.norm(yb);
    kappa.row(v) = (2.0 * (ya * hb + yb * ha) / (ha * hb * (ha + hb))).transpose();
  }
  return kappa;
}

CurveDrift curve_drift_term(const ImmersedMesh& curve, const Vec& s_at_vertices) {
  const SpaceForm& space = curve.space();
  const int nv = curve.num_vertices();
  if (s_at_vertices.size() != nv)
    throw ValidationError("curve weight field does not match the vertex count");
  if ((s_at_vertices.array() <= 0.0).any())
    throw DomainError("curve weight field must be positive");
  const Mat kappa = curve_curvature(curve);
  std::vector<int> prev(nv, -1), next(nv, -1);
  for (const Seg& s : curve.segments()) {
    next[s[0]] = s[1];
    prev[s[1]] = s[0];
  }
  CurveDrift out;
  out.h_s = Mat::Zero(nv, space.rep_dim());
  out.drift = Mat::Zero(nv, space.rep_dim());
  out.norm = Vec::Zero(nv);
  out.trace = s_at_vertices;
  for (int v = 0; v < nv; ++v) {
    const Vec p = curve.vertices().row(v).transpose();
    const Vec ya = space.log_map(p, curve.vertices().row(prev[v]).transpose());
    const Vec yb = space.log_map(p, curve.vertices().row(next[v]).transpose());
    const double ha = space.norm(ya), hb = space.norm(yb);
    // Central difference of the density along the arc-length parameter.
    const double df = (curve.density()[next[v]] - curve.density()[prev[v]]) / (ha + hb);
    const Vec tangent = (yb / hb - ya / ha) / 2.0;  // unit up to O(h^2)
    const double tn = space.norm(tangent);
    Vec grad_f = Vec::Zero(space.rep_dim());
    if (tn > 1e-14) grad_f = (df / tn) * tangent;
    out.h_s.row(v) = s_at_vertices[v] * kappa.row(v);
    out.drift.row(v) = out.h_s.row(v) - s_at_vertices[v] * grad_f.transpose();
    out.norm[v] = space.norm(out.drift.row(v).transpose());
  }
  return out;
}

Vec boundary_vertex_scalars(const ImmersedMesh& surface, const BoundaryTensorField& S) {
  const auto& edges = surface.boundary_edges();
  if (S.value.size() != static_cast<int>(edges.size()))
    throw ValidationError("boundary tensor field does not match the boundary edge count");
  Vec acc = Vec::Zero(surface.num_vertices());
  Vec cnt = Vec::Zero(surface.num_vertices());
  for (size_t e = 0; e < edges.size(); ++e)
    for (int k = 0; k < 2; ++k) {
      acc[edges[e][k]] += S.value[static_cast<int>(e)];
      cnt[edges[e][k]] += 1.0;
    }
  for (int v = 0; v < surface.num_vertices(); ++v)
    if (cnt[v] > 0) acc[v] /= cnt[v];
  return acc;
}

}  // namespace rv
