#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rv/mesh.hpp"

namespace rv {

// Log-density presets evaluated on representation-space coordinates:
//   zero               f = 0
//   linear(a)          f = a * x_last   (height function)
//   quadratic(a)       f = a * |x|^2    (constant on curved models)
struct DensitySpec {
  std::string kind = "zero";
  double coeff = 1.0;
};

struct ShapeSpec {
  std::string kind;  // round_sphere | ellipsoid | flat_disk | hemisphere | annulus |
                     // geodesic_sphere_in_S3 | geodesic_sphere_in_H3 | spherical_cap_in_S3
  double radius = 1.0;          // round_sphere, flat_disk
  double a = 1.0, b = 1.0, c = 1.0;  // ellipsoid semi-axes
  double rho = 0.5;             // geodesic radius of the curved-model shapes
  double r0 = 0.5, r1 = 1.0;    // annulus radii
  int refine = 3;               // subdivision level; vertex count grows ~4x per level
  DensitySpec density;
  double jitter = 0.0;          // relative tangential vertex perturbation (interior only)
  uint64_t seed = 0;            // jitter RNG seed
};

// Builds one of the catalogue shapes.  Throws ConfigError for unknown kinds
// or out-of-range parameters (radii <= 0, rho >= pi/2 on the unit 3-sphere,
// annulus with r0 >= r1, refinement outside [0, 8]).
ImmersedMesh generate_shape(const ShapeSpec& spec);

// Evaluates a density preset on explicit coordinates (used by generators and
// by scenario configs applied to parsed meshes).
Vec evaluate_density(const DensitySpec& spec, const Mat& vertices);

}  // namespace rv
