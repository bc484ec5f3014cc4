// Copyright 2026 The Aniso Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/norm.hpp"
#include "aniso/types.hpp"

namespace aniso {

// Closed oriented hypersurface in R^{dim}: triangles in 3D, segments in 2D
// (the third index is -1). Faces are counterclockwise seen from outside.
struct TriSurface {
  int dim = 3;
  std::vector<Vec> vertices;
  std::vector<Vec> normals;
  std::vector<std::array<int, 3>> faces;
  int resolution = 0;

  int face_size() const { return dim; }
  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }
};

// Throws invalid-mesh unless every edge (3D) or vertex (2D) is shared by
// exactly two faces with opposite orientation, and normals are unit.
void validate(const TriSurface& s);

// Area-weighted outward unit normal and area (length in 2D) of face f.
Vec face_normal(const TriSurface& s, std::size_t f);
double face_area(const TriSurface& s, std::size_t f);

// One third of incident triangle areas; half of incident segment lengths.
std::vector<double> vertex_areas(const TriSurface& s);

// Recomputes vertex normals as the normalized sum of area-weighted face normals.
void compute_vertex_normals(TriSurface* s);

TriSurface translated(TriSurface s, const Vec& offset);
TriSurface scaled(TriSurface s, double t);
// Disjoint union; indices of `b` are shifted.
TriSurface combine(const TriSurface& a, const TriSurface& b);

// Subdivided icosahedron on the unit sphere; 10 * 4^level + 2 vertices.
TriSurface icosphere(int level);
// Regular polygon on the unit circle.
TriSurface circle_polygon(int count);
// icosphere(level) in 3D or circle_polygon(count) in 2D.
TriSurface unit_sphere(int dim, int resolution);

// A_phi(S) = sum of face area * phi(face normal). Faces with area below
// 1e-14 * bbox^2 are skipped and counted in `degenerate`.
double aniso_area(const TriSurface& s, const Norm& phi, int* degenerate = nullptr);
double area(const TriSurface& s);
// (1/dim) * integral of x . nu; orientation error when negative.
double enclosed_volume(const TriSurface& s);
// nu^phi = grad phi(nu) at every vertex.
std::vector<Vec> aniso_normal(const TriSurface& s, const Norm& phi);

struct CurvatureField {
  int dim = 3;
  // kappa[v] = principal phi-curvatures, ascending, dim - 1 entries.
  std::vector<Vec> kappa;
  std::vector<double> mean;
  std::vector<Vec> mean_vector;
  // Vertices whose fit was rank deficient; their values come from neighbours.
  int flagged = 0;
};

CurvatureField curvature(const TriSurface& s, const Norm& phi);

// (sum_v area_v * |H_v - lambda|^p)^{1/p}.
double lp_deviation(const CurvatureField& f, const TriSurface& s, double lambda,
                    double p);

// delta P_phi(S)(g) = sum over faces of area * (Dg : B_phi(nu)) with
// B_phi(nu) = phi(nu) I - nu (x) Dphi(nu); Dg is averaged over face vertices.
double first_variation(const TriSurface& s, const Norm& phi,
                       const std::vector<Mat>& jacobians);
// Jacobians of the identity field X.
std::vector<Mat> identity_jacobians(const TriSurface& s);

// n * A_phi / ((n + 1) * |enclosed|).
double lambda_of(const TriSurface& s, const Norm& phi);

// Circumradius about the origin.
double circumradius(const TriSurface& s);

void write_mesh(std::ostream& out, const TriSurface& s);
void write_mesh(const std::string& path, const TriSurface& s);
TriSurface read_mesh(std::istream& in);
TriSurface read_mesh(const std::string& path);
void write_curvature_csv(std::ostream& out, const CurvatureField& f);
void write_curvature_csv(const std::string& path, const CurvatureField& f);
// 2D boundary as an SVG path, scaled to fit a `size` pixel square.
void write_svg(std::ostream& out, const std::vector<const TriSurface*>& curves,
               int size = 512);

}  // namespace aniso
