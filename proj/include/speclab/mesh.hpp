#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "speclab/moduli.hpp"

namespace speclab {

// Tag carried by every mesh: either a conformal class or a subdomain of one.
struct ClassTag {
    ConformalClassParam param;
    bool subdomain = false;

    std::string str() const { return subdomain ? "subdomain(" + param.str() + ")" : param.str(); }
};

// Triangle mesh of a fundamental domain with quotient identifications. The
// vertex list is the "cut" mesh: boundary vertices of the fundamental domain
// appear once per copy and the identification glues them. Geometry is always
// read from the raw coordinates; degrees of freedom live on glued classes
// (vertex_dof). Meshes are immutable after construction.
struct DiscreteSurface {
    std::vector<std::array<double, 3>> vertices; // z = 0 for flat classes
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::pair<int, int>> identification; // vertex -> glued partner, sorted by source
    ClassTag class_tag;
    std::vector<std::pair<int, int>> boundary_edges; // raw vertex pairs, sorted
    bool orientable = true;
    int dim = 2;

    // Derived at construction: raw vertex -> glued dof index, contiguous.
    std::vector<int> vertex_dof;
    int dof_count = 0;

    std::vector<std::string> warnings; // e.g. disconnected subdomain selection

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
};

struct TopologyReport {
    int euler_characteristic = 0;
    bool orientable = true;
    int boundary_loops = 0;
    double area = 0.0;
    int glued_vertices = 0;
    int glued_edges = 0;
    int faces = 0;
};

// For flat classes `resolution` sets the grid (about resolution^2 vertices,
// resolution >= 4); for the sphere and projective plane it is the icosahedral
// subdivision level (>= 1).
DiscreteSurface generate_surface_mesh(const ConformalClassParam& param, int resolution);

// Restricts the mesh to the selected triangles. Both the selection and its
// complement must be nonempty. A disconnected selection is legal (disjoint
// unions are meaningful); it is recorded in warnings.
DiscreteSurface extract_subdomain(const DiscreteSurface& surface, const std::vector<int>& selected_triangles);

// Recomputes the glued complex invariants. Throws NonManifoldEdge when an
// edge has more than two incident triangles. Never mutates.
TopologyReport validate_topology(const DiscreteSurface& surface);

double triangle_area(const DiscreteSurface& surface, int t);
std::array<double, 3> triangle_barycenter(const DiscreteSurface& surface, int t);

// Geodesic distance from a point to a triangle barycenter: great-circle angle
// on the sphere classes, shortest flat distance across the quotient for the
// flat ones.
double barycenter_distance(const DiscreteSurface& surface, const std::array<double, 3>& point, int t);

// pi for the round classes, half the fundamental-domain diameter bound for
// flat ones; used to express removal radii as fractions of the diameter.
double surface_diameter(const DiscreteSurface& surface);

// Triangles whose barycenter lies within the given distance of the point.
std::vector<int> triangles_within(const DiscreteSurface& surface, const std::array<double, 3>& point,
                                  double radius);

// JSON document with fields {vertices, triangles, identification, class_tag,
// boundary_edges}, deterministic field ordering.
std::string mesh_to_json(const DiscreteSurface& surface);
DiscreteSurface mesh_from_json(const std::string& text);

} // namespace speclab
