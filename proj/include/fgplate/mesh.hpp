#pragma once

#include "fgplate/element.hpp"

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <vector>

namespace fgplate {

enum EdgeFlag : unsigned {
    kEdgeLeft = 1u,    // s = 0, the oblique edge through the origin
    kEdgeRight = 2u,   // s = 1
    kEdgeBottom = 4u,  // t = 0, y = 0
    kEdgeTop = 8u,     // t = 1
};

/**
 * Structured QUAD-8 mesh of a parallelogram plate.
 *
 * The planform has side `a` along x and side `b` inclined by the skew angle
 * psi from the y axis:
 *
 *   y = t * b * cos(psi),   x = s * a + y * tan(psi),   (s, t) in [0, 1]^2.
 *
 * psi = 0 gives the axis-aligned a x b rectangle. Nodes are numbered row by
 * row in t; even rows carry corner and midside nodes (2nx + 1 per row), odd
 * rows only the midside nodes of vertical edges (nx + 1 per row).
 */
struct Mesh {
    double a = 0.0;
    double b = 0.0;
    double skew = 0.0;  // radians
    int nx = 0;
    int ny = 0;
    std::vector<Eigen::Vector2d> nodes;
    std::vector<unsigned> edge_flags;
    std::vector<std::array<int, kNodesPerElement>> elements;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int element_count() const { return static_cast<int>(elements.size()); }
    NodeCoords element_coords(int element) const;
};

Mesh generate_mesh(double a, double b, double skew, int nx, int ny);

/// Expected serendipity node count (2nx+1)(2ny+1) - nx*ny.
constexpr int serendipity_node_count(int nx, int ny) {
    return (2 * nx + 1) * (2 * ny + 1) - nx * ny;
}

/// CSV dumps: "node,x,y,edges" and "element,n1,...,n8".
void write_mesh_nodes_csv(const Mesh& mesh, std::ostream& out);
void write_mesh_elements_csv(const Mesh& mesh, std::ostream& out);

/// Maps a point of the planform to its element and natural coordinates.
struct MeshLocation {
    int element = -1;
    double xi = 0.0;
    double eta = 0.0;
};
MeshLocation locate(const Mesh& mesh, const Eigen::Vector2d& point);

}  // namespace fgplate
