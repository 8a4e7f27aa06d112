#include "fgplate/mesh.hpp"

#include "fgplate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace fgplate {

NodeCoords Mesh::element_coords(int element) const {
    NodeCoords c;
    const auto& conn = elements.at(element);
    for (int i = 0; i < kNodesPerElement; ++i) c[i] = nodes[conn[i]];
    return c;
}

Mesh generate_mesh(double a, double b, double skew, int nx, int ny) {
    if (!(a > 0.0 && b > 0.0)) throw GeometryError("plate sides must be positive");
    if (nx < 1 || ny < 1) throw GeometryError("mesh needs at least one element per direction");
    if (!(std::abs(skew) < 0.5 * std::numbers::pi) ||
        std::cos(skew) < 1e-8)
        throw GeometryError("skew angle must satisfy |psi| < 90 degrees");

    Mesh mesh;
    mesh.a = a;
    mesh.b = b;
    mesh.skew = skew;
    mesh.nx = nx;
    mesh.ny = ny;

    const double cs = std::cos(skew);
    const double sn = std::sin(skew);
    auto place = [&](double s, double t) {
        const double y = t * b * cs;
        return Eigen::Vector2d(s * a + t * b * sn, y);
    };

    const int rows = 2 * ny + 1;
    std::vector<int> row_start(rows + 1, 0);
    for (int r = 0; r < rows; ++r) {
        const int count = (r % 2 == 0) ? 2 * nx + 1 : nx + 1;
        row_start[r + 1] = row_start[r] + count;
        const double t = static_cast<double>(r) / (2 * ny);
        for (int c = 0; c < count; ++c) {
            const double s = (r % 2 == 0) ? static_cast<double>(c) / (2 * nx)
                                          : static_cast<double>(c) / nx;
            mesh.nodes.push_back(place(s, t));
            unsigned flags = 0;
            if (c == 0) flags |= kEdgeLeft;
            if (c == count - 1) flags |= kEdgeRight;
            if (r == 0) flags |= kEdgeBottom;
            if (r == rows - 1) flags |= kEdgeTop;
            mesh.edge_flags.push_back(flags);
        }
    }

    auto even = [&](int r, int c) { return row_start[r] + c; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int r0 = 2 * j;
            const int r1 = 2 * j + 1;
            const int r2 = 2 * j + 2;
            mesh.elements.push_back({even(r0, 2 * i), even(r0, 2 * i + 2), even(r2, 2 * i + 2),
                                     even(r2, 2 * i), even(r0, 2 * i + 1), row_start[r1] + i + 1,
                                     even(r2, 2 * i + 1), row_start[r1] + i});
        }
    }
    return mesh;
}

void write_mesh_nodes_csv(const Mesh& mesh, std::ostream& out) {
    out << "node,x,y,edges\n";
    out.precision(12);
    for (int n = 0; n < mesh.node_count(); ++n)
        out << n << ',' << mesh.nodes[n].x() << ',' << mesh.nodes[n].y() << ','
            << mesh.edge_flags[n] << '\n';
}

void write_mesh_elements_csv(const Mesh& mesh, std::ostream& out) {
    out << "element,n1,n2,n3,n4,n5,n6,n7,n8\n";
    for (int e = 0; e < mesh.element_count(); ++e) {
        out << e;
        for (int n : mesh.elements[e]) out << ',' << n;
        out << '\n';
    }
}

MeshLocation locate(const Mesh& mesh, const Eigen::Vector2d& point) {
    // Invert the affine planform map, then pick the element cell.
    const double cs = std::cos(mesh.skew);
    const double sn = std::sin(mesh.skew);
    const double t = point.y() / (mesh.b * cs);
    const double s = (point.x() - t * mesh.b * sn) / mesh.a;
    const double tol = 1e-10;
    if (s < -tol || s > 1.0 + tol || t < -tol || t > 1.0 + tol)
        throw GeometryError("point lies outside the plate");
    const double fs = std::clamp(s, 0.0, 1.0) * mesh.nx;
    const double ft = std::clamp(t, 0.0, 1.0) * mesh.ny;
    const int i = std::min(static_cast<int>(fs), mesh.nx - 1);
    const int j = std::min(static_cast<int>(ft), mesh.ny - 1);
    MeshLocation loc;
    loc.element = j * mesh.nx + i;
    loc.xi = 2.0 * (fs - i) - 1.0;
    loc.eta = 2.0 * (ft - j) - 1.0;
    return loc;
}

}  // namespace fgplate
