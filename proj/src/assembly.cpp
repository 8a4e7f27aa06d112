#include "fgplate/assembly.hpp"

#include "fgplate/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace fgplate {

BoundaryCondition parse_boundary_condition(std::string_view tag) {
    std::string upper;
    for (char c : tag) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (upper == "SSSS") return BoundaryCondition::SimplySupported;
    if (upper == "CCCC") return BoundaryCondition::Clamped;
    throw ConfigError("unknown boundary condition '" + std::string(tag) +
                      "' (expected SSSS or CCCC)");
}

std::string to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::SimplySupported ? "SSSS" : "CCCC";
}

DofMap apply_boundary_conditions(const Mesh& mesh, BoundaryCondition bc) {
    DofMap map;
    map.node_count = mesh.node_count();
    map.skew = mesh.skew;
    map.rotated.assign(map.node_count, false);
    std::vector<bool> fixed(static_cast<std::size_t>(kDofsPerNode) * map.node_count, false);

    const bool skewed = mesh.skew != 0.0;
    for (int n = 0; n < map.node_count; ++n) {
        const unsigned flags = mesh.edge_flags[n];
        const bool oblique = flags & (kEdgeLeft | kEdgeRight);
        const bool straight = flags & (kEdgeBottom | kEdgeTop);
        if (skewed && oblique) map.rotated[n] = true;
        auto fix = [&](int dof) { fixed[kDofsPerNode * n + dof] = true; };
        if (!oblique && !straight) continue;
        if (bc == BoundaryCondition::Clamped) {
            for (int d = 0; d < kDofsPerNode; ++d) fix(d);
            continue;
        }
        fix(kW);
        if (oblique) {
            // Edge-normal displacement and tangential rotation (local frame
            // on skew plates).
            fix(kU);
            fix(kThetaY);
        }
        if (straight) {
            fix(kV);
            fix(kThetaX);
        }
        // At a corner of a skew plate the two constraint sets are expressed in
        // different frames; together they remove every in-plane and rotation
        // component, which in the local frame means all four are fixed.
    }

    map.free_index.assign(fixed.size(), -1);
    for (std::size_t i = 0; i < fixed.size(); ++i)
        if (!fixed[i]) map.free_index[i] = map.free_count++;
    return map;
}

ElementMatrix skew_transform(const ElementMatrix& k, const std::array<bool, kNodesPerElement>& rotated,
                             double psi) {
    const ElementMatrix t = element_transformation(rotated, psi);
    return t.transpose() * k * t;
}

ElementVector skew_transform(const ElementVector& f, const std::array<bool, kNodesPerElement>& rotated,
                             double psi) {
    const ElementMatrix t = element_transformation(rotated, psi);
    return t.transpose() * f;
}

Assembler::Assembler(const Mesh& mesh, const DofMap& dofs)
    : element_count_(mesh.element_count()),
      free_count_(dofs.free_count),
      skew_(dofs.skew),
      connectivity_(mesh.elements) {
    element_dofs_.resize(element_count_);
    rotated_.resize(element_count_);
    has_rotation_.assign(element_count_, false);
    for (int e = 0; e < element_count_; ++e) {
        for (int i = 0; i < kNodesPerElement; ++i) {
            const int node = mesh.elements[e][i];
            rotated_[e][i] = dofs.rotated[node];
            if (dofs.rotated[node]) has_rotation_[e] = true;
            for (int d = 0; d < kDofsPerNode; ++d)
                element_dofs_[e][kDofsPerNode * i + d] = dofs.index(node, d);
        }
    }

    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(static_cast<std::size_t>(element_count_) * kElementDofs * kElementDofs);
    for (int e = 0; e < element_count_; ++e)
        for (int i : element_dofs_[e])
            if (i >= 0)
                for (int j : element_dofs_[e])
                    if (j >= 0) triplets.emplace_back(i, j, 0.0);
    pattern_.resize(free_count_, free_count_);
    pattern_.setFromTriplets(triplets.begin(), triplets.end());
    pattern_.makeCompressed();

    // Value slot of every element entry in the compressed column storage.
    slots_.resize(element_count_);
    const int* outer = pattern_.outerIndexPtr();
    const int* inner = pattern_.innerIndexPtr();
    for (int e = 0; e < element_count_; ++e) {
        auto& slot = slots_[e];
        slot.assign(kElementDofs * kElementDofs, -1);
        for (int b = 0; b < kElementDofs; ++b) {
            const int col = element_dofs_[e][b];
            if (col < 0) continue;
            for (int a = 0; a < kElementDofs; ++a) {
                const int row = element_dofs_[e][a];
                if (row < 0) continue;
                const int* first = inner + outer[col];
                const int* last = inner + outer[col + 1];
                const int* it = std::lower_bound(first, last, row);
                slot[b * kElementDofs + a] = static_cast<int>(it - inner);
            }
        }
    }
}

SparseMatrix Assembler::assemble(const std::vector<ElementMatrix>& element_matrices) const {
    if (static_cast<int>(element_matrices.size()) != element_count_)
        throw NumericError("element matrix count does not match the mesh");
    SparseMatrix global = pattern_;
    double* values = global.valuePtr();
    for (int e = 0; e < element_count_; ++e) {
        const ElementMatrix local =
            has_rotation_[e] ? skew_transform(element_matrices[e], rotated_[e], skew_)
                             : element_matrices[e];
        const auto& slot = slots_[e];
        const double* src = local.data();  // column-major, matches slot layout
        for (int idx = 0; idx < kElementDofs * kElementDofs; ++idx)
            if (slot[idx] >= 0) values[slot[idx]] += src[idx];
    }
    return global;
}

Eigen::VectorXd Assembler::assemble(const std::vector<ElementVector>& element_vectors) const {
    if (static_cast<int>(element_vectors.size()) != element_count_)
        throw NumericError("element vector count does not match the mesh");
    Eigen::VectorXd global = Eigen::VectorXd::Zero(free_count_);
    for (int e = 0; e < element_count_; ++e) {
        const ElementVector local =
            has_rotation_[e] ? skew_transform(element_vectors[e], rotated_[e], skew_)
                             : element_vectors[e];
        for (int a = 0; a < kElementDofs; ++a) {
            const int row = element_dofs_[e][a];
            if (row >= 0) global[row] += local[a];
        }
    }
    return global;
}

ElementVector Assembler::gather(const Eigen::VectorXd& reduced, int element) const {
    ElementVector local;
    for (int a = 0; a < kElementDofs; ++a) {
        const int row = element_dofs_[element][a];
        local[a] = row >= 0 ? reduced[row] : 0.0;
    }
    if (has_rotation_[element])
        return element_transformation(rotated_[element], skew_) * local;
    return local;
}

Eigen::VectorXd Assembler::expand(const Eigen::VectorXd& reduced) const {
    int node_count = 0;
    for (const auto& conn : connectivity_)
        for (int n : conn) node_count = std::max(node_count, n + 1);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kDofsPerNode) * node_count);
    for (int e = 0; e < element_count_; ++e) {
        const ElementVector global = gather(reduced, e);
        for (int i = 0; i < kNodesPerElement; ++i)
            for (int d = 0; d < kDofsPerNode; ++d)
                full[kDofsPerNode * connectivity_[e][i] + d] = global[kDofsPerNode * i + d];
    }
    return full;
}

SparseMatrix assemble_reference(const Mesh& mesh, const DofMap& dofs,
                                const std::function<ElementMatrix(int)>& kernel) {
    std::vector<Eigen::Triplet<double, int>> triplets;
    for (int e = 0; e < mesh.element_count(); ++e) {
        ElementMatrix k = kernel(e);
        std::array<bool, kNodesPerElement> rotated{};
        for (int i = 0; i < kNodesPerElement; ++i) rotated[i] = dofs.rotated[mesh.elements[e][i]];
        const ElementMatrix t = element_transformation(rotated, dofs.skew);
        k = t.transpose() * k * t;
        for (int i = 0; i < kNodesPerElement; ++i) {
            for (int di = 0; di < kDofsPerNode; ++di) {
                const int row = dofs.index(mesh.elements[e][i], di);
                if (row < 0) continue;
                for (int j = 0; j < kNodesPerElement; ++j) {
                    for (int dj = 0; dj < kDofsPerNode; ++dj) {
                        const int col = dofs.index(mesh.elements[e][j], dj);
                        if (col < 0) continue;
                        triplets.emplace_back(row, col,
                                              k(kDofsPerNode * i + di, kDofsPerNode * j + dj));
                    }
                }
            }
        }
    }
    SparseMatrix global(dofs.free_count, dofs.free_count);
    global.setFromTriplets(triplets.begin(), triplets.end());
    return global;
}

}  // namespace fgplate
