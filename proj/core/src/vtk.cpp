#include "phifem/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace phifem {

void write_vtk(const std::string& path, const BackgroundGrid& grid, const CellSets& sets,
               const DiscreteLevelSet& dls, const FieldOnGrid& u, const FeFunction* p) {
    if (!u.value) throw std::invalid_argument("write_vtk: field has no value function");

    // Compact vertex numbering over the active submesh.
    std::vector<int> vertex_id(static_cast<size_t>(grid.num_vertices()), -1);
    std::vector<int> used_vertices;
    for (int c : sets.active) {
        for (int v : grid.cell_vertices(c)) {
            if (vertex_id[static_cast<size_t>(v)] < 0) {
                vertex_id[static_cast<size_t>(v)] = static_cast<int>(used_vertices.size());
                used_vertices.push_back(v);
            }
        }
    }

    // Point values of u: evaluate once per vertex from some incident active
    // cell (the field is continuous on the active region).
    std::vector<double> u_at(used_vertices.size(), 0.0);
    std::vector<char> u_set(used_vertices.size(), 0);
    for (int c : sets.active) {
        const auto& cv = grid.cell_vertices(c);
        for (int i = 0; i < 3; ++i) {
            const int local = vertex_id[static_cast<size_t>(cv[static_cast<size_t>(i)])];
            if (u_set[static_cast<size_t>(local)]) continue;
            Eigen::Vector3d bary = Eigen::Vector3d::Zero();
            bary[i] = 1.0;
            u_at[static_cast<size_t>(local)] =
                u.value(c, bary, grid.vertex(cv[static_cast<size_t>(i)]));
            u_set[static_cast<size_t>(local)] = 1;
        }
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("write_vtk: cannot open " + tmp);
        out.precision(17);
        out << "# vtk DataFile Version 3.0\n";
        out << "active submesh fields\n";
        out << "ASCII\n";
        out << "DATASET UNSTRUCTURED_GRID\n";
        out << "POINTS " << used_vertices.size() << " double\n";
        for (int v : used_vertices) {
            const Eigen::Vector2d x = grid.vertex(v);
            out << x.x() << " " << x.y() << " 0\n";
        }
        out << "CELLS " << sets.active.size() << " " << 4 * sets.active.size() << "\n";
        for (int c : sets.active) {
            const auto& cv = grid.cell_vertices(c);
            out << "3";
            for (int i = 0; i < 3; ++i) {
                out << " " << vertex_id[static_cast<size_t>(cv[static_cast<size_t>(i)])];
            }
            out << "\n";
        }
        out << "CELL_TYPES " << sets.active.size() << "\n";
        for (size_t i = 0; i < sets.active.size(); ++i) out << "5\n";

        out << "POINT_DATA " << used_vertices.size() << "\n";
        out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
        for (double v : u_at) out << v << "\n";
        out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
        for (int v : used_vertices) out << dls.vertex_value(v) << "\n";

        out << "CELL_DATA " << sets.active.size() << "\n";
        out << "SCALARS cut int 1\nLOOKUP_TABLE default\n";
        for (int c : sets.active) {
            out << (sets.is_cut[static_cast<size_t>(c)] ? 1 : 0) << "\n";
        }
        out << "SCALARS p double 1\nLOOKUP_TABLE default\n";
        const Eigen::Vector3d center(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
        for (int c : sets.active) {
            const double pv = p && p->defined_on(c) ? p->value(c, center) : 0.0;
            out << pv << "\n";
        }
        if (!out.good()) throw std::runtime_error("write_vtk: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("write_vtk: cannot rename " + tmp + " to " + path);
    }
}

}  // namespace phifem
