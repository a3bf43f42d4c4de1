#pragma once

#include <string>

#include "phifem/fe_function.hpp"
#include "phifem/levelset.hpp"
#include "phifem/verification.hpp"

namespace phifem {

// Legacy ASCII unstructured-grid export of the active submesh: point data
// u and phi_h at vertices, cell data cut indicator and (optionally) the
// auxiliary p at cell barycenters. Written atomically (temp file + rename).
void write_vtk(const std::string& path, const BackgroundGrid& grid, const CellSets& sets,
               const DiscreteLevelSet& dls, const FieldOnGrid& u,
               const FeFunction* p = nullptr);

}  // namespace phifem
