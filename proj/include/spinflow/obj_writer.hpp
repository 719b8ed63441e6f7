#pragma once

#include <string>

#include "spinflow/surface.hpp"

namespace spinflow {

/// Wavefront OBJ text: "v x y z" lines (shortest round-trip decimals), then
/// "f i j k" lines with 1-based indices, LF line endings.
std::string obj_text(const SurfaceMesh& mesh);
/// Throws IoError on failure.
void write_obj(const SurfaceMesh& mesh, const std::string& path);

}  // namespace spinflow
