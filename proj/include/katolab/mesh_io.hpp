#pragma once

#include "katolab/manifold.hpp"

#include <filesystem>
#include <iosfwd>

namespace katolab {

enum class MeshFormat { OFF, OBJ };

/// Format from the file extension (.off / .obj, case-insensitive).
MeshFormat mesh_format_from_path(const std::filesystem::path& path);

/// Reads a closed triangle mesh. Non-triangular faces, holes, non-manifold
/// edges and degenerate triangles raise MeshError naming the offending simplices.
DiscreteManifold load_mesh(const std::filesystem::path& path, MeshFormat format);
DiscreteManifold load_mesh(const std::filesystem::path& path);

DiscreteManifold read_off(std::istream& in, const std::string& descriptor);
DiscreteManifold read_obj(std::istream& in, const std::string& descriptor);

void write_off(std::ostream& out, const DiscreteManifold& m);
void write_off(const std::filesystem::path& path, const DiscreteManifold& m);

} // namespace katolab
