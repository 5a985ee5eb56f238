#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "forge/mesh/mesh.hpp"

namespace forge {

enum class MeshFormat { STL_BINARY, STL_ASCII, OBJ };

inline constexpr double kLoadMergeTolerance = 1e-6;

// Parses `data` in the declared format, merges vertices within 1e-6 mm and
// drops degenerate triangles. Throws ParseError or EmptyMesh.
Mesh load_mesh(std::string_view data, MeshFormat format, std::string name = {});

// Guesses the format from content (binary STL size signature, "solid" header)
// and falls back to the file extension.
MeshFormat detect_format(std::string_view data, const std::filesystem::path& hint = {});

Mesh load_mesh_file(const std::filesystem::path& path);

// Binary STL with a fixed header, so identical meshes give identical bytes.
std::string to_stl_binary(const Mesh& m);
void save_stl(const Mesh& m, const std::filesystem::path& path);

}  // namespace forge
