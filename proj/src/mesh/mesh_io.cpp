#include "forge/mesh/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "forge/error.hpp"

namespace forge {
namespace {

static_assert(std::endian::native == std::endian::little, "binary STL I/O assumes a little-endian host");

constexpr std::size_t kStlHeader = 80;
constexpr std::size_t kStlRecord = 50;

Mesh finalize(Mesh raw, std::string name) {
  raw.name = std::move(name);
  Mesh cleaned = weld(raw, kLoadMergeTolerance);
  if (cleaned.triangles.empty()) fail(ErrorCode::EmptyMesh, "no triangles left after cleanup");
  return cleaned;
}

Mesh parse_stl_binary(std::string_view data) {
  if (data.size() < kStlHeader + 4) fail(ErrorCode::ParseError, "binary STL shorter than its header");
  std::uint32_t count = 0;
  std::memcpy(&count, data.data() + kStlHeader, 4);
  if (data.size() < kStlHeader + 4 + std::size_t{count} * kStlRecord) {
    fail(ErrorCode::ParseError, "binary STL truncated: header announces " + std::to_string(count) + " facets");
  }
  Mesh m;
  m.vertices.reserve(std::size_t{count} * 3);
  m.triangles.reserve(count);
  const char* p = data.data() + kStlHeader + 4;
  for (std::uint32_t i = 0; i < count; ++i, p += kStlRecord) {
    std::array<float, 12> f{};
    std::memcpy(f.data(), p, sizeof(float) * 12);
    const int base = static_cast<int>(m.vertices.size());
    for (int k = 0; k < 3; ++k) {
      const Vec3 v(f[3 + 3 * k], f[4 + 3 * k], f[5 + 3 * k]);
      if (!v.allFinite()) fail(ErrorCode::ParseError, "non-finite coordinate in facet " + std::to_string(i));
      m.vertices.push_back(v);
    }
    m.triangles.push_back({base, base + 1, base + 2});
  }
  return m;
}

bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename Fn>
void for_each_line(std::string_view data, Fn&& fn) {
  std::size_t line_no = 0;
  while (!data.empty()) {
    const std::size_t nl = data.find('\n');
    std::string_view line = data.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_no);
    if (nl == std::string_view::npos) break;
    data.remove_prefix(nl + 1);
  }
}

Mesh parse_stl_ascii(std::string_view data) {
  Mesh m;
  std::vector<Vec3> facet;
  bool saw_solid = false;
  for_each_line(data, [&](std::string_view line, std::size_t line_no) {
    const auto tok = split_ws(line);
    if (tok.empty()) return;
    if (tok[0] == "solid") {
      saw_solid = true;
    } else if (tok[0] == "vertex") {
      Vec3 v;
      if (tok.size() != 4 || !parse_double(tok[1], v.x()) || !parse_double(tok[2], v.y()) ||
          !parse_double(tok[3], v.z())) {
        fail(ErrorCode::ParseError, "bad vertex record on line " + std::to_string(line_no));
      }
      facet.push_back(v);
    } else if (tok[0] == "endloop") {
      if (facet.size() != 3) {
        fail(ErrorCode::ParseError, "facet with " + std::to_string(facet.size()) + " vertices on line " +
                                        std::to_string(line_no));
      }
      const int base = static_cast<int>(m.vertices.size());
      m.vertices.insert(m.vertices.end(), facet.begin(), facet.end());
      m.triangles.push_back({base, base + 1, base + 2});
      facet.clear();
    } else if (tok[0] != "facet" && tok[0] != "outer" && tok[0] != "endfacet" && tok[0] != "endsolid") {
      fail(ErrorCode::ParseError, "unexpected token '" + std::string(tok[0]) + "' on line " + std::to_string(line_no));
    }
  });
  if (!saw_solid) fail(ErrorCode::ParseError, "ASCII STL without 'solid' header");
  if (!facet.empty()) fail(ErrorCode::ParseError, "unterminated facet at end of file");
  return m;
}

int parse_obj_index(std::string_view token, int vertex_count, std::size_t line_no) {
  token = token.substr(0, token.find('/'));
  int idx = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), idx);
  if (ec != std::errc() || ptr != token.data() + token.size() || idx == 0) {
    fail(ErrorCode::ParseError, "bad face index on line " + std::to_string(line_no));
  }
  const int resolved = idx > 0 ? idx - 1 : vertex_count + idx;
  if (resolved < 0 || resolved >= vertex_count) {
    fail(ErrorCode::ParseError, "face index " + std::to_string(idx) + " out of range on line " +
                                    std::to_string(line_no));
  }
  return resolved;
}

Mesh parse_obj(std::string_view data) {
  Mesh m;
  // Faces may reference vertices declared later in the file, so resolve at the end.
  struct PendingFace {
    std::vector<std::string_view> refs;
    std::size_t line_no;
  };
  std::vector<PendingFace> faces;
  for_each_line(data, [&](std::string_view line, std::size_t line_no) {
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].starts_with('#')) return;
    if (tok[0] == "v") {
      Vec3 v;
      if (tok.size() < 4 || !parse_double(tok[1], v.x()) || !parse_double(tok[2], v.y()) ||
          !parse_double(tok[3], v.z())) {
        fail(ErrorCode::ParseError, "bad vertex record on line " + std::to_string(line_no));
      }
      m.vertices.push_back(v);
    } else if (tok[0] == "f") {
      if (tok.size() < 4) fail(ErrorCode::ParseError, "face with fewer than 3 vertices on line " + std::to_string(line_no));
      faces.push_back({std::vector<std::string_view>(tok.begin() + 1, tok.end()), line_no});
    }
  });
  const int count = static_cast<int>(m.vertices.size());
  for (const PendingFace& f : faces) {
    std::vector<int> idx;
    idx.reserve(f.refs.size());
    for (std::string_view r : f.refs) idx.push_back(parse_obj_index(r, count, f.line_no));
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) m.triangles.push_back({idx[0], idx[k], idx[k + 1]});
  }
  return m;
}

}  // namespace

Mesh load_mesh(std::string_view data, MeshFormat format, std::string name) {
  switch (format) {
    case MeshFormat::STL_BINARY: return finalize(parse_stl_binary(data), std::move(name));
    case MeshFormat::STL_ASCII: return finalize(parse_stl_ascii(data), std::move(name));
    case MeshFormat::OBJ: return finalize(parse_obj(data), std::move(name));
  }
  fail(ErrorCode::ParseError, "unknown mesh format");
}

MeshFormat detect_format(std::string_view data, const std::filesystem::path& hint) {
  if (data.size() >= kStlHeader + 4) {
    std::uint32_t count = 0;
    std::memcpy(&count, data.data() + kStlHeader, 4);
    if (data.size() == kStlHeader + 4 + std::size_t{count} * kStlRecord) return MeshFormat::STL_BINARY;
  }
  std::string ext = hint.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".obj") return MeshFormat::OBJ;
  const auto first = data.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && data.substr(first).starts_with("solid") &&
      data.find("facet") != std::string_view::npos) {
    return MeshFormat::STL_ASCII;
  }
  if (ext == ".stl") return MeshFormat::STL_BINARY;
  return MeshFormat::OBJ;
}

Mesh load_mesh_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IOFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  return load_mesh(data, detect_format(data, path), path.stem().string());
}

std::string to_stl_binary(const Mesh& m) {
  std::string out(kStlHeader + 4 + m.triangles.size() * kStlRecord, '\0');
  constexpr std::string_view header = "forge binary STL";
  std::memcpy(out.data(), header.data(), header.size());
  const auto count = static_cast<std::uint32_t>(m.triangles.size());
  std::memcpy(out.data() + kStlHeader, &count, 4);
  char* p = out.data() + kStlHeader + 4;
  for (const Triangle& t : m.triangles) {
    const Vec3& a = m.vertices[t[0]];
    const Vec3& b = m.vertices[t[1]];
    const Vec3& c = m.vertices[t[2]];
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    n = len > 0 ? Vec3(n / len) : Vec3::Zero();
    const std::array<float, 12> f{
        static_cast<float>(n.x()), static_cast<float>(n.y()), static_cast<float>(n.z()),
        static_cast<float>(a.x()), static_cast<float>(a.y()), static_cast<float>(a.z()),
        static_cast<float>(b.x()), static_cast<float>(b.y()), static_cast<float>(b.z()),
        static_cast<float>(c.x()), static_cast<float>(c.y()), static_cast<float>(c.z())};
    std::memcpy(p, f.data(), sizeof(float) * 12);
    p += kStlRecord;
  }
  return out;
}

void save_stl(const Mesh& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IOFailure, "cannot write " + path.string());
  const std::string bytes = to_stl_binary(m);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IOFailure, "short write to " + path.string());
}

}  // namespace forge
