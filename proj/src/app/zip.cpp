#include "forge/app/zip.hpp"

#include <zlib.h>

#include <cstdint>
#include <vector>

#include "forge/error.hpp"

namespace forge {

namespace {

// 1980-01-01 00:00, the earliest DOS date.
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (1 << 5) | 1;

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get(const std::string& in, std::size_t at, int bytes) {
  if (at + bytes > in.size()) fail(ErrorCode::ParseError, "zip archive is truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

std::uint32_t crc_of(const std::string& data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large inputs in chunks.
  std::size_t pos = 0;
  while (pos < data.size()) {
    const uInt n = static_cast<uInt>(std::min<std::size_t>(data.size() - pos, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data() + pos), n);
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string make_zip(const std::map<std::string, std::string>& files) {
  std::string out;
  std::string central;
  for (const auto& [name, data] : files) {
    const std::uint32_t offset = static_cast<std::uint32_t>(out.size());
    const std::uint32_t crc = crc_of(data);
    const auto size = static_cast<std::uint32_t>(data.size());

    put32(out, 0x04034b50);
    put16(out, 20);  // version needed
    put16(out, 0);   // flags
    put16(out, 0);   // stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, static_cast<std::uint16_t>(name.size()));
    put16(out, 0);
    out += name;
    out += data;

    put32(central, 0x02014b50);
    put16(central, 20);  // made by
    put16(central, 20);
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, static_cast<std::uint16_t>(name.size()));
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attributes
    put32(central, 0);  // external attributes
    put32(central, offset);
    central += name;
  }
  const auto central_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(files.size()));
  put16(out, static_cast<std::uint16_t>(files.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, central_offset);
  put16(out, 0);
  return out;
}

std::map<std::string, std::string> read_zip(const std::string& archive) {
  std::map<std::string, std::string> out;
  std::size_t at = 0;
  while (at + 4 <= archive.size() && get(archive, at, 4) == 0x04034b50) {
    if (get(archive, at + 8, 2) != 0) fail(ErrorCode::ParseError, "only stored zip entries are supported");
    const std::uint32_t crc = get(archive, at + 14, 4);
    const std::uint32_t size = get(archive, at + 18, 4);
    const std::uint32_t name_len = get(archive, at + 26, 2);
    const std::uint32_t extra_len = get(archive, at + 28, 2);
    const std::size_t data_at = at + 30 + name_len + extra_len;
    if (data_at + size > archive.size()) fail(ErrorCode::ParseError, "zip entry runs past the end");
    std::string name = archive.substr(at + 30, name_len);
    std::string data = archive.substr(data_at, size);
    if (crc_of(data) != crc) fail(ErrorCode::ParseError, "crc mismatch for " + name);
    out.emplace(std::move(name), std::move(data));
    at = data_at + size;
  }
  if (at + 4 > archive.size() || get(archive, at, 4) != 0x02014b50) {
    if (!(out.empty() && get(archive, at, 4) == 0x06054b50)) fail(ErrorCode::ParseError, "no zip central directory");
  }
  return out;
}

}  // namespace forge
