#include "ifp/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "ifp/error.hpp"

namespace ifp {

namespace {

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(std::string_view bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::string format_double(double v) {
  if (std::isnan(v)) return {};
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string encode_matrix_bytes(const ImageGrid& img) {
  if (img.width() > std::numeric_limits<std::uint32_t>::max() ||
      img.height() > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("matrix dimensions exceed the IFPM u32 range");
  }
  if (!img.all_finite()) throw FormatError("IFPM cannot store non-finite samples");
  std::string out;
  out.reserve(kMatrixHeaderSize + img.size() * 8);
  out.append("IFPM");
  put_le<std::uint16_t>(out, kMatrixVersion);
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(img.height()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(img.width()));
  for (double v : img.samples()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

ImageGrid decode_matrix_bytes(std::string_view bytes, double pixel_pitch_um) {
  if (bytes.size() < kMatrixHeaderSize) throw FormatError("IFPM file shorter than its 16-byte header");
  if (bytes.substr(0, 4) != "IFPM") throw FormatError("bad IFPM magic");
  const auto version = get_le<std::uint16_t>(bytes, 4);
  if (version != kMatrixVersion) throw FormatError("unsupported IFPM version " + std::to_string(version));
  const auto rows = get_le<std::uint32_t>(bytes, 8);
  const auto cols = get_le<std::uint32_t>(bytes, 12);
  if (rows == 0 || cols == 0) throw FormatError("IFPM matrix has a zero dimension");

  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  if (count > (std::numeric_limits<std::uint64_t>::max() - kMatrixHeaderSize) / 8 ||
      count > std::numeric_limits<std::size_t>::max() / 8) {
    throw FormatError("IFPM dimensions overflow");
  }
  const std::uint64_t expected = kMatrixHeaderSize + count * 8;
  if (bytes.size() < expected) {
    throw FormatError("IFPM payload truncated: expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) throw FormatError("IFPM file has trailing bytes");

  std::vector<double> samples(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = std::bit_cast<double>(get_le<std::uint64_t>(bytes, kMatrixHeaderSize + 8 * i));
  }
  ImageGrid img(cols, rows, pixel_pitch_um, std::move(samples));
  if (!img.all_finite()) throw FormatError("IFPM payload contains non-finite samples");
  return img;
}

void encode_matrix(const ImageGrid& img, const std::filesystem::path& path) {
  write_file_atomic(path, encode_matrix_bytes(img));
}

ImageGrid decode_matrix(const std::filesystem::path& path, double pixel_pitch_um) {
  try {
    return decode_matrix_bytes(read_file(path), pixel_pitch_um);
  } catch (const Error&) {
    rethrow_with_context(path.string());
  }
}

std::string encode_pgm_bytes(const ImageGrid& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n65535\n";
  const double lo = img.min();
  const double range = img.max() - lo;
  out.reserve(out.size() + img.size() * 2);
  for (double v : img.samples()) {
    const double scaled = range > 0.0 ? (v - lo) / range : 0.0;
    const auto level = static_cast<std::uint16_t>(std::lround(std::clamp(scaled, 0.0, 1.0) * 65535.0));
    out.push_back(static_cast<char>(level >> 8));
    out.push_back(static_cast<char>(level & 0xff));
  }
  return out;
}

void write_pgm(const ImageGrid& img, const std::filesystem::path& path) {
  write_file_atomic(path, encode_pgm_bytes(img));
}

std::string encode_positions_csv(const PositionTable& table) {
  if (!table.confidence.empty() && table.confidence.size() != table.shifts.size()) {
    throw InvalidArgument("positions table: confidence count does not match shift count");
  }
  std::string out(kPositionsHeader);
  out.push_back('\n');
  for (std::size_t n = 0; n < table.shifts.size(); ++n) {
    const double conf = table.confidence.empty() ? std::numeric_limits<double>::quiet_NaN() : table.confidence[n];
    out += std::to_string(n) + "," + std::to_string(table.shifts[n].dx) + "," + std::to_string(table.shifts[n].dy) +
           "," + format_double(conf) + "\n";
  }
  return out;
}

PositionTable decode_positions_csv(std::string_view text) {
  PositionTable table;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    const std::string_view line = trim(text.substr(0, eol));
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != kPositionsHeader) {
        throw FormatError("positions CSV: expected header '" + std::string(kPositionsHeader) + "'");
      }
      seen_header = true;
      continue;
    }

    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (;;) {
      const std::size_t comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const std::string where = "positions CSV line " + std::to_string(line_no);
    if (fields.size() != 4) throw FormatError(where + ": expected 4 fields, got " + std::to_string(fields.size()));

    long frame = 0;
    ShiftVector s;
    if (!parse_number(fields[0], frame)) throw FormatError(where + ": frame is not an integer");
    if (frame != static_cast<long>(table.shifts.size())) {
      throw FormatError(where + ": frame index " + std::to_string(frame) + " out of sequence");
    }
    if (!parse_number(fields[1], s.dx)) throw FormatError(where + ": dx_px is not an integer");
    if (!parse_number(fields[2], s.dy)) throw FormatError(where + ": dy_px is not an integer");
    double conf = std::numeric_limits<double>::quiet_NaN();
    if (!trim(fields[3]).empty()) {
      const std::string_view c = trim(fields[3]);
      if (c == "inf") {
        conf = std::numeric_limits<double>::infinity();
      } else if (!parse_number(c, conf)) {
        throw FormatError(where + ": confidence is not a number");
      }
    }
    table.shifts.push_back(s);
    table.confidence.push_back(conf);
  }
  if (!seen_header) throw FormatError("positions CSV: missing header");
  return table;
}

void write_positions_csv(const PositionTable& table, const std::filesystem::path& path) {
  write_file_atomic(path, encode_positions_csv(table));
}

void write_positions_csv(const ExtractionResult& result, const std::filesystem::path& path) {
  write_positions_csv(PositionTable{result.shifts, result.confidence}, path);
}

void write_positions_csv(const std::vector<ShiftVector>& shifts, const std::filesystem::path& path) {
  write_positions_csv(PositionTable{shifts, {}}, path);
}

PositionTable read_positions_csv(const std::filesystem::path& path) {
  try {
    return decode_positions_csv(read_file(path));
  } catch (const Error&) {
    rethrow_with_context(path.string());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FormatError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace ifp
