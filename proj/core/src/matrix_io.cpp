#include "bzsl/matrix_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "bzsl/error.hpp"

namespace bzsl {

namespace {

constexpr char kMagic[4] = {'B', 'D', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 4 + 8 + 8;

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(const char* p) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    parse_error(line, "invalid number '" + std::string(field) + "'");
  }
  return value;
}

// Splits text into lines, keeping 1-based line numbers and skipping blank lines.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    ++number;
    if (!trim(line).empty()) out.emplace_back(number, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

MatrixFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::csv : MatrixFormat::bin;
}

Matrix parse_csv_matrix(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorKind::parse, "csv matrix is empty");
  std::vector<std::vector<double>> rows;
  for (const auto& [number, line] : lines) {
    const auto fields = split_fields(line);
    if (!rows.empty() && fields.size() != rows.front().size()) {
      parse_error(number, "expected " + std::to_string(rows.front().size()) + " fields, found " +
                              std::to_string(fields.size()));
    }
    std::vector<double>& row = rows.emplace_back();
    for (auto f : fields) row.push_back(parse_number<double>(f, number));
  }
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

std::string format_csv_matrix(const Matrix& m) {
  std::string out;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Matrix decode_bin_matrix(std::string_view bytes) {
  if (bytes.size() < kHeaderSize) {
    throw Error(ErrorKind::parse, "bin matrix: truncated header (" + std::to_string(bytes.size()) + " bytes)");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw Error(ErrorKind::parse, "bin matrix: bad magic");
  const auto version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kVersion) {
    throw Error(ErrorKind::parse, "bin matrix: unsupported version " + std::to_string(version));
  }
  const auto rows = get_le<std::uint64_t>(bytes.data() + 8);
  const auto cols = get_le<std::uint64_t>(bytes.data() + 16);
  const std::uint64_t payload = bytes.size() - kHeaderSize;
  if (rows != 0 && cols > payload / 8 / rows) {
    throw Error(ErrorKind::parse, "bin matrix: truncated payload for " + std::to_string(rows) + "x" +
                                      std::to_string(cols));
  }
  if (rows * cols * 8 != payload) {
    throw Error(ErrorKind::parse, "bin matrix: payload is " + std::to_string(payload) +
                                      " bytes, expected " + std::to_string(rows * cols * 8));
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  const char* p = bytes.data() + kHeaderSize;
  for (Index i = 0; i < m.size(); ++i, p += 8) m.data()[i] = get_le<double>(p);
  return m;
}

std::string encode_bin_matrix(const Matrix& m) {
  std::string out;
  out.reserve(kHeaderSize + static_cast<std::size_t>(m.size()) * 8);
  out.append(kMagic, 4);
  put_le(out, kVersion);
  put_le(out, static_cast<std::uint64_t>(m.rows()));
  put_le(out, static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.size(); ++i) put_le(out, m.data()[i]);
  return out;
}

Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  const std::string data = read_file(path);
  try {
    return format == MatrixFormat::csv ? parse_csv_matrix(data) : decode_bin_matrix(data);
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

Matrix load_matrix(const std::filesystem::path& path) { return load_matrix(path, format_for(path)); }

void save_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format) {
  write_file(path, format == MatrixFormat::csv ? format_csv_matrix(m) : encode_bin_matrix(m));
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) { save_matrix(m, path, format_for(path)); }

Labels parse_labels(std::string_view text) {
  auto lines = lines_of(text);
  if (!lines.empty() && trim(lines.front().second) == "instance_id,label") lines.erase(lines.begin());
  Labels labels(lines.size());
  std::vector<char> seen(lines.size(), 0);
  for (const auto& [number, line] : lines) {
    const auto fields = split_fields(line);
    if (fields.size() != 2) parse_error(number, "expected 'instance_id,label'");
    const auto id = parse_number<std::int64_t>(fields[0], number);
    const auto label = parse_number<std::int64_t>(fields[1], number);
    if (id < 0 || static_cast<std::size_t>(id) >= labels.size()) {
      parse_error(number, "instance id " + std::to_string(id) + " outside [0, " +
                              std::to_string(labels.size()) + ")");
    }
    if (seen[static_cast<std::size_t>(id)]) parse_error(number, "duplicate instance id " + std::to_string(id));
    seen[static_cast<std::size_t>(id)] = 1;
    labels[static_cast<std::size_t>(id)] = label;
  }
  return labels;
}

Labels load_labels(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  try {
    return parse_labels(data);
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

std::string format_labels(const Labels& labels) {
  std::string out = "instance_id,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out += std::to_string(i) + ',' + std::to_string(labels[i]) + '\n';
  return out;
}

void save_labels(const Labels& labels, const std::filesystem::path& path) {
  write_file(path, format_labels(labels));
}

}  // namespace bzsl
