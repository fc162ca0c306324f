#include "flowlab/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace flowlab::io {

namespace {

constexpr const char* kMagic = "FLOWLAB v1";

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t swapped = 0;
    for (int i = 0; i < 8; ++i) swapped |= ((bits >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return swapped;
  }
  return bits;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

struct Header {
  std::size_t d = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double time = 0.0;
};

void write_v1(std::ostream& out, std::span<const double> values,
              const std::optional<GridShape>& shape, double time) {
  out << kMagic << '\n'
      << "d=" << values.size() << " rows=" << (shape ? shape->rows : 0)
      << " cols=" << (shape ? shape->cols : 0) << " time=" << format_double(time) << '\n';
  for (double v : values) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
    out.write(bytes, 8);
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing state data");
}

template <typename T>
T parse_field(const std::string& token, const char* key) {
  const std::string prefix = std::string(key) + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw Error(ErrorKind::Io, "state header: expected '" + prefix + "', got '" + token + "'");
  }
  T value{};
  const char* first = token.data() + prefix.size();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::Io, "state header: malformed value in '" + token + "'");
  }
  return value;
}

std::vector<double> read_v1(std::istream& in, Header& header) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw Error(ErrorKind::Io, "not a FLOWLAB v1 file");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "state header truncated");
  std::istringstream fields(line);
  std::string d_tok, rows_tok, cols_tok, time_tok;
  fields >> d_tok >> rows_tok >> cols_tok >> time_tok;
  header.d = parse_field<std::size_t>(d_tok, "d");
  header.rows = parse_field<std::size_t>(rows_tok, "rows");
  header.cols = parse_field<std::size_t>(cols_tok, "cols");
  header.time = parse_field<double>(time_tok, "time");

  std::vector<double> values(header.d);
  for (double& v : values) {
    char bytes[8];
    if (!in.read(bytes, 8)) throw Error(ErrorKind::Io, "state data truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    }
    v = std::bit_cast<double>(bits);
  }
  return values;
}

std::optional<GridShape> shape_of(const Header& h) {
  if (h.rows == 0 && h.cols == 0) return std::nullopt;
  return GridShape(h.rows, h.cols);
}

}  // namespace

void write_state(std::ostream& out, const LatentState& state) {
  write_v1(out, state.values(), state.shape(), state.time());
}

LatentState read_state(std::istream& in) {
  Header header;
  std::vector<double> values = read_v1(in, header);
  return LatentState(std::move(values), header.time, shape_of(header));
}

void write_state(const std::filesystem::path& path, const LatentState& state) {
  auto out = open_out(path);
  write_state(out, state);
}

LatentState read_state(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_state(in);
}

void write_mask(const std::filesystem::path& path, const Mask& mask) {
  auto out = open_out(path);
  write_v1(out, mask.values(), mask.shape(), 0.0);
}

void write_pgm(std::ostream& out, std::span<const double> values, GridShape shape) {
  require_same_dim(values.size(), shape.size(), "pgm export");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  out << "P5\n" << shape.cols << ' ' << shape.rows << "\n255\n";
  for (double v : values) {
    const double scaled = span > 0.0 ? (v - lo) / span * 255.0 : 0.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing pgm");
}

void write_pgm(const std::filesystem::path& path, std::span<const double> values,
               GridShape shape) {
  auto out = open_out(path);
  write_pgm(out, values, shape);
}

Mask read_pgm_mask(std::istream& in) {
  auto next_token = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw Error(ErrorKind::Io, "pgm header truncated");
  };
  if (next_token() != "P5") throw Error(ErrorKind::Io, "only binary P5 PGM masks are supported");
  const std::size_t cols = std::stoul(next_token());
  const std::size_t rows = std::stoul(next_token());
  const unsigned long maxval = std::stoul(next_token());
  if (maxval == 0 || maxval > 255) throw Error(ErrorKind::Io, "pgm masks must be 8-bit");
  in.get();  // single whitespace before the raster
  const GridShape shape(rows, cols);
  std::vector<double> values(shape.size());
  for (double& m : values) {
    const int byte = in.get();
    if (byte == std::char_traits<char>::eof()) throw Error(ErrorKind::Io, "pgm raster truncated");
    m = byte > 127 ? 1.0 : 0.0;
  }
  return Mask(std::move(values), shape);
}

Mask read_mask(const std::filesystem::path& path) {
  auto in = open_in(path);
  const int first = in.peek();
  if (first == 'P') return read_pgm_mask(in);
  Header header;
  std::vector<double> values = read_v1(in, header);
  return Mask(std::move(values), shape_of(header));
}

namespace {

void write_row(std::ostream& out, std::size_t index, double t, std::span<const double> values) {
  out << index << ',' << format_double(t);
  for (double v : values) out << ',' << format_double(v);
  out << '\n';
}

void write_value_header(std::ostream& out, const char* lead, std::size_t d) {
  out << lead;
  for (std::size_t j = 0; j < d; ++j) out << ",v" << j;
  out << '\n';
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  write_value_header(out, "index,t", trajectory.states.front().dim());
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const std::size_t node = trajectory.from_index + k;
    write_row(out, node, trajectory.grid[node], trajectory.states[k].values());
  }
}

void write_velocities_csv(std::ostream& out, const Trajectory& trajectory) {
  write_value_header(out, "index,t", trajectory.states.front().dim());
  for (std::size_t k = 0; k < trajectory.velocities.size(); ++k) {
    const std::size_t node = trajectory.from_index + k;
    write_row(out, node, trajectory.grid[node], trajectory.velocities[k]);
  }
}

void write_states_csv(std::ostream& out, const std::vector<LatentState>& states) {
  write_value_header(out, "index,t", states.front().dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    write_row(out, i, states[i].time(), states[i].values());
  }
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "t,value\n";
  for (const CurvePoint& p : curve) out << format_double(p.t) << ',' << format_double(p.value) << '\n';
}

}  // namespace flowlab::io
