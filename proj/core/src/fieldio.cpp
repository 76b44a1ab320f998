#include "lprf/fieldio.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

namespace lprf {

namespace {

constexpr const char* kFieldMagic = "LPRF1";
constexpr const char* kTrajMagic = "LPRF-TRAJ1";
constexpr const char* kPhysMagic = "LPRF-PHYS1";

void require_little_endian(const std::string& path) {
  if constexpr (std::endian::native != std::endian::little)
    throw IntegrityError(path, "field files are little-endian; this host is not");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string index_name(const std::string& prefix, const char* part, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%s_%03d.lprf", part, i);
  return prefix + buf;
}

std::string join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

// Ordered key = value block up to (and excluding) the terminator line.
class HeaderReader {
 public:
  HeaderReader(std::istream& in, std::string path, const char* magic, const char* terminator)
      : path_(std::move(path)) {
    std::string line;
    if (!std::getline(in, line) || line != magic)
      throw IntegrityError(path_, std::string("bad magic, expected ") + magic);
    while (std::getline(in, line)) {
      if (line == terminator) {
        terminated_ = true;
        return;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw IntegrityError(path_, "malformed header line '" + line + "'");
      std::string key = line.substr(0, eq);
      std::string value = line.substr(eq + 1);
      while (!key.empty() && key.back() == ' ') key.pop_back();
      while (!value.empty() && value.front() == ' ') value.erase(value.begin());
      kv_.emplace(std::move(key), std::move(value));
    }
    throw IntegrityError(path_, std::string("header ended before '") + terminator + "'");
  }

  const std::string& get(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw IntegrityError(path_, "missing header key '" + key + "'");
    return it->second;
  }

  double get_double(const std::string& key) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(get(key), &used);
      if (used != get(key).size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const IntegrityError&) {
      throw;
    } catch (const std::exception&) {
      throw IntegrityError(path_, "header key '" + key + "' is not a number");
    }
  }

  int get_int(const std::string& key) const {
    const double v = get_double(key);
    if (v != double(int(v))) throw IntegrityError(path_, "header key '" + key + "' is not integral");
    return int(v);
  }

  bool get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw IntegrityError(path_, "header key '" + key + "' is not a boolean");
  }

 private:
  std::string path_;
  std::map<std::string, std::string> kv_;
  bool terminated_ = false;
};

void write_field_file(const std::string& path, const BoxGrid& grid, int components,
                      const double* const* arrays) {
  require_little_endian(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IntegrityError(path, "cannot open for writing");
  out << kFieldMagic << "\n";
  out << "kind = " << (components == 3 ? "vector" : "scalar") << "\n";
  out << "n = " << grid.n << "\n";
  out << "half_width = " << format_double(grid.half_width) << "\n";
  out << "components = " << components << "\n";
  out << "dtype = float64-le\n";
  out << "data\n";
  const std::streamsize bytes = std::streamsize(grid.size()) * 8;
  for (int c = 0; c < components; ++c)
    out.write(reinterpret_cast<const char*>(arrays[c]), bytes);
  if (!out) throw IntegrityError(path, "short write");
}

// Header plus grid, leaving the stream at the payload.
BoxGrid read_field_header(std::ifstream& in, const std::string& path, const char* expected_kind,
                          int expected_components) {
  require_little_endian(path);
  const HeaderReader hdr(in, path, kFieldMagic, "data");
  if (hdr.get("kind") != expected_kind)
    throw IntegrityError(path, "kind is '" + hdr.get("kind") + "', expected " + expected_kind);
  if (hdr.get("dtype") != "float64-le")
    throw IntegrityError(path, "unsupported dtype '" + hdr.get("dtype") + "'");
  if (hdr.get_int("components") != expected_components)
    throw IntegrityError(path, "unexpected component count");
  const int n = hdr.get_int("n");
  const double half_width = hdr.get_double("half_width");
  if (n < 2 || !(half_width > 0.0)) throw IntegrityError(path, "invalid grid metadata");
  return BoxGrid(n, half_width);
}

void read_payload(std::ifstream& in, const std::string& path, double* dst, std::int64_t count) {
  in.read(reinterpret_cast<char*>(dst), std::streamsize(count) * 8);
  if (in.gcount() != std::streamsize(count) * 8) throw IntegrityError(path, "truncated payload");
}

void expect_eof(std::ifstream& in, const std::string& path) {
  if (in.peek() != std::ifstream::traits_type::eof())
    throw IntegrityError(path, "trailing bytes after payload");
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError(path, "cannot open");
  return in;
}

}  // namespace

IntegrityError::IntegrityError(std::string file, const std::string& message)
    : std::runtime_error(file + ": " + message), file_(std::move(file)) {}

void write_vector_field(const std::string& path, const VectorField& f) {
  const double* arrays[3] = {f.data(0), f.data(1), f.data(2)};
  write_field_file(path, f.grid(), 3, arrays);
}

void write_scalar_field(const std::string& path, const ScalarField& f) {
  const double* arrays[1] = {f.data()};
  write_field_file(path, f.grid(), 1, arrays);
}

VectorField read_vector_field(const std::string& path) {
  std::ifstream in = open_for_read(path);
  const BoxGrid grid = read_field_header(in, path, "vector", 3);
  VectorField f(grid);
  for (int c = 0; c < 3; ++c) read_payload(in, path, f.data(c), grid.size());
  expect_eof(in, path);
  return f;
}

ScalarField read_scalar_field(const std::string& path) {
  std::ifstream in = open_for_read(path);
  const BoxGrid grid = read_field_header(in, path, "scalar", 1);
  ScalarField f(grid);
  read_payload(in, path, f.data(), grid.size());
  expect_eof(in, path);
  return f;
}

void write_trajectory(const std::string& dir, const std::string& prefix,
                      const ProfileTrajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("refusing to write an empty trajectory");
  const std::string manifest = join(dir, prefix + ".traj");
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw IntegrityError(manifest, "cannot open for writing");
  out << kTrajMagic << "\n";
  out << "alpha = " << format_double(traj.alpha()) << "\n";
  out << "period = " << format_double(traj.period()) << "\n";
  out << "nodes = " << traj.n_nodes() << "\n";
  out << "has_pressure = " << (traj.has_pressure() ? "true" : "false") << "\n";
  for (int i = 0; i < traj.n_nodes(); ++i)
    out << "s_" << i << " = " << format_double(traj.s_node(i)) << "\n";
  out << "end\n";
  if (!out) throw IntegrityError(manifest, "short write");
  for (int i = 0; i < traj.n_nodes(); ++i) {
    write_vector_field(join(dir, index_name(prefix, "u", i)), traj.velocity(i));
    if (traj.has_pressure()) write_scalar_field(join(dir, index_name(prefix, "p", i)), traj.pressure(i));
  }
}

ProfileTrajectory read_trajectory(const std::string& dir, const std::string& prefix) {
  const std::string manifest = join(dir, prefix + ".traj");
  std::ifstream in = open_for_read(manifest);
  const HeaderReader hdr(in, manifest, kTrajMagic, "end");
  const double alpha = hdr.get_double("alpha");
  const double period = hdr.get_double("period");
  const int nodes = hdr.get_int("nodes");
  const bool has_pressure = hdr.get_bool("has_pressure");
  if (nodes < 1) throw IntegrityError(manifest, "node count must be positive");

  ProfileTrajectory traj;
  for (int i = 0; i < nodes; ++i) {
    const double s = hdr.get_double("s_" + std::to_string(i));
    VectorField u = read_vector_field(join(dir, index_name(prefix, "u", i)));
    if (i == 0) traj = ProfileTrajectory(u.grid(), alpha, period);
    if (has_pressure) {
      ScalarField p = read_scalar_field(join(dir, index_name(prefix, "p", i)));
      traj.add_node(s, std::move(u), std::move(p));
    } else {
      traj.add_node(s, std::move(u));
    }
  }
  return traj;
}

void write_physical_field(const std::string& dir, const std::string& prefix,
                          const PhysicalField& v) {
  if (v.empty()) throw std::invalid_argument("refusing to write an empty physical field");
  const std::string manifest = join(dir, prefix + ".phys");
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw IntegrityError(manifest, "cannot open for writing");
  out << kPhysMagic << "\n";
  out << "slices = " << v.n_slices() << "\n";
  out << "has_pressure = " << (v.has_pressure() ? "true" : "false") << "\n";
  for (int i = 0; i < v.n_slices(); ++i) {
    const Slice& sl = v.slice(i);
    out << "t_" << i << " = " << format_double(sl.t) << "\n";
    out << "scale_" << i << " = " << format_double(sl.frame.scale) << "\n";
    out << "theta_" << i << " = " << format_double(sl.frame.theta) << "\n";
  }
  out << "end\n";
  if (!out) throw IntegrityError(manifest, "short write");
  for (int i = 0; i < v.n_slices(); ++i) {
    const Slice& sl = v.slice(i);
    write_vector_field(join(dir, index_name(prefix, "u", i)), sl.values);
    if (v.has_pressure()) write_scalar_field(join(dir, index_name(prefix, "p", i)), sl.pressure);
  }
}

PhysicalField read_physical_field(const std::string& dir, const std::string& prefix) {
  const std::string manifest = join(dir, prefix + ".phys");
  std::ifstream in = open_for_read(manifest);
  const HeaderReader hdr(in, manifest, kPhysMagic, "end");
  const int slices = hdr.get_int("slices");
  const bool has_pressure = hdr.get_bool("has_pressure");
  if (slices < 1) throw IntegrityError(manifest, "slice count must be positive");

  PhysicalField v;
  for (int i = 0; i < slices; ++i) {
    const std::string idx = std::to_string(i);
    const double t = hdr.get_double("t_" + idx);
    const SliceFrame frame{hdr.get_double("scale_" + idx), hdr.get_double("theta_" + idx)};
    VectorField u = read_vector_field(join(dir, index_name(prefix, "u", i)));
    if (has_pressure) {
      ScalarField p = read_scalar_field(join(dir, index_name(prefix, "p", i)));
      v.add_slice(t, frame, std::move(u), std::move(p));
    } else {
      v.add_slice(t, frame, std::move(u));
    }
  }
  return v;
}

}  // namespace lprf
