// Field files: a text header (magic "LPRF1", kind, grid metadata as
// key = value lines, then a lone "data" line) followed by the raw array of
// little-endian 64-bit floats, x-fastest within each component, components
// in order. Trajectories and physical fields are a text manifest plus one
// field file per node or slice, so every array reloads bit-exactly.

#ifndef LPRF_FIELDIO_H
#define LPRF_FIELDIO_H

#include <stdexcept>
#include <string>

#include "lprf/field.hpp"
#include "lprf/physical_field.hpp"
#include "lprf/profile.hpp"

namespace lprf {

// Missing, malformed, or truncated artifact file; names the file.
class IntegrityError : public std::runtime_error {
 public:
  IntegrityError(std::string file, const std::string& message);
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

void write_vector_field(const std::string& path, const VectorField& f);
void write_scalar_field(const std::string& path, const ScalarField& f);
VectorField read_vector_field(const std::string& path);
ScalarField read_scalar_field(const std::string& path);

// Trajectory manifest `<prefix>.traj` plus `<prefix>_u_###.lprf` node files
// (and `<prefix>_p_###.lprf` when a pressure is attached), all inside `dir`.
void write_trajectory(const std::string& dir, const std::string& prefix,
                      const ProfileTrajectory& traj);
ProfileTrajectory read_trajectory(const std::string& dir, const std::string& prefix);

// Physical-field manifest `<prefix>.phys` plus slice files, same naming.
void write_physical_field(const std::string& dir, const std::string& prefix,
                          const PhysicalField& v);
PhysicalField read_physical_field(const std::string& dir, const std::string& prefix);

}  // namespace lprf

#endif
