#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lindbladkit/channels.hpp"
#include "lindbladkit/lindblad.hpp"
#include "lindbladkit/matrix.hpp"
#include "lindbladkit/models.hpp"
#include "lindbladkit/region.hpp"
#include "lindbladkit/states.hpp"
#include "lindbladkit/superop.hpp"

namespace lindbladkit::io {

// File formats. Complex entries are [re, im] pairs and matrices are lists of
// rows. Named matrices sit under "matrices"; readers also accept them at the
// top level.
//
//   state      { "dim": N, "rho": M }
//   generator  { "dim": N, "matrices": { "hamiltonian": M, "lindblad_ops": [M...] } }
//   channel    { "dim": N, "matrices": { "kraus_ops": [M...] } }
//              { "dim": N, "eigenvalues": [x...], "matrices": { "eigenops": [M...] } }
//   canonical  generator fields plus "rates" and "matrices.ops"
//
// Writers emit doubles with round-trip precision. All readers throw
// Error(Parse) on malformed input and DimensionMismatch when a matrix does not
// match "dim".

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

// The raw matrix, not validated, so callers can report its defects.
ComplexMatrix parse_state(std::string_view text);
std::string format_state(const ComplexMatrix& rho);

LindbladGenerator parse_generator(std::string_view text);
std::string format_generator(const LindbladGenerator& g);

// Exactly one of the two forms is present.
struct ChannelFile {
  std::size_t dim = 0;
  std::optional<KrausChannel> kraus;
  std::optional<SpectralChannel> spectral;

  LinearMap as_map() const;
};

ChannelFile parse_channel(std::string_view text);
std::string format_channel(const KrausChannel& k);
std::string format_channel(const SpectralChannel& sc);

CanonicalGenerator parse_canonical(std::string_view text);
std::string format_canonical(const CanonicalGenerator& c);

// Shortest decimal with 12 significant digits.
std::string format_real(double x);

// t, then re_ij, im_ij for each entry in row-major order.
void write_trajectory_csv(std::ostream& os, std::span<const double> times, std::span<const DensityMatrix> states);
// l1,l3,l4,class
void write_region_csv(std::ostream& os, std::span<const RegionPoint> points);
// time,i,j,mean_re,mean_im,stderr with 0-based i, j.
void write_ensemble_csv(std::ostream& os, const TrajectoryEnsemble& e);

}  // namespace lindbladkit::io
