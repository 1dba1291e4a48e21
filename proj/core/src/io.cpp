#include "lindbladkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lindbladkit/errors.hpp"

namespace lindbladkit::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) parse_error(what + " must be a number");
  return j.get<double>();
}

std::size_t read_dim(const json& doc) {
  if (!doc.is_object()) parse_error("document must be a JSON object");
  const auto it = doc.find("dim");
  if (it == doc.end() || !it->is_number_integer() || it->get<long long>() < 1) {
    parse_error("\"dim\" must be a positive integer");
  }
  return it->get<std::size_t>();
}

// Looks up a named field under "matrices" first, then at the top level.
const json* find_field(const json& doc, const char* name) {
  const auto m = doc.find("matrices");
  if (m != doc.end() && m->is_object()) {
    const auto it = m->find(name);
    if (it != m->end()) return &*it;
  }
  const auto it = doc.find(name);
  return it == doc.end() ? nullptr : &*it;
}

ComplexMatrix read_matrix(const json& j, std::size_t dim, const std::string& what) {
  if (!j.is_array()) parse_error(what + " must be a list of rows");
  if (j.size() != dim) throw Error(ErrorCode::DimensionMismatch, what + " has the wrong number of rows");
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const json& row = j[i];
    if (!row.is_array()) parse_error(what + " rows must be lists");
    if (row.size() != dim) throw Error(ErrorCode::DimensionMismatch, what + " has a row of the wrong length");
    for (std::size_t k = 0; k < dim; ++k) {
      const json& z = row[k];
      if (z.is_number()) {
        m(i, k) = z.get<double>();
      } else if (z.is_array() && z.size() == 2) {
        m(i, k) = Complex(number(z[0], what), number(z[1], what));
      } else {
        parse_error(what + " entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

std::vector<ComplexMatrix> read_matrix_list(const json* j, std::size_t dim, const std::string& what) {
  std::vector<ComplexMatrix> out;
  if (j == nullptr) return out;
  if (!j->is_array()) parse_error(what + " must be a list of matrices");
  for (std::size_t k = 0; k < j->size(); ++k) {
    out.push_back(read_matrix((*j)[k], dim, what + "[" + std::to_string(k) + "]"));
  }
  return out;
}

json write_matrix(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json write_matrix_list(const std::vector<ComplexMatrix>& ms) {
  json list = json::array();
  for (const auto& m : ms) list.push_back(write_matrix(m));
  return list;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

ComplexMatrix parse_state(std::string_view text) {
  const json doc = parse_json(text);
  const std::size_t dim = read_dim(doc);
  const json* rho = find_field(doc, "rho");
  if (rho == nullptr) parse_error("state file needs \"rho\"");
  return read_matrix(*rho, dim, "rho");
}

std::string format_state(const ComplexMatrix& rho) { return dump({{"dim", rho.rows()}, {"rho", write_matrix(rho)}}); }

LindbladGenerator parse_generator(std::string_view text) {
  const json doc = parse_json(text);
  const std::size_t dim = read_dim(doc);
  const json* h = find_field(doc, "hamiltonian");
  ComplexMatrix ham = h != nullptr ? read_matrix(*h, dim, "hamiltonian") : ComplexMatrix(dim, dim);
  return LindbladGenerator(std::move(ham), read_matrix_list(find_field(doc, "lindblad_ops"), dim, "lindblad_ops"));
}

std::string format_generator(const LindbladGenerator& g) {
  return dump({{"dim", g.dim()},
               {"matrices",
                {{"hamiltonian", write_matrix(g.hamiltonian())}, {"lindblad_ops", write_matrix_list(g.lindblad_ops())}}}});
}

LinearMap ChannelFile::as_map() const { return kraus ? kraus->as_map() : spectral->as_map(); }

ChannelFile parse_channel(std::string_view text) {
  const json doc = parse_json(text);
  ChannelFile out;
  out.dim = read_dim(doc);
  const json* kraus = find_field(doc, "kraus_ops");
  const json* eigenops = find_field(doc, "eigenops");
  if ((kraus == nullptr) == (eigenops == nullptr)) {
    parse_error("channel file needs exactly one of \"kraus_ops\" or \"eigenops\"");
  }
  if (kraus != nullptr) {
    KrausChannel k{out.dim, read_matrix_list(kraus, out.dim, "kraus_ops")};
    if (k.ops.empty()) parse_error("\"kraus_ops\" is empty");
    out.kraus = std::move(k);
    return out;
  }
  SpectralChannel sc{out.dim, {}, read_matrix_list(eigenops, out.dim, "eigenops")};
  const auto ev = doc.find("eigenvalues");
  if (ev == doc.end() || !ev->is_array()) parse_error("spectral channel needs \"eigenvalues\"");
  for (const auto& x : *ev) sc.eigenvalues.push_back(number(x, "eigenvalues"));
  if (sc.eigenvalues.size() != sc.eigenops.size()) {
    throw Error(ErrorCode::DimensionMismatch, "eigenvalue and eigenop counts differ");
  }
  out.spectral = std::move(sc);
  return out;
}

std::string format_channel(const KrausChannel& k) {
  return dump({{"dim", k.dim}, {"matrices", {{"kraus_ops", write_matrix_list(k.ops)}}}});
}

std::string format_channel(const SpectralChannel& sc) {
  return dump({{"dim", sc.dim}, {"eigenvalues", sc.eigenvalues}, {"matrices", {{"eigenops", write_matrix_list(sc.eigenops)}}}});
}

CanonicalGenerator parse_canonical(std::string_view text) {
  const json doc = parse_json(text);
  CanonicalGenerator c;
  c.dim = read_dim(doc);
  const json* h = find_field(doc, "hamiltonian");
  if (h == nullptr) parse_error("canonical file needs \"hamiltonian\"");
  c.hamiltonian = read_matrix(*h, c.dim, "hamiltonian");
  c.ops = read_matrix_list(find_field(doc, "ops"), c.dim, "ops");
  const auto rates = doc.find("rates");
  if (rates == doc.end() || !rates->is_array()) parse_error("canonical file needs \"rates\"");
  for (const auto& x : *rates) c.rates.push_back(number(x, "rates"));
  if (c.rates.size() != c.ops.size()) throw Error(ErrorCode::DimensionMismatch, "rate and op counts differ");
  return c;
}

std::string format_canonical(const CanonicalGenerator& c) {
  // lindblad_ops makes the file directly usable as a generator file.
  const LindbladGenerator g = c.to_generator();
  return dump({{"dim", c.dim},
               {"rates", c.rates},
               {"matrices",
                {{"hamiltonian", write_matrix(c.hamiltonian)},
                 {"ops", write_matrix_list(c.ops)},
                 {"lindblad_ops", write_matrix_list(g.lindblad_ops())}}}});
}

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& os, std::span<const double> times, std::span<const DensityMatrix> states) {
  if (times.size() != states.size()) throw Error(ErrorCode::DimensionMismatch, "times and states differ in length");
  const std::size_t n = states.empty() ? 0 : states.front().dim();
  os << "t";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) os << ",re_" << i << j << ",im_" << i << j;
  os << "\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    os << format_real(times[k]);
    for (const auto& z : states[k].matrix().entries()) os << ',' << format_real(z.real()) << ',' << format_real(z.imag());
    os << "\n";
  }
}

void write_region_csv(std::ostream& os, std::span<const RegionPoint> points) {
  os << "l1,l3,l4,class\n";
  for (const auto& p : points) {
    os << format_real(p.l1) << ',' << format_real(p.l3) << ',' << format_real(p.l4) << ',' << to_string(p.cls) << "\n";
  }
}

void write_ensemble_csv(std::ostream& os, const TrajectoryEnsemble& e) {
  os << "time,i,j,mean_re,mean_im,stderr\n";
  for (std::size_t k = 0; k < e.times.size(); ++k) {
    const auto& rho = e.mean_density[k];
    const std::size_t n = rho.dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        os << format_real(e.times[k]) << ',' << i << ',' << j << ',' << format_real(rho(i, j).real()) << ','
           << format_real(rho(i, j).imag()) << ',' << format_real(e.standard_error[k][i * n + j]) << "\n";
      }
  }
}

}  // namespace lindbladkit::io
