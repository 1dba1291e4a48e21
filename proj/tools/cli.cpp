#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "lindbladkit/channels.hpp"
#include "lindbladkit/errors.hpp"
#include "lindbladkit/io.hpp"
#include "lindbladkit/lindblad.hpp"
#include "lindbladkit/models.hpp"
#include "lindbladkit/region.hpp"
#include "lindbladkit/states.hpp"
#include "lindbladkit/superop.hpp"

namespace lindbladkit::cli {

namespace {

using io::format_real;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

// Values within 1e-12 of zero (relative to the largest) print as 0.
std::string format_list(const std::vector<double>& xs) {
  double scale = 1.0;
  for (double x : xs) scale = std::max(scale, std::abs(x));
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k > 0) s += ' ';
    s += format_real(std::abs(xs[k]) <= 1e-12 * scale ? 0.0 : xs[k]);
  }
  return s;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: '" + text + "'");
  }
  if (used != text.size()) throw UsageError(what + ": not a number: '" + text + "'");
  return x;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, what));
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

// ---- validate ------------------------------------------------------------

struct ValidateArgs {
  std::string path;
  double tol = kDensityTol;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const ComplexMatrix rho = io::parse_state(io::read_file(a.path));
  const ValidationReport r = validate_density(rho, a.tol);
  out << "hermiticity_defect " << format_real(r.hermiticity_defect) << "\n";
  out << "trace_defect " << format_real(r.trace_defect) << "\n";
  out << "min_eigenvalue " << format_real(r.min_eigenvalue) << "\n";
  if (r.valid()) {
    out << "valid\n";
    return 0;
  }
  out << "invalid\n";
  for (const auto& why : r.reasons) out << "  " << why << "\n";
  return 1;
}

// ---- evolve --------------------------------------------------------------

struct EvolveArgs {
  std::string generator;
  std::string initial;
  double t_max = 0.0;
  double dt = 0.0;
  std::string method = "rk4";
  std::string out;
};

int cmd_evolve(const EvolveArgs& a, std::ostream& out) {
  const LindbladGenerator g = io::parse_generator(io::read_file(a.generator));
  const DensityMatrix rho0(io::parse_state(io::read_file(a.initial)));
  if (!(a.t_max >= 0.0)) throw UsageError("--t-max must be non-negative");

  std::vector<double> times;
  std::vector<DensityMatrix> states;
  if (a.method == "rk4") {
    if (!(a.dt > 0.0)) throw UsageError("--dt is required and must be positive for rk4");
    const double steps = std::round(a.t_max / a.dt);
    if (std::abs(steps * a.dt - a.t_max) > 1e-9 * std::max(1.0, a.t_max)) {
      throw UsageError("--t-max must be a multiple of --dt");
    }
    states = evolve_rk4(g, rho0, a.dt, static_cast<std::size_t>(steps));
    for (std::size_t k = 0; k < states.size(); ++k) times.push_back(static_cast<double>(k) * a.dt);
  } else {
    constexpr std::size_t kRows = 100;
    if (a.t_max == 0.0) {
      times.push_back(0.0);
      states.push_back(rho0);
    } else {
      const ExactPropagator prop(g);
      for (std::size_t k = 0; k < kRows; ++k) {
        const double t = a.t_max * static_cast<double>(k) / static_cast<double>(kRows - 1);
        times.push_back(t);
        states.emplace_back(prop.evolve(rho0.matrix(), t), kTrajectoryTolerance);
      }
    }
  }
  std::ostringstream csv;
  io::write_trajectory_csv(csv, times, states);
  emit(a.out, csv.str(), out);
  return 0;
}

// ---- choi / spectral -----------------------------------------------------

struct MapArgs {
  std::string channel;
  std::string generator;
  std::optional<double> t;
  bool require_cp = false;
  std::string out;
};

struct LoadedMap {
  std::size_t dim = 0;
  LinearMap map;
};

// The channel file, or the generator's flow map at --t. `allow_generator_itself`
// lets a generator without --t stand for its own superoperator.
LoadedMap load_map(const MapArgs& a, bool allow_generator_itself) {
  if (a.channel.empty() == a.generator.empty()) throw UsageError("need exactly one of --channel or --generator");
  if (!a.channel.empty()) {
    const auto ch = io::parse_channel(io::read_file(a.channel));
    return {ch.dim, ch.as_map()};
  }
  auto g = std::make_shared<LindbladGenerator>(io::parse_generator(io::read_file(a.generator)));
  if (a.t) {
    if (!(*a.t >= 0.0)) throw UsageError("--t must be non-negative");
    return {g->dim(), ExactPropagator(*g).flow_map(*a.t)};
  }
  if (!allow_generator_itself) throw UsageError("--generator needs --t");
  return {g->dim(), [g](const ComplexMatrix& rho) { return apply_generator(*g, rho); }};
}

int cmd_choi(const MapArgs& a, std::ostream& out) {
  const LoadedMap m = load_map(a, false);
  const CpVerdict v = cp_check(m.map, m.dim);
  out << "eigenvalues " << format_list(v.eigenvalues) << "\n";
  out << "min_eigenvalue " << format_list({v.min_eigenvalue}) << "\n";
  out << (v.completely_positive ? "CP" : "not CP") << "\n";
  return (a.require_cp && !v.completely_positive) ? 1 : 0;
}

int cmd_spectral(const MapArgs& a, std::ostream& out) {
  const LoadedMap m = load_map(a, true);
  const SpectralChannel sc = spectral_decompose(superop_from_action(m.map, m.dim));
  out << "eigenvalues " << format_list(sc.eigenvalues) << "\n";
  out << "eigenvalue_sum " << format_real(sc.eigenvalue_sum()) << "\n";
  out << "dim " << m.dim << "\n";
  out << "trace_constraint_defect " << format_real(trace_constraint_defect(sc)) << "\n";
  if (!a.out.empty()) io::write_file(a.out, io::format_channel(sc));
  return 0;
}

// ---- canonical -----------------------------------------------------------

struct CanonicalArgs {
  std::string generator;
  std::string out;
  double tol = kGramCutoff;
};

int cmd_canonical(const CanonicalArgs& a, std::ostream& out) {
  const LindbladGenerator g = io::parse_generator(io::read_file(a.generator));
  const CanonicalGenerator c = canonicalize(g, a.tol);
  const ComplexMatrix diff = generator_superoperator(c.to_generator()).a - generator_superoperator(g).a;
  out << "input_ops " << g.lindblad_ops().size() << "\n";
  out << "canonical_ops " << c.ops.size() << "\n";
  if (c.ops.size() < g.lindblad_ops().size()) {
    out << "reduced " << g.lindblad_ops().size() << " -> " << c.ops.size() << "\n";
  }
  out << "rates " << format_list(c.rates) << "\n";
  out << "residual " << format_real(diff.max_abs()) << "\n";
  if (!a.out.empty()) io::write_file(a.out, io::format_canonical(c));
  return 0;
}

// ---- region --------------------------------------------------------------

struct RegionArgs {
  std::size_t resolution = 101;
  std::string out;
};

int cmd_region(const RegionArgs& a, std::ostream& out) {
  const auto points = region_scan(a.resolution);
  std::ostringstream csv;
  io::write_region_csv(csv, points);
  if (a.out.empty() || a.out == "-") {
    out << csv.str();
    return 0;
  }
  io::write_file(a.out, csv.str());
  std::map<std::string_view, std::size_t> counts;
  for (const auto& p : points) ++counts[to_string(p.cls)];
  for (auto cls : {RegionClass::Invalid, RegionClass::PositiveOnly, RegionClass::CompletelyPositive}) {
    out << to_string(cls) << " " << counts[to_string(cls)] << "\n";
  }
  return 0;
}

// ---- model / sample ------------------------------------------------------

using ParamMap = std::map<std::string, std::string>;

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--params entries look like key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

// Starts from the bundled parameters of the kind and applies overrides.
ModelSpec build_spec(const std::string& name, const ParamMap& params) {
  const auto kind = parse_model_kind(name);
  if (!kind) throw UsageError("unknown model '" + name + "'");
  ModelSpec spec;
  for (const auto& m : bundled_models())
    if (m.spec.kind == *kind) spec = m.spec;

  std::vector<std::string> allowed;
  switch (*kind) {
    case ModelKind::RandomPhases: allowed = {"lambda1", "lambda2"}; break;
    case ModelKind::UnitaryJump:
    case ModelKind::RandomUnitary: allowed = {"lambda", "g"}; break;
    case ModelKind::StateExchange: allowed = {"lambda"}; break;
    case ModelKind::StateTransitions: allowed = {"lambda", "p"}; break;
  }
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UsageError("model " + name + " has no parameter '" + key + "'");
    }
    if (key == "lambda") spec.rate = parse_number(value, key);
    if (key == "lambda1") spec.rate1 = parse_number(value, key);
    if (key == "lambda2") spec.rate2 = parse_number(value, key);
    if (key == "g") {
      spec.g = ComplexMatrix::diagonal(std::span<const double>(parse_number_list(value, key)));
      spec.dim = spec.g.rows();
    }
    if (key == "p") {
      spec.p = parse_number_list(value, key);
      spec.dim = spec.p.size();
    }
  }
  validate_spec(spec);
  return spec;
}

const char* kModelHelp =
    "models: random_phases (lambda1, lambda2), unitary_jump (lambda, g), random_unitary (lambda, g),\n"
    "        state_exchange (lambda), state_transitions (lambda, p)\n"
    "g is the diagonal of G and p the target populations, both comma separated";

struct ModelArgs {
  std::string name;
  std::vector<std::string> params;
  std::string out;
};

int cmd_model(const ModelArgs& a, std::ostream& out) {
  const ModelSpec spec = build_spec(a.name, parse_params(a.params));
  emit(a.out, io::format_generator(build_generator(spec)), out);
  return 0;
}

struct SampleArgs {
  std::string model;
  std::vector<std::string> params;
  std::vector<std::string> psi;
  std::size_t trajectories = 1000;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  std::vector<double> times{1.0};
  std::string out;
};

std::vector<Complex> parse_psi(const std::vector<std::string>& items, std::size_t dim) {
  std::vector<Complex> psi(dim);
  if (items.empty()) {
    psi[0] = 1.0;
    return psi;
  }
  if (items.size() != dim) throw UsageError("--psi needs " + std::to_string(dim) + " components");
  double norm = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const auto colon = items[k].find(':');
    if (colon == std::string::npos) {
      psi[k] = parse_number(items[k], "--psi");
    } else {
      psi[k] = Complex(parse_number(items[k].substr(0, colon), "--psi"), parse_number(items[k].substr(colon + 1), "--psi"));
    }
    norm += std::norm(psi[k]);
  }
  if (!(norm > 0.0)) throw UsageError("--psi must be nonzero");
  for (auto& z : psi) z /= std::sqrt(norm);
  return psi;
}

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const ModelSpec spec = build_spec(a.model, parse_params(a.params));
  const auto psi = parse_psi(a.psi, spec.dim);
  const TrajectoryEnsemble e = sample_ensemble(spec, psi, a.times, a.dt, a.trajectories, a.seed);
  std::ostringstream csv;
  io::write_ensemble_csv(csv, e);
  emit(a.out, csv.str(), out);
  return 0;
}

// ---- kraus-step ----------------------------------------------------------

struct KrausStepArgs {
  std::string generator;
  double dt = 0.0;
  std::string out;
};

int cmd_kraus_step(const KrausStepArgs& a, std::ostream& out) {
  const LindbladGenerator g = io::parse_generator(io::read_file(a.generator));
  const KrausChannel k = dt_kraus(g, a.dt);
  out << "ops " << k.ops.size() << "\n";
  out << "completeness_defect " << format_real(completeness_defect(k)) << "\n";
  if (!a.out.empty()) io::write_file(a.out, io::format_channel(k));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-dimensional open quantum system dynamics", "lindbladkit"};
  app.require_subcommand(1);

  ValidateArgs validate;
  auto* sub_validate = app.add_subcommand("validate", "Check that a state file holds a density matrix");
  sub_validate->add_option("state", validate.path, "State JSON file")->required();
  sub_validate->add_option("--tol", validate.tol, "Tolerance for all three checks");

  EvolveArgs evolve;
  auto* sub_evolve = app.add_subcommand("evolve", "Integrate a generator from an initial state, CSV output");
  sub_evolve->add_option("--generator", evolve.generator, "Generator JSON file")->required();
  sub_evolve->add_option("--initial", evolve.initial, "Initial state JSON file")->required();
  sub_evolve->add_option("--t-max", evolve.t_max, "Final time")->required();
  sub_evolve->add_option("--dt", evolve.dt, "RK4 step");
  sub_evolve->add_option("--method", evolve.method, "rk4 (every dt) or expm (100 evenly spaced times)")
      ->check(CLI::IsMember({"rk4", "expm"}));
  sub_evolve->add_option("--out", evolve.out, "Output CSV (default stdout)");

  MapArgs choi;
  auto* sub_choi = app.add_subcommand("choi", "Choi spectrum and complete-positivity verdict");
  auto* choi_channel = sub_choi->add_option("--channel", choi.channel, "Channel JSON file");
  auto* choi_generator = sub_choi->add_option("--generator", choi.generator, "Generator JSON file");
  sub_choi->add_option("--t", choi.t, "Time of the generator's flow map");
  sub_choi->add_flag("--require-cp", choi.require_cp, "Exit 1 unless completely positive");
  choi_channel->excludes(choi_generator);

  MapArgs spectral;
  auto* sub_spectral = app.add_subcommand("spectral", "Spectral decomposition of a channel or generator superoperator");
  auto* spectral_channel = sub_spectral->add_option("--channel", spectral.channel, "Channel JSON file");
  auto* spectral_generator = sub_spectral->add_option("--generator", spectral.generator, "Generator JSON file");
  sub_spectral->add_option("--t", spectral.t, "Use the flow map at this time instead of the generator");
  sub_spectral->add_option("--out", spectral.out, "Write the spectral channel JSON");
  spectral_channel->excludes(spectral_generator);

  CanonicalArgs canonical;
  auto* sub_canonical = app.add_subcommand("canonical", "Reduce a generator to canonical Lindblad form");
  sub_canonical->add_option("--generator", canonical.generator, "Generator JSON file")->required();
  sub_canonical->add_option("--out", canonical.out, "Write the canonical generator JSON");
  sub_canonical->add_option("--tol", canonical.tol, "Relative Gram eigenvalue cutoff");

  RegionArgs region;
  auto* sub_region = app.add_subcommand("region", "Positivity classes of the two-level Pauli map family");
  sub_region->add_option("--resolution", region.resolution, "Grid points per axis")->check(CLI::Range(2, 10000));
  sub_region->add_option("--out", region.out, "Output CSV (default stdout)");

  ModelArgs model;
  auto* sub_model = app.add_subcommand("model", "Write the generator of a solvable model");
  sub_model->add_option("--name", model.name, "Model name")->required();
  sub_model->add_option("--params", model.params, "key=value overrides");
  sub_model->add_option("--out", model.out, "Output JSON (default stdout)");
  sub_model->footer(kModelHelp);

  SampleArgs sample;
  auto* sub_sample = app.add_subcommand("sample", "Monte Carlo trajectory ensemble of a solvable model");
  sub_sample->add_option("--model", sample.model, "Model name")->required();
  sub_sample->add_option("--params", sample.params, "key=value overrides");
  sub_sample->add_option("--psi", sample.psi, "Initial amplitudes, re or re:im, normalized on input (default |0>)")
      ->delimiter(',');
  sub_sample->add_option("--trajectories", sample.trajectories, "Ensemble size")->check(CLI::PositiveNumber);
  sub_sample->add_option("--seed", sample.seed, "Random seed");
  sub_sample->add_option("--dt", sample.dt, "Step size");
  sub_sample->add_option("--times", sample.times, "Comma separated sample times")->delimiter(',');
  sub_sample->add_option("--out", sample.out, "Output CSV (default stdout)");
  sub_sample->footer(kModelHelp);

  KrausStepArgs kraus;
  auto* sub_kraus = app.add_subcommand("kraus-step", "Kraus factorization of one time step");
  sub_kraus->add_option("--generator", kraus.generator, "Generator JSON file")->required();
  sub_kraus->add_option("--dt", kraus.dt, "Time step")->required();
  sub_kraus->add_option("--out", kraus.out, "Write the Kraus channel JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* failing = &app;
    for (const auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return 2;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == sub_validate) return cmd_validate(validate, out);
    if (active == sub_evolve) return cmd_evolve(evolve, out);
    if (active == sub_choi) return cmd_choi(choi, out);
    if (active == sub_spectral) return cmd_spectral(spectral, out);
    if (active == sub_canonical) return cmd_canonical(canonical, out);
    if (active == sub_region) return cmd_region(region, out);
    if (active == sub_model) return cmd_model(model, out);
    if (active == sub_sample) return cmd_sample(sample, out);
    if (active == sub_kraus) return cmd_kraus_step(kraus, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << active->help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Parse ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace lindbladkit::cli
