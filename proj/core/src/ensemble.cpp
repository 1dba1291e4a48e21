#include <algorithm>
#include <cmath>
#include <random>

#include "lindbladkit/errors.hpp"
#include "lindbladkit/linalg.hpp"
#include "lindbladkit/models.hpp"
#include "parallel.hpp"

namespace lindbladkit {

namespace {

constexpr std::size_t kBlock = 512;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-block sums of x − ψ0ψ0† over trajectories, flattened as [time][i·N + j].
// The shift keeps the variance free of cancellation when trajectories barely move.
struct BlockSums {
  std::vector<Complex> sum;
  std::vector<double> sum_sq;
};

// Kind-specific single-trajectory stepping. State is ψ plus, for the
// diffusive kinds, the accumulated phase variables.
class TrajectoryStepper {
 public:
  TrajectoryStepper(const ModelSpec& spec, std::span<const Complex> psi0, double dt)
      : spec_(spec), n_(spec.dim), dt_(dt), psi0_(psi0.begin(), psi0.end()) {
    switch (spec.kind) {
      case ModelKind::RandomPhases:
        sd1_ = std::sqrt(spec.rate1 * dt);
        sd2_ = std::sqrt(spec.rate2 * dt);
        break;
      case ModelKind::UnitaryJump:
        jump_ = expm(-kI * spec.g);
        break;
      case ModelKind::RandomUnitary: {
        // Increments θ ~ N(0, λ dt); e^{-iGθ} all commute, so only Σθ is kept.
        sd1_ = std::sqrt(spec.rate * dt);
        const auto eig = hermitian_eig(spec.g);
        g_values_ = eig.values;
        g_vectors_ = eig.vectors;
        break;
      }
      case ModelKind::StateExchange:
      case ModelKind::StateTransitions:
        break;
    }
    jump_probability_ = spec.rate * dt;
  }

  void reset() {
    psi_ = psi0_;
    theta1_ = theta2_ = 0.0;
  }

  void step(std::mt19937_64& rng) {
    switch (spec_.kind) {
      case ModelKind::RandomPhases:
        if (sd1_ > 0.0) theta1_ += sd1_ * gauss_(rng);
        if (sd2_ > 0.0) theta2_ += sd2_ * gauss_(rng);
        break;
      case ModelKind::RandomUnitary:
        if (sd1_ > 0.0) theta1_ += sd1_ * gauss_(rng);
        break;
      case ModelKind::UnitaryJump:
        if (uniform_(rng) < jump_probability_) psi_ = jump_ * std::span<const Complex>(psi_);
        break;
      case ModelKind::StateExchange:
        if (uniform_(rng) < jump_probability_) std::swap(psi_[0], psi_[1]);
        break;
      case ModelKind::StateTransitions:
        if (uniform_(rng) < jump_probability_) transition(rng);
        break;
    }
  }

  // Current ψ (materializing accumulated phases for the diffusive kinds).
  std::vector<Complex> state() const {
    switch (spec_.kind) {
      case ModelKind::RandomPhases:
        return {psi0_[0] * std::polar(1.0, theta1_), psi0_[1] * std::polar(1.0, theta2_)};
      case ModelKind::RandomUnitary: {
        std::vector<Complex> coeff(n_);
        for (std::size_t k = 0; k < n_; ++k) {
          Complex c = 0.0;
          for (std::size_t i = 0; i < n_; ++i) c += std::conj(g_vectors_(i, k)) * psi0_[i];
          coeff[k] = c * std::polar(1.0, -g_values_[k] * theta1_);
        }
        return g_vectors_ * std::span<const Complex>(coeff);
      }
      default:
        return psi_;
    }
  }

 private:
  // Jump |m> <n|ψ>/|<n|ψ>| with weight p_m |<n|ψ>|².
  void transition(std::mt19937_64& rng) {
    double u = uniform_(rng);
    std::size_t target_n = n_ - 1;
    for (std::size_t k = 0; k < n_; ++k) {
      const double w = std::norm(psi_[k]);
      if (u < w) {
        target_n = k;
        break;
      }
      u -= w;
    }
    double v = uniform_(rng);
    std::size_t target_m = n_ - 1;
    for (std::size_t k = 0; k < n_; ++k) {
      if (v < spec_.p[k]) {
        target_m = k;
        break;
      }
      v -= spec_.p[k];
    }
    while (std::norm(psi_[target_n]) == 0.0 && target_n > 0) --target_n;
    const double mag = std::abs(psi_[target_n]);
    const Complex phase = mag > 0.0 ? psi_[target_n] / mag : Complex{1.0};
    std::fill(psi_.begin(), psi_.end(), Complex{});
    psi_[target_m] = phase;
  }

  const ModelSpec& spec_;
  std::size_t n_;
  double dt_;
  std::vector<Complex> psi0_;
  std::vector<Complex> psi_;
  double theta1_ = 0.0;
  double theta2_ = 0.0;
  double sd1_ = 0.0;
  double sd2_ = 0.0;
  double jump_probability_ = 0.0;
  ComplexMatrix jump_;
  std::vector<double> g_values_;
  ComplexMatrix g_vectors_;
  std::normal_distribution<double> gauss_;
  std::uniform_real_distribution<double> uniform_;
};

}  // namespace

TrajectoryEnsemble sample_ensemble(const ModelSpec& spec, std::span<const Complex> psi0, std::span<const double> times,
                                   double dt, std::size_t trajectories, std::uint64_t seed, unsigned threads) {
  validate_spec(spec);
  const std::size_t n = spec.dim;
  if (psi0.size() != n) throw Error(ErrorCode::InvalidState, "initial state has the wrong dimension");
  double norm = 0.0;
  for (const auto& z : psi0) norm += std::norm(z);
  if (!(std::abs(std::sqrt(norm) - 1.0) <= 1e-12)) {
    throw Error(ErrorCode::InvalidState, "initial state is not normalized", std::sqrt(norm));
  }
  if (!(dt > 0.0) || dt * total_rate(spec) > kSamplerStepBound) {
    throw Error(ErrorCode::StepTooLarge, "sampler needs dt > 0 and dt * rate <= 1e-2", dt * total_rate(spec));
  }
  if (trajectories == 0) throw Error(ErrorCode::InvalidSpec, "need at least one trajectory");

  std::vector<std::size_t> record_steps;
  record_steps.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const double steps = std::round(t / dt);
    if (!(t >= 0.0) || std::abs(steps * dt - t) > 1e-9 * std::max(1.0, t)) {
      throw Error(ErrorCode::InvalidSpec, "sample times must be non-negative multiples of dt", t);
    }
    if (k > 0 && t < times[k - 1]) throw Error(ErrorCode::InvalidSpec, "sample times must be ascending", t);
    record_steps.push_back(static_cast<std::size_t>(steps));
  }

  const std::size_t cells = n * n;
  const std::size_t blocks = (trajectories + kBlock - 1) / kBlock;
  std::vector<BlockSums> partial(blocks);

  detail::parallel_chunks(blocks, threads, [&](std::size_t block) {
    BlockSums& acc = partial[block];
    acc.sum.assign(times.size() * cells, Complex{});
    acc.sum_sq.assign(times.size() * cells, 0.0);
    TrajectoryStepper stepper(spec, psi0, dt);
    const std::size_t first = block * kBlock;
    const std::size_t last = std::min(trajectories, first + kBlock);
    for (std::size_t traj = first; traj < last; ++traj) {
      std::mt19937_64 rng(splitmix64(splitmix64(seed) + static_cast<std::uint64_t>(traj)));
      stepper.reset();
      std::size_t done = 0;
      for (std::size_t k = 0; k < record_steps.size(); ++k) {
        for (; done < record_steps[k]; ++done) stepper.step(rng);
        const auto psi = stepper.state();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const Complex x = psi[i] * std::conj(psi[j]) - psi0[i] * std::conj(psi0[j]);
            acc.sum[k * cells + i * n + j] += x;
            acc.sum_sq[k * cells + i * n + j] += std::norm(x);
          }
      }
    }
  });

  std::vector<Complex> sum(times.size() * cells);
  std::vector<double> sum_sq(times.size() * cells);
  for (const auto& acc : partial) {
    for (std::size_t c = 0; c < sum.size(); ++c) {
      sum[c] += acc.sum[c];
      sum_sq[c] += acc.sum_sq[c];
    }
  }

  TrajectoryEnsemble out;
  out.model = spec;
  out.trajectories = trajectories;
  out.seed = seed;
  out.times.assign(times.begin(), times.end());
  const double m = static_cast<double>(trajectories);
  const double tol = std::max(1e-10, 5.0 / std::sqrt(m));
  for (std::size_t k = 0; k < times.size(); ++k) {
    ComplexMatrix mean(n, n);
    std::vector<double> se(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      const Complex shift_mean = sum[k * cells + c] / m;
      mean.entries()[c] = psi0[c / n] * std::conj(psi0[c % n]) + shift_mean;
      if (trajectories > 1) {
        const double var = std::max(0.0, (sum_sq[k * cells + c] - m * std::norm(shift_mean)) / (m - 1.0));
        se[c] = std::sqrt(var / m);
      }
    }
    out.mean_density.emplace_back(std::move(mean), DensityTolerance::uniform(tol));
    out.standard_error.push_back(std::move(se));
  }
  return out;
}

}  // namespace lindbladkit
