#include "ecoroute/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ecoroute/error.hpp"
#include "ecoroute/seeding.hpp"
#include "recorder.hpp"

namespace ecoroute {

VolatilitySpec VolatilitySpec::constant(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be >= 0");
  VolatilitySpec spec;
  spec.rule_ = Rule::constant;
  spec.value_ = sigma;
  return spec;
}

VolatilitySpec VolatilitySpec::per_edge(std::vector<double> sigma) {
  for (double s : sigma) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("sigma must be >= 0");
  }
  VolatilitySpec spec;
  spec.rule_ = Rule::per_edge;
  spec.per_edge_ = std::move(sigma);
  return spec;
}

VolatilitySpec VolatilitySpec::fraction_of_mean(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw ValidationError("noise fraction z must lie in [0, 1]");
  VolatilitySpec spec;
  spec.rule_ = Rule::fraction_of_mean;
  spec.value_ = z;
  return spec;
}

std::vector<double> VolatilitySpec::resolve(const CongestionModel& model,
                                            const FlowState& x_ref) const {
  const std::size_t edges = model.edge_count();
  switch (rule_) {
    case Rule::constant:
      return std::vector<double>(edges, value_);
    case Rule::per_edge:
      if (per_edge_.size() != edges) {
        throw DimensionError("per-edge volatility needs one sigma per edge");
      }
      return per_edge_;
    case Rule::fraction_of_mean: {
      const auto prices = reference_edge_prices(model, x_ref);
      double total = 0.0;
      std::size_t priced = 0;
      for (double p : prices) {
        if (p > 0.0) {
          total += p;
          ++priced;
        }
      }
      std::vector<double> sigma(edges, 0.0);
      if (priced == 0) return sigma;
      const double level = value_ * total / static_cast<double>(priced);
      for (EdgeId e = 0; e < edges; ++e) {
        if (prices[e] > 0.0) sigma[e] = level;
      }
      return sigma;
    }
  }
  return std::vector<double>(edges, 0.0);
}

VolatilityMatrix volatility_matrix(std::span<const double> edge_sigma,
                                   const IncidenceMatrix& incidence) {
  if (edge_sigma.size() != incidence.edge_count()) {
    throw DimensionError("one sigma per edge is required");
  }
  const auto n = static_cast<Eigen::Index>(incidence.path_count());
  VolatilityMatrix out{Eigen::MatrixXd::Zero(n, n), 0.0};
  for (EdgeId e = 0; e < edge_sigma.size(); ++e) {
    const double s2 = edge_sigma[e] * edge_sigma[e];
    if (s2 == 0.0) continue;
    const auto users = incidence.edge_paths(e);
    for (PathId a : users) {
      for (PathId b : users) {
        out.sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += s2;
      }
    }
  }
  if (n > 0) out.sigma_star_sq = out.sigma.cwiseAbs().rowwise().sum().maxCoeff();
  return out;
}

double NoiseDriver::Stream::normal() {
  if (has_spare) {
    has_spare = false;
    return spare;
  }
  // Box–Muller on 53-bit uniforms; u1 in (0, 1].
  constexpr double kScale = 1.0 / 9007199254740992.0;
  const double u1 = (static_cast<double>(engine() >> 11) + 1.0) * kScale;
  const double u2 = static_cast<double>(engine() >> 11) * kScale;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare = r * std::sin(theta);
  has_spare = true;
  return r * std::cos(theta);
}

NoiseDriver::NoiseDriver(std::uint64_t seed, std::size_t edge_count, double dt)
    : dt_(dt), sqrt_dt_(std::sqrt(dt)) {
  if (!(dt > 0.0)) throw ValidationError("noise dt must be positive");
  streams_.reserve(edge_count);
  for (std::size_t e = 0; e < edge_count; ++e) {
    streams_.push_back(Stream{std::mt19937_64(derive_seed(seed, SeedStream::edge, e))});
  }
}

void NoiseDriver::next(std::span<double> dw) {
  if (dw.size() != streams_.size()) throw DimensionError("increment buffer size mismatch");
  for (std::size_t e = 0; e < streams_.size(); ++e) dw[e] = sqrt_dt_ * streams_[e].normal();
}

BrownianPath::BrownianPath(std::uint64_t seed, std::size_t edge_count, double fine_dt,
                           std::size_t fine_steps)
    : edges_(edge_count), fine_dt_(fine_dt), steps_(fine_steps) {
  NoiseDriver driver(seed, edge_count, fine_dt);
  increments_.resize(edge_count * fine_steps);
  for (std::size_t n = 0; n < fine_steps; ++n) {
    driver.next(std::span<double>(increments_).subspan(n * edge_count, edge_count));
  }
}

BrownianPath::Replay::Replay(const BrownianPath& path, std::size_t factor)
    : path_(&path), factor_(factor) {
  if (factor == 0) throw ValidationError("replay factor must be >= 1");
}

void BrownianPath::Replay::next(std::span<double> dw) {
  if (dw.size() != path_->edges_) throw DimensionError("increment buffer size mismatch");
  if (cursor_ + factor_ > path_->steps_) throw ValidationError("Brownian path exhausted");
  std::fill(dw.begin(), dw.end(), 0.0);
  for (std::size_t k = 0; k < factor_; ++k, ++cursor_) {
    const double* row = path_->increments_.data() + cursor_ * path_->edges_;
    for (std::size_t e = 0; e < path_->edges_; ++e) dw[e] += row[e];
  }
}

std::vector<double> path_noise(std::span<const double> edge_sigma, std::span<const double> dw,
                               const IncidenceMatrix& incidence) {
  if (edge_sigma.size() != incidence.edge_count() || dw.size() != incidence.edge_count()) {
    throw DimensionError("noise dimensions must match the edge count");
  }
  std::vector<double> dz(incidence.path_count(), 0.0);
  for (PathId a = 0; a < dz.size(); ++a) {
    for (EdgeId e : incidence.path_edges(a)) {
      if (!std::isfinite(dw[e])) throw NumericalError("non-finite noise increment");
      dz[a] += edge_sigma[e] * dw[e];
    }
  }
  return dz;
}

ScoreState step_sbr(const ScoreState& y, const FlowState& x, double dt,
                    std::span<const double> dw, std::span<const double> edge_sigma,
                    const CongestionModel& model, double price_scale) {
  ScoreState next = step_scores(y, x, dt, model, price_scale);
  const auto dz = path_noise(edge_sigma, dw, model.incidence());
  for (PathId a = 0; a < dz.size(); ++a) next.values[a] += dz[a] / price_scale;
  return next;
}

namespace {

void require_unit_rates(const PathLayout& layout) {
  for (const auto& b : layout.blocks()) {
    if (b.rate != 1.0) {
      throw ValidationError("the replicator SDE integrator supports unit-rate commodities only");
    }
  }
}

void require_interior(std::span<const double> x) {
  for (double v : x) {
    if (!(v > 0.0)) {
      throw BoundaryStateError(
          "replicator SDE needs a strictly interior state; integrate in score space instead");
    }
  }
}

}  // namespace

SrdTerms srd_terms(std::span<const double> x, std::span<const double> prices,
                   std::span<const double> dz, const Eigen::MatrixXd& sigma, double eta,
                   double eta_dot, const PathLayout& layout) {
  const std::size_t n = layout.path_count();
  if (x.size() != n || prices.size() != n || dz.size() != n ||
      sigma.rows() != static_cast<Eigen::Index>(n) ||
      sigma.cols() != static_cast<Eigen::Index>(n)) {
    throw DimensionError("SRD operand sizes do not match the path layout");
  }
  require_unit_rates(layout);
  require_interior(x);

  SrdTerms t{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
             std::vector<double>(n)};
  auto S = [&](std::size_t a, std::size_t b) {
    return sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  for (const auto& b : layout.blocks()) {
    const std::size_t lo = b.first;
    const std::size_t hi = b.first + b.count;
    double mean_price = 0.0;
    double mean_noise = 0.0;
    double mean_log = 0.0;
    double mean_diag = 0.0;   // Σ_β x_β Σ_ββ
    double quadratic = 0.0;   // Σ_βγ x_β x_γ Σ_βγ
    for (std::size_t i = lo; i < hi; ++i) {
      mean_price += x[i] * prices[i];
      mean_noise += x[i] * dz[i];
      mean_log += x[i] * std::log(x[i]);
      mean_diag += x[i] * S(i, i);
      for (std::size_t j = lo; j < hi; ++j) quadratic += x[i] * x[j] * S(i, j);
    }
    for (std::size_t i = lo; i < hi; ++i) {
      double row = 0.0;  // Σ_β x_β Σ_αβ
      for (std::size_t j = lo; j < hi; ++j) row += x[j] * S(i, j);
      t.drift[i] = -eta * x[i] * (prices[i] - mean_price);
      t.martingale[i] = -eta * x[i] * (dz[i] - mean_noise);
      t.temperature[i] = (eta_dot / eta) * x[i] * (std::log(x[i]) - mean_log);
      t.ito[i] = 0.5 * eta * eta * x[i] *
                 (S(i, i) - 2.0 * row - mean_diag + 2.0 * quadratic);
    }
  }
  return t;
}

namespace {

SrdStep apply_srd(std::span<const double> x, const SrdTerms& terms, double dt,
                  const PathLayout& layout) {
  SrdStep step{FlowState{std::vector<double>(x.size())}, 0.0, false};
  auto& next = step.x.values;
  for (std::size_t i = 0; i < x.size(); ++i) {
    next[i] = x[i] + (terms.drift[i] + terms.temperature[i] + terms.ito[i]) * dt +
              terms.martingale[i];
  }
  for (double v : next) {
    if (!std::isfinite(v)) throw NumericalError("non-finite SRD state");
  }
  require_interior(next);
  for (const auto& b : layout.blocks()) {
    double sum = 0.0;
    for (std::size_t i = b.first; i < b.first + b.count; ++i) sum += next[i];
    step.renormalization = std::max(step.renormalization, std::abs(sum - b.rate));
    for (std::size_t i = b.first; i < b.first + b.count; ++i) next[i] *= b.rate / sum;
  }
  step.step_warning = step.renormalization > kSrdRenormalizationWarning;
  return step;
}

std::vector<double> scaled(std::span<const double> v, double factor) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x *= factor;
  return out;
}

}  // namespace

SrdStep step_srd(const FlowState& x, double dt, std::span<const double> dw,
                 std::span<const double> edge_sigma, const CongestionModel& model, double eta,
                 double eta_dot, double price_scale) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (dw.size() != model.edge_count()) throw DimensionError("increment size mismatch");
  require_unit_rates(model.layout());
  require_interior(x.values);
  const double inv = 1.0 / price_scale;
  const auto prices = scaled(model.prices(x), inv);
  const auto sigma = scaled(edge_sigma, inv);
  const auto dz = path_noise(sigma, dw, model.incidence());
  const auto vol = volatility_matrix(sigma, model.incidence());
  const auto terms = srd_terms(x.values, prices, dz, vol.sigma, eta, eta_dot, model.layout());
  return apply_srd(x.values, terms, dt, model.layout());
}

namespace {

Trajectory integrate_srd(const CongestionModel& model, const TemperatureSchedule& schedule,
                         std::span<const double> edge_sigma, const StochasticOptions& options,
                         IncrementSource& noise) {
  const auto& opt = options.integration;
  detail::check_integration_options(opt, model);
  require_unit_rates(model.layout());
  if (edge_sigma.size() != model.edge_count() || noise.edge_count() != model.edge_count()) {
    throw DimensionError("noise dimensions must match the edge count");
  }

  Trajectory traj;
  traj.dt = opt.dt;
  traj.seed = options.seed;
  traj.stochastic = true;
  traj.price_scale = detail::initial_price_scale(model, schedule, opt);
  const double inv = 1.0 / traj.price_scale;
  const auto sigma = scaled(edge_sigma, inv);
  const auto vol = volatility_matrix(sigma, model.incidence());

  ScoreState y0{opt.initial_scores, 0.0};
  if (y0.values.empty()) y0.values.assign(model.path_count(), 0.0);
  std::vector<double> x = gibbs_map(y0, schedule.eta(0.0), model.layout()).values;
  require_interior(x);

  ModelWorkspace ws(model);
  detail::Recorder recorder(model, opt, traj);
  double consumption = ws.evaluate(x);
  recorder.start(x, {}, consumption, ws.path_prices(), ws.loads());

  std::vector<double> dw(model.edge_count());
  std::vector<double> prices(model.path_count());
  const std::size_t steps = recorder.steps();
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * opt.dt;
    const auto raw = ws.path_prices();
    for (std::size_t a = 0; a < prices.size(); ++a) prices[a] = raw[a] * inv;
    noise.next(dw);
    const auto dz = path_noise(sigma, dw, model.incidence());
    const auto terms = srd_terms(x, prices, dz, vol.sigma, schedule.eta(t),
                                 schedule.eta_dot(t), model.layout());
    auto step = apply_srd(x, terms, opt.dt, model.layout());
    traj.max_renormalization = std::max(traj.max_renormalization, step.renormalization);
    if (step.step_warning) ++traj.step_warnings;
    x = std::move(step.x.values);

    double norm = 0.0;
    for (double z : dz) norm += z * z;
    consumption = ws.evaluate(x);
    recorder.step(n + 1, x, {}, consumption, ws.path_prices(), ws.loads(), std::sqrt(norm),
                  n + 1 == steps);
  }
  traj.steps = steps;
  return traj;
}

}  // namespace

Trajectory run_stochastic(const CongestionModel& model, const TemperatureSchedule& schedule,
                          std::span<const double> edge_sigma, const StochasticOptions& options,
                          IncrementSource& noise) {
  if (std::abs(noise.dt() - options.integration.dt) > 1e-12 * options.integration.dt) {
    throw ValidationError("noise source dt differs from the integration dt");
  }
  if (options.integrator == Integrator::srd) {
    return integrate_srd(model, schedule, edge_sigma, options, noise);
  }
  Trajectory traj = detail::integrate_scores(model, schedule, options.integration, edge_sigma,
                                             &noise);
  traj.seed = options.seed;
  return traj;
}

Trajectory run_stochastic(const CongestionModel& model, const TemperatureSchedule& schedule,
                          const VolatilitySpec& volatility, const StochasticOptions& options) {
  ScoreState y0{options.integration.initial_scores, 0.0};
  if (y0.values.empty()) y0.values.assign(model.path_count(), 0.0);
  const auto x0 = gibbs_map(y0, schedule.eta(0.0), model.layout());
  const auto sigma = volatility.resolve(model, x0);
  NoiseDriver driver(options.seed, model.edge_count(), options.integration.dt);
  return run_stochastic(model, schedule, sigma, options, driver);
}

}  // namespace ecoroute
