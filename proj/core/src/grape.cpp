/* Copyright 2026 The spinopt Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "spinopt/grape.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace spinopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double sinc(double x) {
  return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

// Re Tr(A B) without forming the product.
double re_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(epsilon0 > 0.0) || !std::isfinite(epsilon0)) {
    throw std::invalid_argument("optimizer.epsilon0 must be > 0");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("optimizer.max_iters must be >= 1");
  }
  if (!(target_infidelity > 0.0 && target_infidelity <= 1.0)) {
    throw std::invalid_argument("optimizer.target_infidelity must lie in (0, 1]");
  }
  if (amplitude_bound && !(*amplitude_bound >= 0.0)) {
    throw std::invalid_argument("optimizer.amplitude_bound must be >= 0");
  }
  if (stall_limit < 1 || stall_cycles < 1) {
    throw std::invalid_argument("optimizer stall limits must be >= 1");
  }
  if (init.kind == InitSpec::Kind::uniform_random && !(init.value >= 0.0)) {
    throw std::invalid_argument("optimizer.init half-width must be >= 0");
  }
}

RealVector segment_gradient(const HermitianSpectrum& spectrum, double dt, const ComplexMatrix& w,
                            const ControlSystem& system) {
  const Eigen::Index d = spectrum.values.size();
  const ComplexMatrix& v = spectrum.vectors;
  // d exp(-i dt H)[E] = V (G o V^dag E V) V^dag with the divided differences
  // G_ij = -i dt exp(-i dt (l_i + l_j)/2) sinc(dt (l_i - l_j)/2).
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double mean = 0.5 * (spectrum.values(i) + spectrum.values(j));
      const double half_gap = 0.5 * dt * (spectrum.values(i) - spectrum.values(j));
      g(i, j) = Complex(0.0, -dt) * std::polar(1.0, -dt * mean) * sinc(half_gap);
    }
  }
  // Re Tr(W V (G o A) V^dag) = Re sum_ij (V^dag W V)_ji G_ij A_ij
  const ComplexMatrix wt = v.adjoint() * w * v;
  const ComplexMatrix weights = wt.transpose().cwiseProduct(g);
  RealVector grad(static_cast<Eigen::Index>(system.n_controls()));
  const double inv_n = 1.0 / static_cast<double>(d);
  for (std::size_t m = 0; m < system.n_controls(); ++m) {
    const ComplexMatrix a = v.adjoint() * system.controls[m] * v;
    grad(static_cast<Eigen::Index>(m)) = weights.cwiseProduct(a).sum().real() * inv_n;
  }
  return grad;
}

RealMatrix fidelity_gradient(const PropagationCache& cache, const ControlSystem& system,
                             const GateTarget& target, const PiecewiseControl& control) {
  const Eigen::Index k_count = cache.segments();
  if (control.segments() != k_count) {
    throw std::invalid_argument("fidelity_gradient: cache and control disagree on K");
  }
  RealMatrix grad(k_count, static_cast<Eigen::Index>(system.n_controls()));
  const ComplexMatrix target_adj = target.matrix.adjoint();
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const ComplexMatrix w = cache.forward[i] * target_adj * cache.backward[i + 1];
    grad.row(k) = segment_gradient(cache.spectra[i], control.dt(k), w, system).transpose();
  }
  return grad;
}

RealMatrix update_direction(const PropagationCache& cache, const ControlSystem& system,
                            const GateTarget& target, GradientForm form) {
  const Eigen::Index k_count = cache.segments();
  RealMatrix dir(k_count, static_cast<Eigen::Index>(system.n_controls()));
  const ComplexMatrix target_adj = target.matrix.adjoint();
  const auto n = static_cast<double>(system.dim());
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const ComplexMatrix w = cache.forward[i] * target_adj * cache.backward[i + 1];
    if (form == GradientForm::first_order) {
      // Im Tr[U_T^dag B_k H_m U_k F_{k-1}] = Im Tr[(U_k W) H_m]
      const ComplexMatrix uw = cache.segment_props[i] * w;
      for (std::size_t m = 0; m < system.n_controls(); ++m) {
        dir(k, static_cast<Eigen::Index>(m)) =
            (uw.transpose().cwiseProduct(system.controls[m])).sum().imag();
      }
    } else {
      dir.row(k) = segment_gradient(cache.spectra[i], cache.durations[i], w, system).transpose() *
                   (n / cache.durations[i]);
    }
  }
  return dir;
}

LineSearchResult line_search_step(const std::function<double(double)>& objective, double f0,
                                  double slope, double eps0, const LineSearchOptions& options) {
  LineSearchResult result;
  result.fidelity = f0;
  if (!(slope > 0.0) || !(eps0 > 0.0)) {
    return result;
  }
  double best_eps = 0.0;
  double best_f = f0;
  for (int j = options.j_max; j >= options.j_min; --j) {
    const double eps = std::ldexp(eps0, j);
    const double f = objective(eps);
    ++result.trials;
    if (!std::isfinite(f)) {
      continue;
    }
    if (f >= f0 + options.armijo * eps * slope && f > f0) {
      result.epsilon = eps;
      result.fidelity = f;
      result.stalled = false;
      return result;
    }
    if (f > best_f) {
      best_f = f;
      best_eps = eps;
    }
  }
  if (best_eps > 0.0) {
    result.epsilon = best_eps;
    result.fidelity = best_f;
    result.stalled = false;
  }
  return result;
}

PiecewiseControl clip_amplitudes(const PiecewiseControl& control, double u_max) {
  if (!(u_max >= 0.0)) {
    throw std::invalid_argument("clip_amplitudes: bound must be >= 0");
  }
  PiecewiseControl out(control.times(), control.values().cwiseMax(-u_max).cwiseMin(u_max),
                       control.bound());
  return out;
}

PiecewiseControl initial_control(const ControlSystem& system, double t_final, int segments,
                                 const OptimizerConfig& cfg, std::uint64_t run_index) {
  const auto m = static_cast<int>(system.n_controls());
  PiecewiseControl control = PiecewiseControl::uniform(t_final, segments, m);
  RealMatrix values = RealMatrix::Zero(segments, m);
  switch (cfg.init.kind) {
    case InitSpec::Kind::zero:
      break;
    case InitSpec::Kind::constant:
      values.setConstant(cfg.init.value);
      break;
    case InitSpec::Kind::uniform_random: {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(run_index),
                        static_cast<std::uint32_t>(run_index >> 32)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> dist(-cfg.init.value, cfg.init.value);
      for (Eigen::Index k = 0; k < values.rows(); ++k) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) values(k, j) = dist(rng);
      }
      break;
    }
  }
  if (cfg.amplitude_bound) {
    values = values.cwiseMax(-*cfg.amplitude_bound).cwiseMin(*cfg.amplitude_bound);
  }
  control.set_values(std::move(values));
  control.set_bound(cfg.amplitude_bound);
  return control;
}

namespace {

RealMatrix step_values(const RealMatrix& values, const RealMatrix& direction, double eps,
                       const std::optional<double>& bound) {
  RealMatrix out = values + eps * direction;
  if (bound) out = out.cwiseMax(-*bound).cwiseMin(*bound);
  return out;
}

void require_finite(double f, int iteration) {
  if (!std::isfinite(f)) {
    throw NumericalFailure("fidelity became non-finite at iteration " +
                           std::to_string(iteration));
  }
}

// Predicted gain per unit epsilon, sum dF/du * direction, with bound-active
// components removed so a pinned amplitude does not count as progress.
double predicted_slope(const RealMatrix& values, const RealMatrix& grad, const RealMatrix& dir,
                       const std::optional<double>& bound) {
  double slope = 0.0;
  for (Eigen::Index k = 0; k < values.rows(); ++k) {
    for (Eigen::Index m = 0; m < values.cols(); ++m) {
      if (bound) {
        const double v = values(k, m);
        if ((v >= *bound && dir(k, m) > 0) || (v <= -*bound && dir(k, m) < 0)) continue;
      }
      slope += grad(k, m) * dir(k, m);
    }
  }
  return slope;
}

class StallTracker {
 public:
  StallTracker(const OptimizerConfig& cfg, std::mt19937_64& rng) : cfg_(cfg), rng_(rng) {}

  /// Returns false once the run should give up.
  bool record(bool stalled, double& eps) {
    if (!stalled) {
      consecutive_ = 0;
      return true;
    }
    if (++consecutive_ < cfg_.stall_limit) return true;
    consecutive_ = 0;
    if (++cycles_ >= cfg_.stall_cycles) return false;
    std::uniform_real_distribution<double> decades(-2.0, 2.0);
    eps = cfg_.epsilon0 * std::pow(10.0, decades(rng_));
    return true;
  }

 private:
  const OptimizerConfig& cfg_;
  std::mt19937_64& rng_;
  int consecutive_ = 0;
  int cycles_ = 0;
};

LineSearchOptions search_options(const OptimizerConfig& cfg) {
  LineSearchOptions opts;
  if (!cfg.line_search) {
    // Fixed step with backtracking only.
    opts.j_max = 0;
  }
  return opts;
}

bool should_stop(const OptimizerConfig& cfg, Clock::time_point start,
                 const std::atomic<bool>* cancel) {
  if (cancel && cancel->load(std::memory_order_relaxed)) return true;
  return cfg.time_limit_s > 0.0 && seconds_since(start) > cfg.time_limit_s;
}

void run_global(const ControlSystem& system, const GateTarget& target, const OptimizerConfig& cfg,
                PiecewiseControl& control, OptimizationResult& result, std::mt19937_64& rng,
                Clock::time_point start, const std::atomic<bool>* cancel) {
  const auto opts = search_options(cfg);
  StallTracker stalls(cfg, rng);
  double eps = cfg.epsilon0;
  double f = result.trace.back();
  while (result.iterations < cfg.max_iters) {
    if (1.0 - f <= cfg.target_infidelity) {
      result.converged = true;
      return;
    }
    if (should_stop(cfg, start, cancel)) return;
    const PropagationCache cache = propagate(system, control);
    const RealMatrix grad = fidelity_gradient(cache, system, target, control);
    RealMatrix dir;
    if (cfg.gradient == GradientForm::exact) {
      dir = grad;
      const auto n = static_cast<double>(system.dim());
      for (Eigen::Index k = 0; k < dir.rows(); ++k) dir.row(k) *= n / control.dt(k);
    } else {
      dir = update_direction(cache, system, target, GradientForm::first_order);
    }
    const double slope = predicted_slope(control.values(), grad, dir, cfg.amplitude_bound);
    PiecewiseControl trial = control;
    auto objective = [&](double e) {
      trial.set_values(step_values(control.values(), dir, e, cfg.amplitude_bound));
      return evolve_fidelity(system, trial, target);
    };
    const LineSearchResult ls = line_search_step(objective, f, slope, eps, opts);
    ++result.iterations;
    if (!ls.stalled) {
      control.set_values(step_values(control.values(), dir, ls.epsilon, cfg.amplitude_bound));
      f = ls.fidelity;
      eps = ls.epsilon;
    }
    require_finite(f, result.iterations);
    result.trace.push_back(f);
    if (!stalls.record(ls.stalled, eps)) {
      result.stalled = true;
      return;
    }
  }
  result.converged = 1.0 - f <= cfg.target_infidelity;
}

void run_local(const ControlSystem& system, const GateTarget& target, const OptimizerConfig& cfg,
               PiecewiseControl& control, OptimizationResult& result, std::mt19937_64& rng,
               Clock::time_point start, const std::atomic<bool>* cancel) {
  const auto opts = search_options(cfg);
  StallTracker stalls(cfg, rng);
  const Eigen::Index k_count = control.segments();
  const auto m_count = static_cast<Eigen::Index>(system.n_controls());
  const auto n = static_cast<double>(system.dim());
  const ComplexMatrix target_adj = target.matrix.adjoint();
  std::vector<double> eps(static_cast<std::size_t>(k_count), cfg.epsilon0);
  double f = result.trace.back();
  while (result.iterations < cfg.max_iters) {
    if (1.0 - f <= cfg.target_infidelity) {
      result.converged = true;
      return;
    }
    if (should_stop(cfg, start, cancel)) return;
    const PropagationCache cache = propagate(system, control);
    ComplexMatrix fwd = identity(system.dim());
    bool any_accepted = false;
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const auto i = static_cast<std::size_t>(k);
      const double dt = control.dt(k);
      // F = Re Tr(W U_k) / N with the already-updated earlier segments.
      const ComplexMatrix w = fwd * target_adj * cache.backward[i + 1];
      const std::vector<double> u0 = control.amplitudes(k);
      RealVector grad = segment_gradient(cache.spectra[i], dt, w, system);
      RealVector dir;
      if (cfg.gradient == GradientForm::exact) {
        dir = grad * (n / dt);
      } else {
        const ComplexMatrix uw = cache.segment_props[i] * w;
        dir.resize(m_count);
        for (Eigen::Index m = 0; m < m_count; ++m) {
          dir(m) = (uw.transpose().cwiseProduct(system.controls[static_cast<std::size_t>(m)]))
                       .sum()
                       .imag();
        }
      }
      double slope = 0.0;
      for (Eigen::Index m = 0; m < m_count; ++m) {
        const double v = u0[static_cast<std::size_t>(m)];
        if (cfg.amplitude_bound && ((v >= *cfg.amplitude_bound && dir(m) > 0) ||
                                    (v <= -*cfg.amplitude_bound && dir(m) < 0))) {
          continue;
        }
        slope += grad(m) * dir(m);
      }
      const double f_here = re_trace_product(w, cache.segment_props[i]) / n;
      std::vector<double> u_trial(u0.size());
      ComplexMatrix u_prop;
      auto make_trial = [&](double e) {
        for (Eigen::Index m = 0; m < m_count; ++m) {
          double v = u0[static_cast<std::size_t>(m)] + e * dir(m);
          if (cfg.amplitude_bound) v = std::clamp(v, -*cfg.amplitude_bound, *cfg.amplitude_bound);
          u_trial[static_cast<std::size_t>(m)] = v;
        }
        u_prop = segment_propagator(system, u_trial, dt);
      };
      auto objective = [&](double e) {
        make_trial(e);
        return re_trace_product(w, u_prop) / n;
      };
      const LineSearchResult ls = line_search_step(objective, f_here, slope, eps[i], opts);
      if (!ls.stalled) {
        make_trial(ls.epsilon);
        control.set_segment(k, u_trial);
        eps[i] = ls.epsilon;
        any_accepted = true;
        fwd = u_prop * fwd;
      } else {
        fwd = cache.segment_props[i] * fwd;
      }
    }
    ++result.iterations;
    const double f_new = fidelity(target, fwd);
    require_finite(f_new, result.iterations);
    result.trace.push_back(f_new);
    double eps_reset = cfg.epsilon0;
    if (!stalls.record(!any_accepted, eps_reset)) {
      result.stalled = true;
      return;
    }
    if (eps_reset != cfg.epsilon0) std::fill(eps.begin(), eps.end(), eps_reset);
    f = f_new;
  }
  result.converged = 1.0 - f <= cfg.target_infidelity;
}

}  // namespace

OptimizationResult optimize(const ControlSystem& system, const GateTarget& target,
                            const PiecewiseControl& control0, const OptimizerConfig& cfg,
                            const std::atomic<bool>* cancel) {
  cfg.validate();
  system.validate();
  if (target.dim() != system.dim()) {
    throw std::invalid_argument("optimize: target dimension " + std::to_string(target.dim()) +
                                " does not match system dimension " +
                                std::to_string(system.dim()));
  }
  if (control0.n_controls() != static_cast<Eigen::Index>(system.n_controls())) {
    throw std::invalid_argument("optimize: control channel count does not match system");
  }
  if (cfg.amplitude_bound && control0.values().size() > 0 &&
      control0.values().cwiseAbs().maxCoeff() > *cfg.amplitude_bound) {
    throw std::invalid_argument("optimize: initial control violates amplitude bound");
  }
  const auto start = Clock::now();
  PiecewiseControl control = control0;
  control.set_bound(cfg.amplitude_bound);

  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    0x5eedu};
  std::mt19937_64 rng(seq);

  OptimizationResult result;
  const double f0 = evolve_fidelity(system, control, target);
  require_finite(f0, 0);
  result.trace.push_back(f0);
  if (control.segments() > 0) {
    if (cfg.mode == UpdateMode::global) {
      run_global(system, target, cfg, control, result, rng, start, cancel);
    } else {
      run_local(system, target, cfg, control, result, rng, start, cancel);
    }
  }
  result.fidelity = evolve_fidelity(system, control, target);
  require_finite(result.fidelity, result.iterations);
  result.converged = 1.0 - result.fidelity <= cfg.target_infidelity;
  result.control = std::move(control);
  result.wall_time = seconds_since(start);
  return result;
}

RestartOutcome optimize_restarts(const ControlSystem& system, const GateTarget& target,
                                 double t_final, int segments, const OptimizerConfig& cfg,
                                 std::size_t restarts, std::size_t workers) {
  if (restarts == 0) {
    throw std::invalid_argument("optimize_restarts: need at least one restart");
  }
  workers = std::clamp<std::size_t>(workers, 1, restarts);
  std::vector<std::optional<OptimizationResult>> results(restarts);
  std::vector<std::atomic<bool>> cancel(restarts);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_converged{restarts};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= restarts) return;
      if (i > first_converged.load()) continue;
      try {
        OptimizerConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed + i;
        const auto control0 = initial_control(system, t_final, segments, cfg, i);
        auto res = optimize(system, target, control0, run_cfg, &cancel[i]);
        if (res.converged) {
          std::size_t cur = first_converged.load();
          while (i < cur && !first_converged.compare_exchange_weak(cur, i)) {
          }
          for (std::size_t j = i + 1; j < restarts; ++j) cancel[j].store(true);
        }
        results[i] = std::move(res);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  RestartOutcome out;
  out.restarts = restarts;
  out.fidelities.assign(restarts, std::numeric_limits<double>::quiet_NaN());
  const std::size_t winner = first_converged.load();
  std::size_t best = restarts;
  for (std::size_t i = 0; i < restarts; ++i) {
    if (winner < restarts && i > winner) break;
    if (!results[i]) continue;
    out.fidelities[i] = results[i]->fidelity;
    if (best == restarts || results[i]->fidelity > results[best]->fidelity) best = i;
  }
  if (winner < restarts) best = winner;
  out.best_index = best;
  out.best = std::move(*results[best]);
  return out;
}

}  // namespace spinopt
