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

#include "spinopt/propagation.hpp"

#include <cmath>

namespace spinopt {

PiecewiseControl::PiecewiseControl(std::vector<double> times, RealMatrix values,
                                   std::optional<double> bound)
    : times_(std::move(times)), values_(std::move(values)), bound_(bound) {
  if (times_.size() != static_cast<std::size_t>(values_.rows()) + 1) {
    throw std::invalid_argument("PiecewiseControl: need K+1 boundaries for K segments");
  }
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (!std::isfinite(times_[k])) {
      throw std::invalid_argument("PiecewiseControl: non-finite segment boundary");
    }
    if (k > 0 && !(times_[k] > times_[k - 1])) {
      throw std::invalid_argument("PiecewiseControl: segment " + std::to_string(k) +
                                  " has non-positive duration");
    }
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("PiecewiseControl: non-finite amplitude");
  }
  if (bound_ && !(*bound_ >= 0.0)) {
    throw std::invalid_argument("PiecewiseControl: amplitude bound must be >= 0");
  }
  check_bound();
}

PiecewiseControl PiecewiseControl::uniform(double t_final, int segments, int n_controls,
                                           std::optional<double> bound) {
  if (segments < 1) {
    throw std::invalid_argument("PiecewiseControl::uniform: need at least one segment");
  }
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw std::invalid_argument("PiecewiseControl::uniform: t_final must be positive");
  }
  std::vector<double> times(static_cast<std::size_t>(segments) + 1);
  for (int k = 0; k <= segments; ++k) {
    times[static_cast<std::size_t>(k)] = t_final * k / segments;
  }
  times.back() = t_final;
  return PiecewiseControl(std::move(times), RealMatrix::Zero(segments, n_controls), bound);
}

bool PiecewiseControl::is_uniform(double rel_tol) const {
  if (segments() == 0) return true;
  const double ref = t_final() / static_cast<double>(segments());
  for (Eigen::Index k = 0; k < segments(); ++k) {
    if (std::abs(dt(k) - ref) > rel_tol * ref + 1e-15) return false;
  }
  return true;
}

std::vector<double> PiecewiseControl::amplitudes(Eigen::Index k) const {
  std::vector<double> u(static_cast<std::size_t>(values_.cols()));
  for (Eigen::Index m = 0; m < values_.cols(); ++m) {
    u[static_cast<std::size_t>(m)] = values_(k, m);
  }
  return u;
}

void PiecewiseControl::set_values(RealMatrix values) {
  if (values.rows() != values_.rows()) {
    throw std::invalid_argument("PiecewiseControl::set_values: segment count mismatch");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("PiecewiseControl: non-finite amplitude");
  }
  values_ = std::move(values);
  check_bound();
}

void PiecewiseControl::set_segment(Eigen::Index k, std::span<const double> u) {
  if (k < 0 || k >= segments() || static_cast<Eigen::Index>(u.size()) != n_controls()) {
    throw std::invalid_argument("PiecewiseControl::set_segment: index or size mismatch");
  }
  for (Eigen::Index m = 0; m < n_controls(); ++m) {
    const double v = u[static_cast<std::size_t>(m)];
    if (!std::isfinite(v) || (bound_ && std::abs(v) > *bound_)) {
      throw std::invalid_argument("PiecewiseControl::set_segment: amplitude out of bounds");
    }
    values_(k, m) = v;
  }
}

void PiecewiseControl::set_bound(std::optional<double> bound) {
  if (bound && !(*bound >= 0.0)) {
    throw std::invalid_argument("PiecewiseControl: amplitude bound must be >= 0");
  }
  bound_ = bound;
  check_bound();
}

void PiecewiseControl::check_bound() const {
  if (bound_ && values_.size() > 0 && values_.cwiseAbs().maxCoeff() > *bound_) {
    throw std::invalid_argument("PiecewiseControl: amplitude exceeds bound " +
                                std::to_string(*bound_));
  }
}

ComplexMatrix segment_propagator(const ControlSystem& system, std::span<const double> u,
                                 double dt) {
  return herm_expm(system.hamiltonian(u), dt);
}

namespace {

void require_matching(const ControlSystem& system, const PiecewiseControl& control) {
  if (control.n_controls() != static_cast<Eigen::Index>(system.n_controls())) {
    throw std::invalid_argument("control has " + std::to_string(control.n_controls()) +
                                " channels but the system has " +
                                std::to_string(system.n_controls()) + " controls");
  }
}

}  // namespace

PropagationCache propagate(const ControlSystem& system, const PiecewiseControl& control) {
  require_matching(system, control);
  const Eigen::Index k_count = control.segments();
  const auto ks = static_cast<std::size_t>(k_count);
  PropagationCache cache;
  cache.spectra.reserve(ks);
  cache.segment_props.reserve(ks);
  cache.forward.reserve(ks + 1);
  cache.forward.push_back(identity(system.dim()));
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const auto u = control.amplitudes(k);
    cache.durations.push_back(control.dt(k));
    cache.spectra.push_back(hermitian_spectrum(system.hamiltonian(u)));
    cache.segment_props.push_back(herm_expm(cache.spectra.back(), control.dt(k)));
    cache.forward.push_back(cache.segment_props.back() * cache.forward.back());
  }
  cache.backward.assign(ks + 1, identity(system.dim()));
  for (std::size_t k = ks; k-- > 0;) {
    // backward[k] = backward[k+1] * U_{k+1}
    cache.backward[k] = cache.backward[k + 1] * cache.segment_props[k];
  }
  cache.total = cache.forward.back();
  return cache;
}

ComplexMatrix propagate_total(const ControlSystem& system, const PiecewiseControl& control) {
  require_matching(system, control);
  ComplexMatrix total = identity(system.dim());
  for (Eigen::Index k = 0; k < control.segments(); ++k) {
    const auto u = control.amplitudes(k);
    total = segment_propagator(system, u, control.dt(k)) * total;
  }
  return total;
}

double evolve_fidelity(const ControlSystem& system, const PiecewiseControl& control,
                       const GateTarget& target) {
  return fidelity(target, propagate_total(system, control));
}

}  // namespace spinopt
