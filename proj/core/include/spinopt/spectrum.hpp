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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinopt/propagation.hpp"

namespace spinopt {

/// One-sided magnitude spectrum of each control channel.
///
/// Segments are treated as K point samples over [0, t_F]. Coefficients use
/// forward 1/K scaling, c_j = (1/K) sum_k u_k exp(-2 pi i j k / K), and bin j
/// sits at cyclic frequency j / t_F (units of J / 2 pi). `amplitudes` holds
/// |c_j| for j = 0..floor(K/2). `weights` is 1 for DC and Nyquist and 2 for
/// bins whose mirror image was folded in, so that
///   sum_j weights[j] * |c_j|^2 = mean of u_k^2   (Parseval).
struct SpectrumResult {
  std::vector<double> freqs;
  std::vector<std::vector<double>> amplitudes;
  std::vector<double> weights;
  double resolution = 0.0;
  int samples = 0;
};

/// Throws std::invalid_argument for an empty or non-uniform grid.
SpectrumResult control_spectrum(const PiecewiseControl& control);

/// sum_j weights[j] * amplitudes[channel][j]^2.
double spectral_power(const SpectrumResult& spectrum, std::size_t channel);

/// Smallest bin frequency f* such that bins up to f* carry at least `fraction`
/// of a channel's power, maximized over channels. Silent channels count as 0.
double bandwidth_summary(const SpectrumResult& spectrum, double fraction = 0.99);

/// Spectrum CSV: '#' metadata lines, then "freq,channel_1,...,channel_M".
void write_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum);
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum);

}  // namespace spinopt
