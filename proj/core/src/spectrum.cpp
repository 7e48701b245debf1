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

#include "spinopt/spectrum.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace spinopt {

SpectrumResult control_spectrum(const PiecewiseControl& control) {
  const Eigen::Index k_count = control.segments();
  if (k_count < 1) {
    throw std::invalid_argument("control_spectrum: control has no segments");
  }
  if (!control.is_uniform(1e-9)) {
    throw std::invalid_argument("control_spectrum: segment grid is not uniform; resample first");
  }
  SpectrumResult out;
  out.samples = static_cast<int>(k_count);
  out.resolution = 1.0 / control.t_final();
  const Eigen::Index bins = k_count / 2 + 1;
  for (Eigen::Index j = 0; j < bins; ++j) {
    out.freqs.push_back(static_cast<double>(j) * out.resolution);
    const bool mirrored = j != 0 && !(k_count % 2 == 0 && j == k_count / 2);
    out.weights.push_back(mirrored ? 2.0 : 1.0);
  }
  Eigen::FFT<double> fft;
  for (Eigen::Index m = 0; m < control.n_controls(); ++m) {
    std::vector<double> samples(static_cast<std::size_t>(k_count));
    for (Eigen::Index k = 0; k < k_count; ++k) {
      samples[static_cast<std::size_t>(k)] = control.values()(k, m);
    }
    std::vector<std::complex<double>> coeffs;
    if (k_count == 1) {
      // the FFT backend does not handle a single sample
      coeffs.assign(1, samples[0]);
    } else {
      fft.fwd(coeffs, samples);
    }
    std::vector<double> mags;
    mags.reserve(static_cast<std::size_t>(bins));
    for (Eigen::Index j = 0; j < bins; ++j) {
      mags.push_back(std::abs(coeffs[static_cast<std::size_t>(j)]) / static_cast<double>(k_count));
    }
    out.amplitudes.push_back(std::move(mags));
  }
  return out;
}

double spectral_power(const SpectrumResult& spectrum, std::size_t channel) {
  const auto& amps = spectrum.amplitudes.at(channel);
  double total = 0.0;
  for (std::size_t j = 0; j < amps.size(); ++j) total += spectrum.weights[j] * amps[j] * amps[j];
  return total;
}

double bandwidth_summary(const SpectrumResult& spectrum, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("bandwidth_summary: fraction must lie in (0, 1]");
  }
  double widest = 0.0;
  for (std::size_t m = 0; m < spectrum.amplitudes.size(); ++m) {
    const double total = spectral_power(spectrum, m);
    if (total <= 0.0) continue;
    const auto& amps = spectrum.amplitudes[m];
    double acc = 0.0;
    for (std::size_t j = 0; j < amps.size(); ++j) {
      acc += spectrum.weights[j] * amps[j] * amps[j];
      // relative slack keeps a full-power request from failing on round-off
      if (acc >= fraction * total * (1.0 - 1e-12)) {
        widest = std::max(widest, spectrum.freqs[j]);
        break;
      }
    }
  }
  return widest;
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum) {
  out << "# normalization: c_j = (1/K) sum_k u_k exp(-2 pi i j k / K); one-sided |c_j|\n";
  out << "# parseval: sum_j w_j |c_j|^2 = mean(u^2), w_j = 2 except DC and Nyquist\n";
  out << "# frequency: cyclic, bin j at j / t_F (units J/(2 pi)); segments sampled as points\n";
  out << "# samples: " << spectrum.samples << "\n";
  out << "freq";
  for (std::size_t m = 0; m < spectrum.amplitudes.size(); ++m) out << ",channel_" << (m + 1);
  out << '\n';
  out.precision(17);
  for (std::size_t j = 0; j < spectrum.freqs.size(); ++j) {
    out << spectrum.freqs[j];
    for (const auto& amps : spectrum.amplitudes) out << ',' << amps[j];
    out << '\n';
  }
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum) {
  std::ostringstream ss;
  write_spectrum_csv(ss, spectrum);
  write_file_atomic(path, ss.str());
}

}  // namespace spinopt
