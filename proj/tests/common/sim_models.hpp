#ifndef ATOMCOV_TESTS_SIM_MODELS_HPP
#define ATOMCOV_TESTS_SIM_MODELS_HPP

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "atomcov/simkit.hpp"

namespace testmodels {

// Frequencies/powers of the m=6, n=20 study: grid columns {2,3,5,7,8,11}
// of the L=11 Fourier grid.
inline atomcov::LineSpectrumModel study_on_grid() {
  atomcov::LineSpectrumModel model;
  model.m = 6;
  model.frequencies = {0.5712, 1.1424, 2.2848, 3.4272, 3.9984, 5.7120};
  model.powers = {3, 6, 4, 1, 7, 5};
  model.noise_floor = 0.0;
  return model;
}

// Same with two frequencies moved off the Fourier grid.
inline atomcov::LineSpectrumModel study_off_grid() {
  atomcov::LineSpectrumModel model = study_on_grid();
  model.frequencies[0] = 0.5;
  model.frequencies[4] = 5.3;
  return model;
}

// Random full-rank Toeplitz truth with three sources; a fraction of the
// instances keep every source on the 2*pi*k/(2m-1) grid.
inline atomcov::LineSpectrumModel random_model(int m, std::uint64_t seed, bool on_grid) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int big_l = 2 * m - 1;
  atomcov::LineSpectrumModel model;
  model.m = m;
  for (int s = 0; s < 3; ++s) {
    if (on_grid) {
      const int k = 1 + static_cast<int>(unif(rng) * (big_l - 1));
      model.frequencies.push_back(2.0 * std::numbers::pi * k / big_l);
    } else {
      model.frequencies.push_back(2.0 * std::numbers::pi * unif(rng));
    }
    model.powers.push_back(1.0 + 7.0 * unif(rng));
  }
  model.noise_floor = 1.0;
  return model;
}

}  // namespace testmodels

#endif
