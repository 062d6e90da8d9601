#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffqext/fourier.hpp"

namespace ffq {

// Worst case of one exact statement over a parameter grid.
struct CheckRecord {
  std::string check;
  std::uint32_t q = 0;
  double value = 0;  // worst observed
  double limit = 0;
  bool pass = false;
  std::uint32_t a = 0;  // parameters attaining `value`, element indices
  std::uint32_t b = 0;
};

// gauss_modulus:    max_{a != 0} | |G_a| - sqrt(q) |        <= tol
// square_identity:  max_{t != 0} |sum chi(t s^2) - eta(t) G| <= tol
// kloosterman:      max_{ab != 0} |K(a, b)|                   <= 2 sqrt(q) + tol
// salie:            max_{(a, b) != 0} |Salie(a, b)|           <= 2 sqrt(q) + tol
std::vector<CheckRecord> character_sum_checks(const Field& f, double tol);

struct SphereTransformCheck {
  std::uint32_t q = 0;
  int d = 0;
  std::uint32_t j = 0;
  std::uint64_t points = 0;  // q^d phases compared
  double max_error = 0;      // closed form against the definitional sum
  double decay_ratio = 0;    // max_{m != 0} |S^(m)| q^{(d+1)/2}
  // Even d only: |G^d / q^{d/2}| and the even form's deviation from the
  // closed form.
  std::optional<double> k_modulus;
  std::optional<double> even_form_error;
};

// Compares every phase point; the definitional side is the term-by-term
// transform of the indicator. Requires the standard sphere.
SphereTransformCheck check_sphere_transform(const SphereSet& s);

struct TransformBench {
  std::uint32_t q = 0;
  int d = 0;
  int runs = 0;
  double naive_seconds = 0;  // medians
  double fast_seconds = 0;
  double speedup = 0;
  double max_difference = 0;
};

// Times both transforms on one seeded dense grid.
TransformBench bench_transforms(const Space& space, int runs, std::uint64_t seed);

}  // namespace ffq
