#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ffq {

// Provenance of a computed quantity.
struct Witness {
  std::uint32_t q = 0;
  int d = 0;
  std::uint32_t j = 0;  // element index of the sphere radius
  std::uint64_t set_size = 0;
  std::string sampler;
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;  // index of the sample within its scan
  std::vector<std::uint64_t> points;  // point indices, canonical order
};

// One computed value set against the bound it is compared with.
struct BoundReport {
  std::string quantity;
  double value = 0;
  double bound = 0;
  double ratio = 0;
  // False when the inputs fall outside the hypotheses of the bound
  // (odd d, d < 4, ...); such reports are informational only.
  bool in_hypotheses = true;
  Witness witness;

  static BoundReport make(std::string quantity, double value, double bound,
                          Witness witness, bool in_hypotheses = true);
};

inline constexpr const char* kBoundCsvHeader =
    "quantity,q,d,j,set_size,sampler,seed,value,bound,ratio";

void write_bound_csv_header(std::ostream& os);
void write_bound_csv_row(std::ostream& os, const BoundReport& r);
// JSON array including witness point lists.
void write_bound_json(std::ostream& os, std::span<const BoundReport> reports);

// Largest-ratio report per quantity, in order of first appearance.
std::vector<BoundReport> max_ratio_per_quantity(std::span<const BoundReport> reports);

}  // namespace ffq
