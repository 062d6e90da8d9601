#include "ffqext/report.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace ffq {

BoundReport BoundReport::make(std::string quantity, double value, double bound,
                              Witness witness, bool in_hypotheses) {
  if (!(bound > 0)) throw std::invalid_argument("bound must be positive");
  BoundReport r;
  r.quantity = std::move(quantity);
  r.value = value;
  r.bound = bound;
  r.ratio = value / bound;
  r.in_hypotheses = in_hypotheses;
  r.witness = std::move(witness);
  return r;
}

void write_bound_csv_header(std::ostream& os) { os << kBoundCsvHeader << '\n'; }

void write_bound_csv_row(std::ostream& os, const BoundReport& r) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << r.quantity << ',' << r.witness.q << ',' << r.witness.d << ',' << r.witness.j
     << ',' << r.witness.set_size << ',' << r.witness.sampler << ','
     << r.witness.seed << ',' << r.value << ',' << r.bound << ',' << r.ratio
     << '\n';
  os.precision(old);
}

void write_bound_json(std::ostream& os, std::span<const BoundReport> reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"quantity", r.quantity},
                   {"q", r.witness.q},
                   {"d", r.witness.d},
                   {"j", r.witness.j},
                   {"set_size", r.witness.set_size},
                   {"sampler", r.witness.sampler},
                   {"seed", r.witness.seed},
                   {"sample", r.witness.sample},
                   {"value", r.value},
                   {"bound", r.bound},
                   {"ratio", r.ratio},
                   {"in_hypotheses", r.in_hypotheses},
                   {"points", r.witness.points}});
  }
  os << arr.dump(2) << '\n';
}

std::vector<BoundReport> max_ratio_per_quantity(std::span<const BoundReport> reports) {
  std::vector<BoundReport> best;
  for (const auto& r : reports) {
    auto it = std::find_if(best.begin(), best.end(), [&](const BoundReport& b) {
      return b.quantity == r.quantity;
    });
    if (it == best.end()) {
      best.push_back(r);
    } else if (r.ratio > it->ratio) {
      *it = r;
    }
  }
  return best;
}

}  // namespace ffq
