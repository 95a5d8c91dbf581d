#include "harness/counterexample.hpp"

#include "core/error.hpp"
#include "core/integrators.hpp"
#include "harness/emit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace slicemean::harness {

std::vector<ProbeRow> run_counterexample(const CounterexampleSpec& spec) {
  std::vector<double> radii = spec.r;
  std::sort(radii.begin(), radii.end());
  std::vector<ProbeRow> rows;
  for (double z : spec.z) {
    for (double r : radii) rows.push_back({z, r, counterexample_probe(z, r, spec.nodes)});
  }
  return rows;
}

std::string format_probe_csv(const std::vector<ProbeRow>& rows) {
  if (rows.empty()) fail(ErrorCode::InvalidArgument, "no counterexample rows to write");
  std::string out = "z,R,value\n";
  for (const ProbeRow& row : rows) {
    out += format_double(row.z) + ',' + format_double(row.r) + ',' + format_double(row.value) + '\n';
  }
  return out;
}

std::string probe_summary(const std::vector<ProbeRow>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "g(x) = exp(x^2/2)/(1+x^2) integrated against N(z,1) over [-R, R]\n";
  const double centred = std::sqrt(std::numbers::pi / 2.0);
  std::size_t i = 0;
  while (i < rows.size()) {
    const double z = rows[i].z;
    os << "z = " << z << '\n';
    std::size_t j = i;
    for (; j < rows.size() && rows[j].z == z; ++j) {
      os << "  R = " << rows[j].r << "  value = " << rows[j].value << '\n';
    }
    if (z == 0.0) {
      os << "  converges: limit sqrt(pi/2) = " << centred << " (g is integrable against N(0,1))\n";
    } else {
      const double growth = rows[j - 1].value / rows[i].value;
      os << "  grows without bound (last/first = " << growth
         << "): g is not integrable against N(z,1) for z != 0\n";
    }
    i = j;
  }
  os << "Hence the centred integral is not the limit of the shifted ones as z -> 0: integrability "
        "against the limiting Gaussian alone (L^1) does not suffice; L^p with p > 1 is needed.\n";
  return os.str();
}

}  // namespace slicemean::harness
