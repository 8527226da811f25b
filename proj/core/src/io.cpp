#include "ovkron/io.hpp"

#include <iomanip>

#include "ovkron/version.hpp"

namespace ovkron {

namespace {

std::ostream& full(std::ostream& os) {
  return os << std::setprecision(17);
}

}  // namespace

void write_csv_preamble(std::ostream& os, const std::string& params) {
  os << "# ovkron " << kVersion << " params=" << params << "\n";
}

void write_density_csv(std::ostream& os, const DensityEstimate& density,
                       const std::string& params) {
  write_csv_preamble(os, params);
  full(os) << "# eta=" << density.eta
           << " mass_at_zero=" << density.mass_at_zero << "\n";
  os << "xi,density\n";
  for (Eigen::Index i = 0; i < density.grid.size(); ++i)
    full(os) << density.grid[i] << "," << density.values[i] << "\n";
}

void write_curve_csv(std::ostream& os, const MutualInfoCurve& curve,
                     const std::string& params,
                     const MutualInfoCurve* classical) {
  write_csv_preamble(os, params);
  os << (classical ? "P,info_nats,classical_info_nats\n" : "P,info_nats\n");
  for (size_t i = 0; i < curve.points.size(); ++i) {
    full(os) << curve.points[i].first << "," << curve.points[i].second;
    if (classical) full(os) << "," << classical->points[i].second;
    os << "\n";
  }
}

void write_histogram_csv(std::ostream& os, const EmpiricalSpectrum& spectrum,
                         const std::string& params) {
  write_csv_preamble(os, params);
  os << "bin_left,bin_right,count,frequency\n";
  for (Eigen::Index i = 0; i < spectrum.bin_left.size(); ++i)
    full(os) << spectrum.bin_left[i] << "," << spectrum.bin_right[i] << ","
             << spectrum.counts[i] << "," << spectrum.frequency[i] << "\n";
}

void write_mc_info_csv(std::ostream& os,
                       const std::vector<std::pair<double, McMutualInfo>>& rows,
                       const std::string& params) {
  write_csv_preamble(os, params);
  os << "P,info_nats,std_error,trials\n";
  for (const auto& [p, info] : rows)
    full(os) << p << "," << info.mean << "," << info.std_error << ","
             << info.trials << "\n";
}

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows,
                      const std::string& params) {
  write_csv_preamble(os, params);
  os << "quantity,lhs,rhs,slack\n";
  for (const auto& r : rows)
    full(os) << r.quantity << "," << r.lhs << "," << r.rhs << ","
             << (r.rhs - r.lhs) << "\n";
}

}  // namespace ovkron
