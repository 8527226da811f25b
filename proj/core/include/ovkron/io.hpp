#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ovkron/channel.hpp"
#include "ovkron/mc.hpp"

namespace ovkron {

/// First comment line of every CSV: artifact version plus the normalized
/// parameters that produced the data.
void write_csv_preamble(std::ostream& os, const std::string& params);

/// `xi,density` rows preceded by `# eta=... mass_at_zero=...`.
void write_density_csv(std::ostream& os, const DensityEstimate& density,
                       const std::string& params);

/// `P,info_nats` rows; an optional second curve adds a `classical_info_nats`
/// column (same power grid required).
void write_curve_csv(std::ostream& os, const MutualInfoCurve& curve,
                     const std::string& params,
                     const MutualInfoCurve* classical = nullptr);

/// `bin_left,bin_right,count,frequency` rows.
void write_histogram_csv(std::ostream& os, const EmpiricalSpectrum& spectrum,
                         const std::string& params);

/// `P,info_nats,std_error,trials` rows.
void write_mc_info_csv(std::ostream& os,
                       const std::vector<std::pair<double, McMutualInfo>>& rows,
                       const std::string& params);

struct ReportRow {
  std::string quantity;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// `quantity,lhs,rhs,slack` rows.
void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows,
                      const std::string& params);

}  // namespace ovkron
