#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "svlasov/config.hpp"
#include "svlasov/grid.hpp"
#include "svlasov/montecarlo.hpp"

namespace svlasov {

/// Real formatted with 17 significant digits.
std::string format_real(double value);

/// Long-form field dump: header `x,v,f`, rows in i then j order.
void write_field_csv(std::ostream& out, const Field& f);

ExperimentSetup setup_from_config(const ExperimentConfig& config);

/// One field CSV per snapshot time, `snapshot_t<time>.csv`, for sample 0.
std::vector<std::filesystem::path> cmd_snapshot(const ExperimentConfig& config);

/// `laws.csv`: t, mean_l2sq, stderr_l2sq, theory_l2sq, mean_mass, stderr_mass, theory_mass.
std::filesystem::path cmd_laws(const ExperimentConfig& config);

/// `norms.csv`: realization, t, l1, l<p>..., min for `samples` independent paths.
/// The exponents are extra_p, or 3 and 55 when extra_p is empty.
std::filesystem::path cmd_norms(const ExperimentConfig& config);

/// `msconv.csv`: tau, rms_error, then a `# slope = <fitted>` line.
std::filesystem::path cmd_msconv(const ExperimentConfig& config);

/// Fast invariant suite; prints one PASS/FAIL line per property and returns
/// true when all pass.
bool cmd_validate(const ExperimentConfig& config, std::ostream& report);

}  // namespace svlasov
