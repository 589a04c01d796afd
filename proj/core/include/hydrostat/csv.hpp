#pragma once

// Deterministic CSV output: comma separated, '\n' line ends, a header row,
// reals printed with 17 significant digits (%.17g), NaN as "nan".

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "hydrostat/norms.hpp"
#include "hydrostat/picard.hpp"

namespace hydrostat {

std::string format_real(double v);

class CsvWriter {
 public:
  /// Truncates path and writes the header. Throws IoError.
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  /// Cells are written verbatim; their count must match the header.
  void row(const std::vector<std::string>& cells);
  void row(std::span<const double> values);
  /// Flushes and reports a failed stream as IoError.
  void close();

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

/// Columns: t, l2_u, h1_u, h2_u, h3_u, linf_grad_rho, l2_hess_rho, w1inf_rho,
/// w22_rho, l2_sqrt_rho_ut, h1_P, energy_residual, then phi and j when a
/// series of matching length is given.
void emit_norm_csv(const std::string& path, std::span<const NormSnapshot> snapshots,
                   const PhiSeries* series = nullptr);

/// Columns: k, sigma_l2, eta_l2, eta_weighted, eta_grad_l2_int, bk_integral,
/// lambda_rho_xx, ratio, phi, grad_ut_l2, grad_rho_w1inf, hess_rho_h1, phi_K.
void emit_diagnostics_csv(const std::string& path, const std::vector<IterateDiagnostics>& diags);

}  // namespace hydrostat
