#include "hydrostat/csv.hpp"

#include <cmath>
#include <cstdio>

#include "hydrostat/errors.hpp"

namespace hydrostat {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open '" + path + "' for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw PreconditionError("CsvWriter: wrong number of cells");
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c > 0) out_ << ',';
    out_ << cells[c];
  }
  out_ << '\n';
  if (!out_) throw IoError("write to '" + path_ + "' failed");
}

void CsvWriter::row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_real(v));
  row(cells);
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw IoError("write to '" + path_ + "' failed");
  out_.close();
}

void emit_norm_csv(const std::string& path, std::span<const NormSnapshot> snapshots,
                   const PhiSeries* series) {
  if (series && series->size() != snapshots.size()) {
    throw PreconditionError("emit_norm_csv: series length does not match the snapshots");
  }
  std::vector<std::string> header = {"t",        "l2_u",        "h1_u",      "h2_u",
                                     "h3_u",     "linf_grad_rho", "l2_hess_rho", "w1inf_rho",
                                     "w22_rho",  "l2_sqrt_rho_ut", "h1_P",    "energy_residual"};
  if (series) {
    header.push_back("phi");
    header.push_back("j");
  }
  CsvWriter w(path, header);
  for (std::size_t n = 0; n < snapshots.size(); ++n) {
    const NormSnapshot& s = snapshots[n];
    std::vector<double> v = {s.t,          s.l2_u,      s.h1_u,      s.h2_u,
                             s.h3_u,       s.linf_grad_rho, s.l2_hess_rho, s.w1inf_rho,
                             s.w22_rho,    s.l2_sqrt_rho_ut, s.h1_P,  s.energy_residual};
    if (series) {
      v.push_back(series->phi[n]);
      v.push_back(series->j[n]);
    }
    w.row(v);
  }
  w.close();
}

void emit_diagnostics_csv(const std::string& path, const std::vector<IterateDiagnostics>& diags) {
  CsvWriter w(path, {"k", "sigma_l2", "eta_l2", "eta_weighted", "eta_grad_l2_int", "bk_integral",
                     "lambda_rho_xx", "ratio", "phi", "grad_ut_l2", "grad_rho_w1inf",
                     "hess_rho_h1", "phi_K"});
  for (const auto& d : diags) {
    w.row(std::vector<std::string>{
        std::to_string(d.k), format_real(d.sigma_l2), format_real(d.eta_l2),
        format_real(d.eta_weighted), format_real(d.eta_grad_l2_int), format_real(d.bk_integral),
        format_real(d.lambda_rho_xx), format_real(d.ratio), format_real(d.phi_k.phi),
        format_real(d.phi_k.grad_ut_l2), format_real(d.phi_k.grad_rho_w1inf),
        format_real(d.phi_k.hess_rho_h1), format_real(d.phi_k.phi_K)});
  }
  w.close();
}

}  // namespace hydrostat
