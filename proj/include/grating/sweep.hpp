#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grating/cavity.hpp"
#include "grating/materials.hpp"
#include "grating/modes.hpp"
#include "grating/system.hpp"

namespace grating {

enum class OutputFormat { Csv, Json };

struct SweepConfig {
  Geometry geometry = Geometry::reference();
  BoundaryCase boundary = BoundaryCase::R;
  double k_start = 400.0;  // cm^-1
  double k_stop = 7400.0;
  double k_step = 10.0;
  Truncation truncation;
  BranchConvention branch = BranchConvention::ImNuNonPositive;
  SystemForm form = SystemForm::AForm;
  std::string table_path;  // empty: PermittivityTable::default_path()
  std::string out_path;    // empty: standard output
  OutputFormat format = OutputFormat::Csv;
  int jobs = 1;

  /// Throws std::invalid_argument on an empty or reversed grid, N < 1, or jobs < 1.
  void validate() const;
  /// start + i * step for every i with value <= stop.
  std::vector<double> grid() const;
  std::string resolved_table_path() const;
  /// Key/value pairs recorded in emitted files. Excludes `jobs` and `out`,
  /// which do not affect the computed values.
  std::vector<std::pair<std::string, std::string>> metadata() const;
};

/// One point of a reflectance sweep. A gap row carries only k0_cm and gap_reason.
struct SpectrumRow {
  double k0_cm = 0.0;
  std::optional<std::string> gap_reason;
  double specular = 0.0;
  double total = 0.0;
  std::vector<int> n;
  std::vector<double> a;
  std::vector<cplx> a_complex;
  double condition = 1.0;
  double mismatch = 0.0;
  int u_size = 0;

  bool gap() const { return gap_reason.has_value(); }
  friend bool operator==(const SpectrumRow&, const SpectrumRow&) = default;
};

/// a_n = |A_n| sqrt(E_n), energies listed in the same order as result.A.
std::vector<double> renormalized_amplitudes(const SolveResult& result,
                                            const std::vector<EnergyReport>& energies);

/// Specular |R_0|^2 and total sum_{m in U} |R_m|^2 beta_m / beta_0 over the window.
std::pair<double, double> reflectances(const SolveResult& result, const RayleighSet& orders);

SpectrumRow solve_point(const SweepConfig& cfg, const PermittivityTable& table, double k_cm);

/// Rows in grid order. Resonance-singular points become gap rows. The table must
/// cover [k_start, k_stop], otherwise std::range_error.
std::vector<SpectrumRow> run_sweep(const SweepConfig& cfg, const PermittivityTable& table);
std::vector<SpectrumRow> run_sweep(const SweepConfig& cfg);

/// Applies `fn(k_cm)` over the grid with cfg.jobs threads, results in grid order.
template <class T, class Fn>
std::vector<T> map_grid(const SweepConfig& cfg, Fn fn);

void write_sweep_csv(const std::vector<SpectrumRow>& rows, const SweepConfig& cfg, std::ostream& out);
void write_sweep_json(const std::vector<SpectrumRow>& rows, const SweepConfig& cfg, std::ostream& out);
/// Writes to cfg.out_path (standard output when empty) in cfg.format.
void emit(const std::vector<SpectrumRow>& rows, const SweepConfig& cfg);

struct ParsedSweep {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<SpectrumRow> rows;
};
/// Reads back what write_sweep_csv wrote (a_complex is not part of CSV).
ParsedSweep parse_sweep_csv(std::istream& in);

/// Rectangular numeric table used by the modes, energies and diagnose reports.
struct DataTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
};

void write_table(const DataTable& t, OutputFormat format, std::ostream& out);

/// Mode families with residuals for every grid point.
DataTable modes_report(const SweepConfig& cfg, const PermittivityTable& table);
/// log10 E_n for every grid point under cfg.branch.
DataTable energies_report(const SweepConfig& cfg, const PermittivityTable& table);
/// Condition numbers under both branches and completeness defects d^2_{n,min}, n >= 1.
DataTable diagnose_report(const SweepConfig& cfg, const PermittivityTable& table);
/// Overlap sets (S, T, I, J) per grid point, long format `k0_cm,kind,m,n,re,im`.
void write_overlap_dump(const SweepConfig& cfg, const PermittivityTable& table, std::ostream& out);

std::string_view to_string(BranchConvention b);
std::string_view to_string(SystemForm f);

}  // namespace grating

#include "grating/sweep_impl.hpp"
