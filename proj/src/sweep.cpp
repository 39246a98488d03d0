#include "grating/sweep.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "grating/emit.hpp"
#include "grating/errors.hpp"

namespace grating {

std::string_view to_string(BranchConvention b) {
  return b == BranchConvention::ImNuNonPositive ? "neg" : "pos";
}

std::string_view to_string(SystemForm f) { return f == SystemForm::AForm ? "A" : "R"; }

void SweepConfig::validate() const {
  geometry.validate();
  truncation.validate();
  if (!(k_start > 0.0)) throw std::invalid_argument("sweep start must be positive");
  if (!(k_start < k_stop)) throw std::invalid_argument("sweep requires start < stop");
  if (!(k_step > 0.0)) throw std::invalid_argument("sweep requires step > 0");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
}

std::vector<double> SweepConfig::grid() const {
  std::vector<double> g;
  const double slack = 1e-9 * k_step;
  for (long i = 0;; ++i) {
    const double k = k_start + static_cast<double>(i) * k_step;
    if (k > k_stop + slack) break;
    g.push_back(k);
  }
  return g;
}

std::string SweepConfig::resolved_table_path() const {
  return table_path.empty() ? PermittivityTable::default_path() : table_path;
}

std::vector<std::pair<std::string, std::string>> SweepConfig::metadata() const {
  const auto& t = truncation;
  const std::string window =
      t.propagative_only ? "U" : std::to_string(t.m_min) + ":" + std::to_string(t.m_max);
  return {
      {"case", std::string(to_string(boundary))},
      {"nmodes", std::to_string(t.N)},
      {"mwindow", window},
      {"branch", std::string(to_string(branch))},
      {"form", std::string(to_string(form))},
      {"k0", format_double(k_start) + ":" + format_double(k_stop) + ":" + format_double(k_step)},
      {"w_um", format_parameter(geometry.w * 1e6)},
      {"d_um", format_parameter(geometry.d * 1e6)},
      {"h_um", format_parameter(geometry.h * 1e6)},
      {"theta_deg", format_parameter(geometry.theta * 180.0 / std::numbers::pi)},
      {"table", resolved_table_path()},
  };
}

std::vector<double> renormalized_amplitudes(const SolveResult& result,
                                            const std::vector<EnergyReport>& energies) {
  if (energies.size() != result.A.size()) {
    throw std::invalid_argument("renormalized_amplitudes: one energy per amplitude expected");
  }
  std::vector<double> a;
  for (std::size_t j = 0; j < result.A.size(); ++j) a.push_back(std::abs(result.A[j]) * std::sqrt(energies[j].energy));
  return a;
}

std::pair<double, double> reflectances(const SolveResult& result, const RayleighSet& orders) {
  const double b0 = orders.specular().beta.real();
  double total = 0.0;
  for (const auto& o : orders.orders) {
    if (o.propagative) total += std::norm(result.R.at(o.m)) * o.beta.real() / b0;
  }
  return {std::norm(result.R.at(0)), total};
}

SpectrumRow solve_point(const SweepConfig& cfg, const PermittivityTable& table, double k_cm) {
  SpectrumRow row;
  row.k0_cm = k_cm;
  const Wavenumber k0 = Wavenumber::from_inverse_cm(k_cm);
  try {
    const CoupledSystem sys(cfg.boundary, cfg.geometry, k0, table.at(k0), cfg.truncation, cfg.branch);
    SolveResult res = sys.solve(cfg.form);
    continuity_mismatch(res, sys);
    std::vector<EnergyReport> energies;
    for (const auto& p : sys.profiles()) energies.push_back(mode_energy(p));
    const auto [spec, total] = reflectances(res, sys.orders());
    row.specular = spec;
    row.total = total;
    row.n = res.n;
    row.a = renormalized_amplitudes(res, energies);
    row.a_complex = res.A;
    row.condition = res.condition;
    row.mismatch = res.mismatch;
    row.u_size = static_cast<int>(res.U.size());
  } catch (const ResonanceError& e) {
    row = SpectrumRow{};
    row.k0_cm = k_cm;
    row.gap_reason = e.what();
  } catch (const SingularSystemError& e) {
    row = SpectrumRow{};
    row.k0_cm = k_cm;
    row.gap_reason = e.what();
  }
  return row;
}

namespace {

void check_coverage(const SweepConfig& cfg, const PermittivityTable& table) {
  const auto g = cfg.grid();
  if (g.front() < table.min_inverse_cm() || g.back() > table.max_inverse_cm()) {
    throw std::range_error("permittivity table '" + cfg.resolved_table_path() + "' covers [" +
                           format_double(table.min_inverse_cm()) + ", " +
                           format_double(table.max_inverse_cm()) + "] cm^-1 but the sweep spans [" +
                           format_double(g.front()) + ", " + format_double(g.back()) +
                           "]; narrow --k0 or pass a wider --table");
  }
}

std::vector<int> family_indices(const SweepConfig& cfg) {
  std::vector<int> n;
  const int first = (cfg.boundary == BoundaryCase::R0) ? 1 : 0;
  for (int j = 0; j < cfg.truncation.N; ++j) n.push_back(first + j);
  return n;
}

int family_n_max(const SweepConfig& cfg) {
  return cfg.boundary == BoundaryCase::R0 ? cfg.truncation.N : cfg.truncation.N - 1;
}

}  // namespace

std::vector<SpectrumRow> run_sweep(const SweepConfig& cfg, const PermittivityTable& table) {
  cfg.validate();
  check_coverage(cfg, table);
  return map_grid<SpectrumRow>(cfg, [&](double k) { return solve_point(cfg, table, k); });
}

std::vector<SpectrumRow> run_sweep(const SweepConfig& cfg) {
  return run_sweep(cfg, PermittivityTable::load(cfg.resolved_table_path()));
}

void write_sweep_csv(const std::vector<SpectrumRow>& rows, const SweepConfig& cfg, std::ostream& out) {
  out << "# grating reflectance sweep\n";
  for (const auto& [k, v] : cfg.metadata()) out << "# " << k << '=' << v << '\n';
  out << "k0_cm,specular,total,cond,mismatch,u_size";
  for (int n : family_indices(cfg)) out << ",a" << n;
  out << '\n';
  const std::size_t na = static_cast<std::size_t>(cfg.truncation.N);
  for (const auto& r : rows) {
    out << format_double(r.k0_cm);
    if (r.gap()) {
      for (std::size_t j = 0; j < 5 + na; ++j) out << ',';
    } else {
      out << ',' << format_double(r.specular) << ',' << format_double(r.total) << ','
          << format_double(r.condition) << ',' << format_double(r.mismatch) << ',' << r.u_size;
      for (double a : r.a) out << ',' << format_double(a);
    }
    out << '\n';
  }
}

ParsedSweep parse_sweep_csv(std::istream& in) {
  ParsedSweep parsed;
  std::string line;
  std::vector<std::string> columns;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    f.push_back(cur);
    return f;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (line.size() > 2 && eq != std::string::npos) {
        parsed.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      }
      continue;
    }
    if (columns.empty()) {
      columns = split(line);
      if (columns.size() < 6 || columns[0] != "k0_cm") throw std::runtime_error("sweep CSV: bad header");
      continue;
    }
    const auto f = split(line);
    if (f.size() != columns.size()) throw std::runtime_error("sweep CSV: ragged row");
    SpectrumRow r;
    r.k0_cm = std::stod(f[0]);
    if (f[1].empty()) {
      r.gap_reason = "";
    } else {
      r.specular = std::stod(f[1]);
      r.total = std::stod(f[2]);
      r.condition = std::stod(f[3]);
      r.mismatch = std::stod(f[4]);
      r.u_size = std::stoi(f[5]);
      for (std::size_t j = 6; j < f.size(); ++j) {
        r.n.push_back(std::stoi(columns[j].substr(1)));
        r.a.push_back(std::stod(f[j]));
      }
    }
    parsed.rows.push_back(std::move(r));
  }
  return parsed;
}

void emit(const std::vector<SpectrumRow>& rows, const SweepConfig& cfg) {
  auto write = [&](std::ostream& out) {
    if (cfg.format == OutputFormat::Csv) {
      write_sweep_csv(rows, cfg, out);
    } else {
      write_sweep_json(rows, cfg, out);
    }
  };
  if (cfg.out_path.empty()) {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to standard output");
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
  write(out);
  out.close();
  if (!out) throw std::runtime_error("failed writing output file '" + cfg.out_path + "'");
}

DataTable modes_report(const SweepConfig& cfg, const PermittivityTable& table) {
  cfg.validate();
  check_coverage(cfg, table);
  DataTable t;
  t.metadata = cfg.metadata();
  t.columns = {"k0_cm", "n", "alpha_re", "alpha_im", "mu_re", "mu_im", "nu_re",
               "nu_im", "sigma", "residual", "eq5_residual"};
  const auto fams = map_grid<ModeFamily>(cfg, [&](double k) {
    return solve_mode_family(cfg.boundary, cfg.geometry, Wavenumber::from_inverse_cm(k),
                             family_n_max(cfg), cfg.branch, table);
  });
  const auto grid = cfg.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (fams[i].fundamental_absent) {
      t.rows.push_back({grid[i], 0.0, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                        std::nullopt, std::nullopt, 1.0, std::nullopt, std::nullopt});
    }
    for (const auto& m : fams[i].modes) {
      t.rows.push_back({grid[i], double(m.n), m.alpha.real(), m.alpha.imag(), m.mu.real(), m.mu.imag(),
                        m.nu.real(), m.nu.imag(), double(m.sigma), m.residual, m.eq5_residual});
    }
  }
  if (cfg.boundary == BoundaryCase::R0) t.metadata.emplace_back("fundamental", "absent");
  return t;
}

DataTable energies_report(const SweepConfig& cfg, const PermittivityTable& table) {
  cfg.validate();
  check_coverage(cfg, table);
  DataTable t;
  t.metadata = cfg.metadata();
  t.columns = {"k0_cm"};
  for (int n : family_indices(cfg)) t.columns.push_back("log10_E" + std::to_string(n));
  const auto grid = cfg.grid();
  t.rows = map_grid<std::vector<std::optional<double>>>(cfg, [&](double k) {
    const Wavenumber k0 = Wavenumber::from_inverse_cm(k);
    const ModeFamily fam = solve_mode_family(cfg.boundary, cfg.geometry, k0, family_n_max(cfg), cfg.branch, table);
    std::vector<std::optional<double>> row{k};
    for (const auto& m : fam.modes) {
      try {
        row.push_back(mode_energy(make_profile(m, fam.impedance.horizontal, cfg.geometry)).log10_energy);
      } catch (const ResonanceError&) {
        row.push_back(std::nullopt);
      }
    }
    return row;
  });
  return t;
}

DataTable diagnose_report(const SweepConfig& cfg, const PermittivityTable& table) {
  cfg.validate();
  check_coverage(cfg, table);
  DataTable t;
  t.metadata = cfg.metadata();
  t.columns = {"k0_cm", "cond_neg", "cond_pos"};
  const int n_max = family_n_max(cfg);
  for (int n = 1; n <= n_max; ++n) t.columns.push_back("d2min_" + std::to_string(n));
  t.rows = map_grid<std::vector<std::optional<double>>>(cfg, [&](double k) {
    const Wavenumber k0 = Wavenumber::from_inverse_cm(k);
    const cplx eps = table.at(k0);
    std::vector<std::optional<double>> row{k};
    for (auto b : {BranchConvention::ImNuNonPositive, BranchConvention::ImNuNonNegative}) {
      try {
        const CoupledSystem sys(cfg.boundary, cfg.geometry, k0, eps, cfg.truncation, b);
        const Eigen::MatrixXcd m =
            cfg.form == SystemForm::AForm ? sys.a_form_matrix() : sys.r_form_matrix();
        row.push_back(condition_number(m));
      } catch (const ResonanceError&) {
        row.push_back(std::nullopt);
      }
    }
    const ModeFamily fam = solve_mode_family(cfg.boundary, cfg.geometry, k0, n_max, cfg.branch, eps);
    for (const auto& m : fam.modes) {
      if (m.n >= 1) row.push_back(completeness_defect(m));
    }
    return row;
  });
  return t;
}

void write_overlap_dump(const SweepConfig& cfg, const PermittivityTable& table, std::ostream& out) {
  cfg.validate();
  check_coverage(cfg, table);
  out << "k0_cm,kind,m,n,re,im\n";
  for (double k : cfg.grid()) {
    const Wavenumber k0 = Wavenumber::from_inverse_cm(k);
    const ModeFamily fam = solve_mode_family(cfg.boundary, cfg.geometry, k0, family_n_max(cfg), cfg.branch, table);
    const RayleighSet orders = cfg.truncation.propagative_only
                                   ? propagative_orders(k0, cfg.geometry)
                                   : rayleigh_orders(k0, cfg.geometry, cfg.truncation.m_min, cfg.truncation.m_max);
    std::ostringstream body;
    write_overlaps_csv(compute_overlaps(fam.modes, orders), body);
    std::istringstream lines(body.str());
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) out << format_double(k) << ',' << line << '\n';
  }
}

}  // namespace grating
