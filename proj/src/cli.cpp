#include "grating/cli.hpp"

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "grating/errors.hpp"
#include "grating/sweep.hpp"

namespace grating {

namespace {

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("bad number '" + s + "' in " + what);
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != static_cast<int>(v)) throw std::invalid_argument("expected an integer in " + what);
  return static_cast<int>(v);
}

struct Options {
  std::string boundary = "R";
  int nmodes = 1;
  std::string mwindow = "-20:20";
  std::string branch = "neg";
  std::string k0 = "400:7400:10";
  std::string table;
  std::string out;
  std::string format = "csv";
  std::string form = "A";
  int jobs = 1;
  double w_um = 0.75, d_um = 1.75, h_um = 1.11, theta_deg = 7.5;
  std::string dump_overlaps;
};

SweepConfig to_config(const Options& o) {
  SweepConfig cfg;
  cfg.geometry = Geometry{o.w_um * 1e-6, o.d_um * 1e-6, o.h_um * 1e-6, o.theta_deg * std::numbers::pi / 180.0};
  cfg.boundary = *parse_boundary_case(o.boundary);
  cfg.truncation.N = o.nmodes;
  if (o.mwindow == "U") {
    cfg.truncation.propagative_only = true;
  } else {
    const auto p = split_colon(o.mwindow);
    if (p.size() != 2) throw std::invalid_argument("--mwindow expects MIN:MAX or U");
    cfg.truncation.m_min = to_int(p[0], "--mwindow");
    cfg.truncation.m_max = to_int(p[1], "--mwindow");
  }
  const auto k = split_colon(o.k0);
  if (k.size() != 3) throw std::invalid_argument("--k0 expects START:STOP:STEP");
  cfg.k_start = to_double(k[0], "--k0");
  cfg.k_stop = to_double(k[1], "--k0");
  cfg.k_step = to_double(k[2], "--k0");
  cfg.branch = o.branch == "pos" ? BranchConvention::ImNuNonNegative : BranchConvention::ImNuNonPositive;
  cfg.form = o.form == "R" ? SystemForm::RForm : SystemForm::AForm;
  cfg.table_path = o.table;
  cfg.out_path = o.out;
  cfg.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  cfg.jobs = o.jobs;
  cfg.validate();
  return cfg;
}

void write_output(const SweepConfig& cfg, std::ostream& fallback, const std::function<void(std::ostream&)>& fn) {
  if (cfg.out_path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
  fn(f);
  f.close();
  if (!f) throw std::runtime_error("failed writing output file '" + cfg.out_path + "'");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modal-method reflectance and cavity modes of lamellar metallic gratings (TM)", "grating"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--case", o.boundary, "metal treatment")
      ->check(CLI::IsMember({"P", "M0", "M", "R0", "R"}))
      ->capture_default_str();
  app.add_option("--nmodes", o.nmodes, "number of cavity modes N")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--mwindow", o.mwindow, "reflected orders MIN:MAX, or U for propagative orders only")
      ->capture_default_str();
  app.add_option("--branch", o.branch, "sign of Im(nu_n): neg (<= 0) or pos (>= 0)")
      ->check(CLI::IsMember({"neg", "pos"}))
      ->capture_default_str();
  app.add_option("--k0", o.k0, "wavenumber grid START:STOP:STEP in cm^-1")->capture_default_str();
  app.add_option("--table", o.table, "permittivity table (default: bundled gold, or $GRATING_PERMITTIVITY_TABLE)");
  app.add_option("--out", o.out, "output file (default: standard output)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--form", o.form, "solve for A (cavity amplitudes) or R (reflection coefficients)")
      ->check(CLI::IsMember({"A", "R"}))
      ->capture_default_str();
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--w-um", o.w_um, "groove width in um")->capture_default_str();
  app.add_option("--d-um", o.d_um, "period in um")->capture_default_str();
  app.add_option("--h-um", o.h_um, "groove depth in um")->capture_default_str();
  app.add_option("--theta-deg", o.theta_deg, "incidence angle in degrees")->capture_default_str();
  app.set_config("--config", "", "flat key=value file mirroring the flags; flags take precedence");

  auto* sweep = app.add_subcommand("sweep", "specular/total reflectance and renormalized amplitudes");
  auto* modes = app.add_subcommand("modes", "cavity mode families and residuals");
  auto* energies = app.add_subcommand("energies", "log10 of cavity mode energies");
  auto* diagnose = app.add_subcommand("diagnose", "condition numbers under both branches and completeness defects");
  diagnose->add_option("--dump-overlaps", o.dump_overlaps, "also write S, T, I, J overlaps to this CSV file");

  std::vector<std::string> argv_store{"grating"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  SweepConfig cfg;
  try {
    cfg = to_config(o);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const PermittivityTable table = PermittivityTable::load(cfg.resolved_table_path());
    if (sweep->parsed()) {
      const auto rows = run_sweep(cfg, table);
      write_output(cfg, out, [&](std::ostream& s) {
        if (cfg.format == OutputFormat::Csv) {
          write_sweep_csv(rows, cfg, s);
        } else {
          write_sweep_json(rows, cfg, s);
        }
      });
    } else if (modes->parsed()) {
      const auto t = modes_report(cfg, table);
      write_output(cfg, out, [&](std::ostream& s) { write_table(t, cfg.format, s); });
    } else if (energies->parsed()) {
      const auto t = energies_report(cfg, table);
      write_output(cfg, out, [&](std::ostream& s) { write_table(t, cfg.format, s); });
    } else if (diagnose->parsed()) {
      const auto t = diagnose_report(cfg, table);
      write_output(cfg, out, [&](std::ostream& s) { write_table(t, cfg.format, s); });
      if (!o.dump_overlaps.empty()) {
        std::ofstream f(o.dump_overlaps, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open overlap dump '" + o.dump_overlaps + "'");
        write_overlap_dump(cfg, table, f);
      }
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace grating
