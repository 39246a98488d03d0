#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "grating/sweep.hpp"
#include "json.hpp"

using namespace grating;

namespace {

const PermittivityTable& table() {
  static const PermittivityTable t = PermittivityTable::bundled();
  return t;
}

// Same dispersion with the losses removed.
const PermittivityTable& lossless_table() {
  static const PermittivityTable t = [] {
    std::vector<PermittivityRow> rows = table().rows();
    for (auto& r : rows) r.eps = cplx(r.eps.real(), 0.0);
    return PermittivityTable(rows, "lossless");
  }();
  return t;
}

SweepConfig config(BoundaryCase c, int n, double start, double stop, double step) {
  SweepConfig cfg;
  cfg.boundary = c;
  cfg.truncation.N = n;
  cfg.k_start = start;
  cfg.k_stop = stop;
  cfg.k_step = step;
  return cfg;
}

std::string csv(const std::vector<SpectrumRow>& rows, const SweepConfig& cfg) {
  std::ostringstream out;
  write_sweep_csv(rows, cfg, out);
  return out.str();
}

std::string data_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() != '#') out += line + '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("sweep grid and validation") {
  SweepConfig cfg;
  const auto g = cfg.grid();
  CHECK(g.size() == 701);
  CHECK(g.front() == 400.0);
  CHECK(g.back() == 7400.0);
  CHECK(config(BoundaryCase::R, 1, 400, 405, 2).grid() == std::vector<double>{400, 402, 404});
  CHECK(config(BoundaryCase::R, 1, 1000, 1000.3, 0.1).grid().size() == 4);

  CHECK_NOTHROW(cfg.validate());
  CHECK_THROWS_AS(config(BoundaryCase::R, 1, 500, 500, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(BoundaryCase::R, 1, 600, 500, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(BoundaryCase::R, 1, 400, 500, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(BoundaryCase::R, 1, 400, 500, -1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(BoundaryCase::R, 0, 400, 500, 1).validate(), std::invalid_argument);
  SweepConfig bad = cfg;
  bad.jobs = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("metadata records the configuration") {
  SweepConfig cfg = config(BoundaryCase::M0, 2, 400, 7400, 10);
  cfg.truncation.m_min = -5;
  cfg.truncation.m_max = 5;
  cfg.branch = BranchConvention::ImNuNonNegative;
  cfg.form = SystemForm::RForm;
  cfg.table_path = "some/table.csv";
  cfg.jobs = 3;
  cfg.out_path = "x.csv";
  std::map<std::string, std::string> md;
  for (const auto& [k, v] : cfg.metadata()) md[k] = v;
  CHECK(md.at("case") == "M0");
  CHECK(md.at("nmodes") == "2");
  CHECK(md.at("mwindow") == "-5:5");
  CHECK(md.at("branch") == "pos");
  CHECK(md.at("form") == "R");
  CHECK(md.at("k0") == "400:7400:10");
  CHECK(md.at("w_um") == "0.75");
  CHECK(md.at("d_um") == "1.75");
  CHECK(md.at("h_um") == "1.11");
  CHECK(md.at("theta_deg") == "7.5");
  CHECK(md.at("table") == "some/table.csv");
  CHECK(md.count("jobs") == 0);
  CHECK(md.count("out") == 0);

  cfg.truncation.propagative_only = true;
  for (const auto& [k, v] : cfg.metadata()) {
    if (k == "mwindow") CHECK(v == "U");
  }
}

TEST_CASE("renormalized amplitudes and reflectances") {
  SolveResult r;
  r.A = {cplx(0.0, 0.0), cplx(3.0, 4.0)};
  std::vector<EnergyReport> e(2);
  e[0].energy = 2.0;
  e[1].energy = 4.0;
  const auto a = renormalized_amplitudes(r, e);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == doctest::Approx(10.0).epsilon(1e-15));
  e.pop_back();
  CHECK_THROWS_AS(renormalized_amplitudes(r, e), std::invalid_argument);

  const RayleighSet orders = rayleigh_orders(Wavenumber::from_inverse_cm(7000), Geometry::reference(), -2, 2);
  SolveResult s;
  for (int m = -2; m <= 2; ++m) s.R[m] = cplx(0.1 * m, 0.2);
  const auto [spec, total] = reflectances(s, orders);
  CHECK(spec == doctest::Approx(0.04));
  double ref = 0.0;
  for (const auto& o : orders.orders) {
    if (o.propagative) ref += std::norm(s.R.at(o.m)) * o.beta.real() / orders.specular().beta.real();
  }
  CHECK(total == doctest::Approx(ref).epsilon(1e-15));
  CHECK(total >= spec);
}

TEST_CASE("row invariants over sweeps") {
  for (auto c : {BoundaryCase::P, BoundaryCase::M0, BoundaryCase::M, BoundaryCase::R0, BoundaryCase::R}) {
    const auto cfg = config(c, 2, 400, 7400, 50);
    const auto rows = run_sweep(cfg, table());
    REQUIRE(rows.size() == cfg.grid().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      CHECK(r.k0_cm == cfg.grid()[i]);
      if (r.gap()) continue;
      CHECK(r.specular >= 0.0);
      CHECK(r.total >= r.specular * (1.0 - 1e-14));
      CHECK(r.total <= 1.0 + 1e-6);
      CHECK(r.condition >= 1.0);
      CHECK(r.mismatch > 0.0);
      CHECK(r.u_size >= 1);
      REQUIRE(r.a.size() == 2);
      for (double a : r.a) CHECK(a >= 0.0);
      CHECK(r.n == (c == BoundaryCase::R0 ? std::vector<int>{1, 2} : std::vector<int>{0, 1}));
    }
  }
}

TEST_CASE("perfect metal is lossless below the first transition") {
  const auto rows = run_sweep(config(BoundaryCase::P, 1, 400, 5050, 10), table());
  double worst = 0.0;
  for (const auto& r : rows) {
    REQUIRE_FALSE(r.gap());
    worst = std::max(worst, std::abs(r.specular - 1.0));
  }
  MESSAGE("max | |R0|^2 - 1 | for P below 5054 cm^-1: " << worst);
  CHECK(worst < 1e-6);
}

TEST_CASE("second mode dominates somewhere for the real case") {
  const auto rows = run_sweep(config(BoundaryCase::R, 3, 400, 7400, 10), table());
  int count = 0;
  for (const auto& r : rows) {
    if (!r.gap() && r.a[1] > r.a[0]) ++count;
  }
  MESSAGE("points with a1 > a0: " << count);
  CHECK(count > 0);
}

TEST_CASE("amplitudes do not depend on the branch convention") {
  auto neg = config(BoundaryCase::R, 3, 400, 7400, 20);
  auto pos = neg;
  pos.branch = BranchConvention::ImNuNonNegative;
  const auto a = run_sweep(neg, table());
  const auto b = run_sweep(pos, table());
  int compared = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].gap() || b[i].gap() || a[i].condition > 1e8 || b[i].condition > 1e8) continue;
    ++compared;
    for (std::size_t j = 0; j < a[i].a.size(); ++j) {
      worst = std::max(worst, std::abs(a[i].a[j] - b[i].a[j]) / a[i].a[j]);
    }
    CHECK(a[i].specular == doctest::Approx(b[i].specular).epsilon(1e-10));
  }
  MESSAGE("well-conditioned points " << compared << ", worst relative a_n difference " << worst);
  CHECK(compared > a.size() / 2);
  CHECK(worst < 1e-6);
}

TEST_CASE("lossless table makes the loss-free cases coincide") {
  const auto m = run_sweep(config(BoundaryCase::M, 3, 400, 7400, 50), lossless_table());
  const auto m0 = run_sweep(config(BoundaryCase::M0, 3, 400, 7400, 50), lossless_table());
  REQUIRE(m.size() == m0.size());
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i] == m0[i]);

  // R keeps a complex fundamental; the modes it shares with R0 must agree.
  const auto r = modes_report(config(BoundaryCase::R, 4, 400, 7400, 50), lossless_table());
  const auto r0 = modes_report(config(BoundaryCase::R0, 3, 400, 7400, 50), lossless_table());
  std::vector<std::vector<std::optional<double>>> shared_r, shared_r0;
  for (const auto& row : r.rows) {
    if (*row[1] >= 1) shared_r.push_back(row);
  }
  for (const auto& row : r0.rows) {
    if (*row[1] >= 1) shared_r0.push_back(row);
  }
  REQUIRE(shared_r.size() == shared_r0.size());
  for (std::size_t i = 0; i < shared_r.size(); ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      const double u = shared_r[i][j].value(), v = shared_r0[i][j].value();
      CHECK(std::abs(u - v) < 1e-12 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST_CASE("csv emission and round trip") {
  const auto cfg = config(BoundaryCase::R, 3, 1000, 1200, 25);
  auto rows = run_sweep(cfg, table());
  SpectrumRow gap;
  gap.k0_cm = 1225;
  gap.gap_reason = "singular";
  rows.push_back(gap);

  const std::string text = csv(rows, cfg);
  CHECK(text.find("k0_cm,specular,total,cond,mismatch,u_size,a0,a1,a2\n") != std::string::npos);
  CHECK(text.find("\n1225,,,,,,,,\n") != std::string::npos);

  std::istringstream in(text);
  const ParsedSweep parsed = parse_sweep_csv(in);
  CHECK(parsed.metadata == cfg.metadata());
  REQUIRE(parsed.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SpectrumRow expect = rows[i];
    expect.a_complex.clear();
    if (expect.gap()) expect.gap_reason = "";
    CHECK(parsed.rows[i] == expect);
  }

  const std::string empty = csv({}, cfg);
  CHECK(data_lines(empty) == "k0_cm,specular,total,cond,mismatch,u_size,a0,a1,a2\n");
  std::istringstream ein(empty);
  CHECK(parse_sweep_csv(ein).rows.empty());

  const auto r0 = config(BoundaryCase::R0, 2, 1000, 1100, 50);
  CHECK(data_lines(csv({}, r0)) == "k0_cm,specular,total,cond,mismatch,u_size,a1,a2\n");

  std::istringstream bad("nope,1\n1,2\n");
  CHECK_THROWS(parse_sweep_csv(bad));
}

TEST_CASE("json emission") {
  const auto cfg = config(BoundaryCase::R, 2, 2000, 2100, 50);
  auto rows = run_sweep(cfg, table());
  SpectrumRow gap;
  gap.k0_cm = 2150;
  gap.gap_reason = "cavity resonance";
  rows.push_back(gap);
  std::ostringstream out;
  write_sweep_json(rows, cfg, out);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j.at("metadata").at("case") == "R");
  CHECK(j.at("metadata").at("nmodes") == "2");
  const auto& arr = j.at("rows");
  REQUIRE(arr.size() == rows.size());
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& o = arr[i];
    CHECK(o.at("k0_cm").get<double>() == rows[i].k0_cm);
    CHECK(o.at("gap").is_null());
    CHECK(o.at("specular").get<double>() == rows[i].specular);
    CHECK(o.at("total").get<double>() == rows[i].total);
    CHECK(o.at("condition").get<double>() == rows[i].condition);
    CHECK(o.at("mismatch").get<double>() == rows[i].mismatch);
    CHECK(o.at("u_size").get<int>() == rows[i].u_size);
    CHECK(o.at("n").get<std::vector<int>>() == rows[i].n);
    CHECK(o.at("a_n").get<std::vector<double>>() == rows[i].a);
    REQUIRE(o.at("a_complex").size() == rows[i].a_complex.size());
    for (std::size_t k = 0; k < rows[i].a_complex.size(); ++k) {
      CHECK(o.at("a_complex")[k][0].get<double>() == rows[i].a_complex[k].real());
      CHECK(o.at("a_complex")[k][1].get<double>() == rows[i].a_complex[k].imag());
    }
  }
  const auto& g = arr.back();
  CHECK(g.at("gap") == "cavity resonance");
  for (const char* key : {"specular", "total", "a_n", "a_complex", "condition", "mismatch", "u_size"}) {
    CHECK(g.at(key).is_null());
  }
}

TEST_CASE("emission is deterministic across runs and worker counts") {
  auto cfg = config(BoundaryCase::R, 3, 400, 7400, 70);
  const std::string first = csv(run_sweep(cfg, table()), cfg);
  const std::string second = csv(run_sweep(cfg, table()), cfg);
  cfg.jobs = 4;
  const std::string threaded = csv(run_sweep(cfg, table()), cfg);
  CHECK(first == second);
  CHECK(first == threaded);

  std::ostringstream j1, j2;
  write_sweep_json(run_sweep(cfg, table()), cfg, j1);
  cfg.jobs = 1;
  write_sweep_json(run_sweep(cfg, table()), cfg, j2);
  CHECK(j1.str() == j2.str());
}

TEST_CASE("emit writes files and reports bad paths") {
  const auto dir = std::filesystem::temp_directory_path() / "grating_test_spectra";
  std::filesystem::create_directories(dir);
  auto cfg = config(BoundaryCase::P, 1, 1000, 1100, 50);
  cfg.out_path = (dir / "p.csv").string();
  const auto rows = run_sweep(cfg, table());
  emit(rows, cfg);
  std::ifstream in(cfg.out_path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == csv(rows, cfg));

  cfg.out_path = (dir / "missing" / "p.csv").string();
  try {
    emit(rows, cfg);
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(cfg.out_path) != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("table coverage is enforced") {
  const PermittivityTable narrow({{1000, cplx(-50, 5)}, {2000, cplx(-40, 4)}}, "narrow");
  CHECK_THROWS_AS(run_sweep(config(BoundaryCase::R, 1, 400, 1500, 10), narrow), std::range_error);
  CHECK_THROWS_AS(run_sweep(config(BoundaryCase::R, 1, 1500, 2500, 10), narrow), std::range_error);
  CHECK_THROWS_AS(modes_report(config(BoundaryCase::R, 1, 400, 1500, 10), narrow), std::range_error);
  CHECK_NOTHROW(run_sweep(config(BoundaryCase::R, 1, 1000, 2000, 100), narrow));
  try {
    run_sweep(config(BoundaryCase::R, 1, 400, 1500, 10), narrow);
  } catch (const std::range_error& e) {
    CHECK(std::string(e.what()).find("--k0") != std::string::npos);
  }
}

TEST_CASE("modes report") {
  const auto t = modes_report(config(BoundaryCase::R, 3, 400, 7400, 100), table());
  REQUIRE(t.columns.size() == 11);
  CHECK(t.columns[0] == "k0_cm");
  CHECK(t.rows.size() == 71 * 3);
  for (const auto& row : t.rows) {
    CHECK(*row[9] < 1e-12);
    CHECK(*row[10] < 1e-10);
    const int n = static_cast<int>(*row[1]);
    CHECK(*row[8] == (n % 2 == 0 ? 1.0 : -1.0));
    CHECK(*row[7] <= 0.0);
  }

  const auto r0 = modes_report(config(BoundaryCase::R0, 2, 400, 7400, 100), table());
  CHECK(r0.rows.size() == 71 * 3);
  int absent = 0;
  for (const auto& row : r0.rows) {
    if (*row[1] == 0.0) {
      ++absent;
      CHECK_FALSE(row[2].has_value());
    }
  }
  CHECK(absent == 71);
  bool flagged = false;
  for (const auto& [k, v] : r0.metadata) flagged |= (k == "fundamental" && v == "absent");
  CHECK(flagged);
}

TEST_CASE("energies report") {
  auto cfg = config(BoundaryCase::M, 3, 400, 7400, 100);
  const auto neg = energies_report(cfg, table());
  cfg.branch = BranchConvention::ImNuNonNegative;
  const auto pos = energies_report(cfg, table());
  CHECK(neg.columns == std::vector<std::string>{"k0_cm", "log10_E0", "log10_E1", "log10_E2"});
  REQUIRE(neg.rows.size() == pos.rows.size());
  const auto grid = cfg.grid();
  for (std::size_t i = 0; i < neg.rows.size(); ++i) {
    const Wavenumber k0 = Wavenumber::from_inverse_cm(grid[i]);
    const ModeFamily f = solve_mode_family(BoundaryCase::M, cfg.geometry, k0, 2, BranchConvention::ImNuNonPositive, table());
    for (std::size_t n = 0; n < 3; ++n) {
      const double direct = mode_energy(make_profile(f.modes[n], f.impedance.horizontal, cfg.geometry)).log10_energy;
      CHECK(*neg.rows[i][n + 1] == doctest::Approx(direct).epsilon(1e-14));
      CHECK(std::isfinite(*pos.rows[i][n + 1]));
    }
  }
  // 400 cm^-1 is deep in the evanescent regime for n = 2.
  CHECK(*pos.rows[0][3] - *neg.rows[0][3] > 10.0);
}

TEST_CASE("diagnose report and overlap dump") {
  const auto cfg = config(BoundaryCase::M, 3, 6000, 7400, 100);
  const auto t = diagnose_report(cfg, table());
  CHECK(t.columns == std::vector<std::string>{"k0_cm", "cond_neg", "cond_pos", "d2min_1", "d2min_2"});
  for (const auto& row : t.rows) {
    CHECK(*row[1] >= 1.0);
    CHECK(*row[2] >= *row[1] * (1 - 1e-9));
    CHECK(*row[3] >= 0.0);
    CHECK(*row[3] < 1.0);
  }
  const auto real = diagnose_report(config(BoundaryCase::R, 3, 7000, 7000.5, 1), table());
  CHECK(*real.rows[0][3] > 0.0);

  std::ostringstream dump;
  write_overlap_dump(config(BoundaryCase::R, 2, 3000, 3010, 10), table(), dump);
  std::istringstream in(dump.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k0_cm,kind,m,n,re,im");
  int count = 0;
  bool s = false, j = false;
  while (std::getline(in, line)) {
    ++count;
    CHECK((line.rfind("3000,", 0) == 0 || line.rfind("3010,", 0) == 0));
    s |= line.find(",S,") != std::string::npos;
    j |= line.find(",J,") != std::string::npos;
  }
  CHECK(count > 0);
  CHECK(s);
  CHECK(j);
}

TEST_CASE("table writer") {
  DataTable t;
  t.metadata = {{"case", "R"}};
  t.columns = {"a", "b"};
  t.rows = {{1.5, std::nullopt}, {2.0, 0.25}};
  std::ostringstream c;
  write_table(t, OutputFormat::Csv, c);
  CHECK(c.str() == "# case=R\na,b\n1.5,\n2,0.25\n");
  std::ostringstream js;
  write_table(t, OutputFormat::Json, js);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j.at("metadata").at("case") == "R");
  CHECK(j.at("rows")[0].at("a") == 1.5);
  CHECK(j.at("rows")[0].at("b").is_null());
  CHECK(j.at("rows")[1].at("b") == 0.25);
}
