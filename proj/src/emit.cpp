#include "grating/emit.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

#include "grating/sweep.hpp"
#include "json.hpp"

namespace grating {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

std::string format_parameter(double v) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

nlohmann::ordered_json metadata_json(const std::vector<std::pair<std::string, std::string>>& md) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : md) j[k] = v;
  return j;
}

}  // namespace

void write_sweep_json(const std::vector<SpectrumRow>& rows, const SweepConfig& cfg, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["metadata"] = metadata_json(cfg.metadata());
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["k0_cm"] = r.k0_cm;
    if (r.gap()) {
      o["gap"] = *r.gap_reason;
      o["specular"] = nullptr;
      o["total"] = nullptr;
      o["a_n"] = nullptr;
      o["a_complex"] = nullptr;
      o["condition"] = nullptr;
      o["mismatch"] = nullptr;
      o["u_size"] = nullptr;
    } else {
      o["gap"] = nullptr;
      o["specular"] = r.specular;
      o["total"] = r.total;
      o["n"] = r.n;
      o["a_n"] = r.a;
      auto ac = nlohmann::ordered_json::array();
      for (const auto& z : r.a_complex) ac.push_back({z.real(), z.imag()});
      o["a_complex"] = ac;
      o["condition"] = r.condition;
      o["mismatch"] = r.mismatch;
      o["u_size"] = r.u_size;
    }
    arr.push_back(std::move(o));
  }
  doc["rows"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

void write_table(const DataTable& t, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    doc["metadata"] = metadata_json(t.metadata);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json o = nlohmann::ordered_json::object();
      for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j < row.size() && row[j]) {
          o[t.columns[j]] = *row[j];
        } else {
          o[t.columns[j]] = nullptr;
        }
      }
      arr.push_back(std::move(o));
    }
    doc["rows"] = std::move(arr);
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : t.metadata) out << "# " << k << '=' << v << '\n';
  for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      if (j) out << ',';
      if (j < row.size() && row[j]) out << format_double(*row[j]);
    }
    out << '\n';
  }
}

}  // namespace grating
