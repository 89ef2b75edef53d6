#include "slowlight/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slowlight/errors.hpp"

namespace slowlight {

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw InvalidArgument("table has no column '" + std::string(name) + "'");
}

std::vector<double> Table::column_values(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw InvalidArgument("CSV row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

Table parse_csv(std::string_view text) {
  Table t;
  int line_no = 0;
  bool header = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = strip_cr(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (header) {
      for (auto c : cells) t.columns.emplace_back(c);
      header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) throw ParseError("CSV row has wrong number of cells", line_no);
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size())
        throw ParseError("bad number '" + std::string(c) + "'", line_no);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (header) throw ParseError("CSV has no header", 1);
  return t;
}

std::string to_csv(const KeyValues& kv) {
  std::string out = "quantity,value\n";
  for (const auto& [k, v] : kv) out += k + ',' + format_double(v) + '\n';
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Table spectrum_table(const SusceptibilitySpectrum& s) {
  Table t;
  t.columns = {"two_photon_detuning_Gamma3", "re_chi_scaled", "im_chi_scaled"};
  for (std::size_t i = 0; i < s.detuning.size(); ++i)
    t.rows.push_back({s.detuning[i], s.chi[i].real(), s.chi[i].imag()});
  return t;
}

Table pulse_table(const Pulse& p) {
  Table t;
  t.columns = {"time_s", "re_envelope", "im_envelope", "intensity"};
  for (std::size_t i = 0; i < p.size(); ++i)
    t.rows.push_back({p.time(i), p.envelope[i].real(), p.envelope[i].imag(), std::norm(p.envelope[i])});
  return t;
}

Table sweep_table(const PumpSweep& s) {
  Table t;
  t.columns = {"pump_rate_Gamma3", "n_g", "re_chi_scaled", "im_chi_scaled", "slope_scaled"};
  for (const auto& r : s.rows) t.rows.push_back({r.rate, r.n_g, r.chi_s.real(), r.chi_s.imag(), r.slope_s});
  return t;
}

}  // namespace slowlight
