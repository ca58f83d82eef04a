#include "wavebt/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wavebt {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open for reading: " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

void write_stable(std::ostream& os, const nlohmann::json& j, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) { os << "{}"; return; }
      os << "{\n";
      bool first = true;
      for (auto it = j.cbegin(); it != j.cend(); ++it) {  // std::map order: sorted
        if (!first) os << ",\n";
        first = false;
        os << pad_in << nlohmann::json(it.key()).dump() << ": ";
        write_stable(os, it.value(), indent, depth + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) { os << "[]"; return; }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        os << pad_in;
        write_stable(os, j[i], indent, depth + 1);
        if (i + 1 < j.size()) os << ",";
        os << "\n";
      }
      os << pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError("malformed CSV number in " + path.string());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError("ragged CSV rows in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return m;
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

std::string stable_json(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  write_stable(os, j, indent, 0);
  os << "\n";
  return os.str();
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << stable_json(j);
}

void write_trace_csv(const SimulationTrace& trace, const std::filesystem::path& path) {
  auto out = open_out(path);
  const int k2 = trace.u_mid.empty() ? 0 : static_cast<int>(trace.u_mid.front().size());
  const int k1 = trace.v1_mid.empty() ? 0 : static_cast<int>(trace.v1_mid.front().size());
  const bool scattering = trace.representation == Representation::scattering;
  const bool with_qi = !trace.qi_power_mid.empty() &&
                       std::any_of(trace.qi_power_mid.begin(), trace.qi_power_mid.end(),
                                   [](double v) { return v != 0.0; });

  out << "t,E";
  for (int i = 1; i <= k2; ++i) out << ',' << (scattering ? "us_" : "u_") << i;
  for (int i = 1; i <= k2; ++i) out << ',' << (scattering ? "ys_" : "y_") << i;
  for (int i = 1; i <= k1; ++i) out << ",v_gamma1_" << i;
  if (with_qi) out << ",qi_power";
  out << '\n';

  const auto row = [&](double t, double e, const Vector* u, const Vector* y,
                       const Vector* v1, double qi) {
    out << format_double(t) << ',' << format_double(e);
    for (int i = 0; i < k2; ++i) out << ',' << format_double(u ? (*u)(i) : 0.0);
    for (int i = 0; i < k2; ++i) out << ',' << format_double(y ? (*y)(i) : 0.0);
    for (int i = 0; i < k1; ++i) out << ',' << format_double(v1 ? (*v1)(i) : 0.0);
    if (with_qi) out << ',' << format_double(qi);
    out << '\n';
  };

  row(trace.times[0], trace.energy[0], nullptr, nullptr, nullptr, 0.0);
  for (int n = 0; n < trace.steps(); ++n) {
    row(trace.times[n + 1], trace.energy[n + 1], &trace.u_mid[n], &trace.y_mid[n],
        k1 ? &trace.v1_mid[n] : nullptr,
        with_qi ? trace.qi_power_mid[n] : 0.0);
  }
}

SimulationTrace read_trace_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header)) throw ValidationError("empty trace file: " + path.string());
  const auto cols = split(header, ',');
  if (cols.size() < 2 || cols[0] != "t" || cols[1] != "E") {
    throw ValidationError("unrecognized trace header in " + path.string());
  }
  SimulationTrace trace;
  int k2 = 0, k1 = 0;
  bool with_qi = false;
  for (size_t i = 2; i < cols.size(); ++i) {
    if (cols[i].rfind("us_", 0) == 0) { trace.representation = Representation::scattering; ++k2; }
    else if (cols[i].rfind("u_", 0) == 0) ++k2;
    else if (cols[i].rfind("v_gamma1_", 0) == 0) ++k1;
    else if (cols[i] == "qi_power") with_qi = true;
  }
  std::string line;
  bool first = true;
  double prev_t = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != cols.size()) throw ValidationError("ragged trace row in " + path.string());
    std::vector<double> v(cells.size());
    for (size_t i = 0; i < cells.size(); ++i) v[i] = std::stod(cells[i]);
    trace.times.push_back(v[0]);
    trace.energy.push_back(v[1]);
    if (first) {
      first = false;
      prev_t = v[0];
      continue;
    }
    size_t at = 2;
    Vector u(k2), y(k2), v1(k1);
    for (int i = 0; i < k2; ++i) u(i) = v[at++];
    for (int i = 0; i < k2; ++i) y(i) = v[at++];
    for (int i = 0; i < k1; ++i) v1(i) = v[at++];
    trace.u_mid.push_back(u);
    trace.y_mid.push_back(y);
    trace.v1_mid.push_back(v1);
    trace.qi_power_mid.push_back(with_qi ? v[at] : 0.0);
    trace.dt = v[0] - prev_t;
    prev_t = v[0];
  }
  if (trace.times.size() >= 2) {
    trace.dt = (trace.times.back() - trace.times.front()) /
               static_cast<double>(trace.times.size() - 1);
  }
  return trace;
}

void write_snapshots_csv(const SimulationTrace& trace,
                         const std::filesystem::path& g_path,
                         const std::filesystem::path& f_path) {
  const auto dump = [&](const std::vector<Vector>& block, const std::filesystem::path& p) {
    auto out = open_out(p);
    for (size_t i = 0; i < block.size(); ++i) {
      out << format_double(trace.snapshot_times[i]);
      for (Eigen::Index j = 0; j < block[i].size(); ++j)
        out << ',' << format_double(block[i](j));
      out << '\n';
    }
  };
  dump(trace.snapshots_g, g_path);
  dump(trace.snapshots_f, f_path);
}

}  // namespace wavebt
