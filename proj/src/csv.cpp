#include "hipsim/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hipsim/errors.hpp"

namespace hipsim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open for writing: " + tmp);
    os << content;
    if (!os) throw ConfigError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw ConfigError("rename failed: " + path);
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (end && *end != '\0')) {
    throw DataError(path + ": cannot parse number '" + s + "'");
  }
  return v;
}

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          const std::string& expect_header) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw DataError(path + ": empty file");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.pop_back();
  }
  if (line != expect_header) {
    throw DataError(path + ": expected header '" + expect_header + "', got '" +
                    line + "'");
  }
  std::vector<std::vector<double>> rows;
  const std::size_t ncol = split(expect_header, ',').size();
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line, ',');
    if (cells.size() != ncol) {
      throw DataError(path + ": wrong column count in row '" + line + "'");
    }
    std::vector<double> row;
    row.reserve(ncol);
    for (const auto& c : cells) row.push_back(parse_double(c, path));
    rows.push_back(std::move(row));
  }
  return rows;
}

constexpr const char* kTrajHeader =
    "t,T,P,sigma_11,sigma_22,sigma_33,sigma_12,sigma_23,sigma_13,rho,sigma_eqv";

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << kTrajHeader << "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const SymTensor3& s = traj.stress[i];
    os << format_double(traj.t[i]) << ',' << format_double(traj.T[i]) << ','
       << format_double(traj.P[i]) << ',' << format_double(s.xx) << ','
       << format_double(s.yy) << ',' << format_double(s.zz) << ','
       << format_double(s.xy) << ',' << format_double(s.yz) << ','
       << format_double(s.xz) << ',' << format_double(traj.rho[i]) << ','
       << format_double(traj.sigma_eqv[i]) << "\n";
  }
  return os.str();
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  atomic_write(path, trajectory_csv(traj));
}

Trajectory read_trajectory_csv(const std::string& path) {
  Trajectory traj;
  for (const auto& row : read_csv(path, kTrajHeader)) {
    traj.t.push_back(row[0]);
    traj.T.push_back(row[1]);
    traj.P.push_back(row[2]);
    traj.stress.push_back({row[3], row[4], row[5], row[6], row[7], row[8]});
    traj.strain.push_back(SymTensor3::zero());
    traj.rho.push_back(row[9]);
    traj.sigma_eqv.push_back(row[10]);
  }
  return traj;
}

std::vector<DenseYieldPoint> read_dense_yield_csv(const std::string& path) {
  std::vector<DenseYieldPoint> out;
  for (const auto& r : read_csv(path, "T_C,strain_rate_per_s,sigma02_MPa")) {
    out.push_back({r[0], r[1], r[2]});
  }
  return out;
}

std::vector<PorousYieldPoint> read_porous_yield_csv(const std::string& path) {
  std::vector<PorousYieldPoint> out;
  for (const auto& r :
       read_csv(path, "T_C,rho,strain_rate_per_s,sigma02_MPa")) {
    out.push_back({r[0], r[1], r[2], r[3]});
  }
  return out;
}

std::vector<DensificationPoint> read_densification_csv(const std::string& path) {
  std::vector<DensificationPoint> out;
  for (const auto& r : read_csv(path, "t_s,rho")) out.push_back({r[0], r[1]});
  return out;
}

std::string dense_yield_csv(const std::vector<DenseYieldPoint>& rows) {
  std::ostringstream os;
  os << "T_C,strain_rate_per_s,sigma02_MPa\n";
  for (const auto& r : rows) {
    os << format_double(r.T) << ',' << format_double(r.strain_rate) << ','
       << format_double(r.sigma02) << "\n";
  }
  return os.str();
}

std::string porous_yield_csv(const std::vector<PorousYieldPoint>& rows) {
  std::ostringstream os;
  os << "T_C,rho,strain_rate_per_s,sigma02_MPa\n";
  for (const auto& r : rows) {
    os << format_double(r.T) << ',' << format_double(r.rho) << ','
       << format_double(r.strain_rate) << ',' << format_double(r.sigma02)
       << "\n";
  }
  return os.str();
}

std::string densification_csv(const std::vector<DensificationPoint>& rows) {
  std::ostringstream os;
  os << "t_s,rho\n";
  for (const auto& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.rho) << "\n";
  }
  return os.str();
}

}  // namespace hipsim
