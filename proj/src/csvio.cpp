#include "ecdesign/csvio.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ecdesign {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, target);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  if (traj.states.empty()) throw std::invalid_argument("trajectory: no states");
  const Index n = traj.states.front().size();
  const Index m = traj.inputs.empty() ? 0 : traj.inputs.front().size();

  std::ostringstream out;
  out << "t";
  for (Index i = 1; i <= n; ++i) out << ",x" << i;
  for (Index i = 1; i <= m; ++i) out << ",u" << i;
  out << "\n";
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (Index i = 0; i < n; ++i) out << "," << format_double(traj.states[t](i));
    for (Index i = 0; i < m; ++i) {
      out << ",";
      if (t < traj.inputs.size()) out << format_double(traj.inputs[t](i));
    }
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

Trajectory read_trajectory_csv(const std::string& path, Index state_dim, Index input_dim) {
  const auto rows = read_csv(path);
  if (rows.empty()) throw std::invalid_argument("trajectory csv: empty file");
  Trajectory traj;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (static_cast<Index>(cells.size()) < 1 + state_dim)
      throw std::invalid_argument("trajectory csv: short row " + std::to_string(r));
    Vector x(state_dim);
    for (Index i = 0; i < state_dim; ++i) x(i) = std::stod(cells[1 + i]);
    traj.states.push_back(x);
    if (static_cast<Index>(cells.size()) >= 1 + state_dim + input_dim && input_dim > 0 &&
        !cells[1 + state_dim].empty()) {
      Vector u(input_dim);
      for (Index i = 0; i < input_dim; ++i) u(i) = std::stod(cells[1 + state_dim + i]);
      traj.inputs.push_back(u);
    }
  }
  return traj;
}

void write_cipherlog_csv(const std::string& path, const CipherLog& log, Index state_dim) {
  std::ostringstream out;
  out << "t,epoch,h";
  for (Index i = 1; i <= state_dim; ++i) out << ",c1_" << i << ",c2_" << i;
  out << "\n";
  for (const auto& entry : log.entries) {
    out << entry.t << "," << entry.epoch << "," << entry.h.get_str();
    for (const auto& cell : entry.state_cells)
      out << "," << cell.c1.get_str() << "," << cell.c2.get_str();
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

}  // namespace ecdesign
