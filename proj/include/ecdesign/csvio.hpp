#pragma once

#include <string>
#include <vector>

#include "ecdesign/simulator.hpp"

namespace ecdesign {

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

/// Write via a temp file in the same directory, then rename into place.
void atomic_write_text(const std::string& path, const std::string& content);

std::vector<std::vector<std::string>> read_csv(const std::string& path);

// Trajectory CSV: header t,x1..xn,u1..um; the final state row leaves the
// input columns empty.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path, Index state_dim, Index input_dim);

// Cipher log: one record per step, decimal strings;
// header t,epoch,h,c1_1,c2_1,...,c1_n,c2_n.
void write_cipherlog_csv(const std::string& path, const CipherLog& log, Index state_dim);

}  // namespace ecdesign
