// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

namespace actwarp {

/// One named residual (or inequality margin) inside a check.
struct ResidualRecord {
  std::string label;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  int samples = 0;
  double tolerance = 0.0;
  bool pass = true;
  bool enforced = true;  // informational records never flip the check
  std::string note;

  // Inequality extras: per-sample values and the worst margin.
  bool is_inequality = false;
  std::vector<double> lhs, rhs, margin;
  double min_margin = 0.0;

  void absorb(double residual) {
    max_residual = std::max(max_residual, residual);
    mean_residual += residual;
    ++samples;
  }
  void finish(double tol) {
    tolerance = tol;
    if (samples > 0) mean_residual /= samples;
    pass = max_residual <= tol;
  }
  void absorb_margin(double l, double r) {
    lhs.push_back(l);
    rhs.push_back(r);
    margin.push_back(l - r);
    ++samples;
  }
  void finish_inequality(double tol) {
    is_inequality = true;
    tolerance = tol;
    min_margin = margin.empty() ? 0.0 : margin[0];
    for (double m : margin) min_margin = std::min(min_margin, m);
    pass = min_margin >= -tol;
  }
};

struct CheckReport {
  std::string name;
  std::string status = "ok";  // ok | skipped | error
  std::string reason;         // for skipped/error
  bool requested = true;
  // deque: record() hands out references that must survive later insertions
  std::deque<ResidualRecord> records;
  std::map<std::string, double> meta;
  std::map<std::string, std::string> notes;

  bool pass() const {
    if (status == "error") return false;
    if (status == "skipped") return true;
    for (const auto& r : records)
      if (r.enforced && !r.pass) return false;
    return true;
  }
  ResidualRecord& record(const std::string& label);
  const ResidualRecord* find(const std::string& label) const;
};

}  // namespace actwarp
