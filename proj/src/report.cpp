// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

namespace actwarp {

ResidualRecord& CheckReport::record(const std::string& label) {
  for (auto& r : records)
    if (r.label == label) return r;
  records.emplace_back();
  records.back().label = label;
  return records.back();
}

const ResidualRecord* CheckReport::find(const std::string& label) const {
  for (const auto& r : records)
    if (r.label == label) return &r;
  return nullptr;
}

}  // namespace actwarp
