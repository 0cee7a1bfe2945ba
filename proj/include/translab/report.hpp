#pragma once

// Structured record of an inequality/identity check, with JSON emission.

#include <map>
#include <sstream>
#include <string>

namespace translab {

struct VerificationReport {
  std::string id;          // inequality/identity identifier
  std::string region;      // where it was evaluated
  bool pass = false;
  double margin = 0;       // worst-case slack (>= 0 passes)
  double budget = 0;       // allowed tolerance/budget that was applied
  double worst_value = 0;  // the extremal quantity
  std::string worst_node;  // location of the extremum
  std::map<std::string, double> details;

  std::string to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"id\":\"" << id << "\",\"region\":\"" << region << "\",\"pass\":"
       << (pass ? "true" : "false") << ",\"margin\":" << margin << ",\"budget\":" << budget
       << ",\"worst_value\":" << worst_value << ",\"worst_node\":\"" << worst_node << "\"";
    if (!details.empty()) {
      os << ",\"details\":{";
      bool first = true;
      for (const auto& [k, v] : details) {
        if (!first) os << ",";
        first = false;
        os << "\"" << k << "\":" << v;
      }
      os << "}";
    }
    os << "}";
    return os.str();
  }
};

}  // namespace translab
