#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gfalm::app {

struct Check {
  std::string name;
  double value = 0.0;
  std::string bound;
  bool passed = false;
};

std::vector<Check> suite_soliton();
std::vector<Check> suite_2d();
std::vector<Check> suite_norms();
std::vector<Check> suite_geometry();
std::vector<Check> suite_flow();

void print_checks(const std::vector<Check>& checks, std::ostream& os);

}  // namespace gfalm::app
