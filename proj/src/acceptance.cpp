#include "sos/acceptance.hpp"

#include <ostream>

namespace sos::acceptance {

std::vector<CriterionResult> run_all(std::ostream& log) {
  log << "acceptance suite not yet wired\n";
  return {};
}

}  // namespace sos::acceptance
