#pragma once

#include <string>
#include <vector>

#include "sos/syntax.hpp"

// The embedded fixture corpus: the application systems and the small systems
// used by the counterexample and transformation tests.

namespace sos::fixtures {

std::vector<std::string> names();
const std::string& source(const std::string& name);
Tss load(const std::string& name);

}  // namespace sos::fixtures
