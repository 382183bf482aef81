#include "sos/fixtures.hpp"

#include <map>

#include "sos/parse.hpp"

namespace sos::fixtures {

namespace {

const std::map<std::string, std::string>& table() {
  static const std::map<std::string, std::string> data = {
#include "fixtures_data.inc"
  };
  return data;
}

}  // namespace

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : table()) out.push_back(name);
  return out;
}

const std::string& source(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) throw Error("unknown fixture: " + name);
  return it->second;
}

Tss load(const std::string& name) { return parse_tss(source(name)); }

}  // namespace sos::fixtures
