#include "thetalab/fixtures.hpp"

#include <cstdlib>
#include <fstream>

#include "thetalab/error.hpp"

namespace thetalab {

std::string fixture_dir(const std::string& fallback) {
  if (const char* env = std::getenv("RBSD_FIXTURES"); env != nullptr && *env != '\0') return env;
  if (!fallback.empty()) return fallback;
  return THETALAB_FIXTURE_DIR;
}

nlohmann::json load_fixture(const std::string& kind, const std::string& key, const std::string& dir) {
  const std::string path = fixture_dir(dir) + "/" + kind + "/" + key + ".json";
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "missing fixture " + path);
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.contains("payload") || !doc.contains("provenance"))
      throw Error(ErrorKind::ParseError, "fixture without payload/provenance: " + path);
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

}  // namespace thetalab
