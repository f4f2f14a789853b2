#pragma once

#include <json.hpp>

#include <string>

namespace thetalab {

/// Fixture directory: $RBSD_FIXTURES if set, else `fallback`, else the
/// directory compiled in at build time.
std::string fixture_dir(const std::string& fallback = {});

/// Reads <dir>/<kind>/<key>.json and returns the whole document
/// (kind, key, provenance, payload). Throws ParseError when missing.
nlohmann::json load_fixture(const std::string& kind, const std::string& key, const std::string& dir = {});

}  // namespace thetalab
