#pragma once

// JSON persistence for catalog series and the on-disk cache keyed by (form, order).
//
// Document: {name, weight, stride, lead, order, coefficients: [[exponent_in_eighths, "num/den"], ...]}
// stride, lead and order are in eighths as well.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

#include "e8magic/modforms.hpp"
#include "e8magic/qseries.hpp"

namespace e8magic::series_io {

struct NamedSeries {
  std::string name;
  int weight = 0;
  qseries::QSeries series;
};

nlohmann::json to_json(const NamedSeries& s);
/// Throws IoError on a malformed document.
NamedSeries from_json(const nlohmann::json& doc);

/// Human-readable listing, one "exponent coefficient" line per stored term.
std::string to_text(const NamedSeries& s);

/// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string content_hash(const nlohmann::json& doc);

/// $E8MAGIC_CACHE_DIR, or ./.e8magic-cache when unset.
std::filesystem::path cache_dir();

/// Cache file for (form, order): {key: {form, order}, hash, series}.
std::filesystem::path cache_path(modforms::FormId id, int order,
                                 const std::filesystem::path& dir = cache_dir());

void write_cache(modforms::FormId id, int order, const qseries::QSeries& s,
                 const std::filesystem::path& dir = cache_dir());

/// Reads a cache file. Throws IoError if it is unreadable, malformed, keyed differently
/// or its hash does not match the stored series.
qseries::QSeries read_cache(modforms::FormId id, int order,
                            const std::filesystem::path& dir = cache_dir());

/// Cache hit, or build_form + write. Either way the catalog is seeded.
/// cache_hit reports which branch ran.
const qseries::QSeries& load_or_build(modforms::FormId id, int order, bool* cache_hit = nullptr,
                                      const std::filesystem::path& dir = cache_dir());

}  // namespace e8magic::series_io
