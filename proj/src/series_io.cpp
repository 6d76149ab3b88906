#include "e8magic/series_io.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "e8magic/error.hpp"

namespace e8magic::series_io {

using nlohmann::json;
using qseries::Exponent8;
using qseries::QSeries;

json to_json(const NamedSeries& s) {
  json coeffs = json::array();
  for (const auto& [e, c] : s.series.terms())
    coeffs.push_back(json::array({e.eighths(), qseries::to_string(c)}));
  return json{{"name", s.name},
              {"weight", s.weight},
              {"stride", s.series.stride().eighths()},
              {"lead", s.series.lead().eighths()},
              {"order", s.series.order().eighths()},
              {"coefficients", std::move(coeffs)}};
}

NamedSeries from_json(const json& doc) {
  try {
    NamedSeries out;
    out.name = doc.at("name").get<std::string>();
    out.weight = doc.at("weight").get<int>();
    Exponent8 lead(doc.at("lead").get<std::int64_t>());
    Exponent8 order(doc.at("order").get<std::int64_t>());
    QSeries::Terms terms;
    for (const auto& entry : doc.at("coefficients")) {
      if (!entry.is_array() || entry.size() != 2) throw IoError("coefficient entry is not a pair");
      Exponent8 e(entry[0].get<std::int64_t>());
      auto c = qseries::parse_rational(entry[1].get<std::string>());
      if (c == 0) throw IoError("zero coefficient stored");
      if (!terms.emplace(e, c).second) throw IoError("duplicate exponent");
    }
    out.series = QSeries(lead, order, terms);
    if (doc.contains("stride") && doc.at("stride").get<std::int64_t>() != out.series.stride().eighths())
      throw IoError("stride does not match coefficients");
    return out;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(std::string("malformed series document: ") + e.what());
  }
}

std::string to_text(const NamedSeries& s) {
  std::ostringstream os;
  os << "# " << s.name << " weight " << s.weight << " exponents [" << qseries::to_string(s.series.lead().exact())
     << ", " << qseries::to_string(s.series.order().exact()) << ")\n";
  for (const auto& [e, c] : s.series.terms())
    os << qseries::to_string(e.exact()) << ' ' << qseries::to_string(c) << '\n';
  return os.str();
}

std::string content_hash(const json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("E8MAGIC_CACHE_DIR"); env && *env) return env;
  return std::filesystem::path(".e8magic-cache");
}

std::filesystem::path cache_path(modforms::FormId id, int order, const std::filesystem::path& dir) {
  return dir / (std::string(modforms::info(id).name) + "_" + std::to_string(order) + ".json");
}

void write_cache(modforms::FormId id, int order, const QSeries& s, const std::filesystem::path& dir) {
  const auto& fi = modforms::info(id);
  json body = to_json({std::string(fi.name), fi.weight, s});
  json doc{{"key", {{"form", fi.name}, {"order", order}}}, {"hash", content_hash(body)}, {"series", body}};
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create cache directory " + dir.string() + ": " + ec.message());
  auto path = cache_path(id, order, dir);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << doc.dump() << '\n';
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move cache file into place: " + ec.message());
}

QSeries read_cache(modforms::FormId id, int order, const std::filesystem::path& dir) {
  auto path = cache_path(id, order, dir);
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const std::exception& e) {
    throw IoError("cache file " + path.string() + " is not JSON: " + e.what());
  }
  const auto& fi = modforms::info(id);
  try {
    if (doc.at("key").at("form").get<std::string>() != fi.name || doc.at("key").at("order").get<int>() != order)
      throw IoError("cache key mismatch in " + path.string());
    if (doc.at("hash").get<std::string>() != content_hash(doc.at("series")))
      throw IoError("cache hash mismatch in " + path.string());
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError("malformed cache file " + path.string() + ": " + e.what());
  }
  auto named = from_json(doc.at("series"));
  if (named.name != fi.name || named.weight != fi.weight) throw IoError("cache content mismatch in " + path.string());
  return std::move(named.series);
}

const QSeries& load_or_build(modforms::FormId id, int order, bool* cache_hit, const std::filesystem::path& dir) {
  if (std::filesystem::exists(cache_path(id, order, dir))) {
    auto s = read_cache(id, order, dir);
    modforms::catalog().put(id, order, std::move(s));
    if (cache_hit) *cache_hit = true;
    return modforms::catalog().get(id, order);
  }
  const auto& s = modforms::catalog().get(id, order);
  write_cache(id, order, s, dir);
  if (cache_hit) *cache_hit = false;
  return s;
}

}  // namespace e8magic::series_io
