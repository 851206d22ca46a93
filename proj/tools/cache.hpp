#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace dirlab::app {

using json = nlohmann::json;

/// Canonical cache key: series, operation, then name=value pairs in call order.
/// Reals are written with 12 significant digits, so parameters that differ only
/// from the 13th digit on share a key. Uniform and geometric grids collapse to
/// their generator.
class KeyBuilder {
 public:
  KeyBuilder(std::string_view series, std::string_view op);

  KeyBuilder& add(std::string_view name, double value);
  KeyBuilder& add(std::string_view name, int value);
  KeyBuilder& add(std::string_view name, std::string_view value);
  KeyBuilder& add(std::string_view name, std::span<const double> grid);

  const std::string& str() const noexcept { return key_; }

 private:
  std::string key_;
};

std::string format_real12(double v);

/// One JSON file per key under dir: {"key", "created_at", "value"}. The file
/// name is a 64-bit FNV-1a digest of the key; the stored key is compared on
/// lookup, so a digest collision reads as a miss.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  /// DIRLAB_CACHE wins over the configured directory; empty means no cache.
  static std::optional<Cache> open(const std::string& configured);

  std::optional<json> lookup(const std::string& key) const;
  /// Write-temp-then-rename.
  void store(const std::string& key, const json& value) const;

  std::filesystem::path path_for(const std::string& key) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace dirlab::app
