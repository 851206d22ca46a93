#include "cache.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

namespace dirlab::app {

namespace fs = std::filesystem;

std::string format_real12(double v) {
  if (v == 0.0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

KeyBuilder::KeyBuilder(std::string_view series, std::string_view op) {
  key_ = "series=";
  key_ += series;
  key_ += "|op=";
  key_ += op;
}

KeyBuilder& KeyBuilder::add(std::string_view name, double value) {
  key_ += '|';
  key_ += name;
  key_ += '=';
  key_ += format_real12(value);
  return *this;
}

KeyBuilder& KeyBuilder::add(std::string_view name, int value) {
  key_ += '|';
  key_ += name;
  key_ += '=';
  key_ += std::to_string(value);
  return *this;
}

KeyBuilder& KeyBuilder::add(std::string_view name, std::string_view value) {
  key_ += '|';
  key_ += name;
  key_ += '=';
  key_ += value;
  return *this;
}

KeyBuilder& KeyBuilder::add(std::string_view name, std::span<const double> grid) {
  key_ += '|';
  key_ += name;
  key_ += '=';
  const std::size_t n = grid.size();
  if (n >= 3) {
    const double step = (grid[n - 1] - grid[0]) / static_cast<double>(n - 1);
    bool uniform = step > 0.0;
    for (std::size_t i = 1; uniform && i < n; ++i) {
      uniform = std::abs(grid[i] - (grid[0] + step * static_cast<double>(i))) <= 1e-9 * std::abs(grid[n - 1]);
    }
    if (uniform) {
      key_ += "lin(" + format_real12(grid[0]) + "," + format_real12(grid[n - 1]) + "," + std::to_string(n) + ")";
      return *this;
    }
    bool geometric = grid[0] > 0.0;
    const double lr = geometric ? std::log(grid[n - 1] / grid[0]) / static_cast<double>(n - 1) : 0.0;
    for (std::size_t i = 1; geometric && i < n; ++i) {
      geometric = std::abs(grid[i] / (grid[0] * std::exp(lr * static_cast<double>(i))) - 1.0) <= 1e-9;
    }
    if (geometric) {
      key_ += "geom(" + format_real12(grid[0]) + "," + format_real12(grid[n - 1]) + "," + std::to_string(n) + ")";
      return *this;
    }
  }
  key_ += '[';
  for (std::size_t i = 0; i < n; ++i) {
    if (i) key_ += ',';
    key_ += format_real12(grid[i]);
  }
  key_ += ']';
  return *this;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Cache::Cache(fs::path dir) : dir_(std::move(dir)) {}

std::optional<Cache> Cache::open(const std::string& configured) {
  std::string dir = configured;
  if (const char* env = std::getenv("DIRLAB_CACHE"); env && *env) dir = env;
  if (dir.empty()) return std::nullopt;
  return Cache(dir);
}

fs::path Cache::path_for(const std::string& key) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
  return dir_ / name;
}

std::optional<json> Cache::lookup(const std::string& key) const {
  const fs::path p = path_for(key);
  std::error_code ec;
  if (!fs::exists(p, ec)) return std::nullopt;
  try {
    std::ifstream in(p);
    json body = json::parse(in);
    if (body.at("key").get<std::string>() != key) return std::nullopt;
    return body.at("value");
  } catch (const std::exception& e) {
    std::cerr << "warning: cache entry " << p.string() << " unreadable (" << e.what() << "); recomputing\n";
    return std::nullopt;
  }
}

void Cache::store(const std::string& key, const json& value) const {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  fs::create_directories(dir_, ec);
  const fs::path target = path_for(key);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) {
      std::cerr << "warning: cannot write cache entry " << tmp.string() << "\n";
      return;
    }
    json body{{"key", key}, {"created_at", utc_now()}, {"value", value}};
    out << body.dump();
    if (!out.good()) {
      out.close();
      fs::remove(tmp, ec);
      std::cerr << "warning: cannot write cache entry " << tmp.string() << "\n";
      return;
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    std::cerr << "warning: cannot publish cache entry " << target.string() << "\n";
  }
}

}  // namespace dirlab::app
