#pragma once
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>

#include "zslab/error.hpp"

namespace zslab::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kPartial = 3 };

struct RawConfig {
  std::optional<std::string> cache_dir;
  std::optional<int> threads;
};

struct Config {
  std::string cache_dir;  // empty: no cache
  int threads = 1;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

inline std::optional<std::string> process_env(const char* name) {
  const char* v = std::getenv(name);
  if (!v) return std::nullopt;
  return std::string(v);
}

// Flags win over ZSLAB_CACHE_DIR / ZSLAB_THREADS.
inline Config resolve_config(const RawConfig& flags, const EnvLookup& env = process_env) {
  Config c;
  if (flags.cache_dir) c.cache_dir = *flags.cache_dir;
  else if (auto v = env("ZSLAB_CACHE_DIR")) c.cache_dir = *v;

  if (flags.threads) {
    c.threads = *flags.threads;
  } else if (auto v = env("ZSLAB_THREADS"); v && !v->empty()) {
    std::size_t used = 0;
    int parsed = 0;
    try {
      parsed = std::stoi(*v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v->size()) throw InvalidArgument("ZSLAB_THREADS must be an integer, got '" + *v + "'");
    c.threads = parsed;
  }
  if (c.threads < 1) throw InvalidArgument("thread count must be at least 1");
  return c;
}

} // namespace zslab::cli
