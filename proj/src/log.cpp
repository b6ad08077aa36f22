#include "phonomog/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace phonomog {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("PHONOMOG_LOG");
    if (!env) return LogLevel::warn;
    if (!std::strcmp(env, "debug")) return LogLevel::debug;
    if (!std::strcmp(env, "info")) return LogLevel::info;
    if (!std::strcmp(env, "warn")) return LogLevel::warn;
    if (!std::strcmp(env, "error")) return LogLevel::error;
    if (!std::strcmp(env, "off") || !std::strcmp(env, "none")) return LogLevel::off;
    return LogLevel::warn;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& msg) {
  if (level < log_level()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::fprintf(stderr, "phonomog [%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

}  // namespace phonomog
