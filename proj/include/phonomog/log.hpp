#ifndef PHONOMOG_LOG_HPP
#define PHONOMOG_LOG_HPP

#include <string>

namespace phonomog {

// Log level is read once from the PHONOMOG_LOG environment variable:
// debug < info < warn < error < off. Default: warn.
enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

LogLevel log_level();
void log_message(LogLevel level, const std::string& msg);

inline void log_debug(const std::string& m) { log_message(LogLevel::debug, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::info, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::warn, m); }
inline void log_error(const std::string& m) { log_message(LogLevel::error, m); }

}  // namespace phonomog

#endif
