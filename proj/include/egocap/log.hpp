#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace egocap {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

inline LogLevel log_level() {
  static LogLevel lvl = [] {
    const char* env = std::getenv("EGOCAP_LOG");
    if (!env) return LogLevel::kWarn;
    if (!std::strcmp(env, "error") || !std::strcmp(env, "0")) return LogLevel::kError;
    if (!std::strcmp(env, "warn") || !std::strcmp(env, "1")) return LogLevel::kWarn;
    if (!std::strcmp(env, "info") || !std::strcmp(env, "2")) return LogLevel::kInfo;
    if (!std::strcmp(env, "debug") || !std::strcmp(env, "3")) return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return lvl;
}

template <typename... Args>
void log(LogLevel lvl, const char* fmt, Args... args) {
  if (lvl > log_level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[%s] ", names[static_cast<int>(lvl)]);
  std::fprintf(stderr, fmt, args...);
  std::fprintf(stderr, "\n");
}

#define EGOCAP_LOG_ERROR(...) ::egocap::log(::egocap::LogLevel::kError, __VA_ARGS__)
#define EGOCAP_LOG_WARN(...) ::egocap::log(::egocap::LogLevel::kWarn, __VA_ARGS__)
#define EGOCAP_LOG_INFO(...) ::egocap::log(::egocap::LogLevel::kInfo, __VA_ARGS__)
#define EGOCAP_LOG_DEBUG(...) ::egocap::log(::egocap::LogLevel::kDebug, __VA_ARGS__)

}  // namespace egocap
