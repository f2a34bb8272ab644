#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace dirpose::cli {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Reproducibility sidecar: the exact parameters of this invocation.
// Timestamps go to run.log only, so every other output is hash-stable.
void write_run_metadata(const std::filesystem::path& out_dir,
                        const std::string& command,
                        const nlohmann::json& params);

void append_log(const std::filesystem::path& out_dir, const std::string& line);

// "x,y,z" -> three doubles; throws dirpose::UsageError on malformed input.
std::array<double, 3> parse_vec3(const std::string& s);

}  // namespace dirpose::cli
