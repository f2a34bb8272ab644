#include "common.hpp"

#include <chrono>
#include <fstream>

#include "dirpose/errors.hpp"

namespace dirpose::cli {

void write_run_metadata(const std::filesystem::path& out_dir,
                        const std::string& command,
                        const nlohmann::json& params) {
  std::filesystem::create_directories(out_dir);
  nlohmann::json j{
      {"tool", "dirpose"}, {"version", kVersion}, {"command", command},
      {"params", params}};
  std::ofstream out(out_dir / "run_meta.json", std::ios::binary);
  out << j.dump(2) << "\n";
}

void append_log(const std::filesystem::path& out_dir, const std::string& line) {
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / "run.log", std::ios::app);
  auto now = std::chrono::system_clock::now();
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                  now.time_since_epoch())
                  .count();
  out << "[" << secs << "] " << line << "\n";
}

std::array<double, 3> parse_vec3(const std::string& s) {
  std::array<double, 3> v{};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t next = i < 2 ? s.find(',', pos) : s.size();
    if (next == std::string::npos) {
      throw UsageError("expected three comma-separated numbers: " + s);
    }
    try {
      v[i] = std::stod(s.substr(pos, next - pos));
    } catch (const std::exception&) {
      throw UsageError("expected three comma-separated numbers: " + s);
    }
    pos = next + 1;
  }
  return v;
}

}  // namespace dirpose::cli
