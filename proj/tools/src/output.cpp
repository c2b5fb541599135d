#include "output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace vsg::cli {

OutputDir::OutputDir(std::filesystem::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

void OutputDir::claim(const std::vector<std::string>& names) const {
  if (force_) return;
  for (const auto& n : names) {
    if (std::filesystem::exists(dir_ / n))
      throw std::runtime_error((dir_ / n).string() + " exists; pass --force to overwrite");
  }
}

namespace {

std::ofstream open(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

}  // namespace

void OutputDir::write_json(const std::string& name, const nlohmann::json& j) const {
  claim({name});
  open(dir_, name) << j.dump(2) << "\n";
}

void OutputDir::write_text(const std::string& name, const std::string& text) const {
  claim({name});
  open(dir_, name) << text;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void OutputDir::write_trajectory(const std::string& name, const Trajectory& traj) const {
  std::ostringstream os;
  os << "t";
  for (std::size_t i = 0; i < traj.dim(); ++i) os << ",x" << i + 1;
  os << "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << csv_number(traj.times[k]);
    for (double v : traj.states[k]) os << "," << csv_number(v);
    os << "\n";
  }
  write_text(name, os.str());
}

void OutputDir::write_times(const std::string& name, const std::vector<double>& times) const {
  std::ostringstream os;
  os << "i,tau\n";
  for (std::size_t k = 0; k < times.size(); ++k) os << k << "," << csv_number(times[k]) << "\n";
  write_text(name, os.str());
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace vsg::cli
