#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsg/simulation.hpp"

namespace vsg::cli {

/// Output directory that refuses to replace existing files unless forced.
class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, bool force);

  /// Fails before anything is written if one of `names` already exists.
  void claim(const std::vector<std::string>& names) const;

  void write_json(const std::string& name, const nlohmann::json& j) const;
  void write_text(const std::string& name, const std::string& text) const;
  void write_trajectory(const std::string& name, const Trajectory& traj) const;
  void write_times(const std::string& name, const std::vector<double>& times) const;
  [[nodiscard]] const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
  bool force_;
};

std::string csv_number(double v);
std::string utc_now();

}  // namespace vsg::cli
