#pragma once

#include <filesystem>

namespace wmlp {

/// Collects outputs in a hidden sibling directory and moves them into the
/// target only on commit(), so a failed command leaves the target untouched.
class StagedOutput {
 public:
  explicit StagedOutput(std::filesystem::path target);
  ~StagedOutput();

  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  const std::filesystem::path& dir() const { return stage_; }
  const std::filesystem::path& target() const { return target_; }

  /// Moves every staged entry into the target, replacing same-named entries.
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path stage_;
  bool committed_ = false;
};

}  // namespace wmlp
