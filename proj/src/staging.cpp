#include "wmlp/staging.hpp"

#include <algorithm>
#include <string>
#include <system_error>
#include <vector>

#include <unistd.h>

namespace wmlp {

namespace fs = std::filesystem;

StagedOutput::StagedOutput(fs::path target) : target_(std::move(target)) {
  const fs::path parent = target_.has_parent_path() ? target_.parent_path() : fs::path(".");
  fs::create_directories(parent);
  stage_ = parent / ("." + target_.filename().string() + ".staging-" + std::to_string(::getpid()));
  fs::remove_all(stage_);
  fs::create_directories(stage_);
}

StagedOutput::~StagedOutput() {
  std::error_code ec;
  fs::remove_all(stage_, ec);
}

void StagedOutput::commit() {
  fs::create_directories(target_);
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(stage_)) entries.push_back(e.path());
  std::sort(entries.begin(), entries.end());
  for (const auto& src : entries) {
    const fs::path dst = target_ / src.filename();
    if (fs::is_directory(src) && fs::is_directory(dst)) {
      // Merge directories entry by entry.
      for (const auto& inner : fs::directory_iterator(src)) {
        const fs::path inner_dst = dst / inner.path().filename();
        fs::remove_all(inner_dst);
        fs::rename(inner.path(), inner_dst);
      }
    } else {
      fs::remove_all(dst);
      fs::rename(src, dst);
    }
  }
  committed_ = true;
}

}  // namespace wmlp
