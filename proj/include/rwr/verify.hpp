#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwr/stats.hpp"

namespace rwr::verify {

inline constexpr std::uint64_t kDefaultSeed = 7;

struct CheckInfo {
  std::string name;
  int criterion;
  std::string summary;
};

/// Registered checks in criterion order.
const std::vector<CheckInfo>& checks();
bool has_check(const std::string& name);

struct Options {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

/// Runs one named check at its registered parameters. Throws UsageError for
/// unknown names.
std::vector<MCReport> run_check(const std::string& name, const Options& options = {});

bool all_pass(const std::vector<MCReport>& reports);

}  // namespace rwr::verify
