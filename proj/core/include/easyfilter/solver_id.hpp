#pragma once

#include <array>
#include <string>
#include <string_view>

namespace easyfilter {

enum class SolverId { kCmaEs = 0, kDe = 1, kPso = 2 };

/// Fixed portfolio order; also the tie-break order everywhere.
inline constexpr std::array<SolverId, 3> kPortfolio = {SolverId::kCmaEs, SolverId::kDe, SolverId::kPso};

constexpr int population_of(SolverId s) noexcept {
  switch (s) {
    case SolverId::kCmaEs: return 10;
    case SolverId::kDe: return 30;
    case SolverId::kPso: return 40;
  }
  return 0;
}

constexpr int index_of(SolverId s) noexcept { return static_cast<int>(s); }

constexpr std::string_view name_of(SolverId s) noexcept {
  switch (s) {
    case SolverId::kCmaEs: return "cmaes";
    case SolverId::kDe: return "de";
    case SolverId::kPso: return "pso";
  }
  return "?";
}

/// Accepts the short names above; throws ConfigError otherwise.
SolverId parse_solver(std::string_view name);

}  // namespace easyfilter
