#pragma once

#include <array>
#include <chrono>
#include <string_view>

namespace meshfree {

enum class Stage {
  domain_discretization,
  stencil_selection,
  weight_computation,
  matrix_assembly,
  preconditioner,
  iterative_solve,
  error_computation,
};

inline constexpr int kStageCount = 7;

/// Seconds spent in each stage of a solve.
struct TimingBreakdown {
  std::array<double, kStageCount> seconds{};

  double& operator[](Stage s) { return seconds[static_cast<int>(s)]; }
  double operator[](Stage s) const { return seconds[static_cast<int>(s)]; }
  [[nodiscard]] double total() const;
};

std::string_view stage_name(Stage s);

/// Adds the lifetime of the object to one stage.
class StageTimer {
 public:
  StageTimer(TimingBreakdown& timings, Stage stage)
      : timings_(timings), stage_(stage), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    timings_[stage_] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  TimingBreakdown& timings_;
  Stage stage_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace meshfree
