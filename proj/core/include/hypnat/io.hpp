#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hypnat/boundary.hpp"
#include "hypnat/kernel_profile.hpp"
#include "hypnat/measures.hpp"

namespace hypnat {

/// Full-precision decimal formatting (%.17g): doubles survive a round-trip
/// and artifact bytes are reproducible.
std::string format_double(double v);

/// Row-oriented CSV writer with a fixed header.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  void row_numbers(const std::vector<double>& cells);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

void write_counting_csv(const std::filesystem::path& path, const GroupBall& ball,
                        double grid_step);
void write_ball_csv(const std::filesystem::path& path, const GroupBall& ball);
void write_measure_csv(const std::filesystem::path& path, const AtomicMeasure& mu);
AtomicMeasure read_measure_csv(const std::filesystem::path& path);
void write_profile_csv(const std::filesystem::path& path,
                       const VisualKernelProfile& profile);
VisualKernelProfile read_profile_csv(const std::filesystem::path& path, int dim_n);
void write_trace_csv(const std::filesystem::path& path, const CTEval& eval);

/// Sampler CSV: ball coordinates then a weight per row.
std::vector<std::pair<HPoint, double>> read_sampler_csv(
    const std::filesystem::path& path, int dim);

/// Profile cache under $PSNAT_CACHE (no caching when unset).
VisualKernelProfile cached_profile(int dim_n, int samples);

}  // namespace hypnat
