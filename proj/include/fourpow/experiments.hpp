#pragma once

// Scaling studies: dyadic ladders of exact counts against the closed-form
// exponents, with CSV / JSON / SVG reports.

#include "fourpow/enumerate.hpp"

#include <functional>
#include <optional>
#include <string>

namespace fourpow {

struct ScalingRow {
    std::int64_t B = 0;  // ladder coordinate (box radius, or N for the Rk sweep)
    std::uint64_t total = 0;
    std::uint64_t special = 0;
    std::uint64_t nonspecial = 0;
    double runtime_ms = 0;

    friend bool operator==(const ScalingRow&, const ScalingRow&) = default;
};

enum class StudyKind {
    Count4,   // quaternary box counts R(N,B) over a B ladder
    R0Ternary,  // ternary r_0(M,B) over a B ladder
    RkSweep,  // R_k(N) over an N ladder; max ratio to N^{1/k + 2/k^{3/2}}
};

struct ScalingConfig {
    StudyKind kind = StudyKind::Count4;
    int k = 3;
    std::vector<BigInt> coeffs;  // 4 for Count4, 3 for R0Ternary, unused for RkSweep
    BigInt N;                    // N (Count4) or M (R0Ternary); unused for RkSweep
    Region region = Region::Signed;
    std::vector<std::int64_t> ladder;  // B values, or N values for RkSweep
    int threads = 1;
    bool measure_time = true;  // off: runtime_ms = 0 for reproducible output
    std::uint64_t mem_budget_bytes = 4ull << 30;
    double time_budget_s = 300.0;
    std::function<void(const ScalingRow&)> on_row;  // progress hook, optional
};

struct ScalingReport {
    std::string instance;  // config echo
    double theoretical_exponent = 0;
    std::optional<double> fitted_slope;  // needs >= 3 rows with positive counts
    std::optional<double> max_ratio;     // RkSweep only
    bool complete = true;
    std::vector<ScalingRow> rows;

    friend bool operator==(const ScalingReport&, const ScalingReport&) = default;
};

// Runs the configured counts over the ladder, fits the log-log slope on the
// column the matching closed-form exponent bounds, and attaches that
// exponent.
ScalingReport scaling_study(const ScalingConfig& config);

// Least-squares slope of log2(count) against log2(x), zero counts excluded;
// empty when fewer than 3 positive points remain.
std::optional<double> fit_loglog_slope(const std::vector<std::pair<double, double>>& pts);

enum class EmitFormat { Csv, Json, Svg };

std::string to_csv(const ScalingReport& report);
std::string to_json_string(const ScalingReport& report);
ScalingReport report_from_json(const std::string& text);
std::string to_svg(const ScalingReport& report);

// Writes the chosen format to path; throws std::runtime_error on I/O failure.
void emit(const ScalingReport& report, EmitFormat format, const std::string& path);

}  // namespace fourpow
