#include "fourpow/experiments.hpp"

#include "fourpow/detmethod.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fourpow {

namespace {

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string describe(const ScalingConfig& c) {
    std::ostringstream os;
    switch (c.kind) {
        case StudyKind::Count4: os << "count"; break;
        case StudyKind::R0Ternary: os << "r0"; break;
        case StudyKind::RkSweep: os << "rk"; break;
    }
    os << " k=" << c.k;
    if (c.kind != StudyKind::RkSweep) {
        os << " a=(";
        for (size_t i = 0; i < c.coeffs.size(); ++i)
            os << (i ? "," : "") << c.coeffs[i].get_str();
        os << ") " << (c.kind == StudyKind::Count4 ? "N=" : "M=") << c.N.get_str();
        if (c.kind == StudyKind::Count4)
            os << " region=" << (c.region == Region::Signed ? "signed" : "nonneg");
    }
    return os.str();
}

// Which column the attached exponent bounds (and the fit uses).
std::uint64_t fit_value(StudyKind kind, const ScalingRow& r) {
    return kind == StudyKind::RkSweep ? r.total : r.nonspecial;
}

}  // namespace

std::optional<double> fit_loglog_slope(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    double var = sxx - sx * sx / n;
    if (var == 0) return std::nullopt;
    return (sxy - sx * sy / n) / var;
}

ScalingReport scaling_study(const ScalingConfig& config) {
    if (config.ladder.empty())
        throw std::invalid_argument("scaling_study: empty ladder");

    std::vector<std::int64_t> ladder = config.ladder;
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

    ScalingReport rep;
    rep.instance = describe(config);

    switch (config.kind) {
        case StudyKind::Count4: {
            double em = exponent_main(config.k);
            rep.theoretical_exponent = std::min(em, 2.0);  // trivial 2+eps below k=8
            break;
        }
        case StudyKind::R0Ternary:
            rep.theoretical_exponent = 2.0 / std::sqrt(static_cast<double>(config.k));
            break;
        case StudyKind::RkSweep:
            rep.theoretical_exponent =
                1.0 / config.k + 2.0 / std::pow(static_cast<double>(config.k), 1.5);
            break;
    }

    EnumerateOptions opts;
    opts.threads = config.threads;
    opts.mem_budget_bytes = config.mem_budget_bytes;

    double elapsed_s = 0;
    for (std::int64_t v : ladder) {
        if (elapsed_s > config.time_budget_s) {
            rep.complete = false;
            break;
        }
        auto t0 = std::chrono::steady_clock::now();
        ScalingRow row;
        row.B = v;
        switch (config.kind) {
            case StudyKind::Count4: {
                DiagonalForm form(config.k, config.coeffs);
                auto cs = count_representations(form, config.N, {v, config.region}, opts);
                row.total = cs.total;
                row.special = cs.special;
                row.nonspecial = cs.nonspecial;
                break;
            }
            case StudyKind::R0Ternary: {
                DiagonalForm form(config.k, config.coeffs);
                auto split = count_ternary_split(form, config.N, v);
                row.total = split.total;
                row.special = split.excluded;
                row.nonspecial = split.r0();
                break;
            }
            case StudyKind::RkSweep: {
                DiagonalForm form(config.k, {1, 1, 1, 1});
                BigInt n(static_cast<long>(v));
                std::int64_t B = kth_root_floor(n, config.k).get_si();
                auto cs = count_representations(form, n, {B, Region::NonNegative}, opts);
                row.total = cs.total;
                row.special = cs.special;
                row.nonspecial = cs.nonspecial;
                break;
            }
        }
        auto t1 = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        elapsed_s += ms / 1000.0;
        row.runtime_ms = config.measure_time ? ms : 0.0;
        if (config.on_row) config.on_row(row);
        rep.rows.push_back(row);
    }

    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rep.rows) {
        std::uint64_t y = fit_value(config.kind, r);
        if (y > 0)
            pts.emplace_back(std::log2(static_cast<double>(r.B)),
                             std::log2(static_cast<double>(y)));
    }
    rep.fitted_slope = fit_loglog_slope(pts);

    if (config.kind == StudyKind::RkSweep) {
        double best = 0;
        bool any = false;
        for (const auto& r : rep.rows) {
            double denom = std::pow(static_cast<double>(r.B), rep.theoretical_exponent);
            if (denom > 0) {
                best = std::max(best, static_cast<double>(r.total) / denom);
                any = true;
            }
        }
        if (any) rep.max_ratio = best;
    }
    return rep;
}

std::string to_csv(const ScalingReport& report) {
    std::ostringstream os;
    os << "B,total,special,nonspecial,runtime_ms\n";
    for (const auto& r : report.rows)
        os << r.B << "," << r.total << "," << r.special << "," << r.nonspecial << ","
           << fmt_full(r.runtime_ms) << "\n";
    return os.str();
}

std::string to_json_string(const ScalingReport& report) {
    nlohmann::ordered_json j;
    j["instance"] = report.instance;
    j["theoretical_exponent"] = report.theoretical_exponent;
    if (report.fitted_slope)
        j["fitted_slope"] = *report.fitted_slope;
    else
        j["fitted_slope"] = nullptr;
    if (report.max_ratio)
        j["max_ratio"] = *report.max_ratio;
    else
        j["max_ratio"] = nullptr;
    j["complete"] = report.complete;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["B"] = r.B;
        row["total"] = r.total;
        row["special"] = r.special;
        row["nonspecial"] = r.nonspecial;
        row["runtime_ms"] = r.runtime_ms;
        j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
}

ScalingReport report_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ScalingReport rep;
    rep.instance = j.at("instance").get<std::string>();
    rep.theoretical_exponent = j.at("theoretical_exponent").get<double>();
    if (!j.at("fitted_slope").is_null()) rep.fitted_slope = j["fitted_slope"].get<double>();
    if (!j.at("max_ratio").is_null()) rep.max_ratio = j["max_ratio"].get<double>();
    rep.complete = j.at("complete").get<bool>();
    for (const auto& row : j.at("rows")) {
        ScalingRow r;
        r.B = row.at("B").get<std::int64_t>();
        r.total = row.at("total").get<std::uint64_t>();
        r.special = row.at("special").get<std::uint64_t>();
        r.nonspecial = row.at("nonspecial").get<std::uint64_t>();
        r.runtime_ms = row.at("runtime_ms").get<double>();
        rep.rows.push_back(r);
    }
    return rep;
}

namespace {

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string to_svg(const ScalingReport& report) {
    // log-log scatter of the fitted column with the fitted line and the
    // theoretical-exponent line
    const double W = 640, Hh = 480, mL = 60, mR = 20, mT = 20, mB = 40;

    std::vector<std::pair<double, double>> pts;
    for (const auto& r : report.rows) {
        std::uint64_t y = r.nonspecial > 0 ? r.nonspecial : r.total;
        if (r.B > 0 && y > 0)
            pts.emplace_back(std::log2(static_cast<double>(r.B)),
                             std::log2(static_cast<double>(y)));
    }

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!pts.empty()) {
        x0 = x1 = pts[0].first;
        y0 = y1 = pts[0].second;
        for (auto [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        if (x1 == x0) x1 = x0 + 1;
        if (y1 == y0) y1 = y0 + 1;
    }
    auto px = [&](double x) { return mL + (x - x0) / (x1 - x0) * (W - mL - mR); };
    auto py = [&](double y) { return Hh - mB - (y - y0) / (y1 - y0) * (Hh - mT - mB); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh
       << "\">\n";
    os << "  <rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << Hh
       << "\" fill=\"white\" stroke=\"black\"/>\n";
    os << "  <text x=\"10\" y=\"15\" font-size=\"12\">" << report.instance
       << " (log2-log2)</text>\n";

    for (auto [x, y] : pts)
        os << "  <circle cx=\"" << fmt_coord(px(x)) << "\" cy=\"" << fmt_coord(py(y))
           << "\" r=\"3\" fill=\"black\"/>\n";

    // fitted line through the mean point; falls back to the theoretical slope
    // when no fit exists so the two-line layout is stable
    double mx = (x0 + x1) / 2, my = (y0 + y1) / 2;
    double slope_fit = report.fitted_slope.value_or(report.theoretical_exponent);
    auto line = [&](double slope, const char* color) {
        double ya = my + slope * (x0 - mx), yb = my + slope * (x1 - mx);
        os << "  <polyline fill=\"none\" stroke=\"" << color << "\" points=\""
           << fmt_coord(px(x0)) << "," << fmt_coord(py(ya)) << " " << fmt_coord(px(x1)) << ","
           << fmt_coord(py(yb)) << "\"/>\n";
    };
    line(slope_fit, "blue");
    line(report.theoretical_exponent, "red");

    os << "  <text x=\"10\" y=\"" << Hh - 10 << "\" font-size=\"12\">fitted slope: "
       << (report.fitted_slope ? fmt_full(*report.fitted_slope) : std::string("n/a"))
       << ", theoretical exponent: " << fmt_full(report.theoretical_exponent) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

void emit(const ScalingReport& report, EmitFormat format, const std::string& path) {
    std::string body;
    switch (format) {
        case EmitFormat::Csv: body = to_csv(report); break;
        case EmitFormat::Json: body = to_json_string(report); break;
        case EmitFormat::Svg: body = to_svg(report); break;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open " + path);
    out << body;
    if (!out) throw std::runtime_error("emit: write failed for " + path);
}

}  // namespace fourpow
