#pragma once

#include <string>
#include <vector>

#include "hrc/evolve.hpp"
#include "hrc/kpi.hpp"
#include "hrc/model.hpp"
#include "hrc/scheduler.hpp"
#include "hrc/surrogate.hpp"

namespace hrc::artifacts {

// Stable decimal formatting for CSV cells (dot decimal, 9 significant
// digits, "inf" for the safety sentinel).
std::string fmt(double v);

std::string baseline_csv(const kpi::Baseline& baseline);
std::string evaluations_csv(const std::vector<ga::EvalRecord>& log);
std::string history_csv(const std::vector<ga::HistoryRow>& history);
std::string gantt_csv(const sched::GanttTable& table, const model::WorkcellSpec& spec);
std::string trace_csv(const model::WorkcellSpec& spec, const model::Chromosome& x,
                      const sched::Schedule& schedule, const std::vector<sim::MotionTrace>& traces);

std::string gantt_svg(const sched::GanttTable& table, const model::WorkcellSpec& spec);
std::string layout_svg(const model::WorkcellSpec& spec, const model::Chromosome& x);

std::string baseline_stats_json(const kpi::BaselineStats& stats, const std::string& spec_name);
kpi::BaselineStats load_baseline_stats(const std::string& path);

struct ManifestInfo {
    std::string command;
    std::string spec_path;
    std::string spec_sha256;
    uint64_t seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::pair<std::string, std::string>> outputs;  // label -> path
    std::vector<std::pair<std::string, std::string>> extra;    // free-form fields
};

std::string manifest_json(const ManifestInfo& info, const model::GaParams& params);

std::string sha256_hex(const std::string& bytes);
std::string utc_timestamp();

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace hrc::artifacts
