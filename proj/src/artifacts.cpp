#include "hrc/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "hrc/spec_io.hpp"

namespace hrc::artifacts {

using nlohmann::ordered_json;

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string baseline_csv(const kpi::Baseline& baseline) {
    std::ostringstream out;
    out << "sample,cycle_time,ergonomics,inv_manipulability,surface,"
           "cycle_time_n,ergonomics_n,inv_manipulability_n,surface_n,safety\n";
    for (size_t i = 0; i < baseline.rows.size(); ++i) {
        const auto& k = baseline.rows[i].kpi;
        out << i + 1;
        for (int c = 0; c < 4; ++c) out << ',' << fmt(k.raw[c]);
        for (int c = 0; c < 4; ++c) out << ',' << fmt(k.normalized[c]);
        out << ',' << (k.safety ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string evaluations_csv(const std::vector<ga::EvalRecord>& log) {
    std::ostringstream out;
    out << "evaluation,iteration,phase,fitness,makespan,"
           "cycle_time,ergonomics,inv_manipulability,surface,"
           "cycle_time_n,ergonomics_n,inv_manipulability_n,surface_n,safety\n";
    for (size_t i = 0; i < log.size(); ++i) {
        const auto& e = log[i];
        out << i + 1 << ',' << e.iteration << ',' << (e.parent ? "parent" : "child") << ','
            << fmt(e.fitness) << ',' << fmt(e.makespan);
        for (int c = 0; c < 4; ++c) out << ',' << fmt(e.kpi.raw[c]);
        for (int c = 0; c < 4; ++c) out << ',' << fmt(e.kpi.normalized[c]);
        out << ',' << (e.kpi.safety ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string history_csv(const std::vector<ga::HistoryRow>& history) {
    std::ostringstream out;
    out << "iteration,best_fitness,mean_fitness,mu,sigma\n";
    for (const auto& h : history)
        out << h.iteration << ',' << fmt(h.best_fitness) << ',' << fmt(h.mean_fitness) << ','
            << fmt(h.mu) << ',' << fmt(h.sigma) << '\n';
    return out.str();
}

std::string gantt_csv(const sched::GanttTable& table, const model::WorkcellSpec& spec) {
    std::ostringstream out;
    out << "agent,operation,start_s,end_s\n";
    for (size_t a = 0; a < table.rows.size(); ++a)
        for (const auto& bar : table.rows[a])
            out << spec.agents[a].name << ',' << spec.operations[bar.op].name << ','
                << fmt(bar.start) << ',' << fmt(bar.end) << '\n';
    return out.str();
}

std::string trace_csv(const model::WorkcellSpec& spec, const model::Chromosome& x,
                      const sched::Schedule& schedule,
                      const std::vector<sim::MotionTrace>& traces) {
    std::ostringstream out;
    out << "time_s,actor,operation,x,y,q1,q2\n";
    const double dt = spec.surrogate.dt;
    for (const model::Operation& op : spec.operations) {
        const sim::MotionTrace& trace = traces[op.id];
        const long k_max = static_cast<long>(std::floor(trace.tau / dt + 1e-9));
        for (AgentId a : x.allocation[op.id]) {
            const model::Agent& agent = spec.agents[a];
            for (long k = 0; k <= k_max; ++k) {
                const double t = k * dt;
                const auto p = trace.position(a, t);
                if (!p) continue;
                double q1 = 0.0, q2 = 0.0;
                if (agent.kind == model::AgentKind::Robot) {
                    const auto q = sim::planar_ik(*p - agent.base, agent.l1, agent.l2);
                    q1 = q.q1;
                    q2 = q.q2;
                }
                out << fmt(schedule.sigma[op.id] + t) << ',' << agent.name << ',' << op.name << ','
                    << fmt(p->x) << ',' << fmt(p->y) << ',' << fmt(q1) << ',' << fmt(q2) << '\n';
            }
        }
    }
    return out.str();
}

namespace {

const char* kBarColors[] = {"#4a90d9", "#d97f4a", "#5fae62", "#b36ae2", "#c9b52a", "#666666"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string gantt_svg(const sched::GanttTable& table, const model::WorkcellSpec& spec) {
    double makespan = 0.0;
    for (const auto& row : table.rows)
        for (const auto& bar : row) makespan = std::max(makespan, bar.end);
    if (makespan <= 0.0) makespan = 1.0;

    const int rows = static_cast<int>(table.rows.size());
    const double row_h = 40.0, label_w = 110.0, plot_w = 720.0, top = 30.0;
    const double width = label_w + plot_w + 20.0;
    const double height = top + rows * row_h + 30.0;
    const double sx = plot_w / makespan;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int a = 0; a < rows; ++a) {
        const double y = top + a * row_h;
        svg << "<text x=\"8\" y=\"" << fmt(y + row_h * 0.62) << "\" font-family=\"sans-serif\" "
            << "font-size=\"13\">" << xml_escape(spec.agents[a].name) << "</text>\n";
        svg << "<line x1=\"" << fmt(label_w) << "\" y1=\"" << fmt(y + row_h) << "\" x2=\""
            << fmt(label_w + plot_w) << "\" y2=\"" << fmt(y + row_h)
            << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
        for (const auto& bar : table.rows[a]) {
            const double bx = label_w + bar.start * sx;
            const double bw = std::max((bar.end - bar.start) * sx, 1.0);
            const char* color = kBarColors[bar.op % 6];
            svg << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(y + 6) << "\" width=\"" << fmt(bw)
                << "\" height=\"" << fmt(row_h - 12) << "\" fill=\"" << color
                << "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
            svg << "<text x=\"" << fmt(bx + bw / 2) << "\" y=\"" << fmt(y + row_h * 0.62)
                << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
                << xml_escape(spec.operations[bar.op].name) << "</text>\n";
        }
    }
    svg << "<text x=\"" << fmt(label_w) << "\" y=\"" << fmt(height - 8)
        << "\" font-family=\"sans-serif\" font-size=\"11\">0 s</text>\n";
    svg << "<text x=\"" << fmt(label_w + plot_w) << "\" y=\"" << fmt(height - 8)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(makespan)
        << " s</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string layout_svg(const model::WorkcellSpec& spec, const model::Chromosome& x) {
    // World extent: bounds, agent annuli and fixed footprints.
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    auto grow = [&](double px, double py) {
        min_x = std::min(min_x, px);
        min_y = std::min(min_y, py);
        max_x = std::max(max_x, px);
        max_y = std::max(max_y, py);
    };
    for (const auto& a : spec.agents) {
        grow(a.base.x - a.d_max, a.base.y - a.d_max);
        grow(a.base.x + a.d_max, a.base.y + a.d_max);
    }
    for (const auto& r : spec.resources) {
        const Vec2 c = model::resource_position(spec, r.id, x);
        for (const auto& v : r.footprint) grow(c.x + v.x, c.y + v.y);
    }
    const double margin = 0.04 * std::max(max_x - min_x, max_y - min_y);
    min_x -= margin;
    min_y -= margin;
    max_x += margin;
    max_y += margin;

    const double width = 760.0;
    const double scale = width / (max_x - min_x);
    const double height = (max_y - min_y) * scale;
    auto X = [&](double wx) { return (wx - min_x) * scale; };
    auto Y = [&](double wy) { return height - (wy - min_y) * scale; };  // y up

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const auto& a : spec.agents) {
        const bool robot = a.kind == model::AgentKind::Robot;
        const char* color = robot ? "#d9534f" : "#2a6fb0";
        for (double radius : {a.d_min, a.d_max})
            svg << "<circle cx=\"" << fmt(X(a.base.x)) << "\" cy=\"" << fmt(Y(a.base.y))
                << "\" r=\"" << fmt(radius * scale) << "\" fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
        svg << "<circle cx=\"" << fmt(X(a.base.x)) << "\" cy=\"" << fmt(Y(a.base.y))
            << "\" r=\"6\" fill=\"" << color << "\"/>\n"
            << "<text x=\"" << fmt(X(a.base.x) + 9) << "\" y=\"" << fmt(Y(a.base.y) - 6)
            << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"" << color << "\">"
            << xml_escape(a.name) << "</text>\n";
    }

    for (const auto& r : spec.resources) {
        const Vec2 c = model::resource_position(spec, r.id, x);
        svg << "<polygon points=\"";
        for (const auto& v : r.footprint) svg << fmt(X(c.x + v.x)) << ',' << fmt(Y(c.y + v.y)) << ' ';
        svg << "\" fill=\"" << (r.movable ? "#a8d5a2" : "#c0c0c0")
            << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << fmt(X(c.x)) << "\" y=\"" << fmt(Y(c.y) + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
            << xml_escape(r.name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string baseline_stats_json(const kpi::BaselineStats& stats, const std::string& spec_name) {
    ordered_json j;
    j["schema_version"] = 1;
    j["spec"] = spec_name;
    j["sample_count"] = stats.sample_count;
    j["seed"] = stats.seed;
    j["components"] = kpi::kComponentNames;
    j["mean"] = stats.mean;
    j["stddev"] = stats.stddev;
    j["stddev_kind"] = "sample";  // n-1 denominator
    return j.dump(2) + "\n";
}

kpi::BaselineStats load_baseline_stats(const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(io::read_file(path));
        if (j.value("schema_version", 1) != 1)
            throw Error(ErrorCode::UnsupportedSchema, path + ": unsupported schema_version");
        kpi::BaselineStats stats;
        stats.sample_count = j.at("sample_count").get<int>();
        stats.seed = j.at("seed").get<uint64_t>();
        for (int i = 0; i < 4; ++i) {
            stats.mean[i] = j.at("mean")[i].get<double>();
            stats.stddev[i] = j.at("stddev")[i].get<double>();
            if (!(stats.stddev[i] > 0.0))
                throw Error(ErrorCode::DegenerateKpi, path + ": non-positive stddev");
        }
        return stats;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

std::string manifest_json(const ManifestInfo& info, const model::GaParams& params) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = "hrcopt";
    j["version"] = kToolVersion;
    j["command"] = info.command;
    j["spec_path"] = info.spec_path;
    j["spec_sha256"] = info.spec_sha256;
    j["seed"] = info.seed;
    j["started_utc"] = info.started_utc;
    j["finished_utc"] = info.finished_utc;
    j["ga"] = {{"n_p", params.n_p},   {"n_c", params.n_c},       {"n_it", params.n_it},
               {"mu0", params.mu0},   {"sigma0", params.sigma0}, {"beta", params.beta},
               {"weights", params.weights}};
    ordered_json outputs;
    for (const auto& [label, path] : info.outputs) outputs[label] = path;
    j["outputs"] = outputs;
    for (const auto& [key, value] : info.extra) j[key] = value;
    return j.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace hrc::artifacts
