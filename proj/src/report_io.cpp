#include "torustat/report_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace torustat {

namespace {

Method method_from_name(const std::string& name) {
    if (name == "sacc") return Method::Sacc;
    if (name == "cvmc") return Method::Cvmc;
    if (name == "sagc") return Method::Sagc;
    throw data_error("unknown method '" + name + "'");
}

std::string node_status_name(NodeStatus s) {
    switch (s) {
    case NodeStatus::Tested: return "tested";
    case NodeStatus::TooShort: return "too_short";
    case NodeStatus::Degenerate: return "degenerate";
    }
    return "?";
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

std::string p_value_text(double p, bool below_resolution, std::size_t replicates) {
    std::string s = fmt(p, 4);
    if (below_resolution) {
        s += " (< 1/" + std::to_string(replicates + 1) + ")";
    }
    return s;
}

} // namespace

AngleSeries load_angles(const IngestSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) {
        throw data_error("cannot open input file: " + spec.path.string());
    }
    std::vector<double> values;
    std::vector<std::size_t> bad_lines;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // tolerate blank lines and a trailing carriage return
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string field = line;
        if (spec.column) {
            std::size_t col = 1;
            std::size_t start = 0;
            field.clear();
            while (true) {
                const std::size_t end = line.find(spec.delimiter, start);
                const std::string piece = line.substr(start, end == std::string::npos
                                                                 ? std::string::npos
                                                                 : end - start);
                if (col == *spec.column) {
                    field = piece;
                    break;
                }
                if (end == std::string::npos) break;
                start = end + 1;
                ++col;
            }
        }
        const auto first = field.find_first_not_of(" \t");
        if (first == std::string::npos) continue; // blank
        const auto last = field.find_last_not_of(" \t");
        field = field.substr(first, last - first + 1);

        try {
            std::size_t pos = 0;
            const double raw = std::stod(field, &pos);
            if (pos != field.size() || !std::isfinite(raw)) {
                bad_lines.push_back(lineno);
                continue;
            }
            const double rad = spec.unit == AngleUnit::Degrees ? deg_to_rad(raw) : raw;
            values.push_back(mod2pi(rad)); // both range conventions reduce the same way
        } catch (const std::exception&) {
            bad_lines.push_back(lineno);
        }
    }
    if (!bad_lines.empty()) {
        std::ostringstream os;
        os << "non-numeric rows in " << spec.path.string() << " at line";
        os << (bad_lines.size() > 1 ? "s" : "");
        for (std::size_t i = 0; i < bad_lines.size() && i < 20; ++i) os << ' ' << bad_lines[i];
        if (bad_lines.size() > 20) os << " ...";
        throw data_error(os.str());
    }
    if (values.empty()) {
        throw data_error("no angle values in " + spec.path.string());
    }
    return AngleSeries(std::move(values));
}

nlohmann::json to_json(const TestReport& r) {
    return nlohmann::json{{"kind", "test_report"},
                          {"method", method_name(r.method)},
                          {"n", r.n},
                          {"alpha", r.alpha},
                          {"statistic", r.statistic},
                          {"changepoint_index", r.changepoint_index},
                          {"cutoff", r.cutoff},
                          {"p_value", r.p_value},
                          {"p_below_resolution", r.p_below_resolution},
                          {"reject", r.reject},
                          {"calibration", r.calibration},
                          {"calibration_replicates", r.calibration_replicates}};
}

TestReport test_report_from_json(const nlohmann::json& j) {
    try {
        TestReport r;
        r.method = method_from_name(j.at("method").get<std::string>());
        r.n = j.at("n").get<std::size_t>();
        r.alpha = j.at("alpha").get<double>();
        r.statistic = j.at("statistic").get<double>();
        r.changepoint_index = j.at("changepoint_index").get<std::size_t>();
        r.cutoff = j.at("cutoff").get<double>();
        r.p_value = j.at("p_value").get<double>();
        r.p_below_resolution = j.at("p_below_resolution").get<bool>();
        r.reject = j.at("reject").get<bool>();
        r.calibration = j.at("calibration").get<std::string>();
        r.calibration_replicates = j.at("calibration_replicates").get<std::size_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("malformed test report JSON: ") + e.what());
    }
}

namespace {

nlohmann::json segments_json(const SegmentTree& tree) {
    nlohmann::json segments = nlohmann::json::array();
    for (const SegmentNode* node : tree.preorder()) {
        nlohmann::json s{{"range", {node->lo, node->hi}},
                         {"status", node_status_name(node->status)}};
        if (node->report) {
            s["estimated_changepoint"] = node->lo - 1 + node->report->changepoint_index;
            s["statistic"] = node->report->statistic;
            s["cutoff"] = node->report->cutoff;
            s["p_value"] = node->report->p_value;
            s["p_below_resolution"] = node->report->p_below_resolution;
            s["reject"] = node->report->reject;
        }
        segments.push_back(std::move(s));
    }
    return segments;
}

nlohmann::json leaves_json(const SegmentTree& tree) {
    nlohmann::json leaves = nlohmann::json::array();
    for (const SegmentRow& row : segment_report(tree)) {
        nlohmann::json l{{"range", {row.lo, row.hi}}};
        if (row.mean_rad) {
            l["mean_rad"] = *row.mean_rad;
            l["mean_deg"] = *row.mean_deg;
        } else {
            l["mean_rad"] = nullptr;
            l["mean_deg"] = nullptr;
        }
        if (row.concentration && std::isfinite(*row.concentration)) {
            l["concentration"] = *row.concentration;
        } else {
            l["concentration"] = nullptr;
        }
        leaves.push_back(std::move(l));
    }
    return leaves;
}

} // namespace

nlohmann::json to_json(const SegmentTree& tree) {
    nlohmann::json j{{"kind", "segmentation"},
                     {"method", method_name(tree.config.method)},
                     {"n", tree.n},
                     {"alpha", tree.config.alpha},
                     {"min_segment_length", tree.config.min_segment_length},
                     {"calibration_replicates", tree.config.calibration_replicates},
                     {"calibration_seed", tree.config.calibration_seed},
                     {"concentration_measure",
                      tree.config.concentration_measure == ConcentrationMeasure::MeanResultantLength
                          ? "rbar"
                          : "kappa"},
                     {"changepoints", tree.changepoints()},
                     {"segments", segments_json(tree)},
                     {"leaves", leaves_json(tree)}};
    if (tree.config.cvmc_family) {
        j["cvmc_family"] = family_name(*tree.config.cvmc_family);
        j["cvmc_concentration"] = tree.config.cvmc_concentration.value_or(0.0);
        j["concentration_plug_in"] = tree.concentration_plugged_in;
    }
    return j;
}

std::vector<SegmentRow> segment_rows_from_json(const nlohmann::json& j) {
    try {
        std::vector<SegmentRow> rows;
        for (const auto& l : j.at("leaves")) {
            SegmentRow row;
            row.lo = l.at("range").at(0).get<std::size_t>();
            row.hi = l.at("range").at(1).get<std::size_t>();
            if (!l.at("mean_rad").is_null()) {
                row.mean_rad = l.at("mean_rad").get<double>();
                row.mean_deg = l.at("mean_deg").get<double>();
            }
            if (!l.at("concentration").is_null()) {
                row.concentration = l.at("concentration").get<double>();
            }
            rows.push_back(row);
        }
        return rows;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("malformed segmentation JSON: ") + e.what());
    }
}

std::string to_text(const TestReport& r) {
    std::ostringstream os;
    os << "method: " << method_name(r.method) << "   n: " << r.n << "   alpha: " << fmt(r.alpha, 3)
       << "\n"
       << "calibration: " << r.calibration << "\n"
       << "statistic: " << fmt(r.statistic) << "\n"
       << "estimated changepoint: " << r.changepoint_index << "\n"
       << "cutoff: " << fmt(r.cutoff) << "\n"
       << "p-value: " << p_value_text(r.p_value, r.p_below_resolution, r.calibration_replicates)
       << "\n"
       << "decision: " << (r.reject ? "reject" : "do not reject") << "\n";
    return os.str();
}

std::string to_text(const SegmentTree& tree) {
    std::ostringstream os;
    os << "method: " << method_name(tree.config.method) << "   n: " << tree.n
       << "   alpha: " << fmt(tree.config.alpha, 3) << "\n";
    if (tree.config.cvmc_family) {
        os << "family: " << family_name(*tree.config.cvmc_family)
           << "   concentration: " << fmt(tree.config.cvmc_concentration.value_or(0.0), 4)
           << (tree.concentration_plugged_in ? " (plug-in estimate)" : " (given)") << "\n";
    }
    os << "\nsegment        changepoint    p-value\n";
    for (const SegmentNode* node : tree.preorder()) {
        std::ostringstream range;
        range << node->lo << "-" << node->hi;
        os << range.str() << std::string(range.str().size() < 15 ? 15 - range.str().size() : 1, ' ');
        if (node->report) {
            std::ostringstream cp;
            cp << (node->lo - 1 + node->report->changepoint_index);
            os << cp.str() << std::string(cp.str().size() < 15 ? 15 - cp.str().size() : 1, ' ')
               << p_value_text(node->report->p_value, node->report->p_below_resolution,
                               node->report->calibration_replicates);
        } else {
            os << "-              not tested (" << node_status_name(node->status) << ")";
        }
        os << "\n";
    }
    os << "\nrange          mean rad (deg)        concentration\n";
    for (const SegmentRow& row : segment_report(tree)) {
        std::ostringstream range;
        range << row.lo << "-" << row.hi;
        os << range.str() << std::string(range.str().size() < 15 ? 15 - range.str().size() : 1, ' ');
        if (row.mean_rad) {
            std::ostringstream mean;
            mean << fmt(*row.mean_rad, 2) << " (" << fmt(*row.mean_deg, 2) << ")";
            os << mean.str() << std::string(mean.str().size() < 22 ? 22 - mean.str().size() : 1, ' ');
        } else {
            os << "undefined             ";
        }
        if (row.concentration && std::isfinite(*row.concentration)) {
            os << fmt(*row.concentration, 4);
        } else if (row.concentration) {
            os << "inf";
        } else {
            os << "undefined";
        }
        os << "\n";
    }
    return os.str();
}

std::string render_report(const TestReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) return to_json(report).dump(2) + "\n";
    return to_text(report);
}

std::string render_report(const SegmentTree& tree, ReportFormat format) {
    if (format == ReportFormat::Json) return to_json(tree).dump(2) + "\n";
    return to_text(tree);
}

} // namespace torustat
