#include <cmath>
#include <sstream>

#include "bagcoins/io.hpp"
#include "json.hpp"

namespace bagcoins {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json config_json(const Provenance& p) {
    ordered_json config;
    config["command"] = p.command;
    config["score"] = p.score;
    config["k"] = p.trials;
    config["seed"] = p.seed;
    config["bins"] = p.bins;
    if (p.temperature) config["temperature"] = *p.temperature;
    return config;
}

std::string provenance_line(const char* report, const Provenance& p) {
    std::string line = std::string("# report=") + report + " command=" + p.command +
                       " score=" + p.score + " k=" + std::to_string(p.trials) +
                       " seed=" + std::to_string(p.seed) + " bins=" + std::to_string(p.bins);
    if (p.temperature) line += " temperature=" + format_number(*p.temperature);
    return line;
}

ordered_json finite_or_null(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json calibration_json(const CalibrationReport& report) {
    ordered_json out;
    out["score"] = report.score_name;
    out["total"] = report.total;
    out["ece"] = report.ece;
    ordered_json bins = ordered_json::array();
    for (const BinStat& bin : report.bins) {
        ordered_json b;
        b["index"] = bin.index;
        b["lower"] = bin.lower;
        b["upper"] = bin.upper;
        b["count"] = bin.count;
        b["empty"] = bin.empty();
        b["mean_confidence"] = bin.empty() ? ordered_json(nullptr) : ordered_json(bin.mean_confidence);
        b["accuracy"] = bin.empty() ? ordered_json(nullptr) : ordered_json(bin.accuracy);
        bins.push_back(std::move(b));
    }
    out["bins"] = std::move(bins);
    return out;
}

std::string dump(const ordered_json& doc) {
    return doc.dump(2) + "\n";
}

}  // namespace

std::string render_report(const CalibrationReport& report, ReportFormat format,
                          const Provenance& provenance) {
    if (format == ReportFormat::Json) {
        ordered_json doc;
        doc["report"] = "calibration";
        doc["config"] = config_json(provenance);
        doc.update(calibration_json(report));
        return dump(doc);
    }
    std::ostringstream out;
    out << provenance_line("calibration", provenance) << " total=" << report.total
        << " ece=" << format_number(report.ece) << '\n';
    out << "bin,lower,upper,count,mean_confidence,accuracy\n";
    for (const BinStat& bin : report.bins) {
        out << bin.index << ',' << format_number(bin.lower) << ',' << format_number(bin.upper) << ','
            << bin.count << ',';
        if (!bin.empty()) {
            out << format_number(bin.mean_confidence) << ',' << format_number(bin.accuracy);
        } else {
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

std::string render_report(const OODReport& report, ReportFormat format,
                          const Provenance& provenance) {
    if (format == ReportFormat::Json) {
        ordered_json doc;
        doc["report"] = "ood";
        doc["config"] = config_json(provenance);
        doc["score"] = report.score_name;
        doc["positive_class"] = "in-distribution";
        doc["num_positive"] = report.num_positive;
        doc["num_negative"] = report.num_negative;
        doc["auroc_raw"] = report.auroc_raw;
        doc["auroc_corrected"] = report.auroc_corrected;
        doc["inverted"] = report.inverted;
        ordered_json roc = ordered_json::array();
        for (const RocPoint& p : report.roc_points) {
            roc.push_back({{"fpr", p.fpr}, {"tpr", p.tpr}, {"threshold", finite_or_null(p.threshold)}});
        }
        doc["roc"] = std::move(roc);
        return dump(doc);
    }
    std::ostringstream out;
    out << provenance_line("ood", provenance) << " positive=in-distribution"
        << " num_positive=" << report.num_positive << " num_negative=" << report.num_negative
        << " auroc_raw=" << format_number(report.auroc_raw)
        << " auroc_corrected=" << format_number(report.auroc_corrected)
        << " inverted=" << (report.inverted ? "true" : "false") << '\n';
    out << "fpr,tpr,threshold\n";
    for (const RocPoint& p : report.roc_points) {
        out << format_number(p.fpr) << ',' << format_number(p.tpr) << ','
            << format_number(p.threshold) << '\n';
    }
    return out.str();
}

std::string render_report(std::span<const BoCResult> results, ReportFormat format,
                          const Provenance& provenance) {
    if (format == ReportFormat::Json) {
        ordered_json doc;
        doc["report"] = "probe";
        doc["config"] = config_json(provenance);
        ordered_json records = ordered_json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            const BoCResult& r = results[i];
            ordered_json rec;
            rec["index"] = i;
            rec["y_hat"] = r.top_class;
            rec["p_hat"] = r.confidence;
            rec["p_dom"] = r.p_dom;
            rec["W"] = r.wins;
            rec["k"] = r.trials;
            rec["p_val"] = r.p_val;
            rec["score"] = r.score;
            records.push_back(std::move(rec));
        }
        doc["records"] = std::move(records);
        return dump(doc);
    }
    std::ostringstream out;
    out << provenance_line("probe", provenance) << '\n';
    out << "index,y_hat,p_hat,p_dom,W,k,p_val,score\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const BoCResult& r = results[i];
        out << i << ',' << r.top_class << ',' << format_number(r.confidence) << ','
            << format_number(r.p_dom) << ',' << r.wins << ',' << r.trials << ','
            << format_number(r.p_val) << ',' << format_number(r.score) << '\n';
    }
    return out.str();
}

std::string render_reliability_table(const CalibrationReport& msp, const CalibrationReport& boc,
                                     ReportFormat format, const Provenance& provenance) {
    if (msp.bins.size() != boc.bins.size()) {
        throw Error(ErrorCode::ShapeMismatch, "reliability tables use different bin counts");
    }
    if (format == ReportFormat::Json) {
        ordered_json doc;
        doc["report"] = "reliability";
        doc["config"] = config_json(provenance);
        doc["msp"] = calibration_json(msp);
        doc["boc"] = calibration_json(boc);
        return dump(doc);
    }
    const auto cells = [](const BinStat& bin) {
        std::string s = std::to_string(bin.count) + ",";
        if (!bin.empty()) {
            s += format_number(bin.mean_confidence) + "," + format_number(bin.accuracy);
        } else {
            s += ",";
        }
        return s;
    };
    std::ostringstream out;
    out << provenance_line("reliability", provenance) << " total=" << msp.total
        << " msp_ece=" << format_number(msp.ece) << " boc_ece=" << format_number(boc.ece) << '\n';
    out << "bin,lower,upper,msp_count,msp_confidence,msp_accuracy,boc_count,boc_confidence,"
           "boc_accuracy\n";
    for (std::size_t b = 0; b < msp.bins.size(); ++b) {
        out << msp.bins[b].index << ',' << format_number(msp.bins[b].lower) << ','
            << format_number(msp.bins[b].upper) << ',' << cells(msp.bins[b]) << ','
            << cells(boc.bins[b]) << '\n';
    }
    return out.str();
}

}  // namespace bagcoins
