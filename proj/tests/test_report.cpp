#include <sstream>
#include <string>
#include <vector>

#include "bagcoins/io.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bagcoins;

namespace {

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() != '#') lines.push_back(line);
    }
    return lines;
}

Provenance defaults(const char* command, const char* score) {
    Provenance p;
    p.command = command;
    p.score = score;
    return p;
}

CalibrationReport hand_report() {
    return reliability(std::vector<double>{0.9, 0.8, 0.3, 0.2},
                       std::vector<bool>{true, false, true, false}, 2, "msp");
}

}  // namespace

TEST_CASE("format_number uses 17 significant digits") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(1e-30) == "1.0000000000000001e-30");
    CHECK(std::stod(format_number(0.30000000000000004)) == 0.30000000000000004);
    CHECK(format_number(1.0 / 0.0) == "inf");
}

TEST_CASE("calibration report in json and csv") {
    const auto report = hand_report();
    const auto json = nlohmann::json::parse(render_report(report, ReportFormat::Json,
                                                          defaults("calibrate", "msp")));
    CHECK(json["report"] == "calibration");
    CHECK(json["config"]["k"] == 100);
    CHECK(json["config"]["seed"] == 0);
    CHECK(json["config"]["bins"] == 15);
    CHECK(json["bins"].size() == 2);
    CHECK(std::abs(json["ece"].get<double>() - 0.30) <= 1e-12);
    CHECK(std::abs(json["ece"].get<double>() - report.ece) <= 1e-15);

    const std::string csv = render_report(report, ReportFormat::Csv, defaults("calibrate", "msp"));
    CHECK(csv.rfind("# report=calibration command=calibrate score=msp k=100 seed=0 bins=15", 0) == 0);
    const auto lines = data_lines(csv);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "bin,lower,upper,count,mean_confidence,accuracy");
    CHECK(lines[1].rfind("1,0,0.5,2,", 0) == 0);
}

TEST_CASE("empty bins serialize as null / blank") {
    const auto report = reliability(std::vector<double>{0.95}, std::vector<bool>{true}, 3, "msp");
    const auto json = nlohmann::json::parse(render_report(report, ReportFormat::Json,
                                                          defaults("calibrate", "msp")));
    CHECK(json["bins"][0]["empty"] == true);
    CHECK(json["bins"][0]["accuracy"].is_null());
    const auto lines = data_lines(render_report(report, ReportFormat::Csv, defaults("calibrate", "msp")));
    CHECK(lines[1] == "1,0,0.33333333333333331,0,,");
}

TEST_CASE("ood report carries the ROC points") {
    const auto report = ood_report(std::vector<double>{0.9, 0.8}, std::vector<double>{0.1, 0.2}, "msp");
    const std::string csv = render_report(report, ReportFormat::Csv, defaults("ood", "msp"));
    const auto lines = data_lines(csv);
    CHECK(lines[0] == "fpr,tpr,threshold");
    bool corner = false;
    for (const auto& l : lines) corner |= l.rfind("0,1,", 0) == 0;
    CHECK(corner);
    CHECK(csv.find("auroc_corrected=1 inverted=false") != std::string::npos);

    const auto json = nlohmann::json::parse(render_report(report, ReportFormat::Json,
                                                          defaults("ood", "msp")));
    CHECK(json["auroc_raw"] == 1.0);
    CHECK(json["inverted"] == false);
    CHECK(json["positive_class"] == "in-distribution");
    CHECK(json["roc"][0]["threshold"].is_null());
    CHECK(json["roc"].size() == report.roc_points.size());
}

TEST_CASE("probe table columns") {
    std::vector<BoCResult> results(2);
    results[0] = {100, 100, 0.25, 0.75, 1.0, 3, 0.98};
    results[1] = {100, 40, 1.0, 0.0, 0.5, 0, 0.3};
    const auto lines = data_lines(render_report(results, ReportFormat::Csv, defaults("probe", "boc")));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "index,y_hat,p_hat,p_dom,W,k,p_val,score");
    CHECK(lines[1] == "0,3,0.97999999999999998,1,100,100,0.25,0.75");
    CHECK(lines[2] == "1,0,0.29999999999999999,0.5,40,100,1,0");

    const auto json = nlohmann::json::parse(render_report(results, ReportFormat::Json,
                                                          defaults("probe", "boc")));
    CHECK(json["records"][1]["W"] == 40);
    CHECK(json["records"][0]["y_hat"] == 3);
}

TEST_CASE("reliability table has one row per bin") {
    const auto msp = hand_report();
    const auto lines = data_lines(render_reliability_table(msp, msp, ReportFormat::Csv,
                                                           defaults("reliability", "boc")));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "bin,lower,upper,msp_count,msp_confidence,msp_accuracy,boc_count,boc_confidence,"
          "boc_accuracy");
    const auto three_bins = reliability(std::vector<double>{0.5}, std::vector<bool>{true}, 3);
    CHECK_THROWS_AS(render_reliability_table(msp, three_bins, ReportFormat::Csv,
                                             defaults("reliability", "boc")),
                    Error);
}
