#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bagcoins/io.hpp"
#include "bagcoins/metrics.hpp"
#include "bagcoins/probe.hpp"

namespace bagcoins::cli {

enum class ScoreSource { Msp, Boc, BocExact, TempScaled };

std::string_view to_string(ScoreSource source) noexcept;
std::optional<ScoreSource> parse_score(std::string_view name) noexcept;

struct RunConfig {
    std::string command;
    std::optional<std::filesystem::path> logits;
    std::optional<std::filesystem::path> labels;
    std::optional<std::filesystem::path> ood_logits;
    std::uint32_t trials = kDefaultTrials;
    std::uint64_t seed = 0;
    std::size_t bins = kDefaultBins;
    std::optional<ScoreSource> score;  // per-command default when unset
    std::filesystem::path out;
    std::optional<std::string> format;  // json|csv for reports, npy|csv for synth
    unsigned threads = 0;

    // synth
    std::size_t samples = 0;
    std::size_t classes = 10;
    double spread = 2.0;
    std::optional<double> peak;
};

// Confidence-style score per sample, one of the four sources. For TempScaled
// the dataset must be labelled; the fitted temperature is stored in
// `temperature`.
std::vector<double> confidence_scores(const LogitDataset& dataset, ScoreSource source,
                                      const RunConfig& config,
                                      std::optional<double>* temperature = nullptr);

// Each command throws bagcoins::Error on bad input.
void cmd_probe(const RunConfig& config);
void cmd_calibrate(const RunConfig& config);
void cmd_ood(const RunConfig& config);
void cmd_synth(const RunConfig& config, std::ostream& log);
void cmd_reliability(const RunConfig& config);

// Parses argv and dispatches. Returns 0 on success and 2 on usage or input
// errors, which are reported on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bagcoins::cli
