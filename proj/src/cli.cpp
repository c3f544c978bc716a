#include "bagcoins/cli.hpp"

#include <iostream>
#include <ostream>

#include "CLI11.hpp"
#include "bagcoins/rum.hpp"

namespace bagcoins::cli {
namespace {

LogitDataset load_required(const std::optional<std::filesystem::path>& path, const char* flag,
                           const std::optional<std::filesystem::path>& labels = std::nullopt) {
    if (!path) throw Error(ErrorCode::InvalidArgument, std::string("missing required ") + flag);
    return load_dataset(*path, labels);
}

ReportFormat report_format(const RunConfig& config) {
    if (config.format) {
        if (*config.format == "json") return ReportFormat::Json;
        if (*config.format == "csv") return ReportFormat::Csv;
        throw Error(ErrorCode::InvalidArgument,
                    "report format must be json or csv, got '" + *config.format + "'");
    }
    return config.out.extension() == ".csv" ? ReportFormat::Csv : ReportFormat::Json;
}

void require_out(const RunConfig& config) {
    if (config.out.empty()) throw Error(ErrorCode::InvalidArgument, "missing required --out");
}

Provenance provenance_for(const RunConfig& config, ScoreSource score) {
    Provenance p;
    p.command = config.command;
    p.score = std::string(to_string(score));
    p.trials = config.trials;
    p.seed = config.seed;
    p.bins = config.bins;
    return p;
}

std::vector<BoCResult> probe(const LogitDataset& dataset, ScoreSource source,
                             const RunConfig& config, std::uint64_t first_index = 0) {
    BatchOptions options;
    options.mode = source == ScoreSource::BocExact ? ProbeMode::Exact : ProbeMode::Sampled;
    options.threads = config.threads;
    options.first_index = first_index;
    return boc_batch(dataset, config.trials, config.seed, options);
}

std::vector<bool> correctness(const LogitDataset& dataset) {
    const auto& labels = dataset.labels();
    std::vector<bool> correct(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        correct[i] = static_cast<std::int64_t>(argmax(dataset.logits(i))) == labels[i];
    }
    return correct;
}

}  // namespace

std::string_view to_string(ScoreSource source) noexcept {
    switch (source) {
        case ScoreSource::Msp: return "msp";
        case ScoreSource::Boc: return "boc";
        case ScoreSource::BocExact: return "boc-exact";
        case ScoreSource::TempScaled: return "temp-scaled";
    }
    return "";
}

std::optional<ScoreSource> parse_score(std::string_view name) noexcept {
    if (name == "msp") return ScoreSource::Msp;
    if (name == "boc") return ScoreSource::Boc;
    if (name == "boc-exact") return ScoreSource::BocExact;
    if (name == "temp-scaled") return ScoreSource::TempScaled;
    return std::nullopt;
}

std::vector<double> confidence_scores(const LogitDataset& dataset, ScoreSource source,
                                      const RunConfig& config, std::optional<double>* temperature) {
    std::vector<double> scores(dataset.size());
    switch (source) {
        case ScoreSource::Msp:
            for (std::size_t i = 0; i < dataset.size(); ++i) {
                scores[i] = predict(dataset.logits(i)).confidence;
            }
            break;
        case ScoreSource::Boc:
        case ScoreSource::BocExact: {
            const auto results = probe(dataset, source, config);
            for (std::size_t i = 0; i < results.size(); ++i) scores[i] = results[i].score;
            break;
        }
        case ScoreSource::TempScaled: {
            const double t = fit_temperature(dataset);
            if (temperature) *temperature = t;
            for (std::size_t i = 0; i < dataset.size(); ++i) {
                const auto probs = tempered_softmax(dataset.logits(i), t);
                scores[i] = probs[argmax(dataset.logits(i))];
            }
            break;
        }
    }
    return scores;
}

void cmd_probe(const RunConfig& config) {
    require_out(config);
    const ScoreSource source = config.score.value_or(ScoreSource::Boc);
    if (source != ScoreSource::Boc && source != ScoreSource::BocExact) {
        throw Error(ErrorCode::InvalidArgument, "probe supports --score boc or boc-exact");
    }
    const LogitDataset dataset = load_required(config.logits, "--logits");
    const auto results = probe(dataset, source, config);
    write_report(results, config.out, report_format(config), provenance_for(config, source));
}

void cmd_calibrate(const RunConfig& config) {
    require_out(config);
    const ScoreSource source = config.score.value_or(ScoreSource::Msp);
    if (!config.labels) throw Error(ErrorCode::MissingLabels, "calibrate needs --labels");
    const LogitDataset dataset = load_required(config.logits, "--logits", config.labels);

    Provenance provenance = provenance_for(config, source);
    const auto scores = confidence_scores(dataset, source, config, &provenance.temperature);
    const auto report =
        reliability(scores, correctness(dataset), config.bins, std::string(to_string(source)));
    write_report(report, config.out, report_format(config), provenance);
}

void cmd_ood(const RunConfig& config) {
    require_out(config);
    const ScoreSource source = config.score.value_or(ScoreSource::Msp);
    const LogitDataset id = load_required(config.logits, "--logits", config.labels);
    const LogitDataset ood = load_required(config.ood_logits, "--ood-logits");
    if (id.num_classes() != ood.num_classes()) {
        throw Error(ErrorCode::ShapeMismatch,
                    "in-distribution and OOD logits have different class counts");
    }

    Provenance provenance = provenance_for(config, source);
    std::vector<double> pos;
    std::vector<double> neg;
    switch (source) {
        case ScoreSource::Msp:
            pos = confidence_scores(id, source, config);
            neg = confidence_scores(ood, source, config);
            break;
        case ScoreSource::Boc:
        case ScoreSource::BocExact: {
            // Raw p-values. OOD records continue the ID stream indices so the
            // two sets never share a stream.
            for (const auto& r : probe(id, source, config)) pos.push_back(r.p_val);
            for (const auto& r : probe(ood, source, config, id.size())) neg.push_back(r.p_val);
            break;
        }
        case ScoreSource::TempScaled: {
            if (!id.has_labels()) {
                throw Error(ErrorCode::MissingLabels,
                            "temp-scaled OOD scores need --labels to fit the temperature");
            }
            const double t = fit_temperature(id);
            provenance.temperature = t;
            const auto tempered_msp = [t](const LogitDataset& d) {
                std::vector<double> s(d.size());
                for (std::size_t i = 0; i < d.size(); ++i) {
                    s[i] = tempered_softmax(d.logits(i), t)[argmax(d.logits(i))];
                }
                return s;
            };
            pos = tempered_msp(id);
            neg = tempered_msp(ood);
            break;
        }
    }
    const auto report = ood_report(pos, neg, std::string(to_string(source)));
    write_report(report, config.out, report_format(config), provenance);
}

void cmd_synth(const RunConfig& config, std::ostream& log) {
    require_out(config);
    if (config.samples == 0) throw Error(ErrorCode::InvalidArgument, "--n must be at least 1");
    if (config.classes < 2) throw Error(ErrorCode::InvalidArgument, "--classes must be at least 2");
    ArrayFormat format = ArrayFormat::Npy;
    if (config.format) {
        if (*config.format == "csv") {
            format = ArrayFormat::Csv;
        } else if (*config.format != "npy") {
            throw Error(ErrorCode::InvalidArgument,
                        "synth format must be npy or csv, got '" + *config.format + "'");
        }
    }

    const LogitDataset dataset =
        config.peak ? generate_delusional_dataset(config.samples, config.classes, config.spread,
                                                  *config.peak, config.seed)
                    : generate_calibrated_dataset(config.samples, config.classes, config.spread,
                                                  config.seed);
    const std::string ext = format == ArrayFormat::Csv ? ".csv" : ".npy";
    const std::filesystem::path logits_path = config.out.string() + "_logits" + ext;
    const std::filesystem::path labels_path = config.out.string() + "_labels" + ext;
    write_array(dataset.logits(), logits_path, format);
    write_array(dataset.labels(), labels_path, format);

    log << "generator=" << (config.peak ? "delusional" : "calibrated") << " n=" << config.samples
        << " classes=" << config.classes << " spread=" << format_number(config.spread);
    if (config.peak) log << " peak=" << format_number(*config.peak);
    log << " seed=" << config.seed << "\nlogits=" << logits_path.string()
        << "\nlabels=" << labels_path.string() << '\n';
}

void cmd_reliability(const RunConfig& config) {
    require_out(config);
    const ScoreSource boc_source = config.score.value_or(ScoreSource::Boc);
    if (boc_source != ScoreSource::Boc && boc_source != ScoreSource::BocExact) {
        throw Error(ErrorCode::InvalidArgument, "reliability compares msp against boc or boc-exact");
    }
    if (!config.labels) throw Error(ErrorCode::MissingLabels, "reliability needs --labels");
    const LogitDataset dataset = load_required(config.logits, "--logits", config.labels);
    const auto correct = correctness(dataset);
    const auto msp = reliability(confidence_scores(dataset, ScoreSource::Msp, config), correct,
                                 config.bins, "msp");
    const auto boc = reliability(confidence_scores(dataset, boc_source, config), correct,
                                 config.bins, std::string(to_string(boc_source)));
    RunConfig csv_default = config;
    if (!csv_default.format && config.out.extension() != ".json") csv_default.format = "csv";
    write_text(render_reliability_table(msp, boc, report_format(csv_default),
                                        provenance_for(config, boc_source)),
               config.out);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bag-of-Coins logit consistency probe and calibration/OOD diagnostics", "boc"};
    app.require_subcommand(1);

    RunConfig config;
    std::string score_name;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", config.out, "Output path")->required();
        sub->add_option("--format", config.format, "Output format");
        sub->add_option("--seed", config.seed, "Seed for all random streams")
            ->capture_default_str();
    };
    const auto add_probe_options = [&](CLI::App* sub) {
        sub->add_option("--logits", config.logits, "N x C logits (.npy or .csv)")->required();
        sub->add_option("--k", config.trials, "Contests per sample")
            ->capture_default_str()
            ->check(CLI::Range(1u, 1000000000u));
        sub->add_option("--score", score_name, "msp | boc | boc-exact | temp-scaled")
            ->check(CLI::IsMember({"msp", "boc", "boc-exact", "temp-scaled"}));
        sub->add_option("--threads", config.threads, "Worker threads (0 = all cores)")
            ->capture_default_str();
        add_common(sub);
    };
    const auto add_bins = [&](CLI::App* sub) {
        sub->add_option("--bins", config.bins, "Equal-width confidence bins")
            ->capture_default_str()
            ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    };

    auto* probe_cmd = app.add_subcommand("probe", "Per-sample BoC table");
    add_probe_options(probe_cmd);

    auto* calibrate_cmd = app.add_subcommand("calibrate", "ECE report for one score");
    add_probe_options(calibrate_cmd);
    add_bins(calibrate_cmd);
    calibrate_cmd->add_option("--labels", config.labels, "N class labels")->required();

    auto* ood_cmd = app.add_subcommand("ood", "ROC/AUROC with ID as the positive class");
    add_probe_options(ood_cmd);
    ood_cmd->add_option("--ood-logits", config.ood_logits, "OOD logits")->required();
    ood_cmd->add_option("--labels", config.labels, "ID labels (temp-scaled only)");

    auto* reliability_cmd = app.add_subcommand("reliability", "Per-bin MSP vs BoC table");
    add_probe_options(reliability_cmd);
    add_bins(reliability_cmd);
    reliability_cmd->add_option("--labels", config.labels, "N class labels")->required();

    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic RUM dataset");
    synth_cmd->add_option("--n", config.samples, "Sample count")->required();
    synth_cmd->add_option("--classes", config.classes, "Class count")->capture_default_str();
    synth_cmd->add_option("--spread", config.spread, "Utility scale")->capture_default_str();
    synth_cmd->add_option("--peak", config.peak, "Sharpen logits by this factor");
    add_common(synth_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!score_name.empty()) config.score = parse_score(score_name);
        if (probe_cmd->parsed()) {
            config.command = "probe";
            cmd_probe(config);
        } else if (calibrate_cmd->parsed()) {
            config.command = "calibrate";
            cmd_calibrate(config);
        } else if (ood_cmd->parsed()) {
            config.command = "ood";
            cmd_ood(config);
        } else if (reliability_cmd->parsed()) {
            config.command = "reliability";
            cmd_reliability(config);
        } else if (synth_cmd->parsed()) {
            config.command = "synth";
            cmd_synth(config, out);
        }
    } catch (const Error& e) {
        err << "boc " << config.command << ": " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("boc");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace bagcoins::cli
