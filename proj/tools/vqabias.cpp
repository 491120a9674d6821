/*
 * Copyright 2026 the vqabias authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vqabias/adversarial.hpp"
#include "vqabias/bias.hpp"
#include "vqabias/blind.hpp"
#include "vqabias/common.hpp"
#include "vqabias/generator.hpp"
#include "vqabias/jsonl.hpp"
#include "vqabias/lexicon.hpp"
#include "vqabias/metrics.hpp"
#include "vqabias/parser.hpp"
#include "vqabias/partition.hpp"
#include "vqabias/report.hpp"
#include "vqabias/sample.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace vqabias;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = leave scheduling to the runtime
    bool no_provenance = false;
};

std::vector<Granularity> parse_granularities(const std::vector<std::string> &tokens) {
    std::vector<Granularity> out;
    for (const std::string &token : tokens) out.push_back(granularity_from_string(token));
    if (out.empty()) out.push_back(Granularity::question_type);
    return out;
}

/// Groups an eval set without requiring a lexicon where none is needed:
/// `all` is one bucket, `question_type` can use the stored tags.
Partition partition_for(const SampleSet &set, const Lexicon *lexicon, Granularity g) {
    if (lexicon) return build_partition(set, *lexicon, g);
    if (g == Granularity::all) {
        Partition part;
        part.granularity = g;
        auto &idx = part.groups["all"];
        idx.resize(set.size());
        for (std::size_t i = 0; i < set.size(); ++i) idx[i] = i;
        return part;
    }
    if (g == Granularity::question_type) {
        ValidationReport report = validate_dataset(set);
        if (report.needs_type_inference())
            throw ValidationError(
                "samples without question_type need --lexicon for type inference");
        return partition_by_stored_type(set);
    }
    throw ValidationError("--lexicon is required at granularity " + to_string(g));
}

void write_bundle(const ordered_json &bundle, const fs::path &out_dir, const std::string &stem) {
    write_text_file(out_dir / (stem + ".json"), bundle.dump(2) + "\n");
    write_text_file(out_dir / (stem + ".md"), render_markdown(bundle));
}

std::map<std::string, double> means_of(const RunAggregate &agg) {
    std::map<std::string, double> out;
    for (const auto &[key, ms] : agg.per_group) out[key] = ms.mean;
    return out;
}

double ratio_value(const ordered_json &obj) {
    return Ratio{obj.at("num").get<std::int64_t>(), obj.at("den").get<std::int64_t>()}.value();
}

int run(int argc, char **argv) {
    CLI::App app{"Bias audit toolkit for visual question answering datasets"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    CLI::Option *seed_opt = app.add_option("--seed", global.seed, "Seed for randomized steps");
    app.add_option("--threads", global.threads, "Worker thread cap (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--no-provenance", global.no_provenance,
                 "Omit the provenance block (timestamps, input paths) from reports");

    // ---- audit ----
    auto *audit = app.add_subcommand("audit", "Fit answer priors and report bias statistics");
    std::string audit_train, audit_eval, audit_lexicon, audit_out;
    std::vector<std::string> audit_granularities{"question_type"};
    bool audit_same_split = false;
    audit->add_option("--train", audit_train, "Training split JSONL (prior fitting)")->required();
    audit->add_option("--eval", audit_eval, "Evaluation split JSONL")->required();
    audit->add_option("--lexicon", audit_lexicon, "Lexicon name or path")->required();
    audit->add_option("--granularity", audit_granularities, "Grouping granularities")
        ->delimiter(',');
    audit->add_flag("--same-split", audit_same_split,
                    "Fit priors on the evaluation split itself");
    audit->add_option("--out", audit_out, "Output directory")->required();
    audit->callback([&] {
        SampleSet train = load_dataset(audit_train);
        SampleSet eval = load_dataset(audit_eval);
        fs::path lexicon_path = resolve_lexicon_path(audit_lexicon);
        Lexicon lexicon = load_lexicon(lexicon_path);
        BiasOptions options;
        options.same_split = audit_same_split;
        std::vector<BiasReport> reports = bias_reports(
            train, eval, lexicon, parse_granularities(audit_granularities), options);

        ordered_json bundle = make_bundle("audit");
        bundle["lexicon"] = lexicon.name.empty() ? lexicon_path.string() : lexicon.name;
        ordered_json sections = ordered_json::array();
        for (const BiasReport &report : reports) sections.push_back(bias_report_json(report));
        bundle["bias_reports"] = std::move(sections);
        if (!global.no_provenance)
            bundle["provenance"] = provenance_json({{"train", audit_train},
                                                    {"eval", audit_eval},
                                                    {"lexicon", lexicon_path.string()}},
                                                   std::nullopt);
        write_bundle(bundle, audit_out, "audit");
    });

    // ---- eval ----
    auto *eval_cmd = app.add_subcommand(
        "eval", "Score prediction runs and derive the relative improvement metrics");
    std::string eval_truth, eval_bias_report, eval_lexicon, eval_out;
    std::string eval_granularity = "question_type";
    std::vector<std::string> eval_preds, eval_adversarial, eval_blind;
    eval_cmd->add_option("--truth", eval_truth, "Ground-truth JSONL")->required();
    eval_cmd->add_option("--preds", eval_preds, "Reference prediction JSONL (repeat per run)")
        ->required();
    eval_cmd->add_option("--bias-report", eval_bias_report, "Audit bundle with fitted priors")
        ->required();
    eval_cmd->add_option("--adversarial-preds", eval_adversarial,
                         "Adversarial prediction JSONL (repeat per run)");
    eval_cmd->add_option("--blind-preds", eval_blind,
                         "Question-only prediction JSONL (repeat per run)");
    eval_cmd->add_option("--lexicon", eval_lexicon,
                         "Lexicon name or path (needed below question_type granularity)");
    eval_cmd->add_option("--granularity", eval_granularity, "Grouping granularity");
    eval_cmd->add_option("--out", eval_out, "Output directory")->required();
    eval_cmd->callback([&] {
        SampleSet truth = load_dataset(eval_truth);
        ordered_json bias_bundle = load_bundle(eval_bias_report);
        Granularity g = granularity_from_string(eval_granularity);

        if (!bias_bundle.contains("bias_reports"))
            throw ValidationError(eval_bias_report + ": bundle has no bias_reports section");
        const ordered_json *bias_section = nullptr;
        for (const auto &section : bias_bundle.at("bias_reports"))
            if (section.value("granularity", "") == to_string(g)) bias_section = &section;
        if (!bias_section)
            throw ValidationError(eval_bias_report + ": no bias report at granularity " +
                                  to_string(g));

        std::optional<Lexicon> lexicon;
        if (!eval_lexicon.empty()) lexicon = load_lexicon(resolve_lexicon_path(eval_lexicon));
        const Lexicon *lex = lexicon ? &*lexicon : nullptr;
        Partition partition = partition_for(truth, lex, g);

        auto load_runs = [](const std::vector<std::string> &paths, PredictionCondition cond) {
            std::vector<PredictionSet> runs;
            for (const std::string &path : paths) {
                PredictionSet preds = load_predictions(path);
                preds.condition = cond;
                runs.push_back(std::move(preds));
            }
            return runs;
        };
        std::vector<PredictionSet> reference_runs =
            load_runs(eval_preds, PredictionCondition::reference);

        std::vector<EvalResult> reference_evals;
        std::vector<std::string> warnings;
        for (const PredictionSet &preds : reference_runs) {
            EvalResult result = accuracy_eval(preds, truth, partition, lex);
            warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
            reference_evals.push_back(std::move(result));
        }
        RunAggregate reference = aggregate_runs(reference_evals);

        std::map<std::string, double> prior_lower;
        for (const auto &row : bias_section->at("rows"))
            prior_lower[row.value("key", "")] = ratio_value(row.at("prior_acc"));
        const ordered_json &aggregates = bias_section->at("aggregates");
        IoTable io_prior_table =
            io_from_means("IO_Prior", g, means_of(reference), reference.aa.mean,
                          reference.oa.mean, prior_lower,
                          aggregates.at("average").at("prior").get<double>(),
                          ratio_value(aggregates.at("overall").at("prior")));

        ordered_json eval_section;
        eval_section["granularity"] = to_string(g);
        eval_section["reference"] = run_aggregate_json(reference, warnings);
        eval_section["io_prior"] = io_table_json(io_prior_table);

        if (!eval_blind.empty()) {
            std::vector<EvalResult> blind_evals;
            for (const PredictionSet &preds : load_runs(eval_blind, PredictionCondition::blind))
                blind_evals.push_back(accuracy_eval(preds, truth, partition, lex));
            RunAggregate blind = aggregate_runs(blind_evals);
            eval_section["blind"] = run_aggregate_json(blind);
            eval_section["deltas_blind"] = delta_table_json(delta_table(reference, blind));
        }
        if (!eval_adversarial.empty()) {
            AdversarialEvaluation adv = evaluate_adversarial(
                reference_runs, load_runs(eval_adversarial, PredictionCondition::adversarial),
                truth, partition, lex);
            eval_section["adversarial"] = run_aggregate_json(adv.adversarial);
            eval_section["deltas_adversarial"] = delta_table_json(adv.deltas);
            eval_section["io_adtest"] = io_table_json(adv.io_adtest);
        }

        ordered_json bundle = make_bundle("eval");
        if (bias_bundle.contains("lexicon")) bundle["lexicon"] = bias_bundle.at("lexicon");
        bundle["bias_reports"] = bias_bundle.at("bias_reports");
        bundle["eval"] = std::move(eval_section);
        if (!global.no_provenance) {
            std::map<std::string, std::string> inputs{{"truth", eval_truth},
                                                      {"bias_report", eval_bias_report}};
            for (std::size_t i = 0; i < eval_preds.size(); ++i)
                inputs["preds[" + std::to_string(i) + "]"] = eval_preds[i];
            for (std::size_t i = 0; i < eval_adversarial.size(); ++i)
                inputs["adversarial_preds[" + std::to_string(i) + "]"] = eval_adversarial[i];
            for (std::size_t i = 0; i < eval_blind.size(); ++i)
                inputs["blind_preds[" + std::to_string(i) + "]"] = eval_blind[i];
            bundle["provenance"] = provenance_json(inputs, std::nullopt);
        }
        write_bundle(bundle, eval_out, "eval");
    });

    // ---- blind ----
    auto *blind = app.add_subcommand("blind", "Question-only baseline predictors");
    blind->require_subcommand(1);

    auto *blind_train = blind->add_subcommand("train", "Train a question-only predictor");
    std::string bt_kind, bt_train, bt_lexicon, bt_model_out;
    std::string bt_granularity = "question_type";
    double bt_alpha = 1.0;
    blind_train->add_option("--kind", bt_kind, "prior|bow")
        ->required()
        ->check(CLI::IsMember({"prior", "bow"}));
    blind_train->add_option("--train", bt_train, "Training split JSONL")->required();
    blind_train->add_option("--granularity", bt_granularity, "Grouping for the prior predictor");
    blind_train->add_option("--lexicon", bt_lexicon, "Lexicon name or path (prior kind)");
    blind_train->add_option("--alpha", bt_alpha, "Additive smoothing (bow kind)")
        ->check(CLI::PositiveNumber);
    blind_train->add_option("--model-out", bt_model_out, "Model file to write")->required();
    blind_train->callback([&] {
        SampleSet train = load_dataset(bt_train);
        BlindModel model;
        if (bt_kind == "prior") {
            if (bt_lexicon.empty())
                throw ValidationError("blind train --kind prior requires --lexicon");
            Lexicon lexicon = load_lexicon(resolve_lexicon_path(bt_lexicon));
            Granularity g = granularity_from_string(bt_granularity);
            model = train_prior_predictor(train, build_partition(train, lexicon, g), lexicon);
        } else {
            std::optional<Lexicon> lexicon;
            if (!bt_lexicon.empty()) lexicon = load_lexicon(resolve_lexicon_path(bt_lexicon));
            model = train_bow_classifier(train, bt_alpha, lexicon ? &*lexicon : nullptr);
        }
        save_blind_model(model, bt_model_out);
    });

    auto *blind_predict = blind->add_subcommand("predict", "Predict answers from questions only");
    std::string bp_model, bp_eval, bp_lexicon, bp_out;
    blind_predict->add_option("--model", bp_model, "Model file")->required();
    blind_predict->add_option("--eval", bp_eval, "Evaluation split JSONL")->required();
    blind_predict->add_option("--lexicon", bp_lexicon,
                              "Lexicon name or path (prior models below granularity all)");
    blind_predict->add_option("--out", bp_out, "Prediction JSONL to write")->required();
    blind_predict->callback([&] {
        BlindModel model = load_blind_model(bp_model);
        SampleSet eval = load_dataset(bp_eval);
        std::optional<Lexicon> lexicon;
        if (!bp_lexicon.empty()) lexicon = load_lexicon(resolve_lexicon_path(bp_lexicon));
        write_predictions(predict_blind(model, eval, lexicon ? &*lexicon : nullptr), bp_out);
    });

    // ---- manifest ----
    auto *manifest = app.add_subcommand(
        "manifest", "Produce a deterministic image-substitution manifest");
    std::string mf_dataset, mf_mode, mf_out;
    std::string mf_pool = "split";
    manifest->add_option("--dataset", mf_dataset, "Dataset JSONL")->required();
    manifest->add_option("--mode", mf_mode, "random|white|black")
        ->required()
        ->check(CLI::IsMember({"random", "white", "black"}));
    manifest->add_option("--pool", mf_pool, "Substitute pool: images of the sample's split or all")
        ->check(CLI::IsMember({"split", "all"}));
    manifest->add_option("--out", mf_out, "Manifest JSONL to write")->required();
    manifest->callback([&] {
        SampleSet set = load_dataset(mf_dataset);
        SwapPool pool = mf_pool == "all" ? SwapPool::all : SwapPool::split;
        SwapManifest result =
            generate_swap_manifest(set, swap_mode_from_string(mf_mode), global.seed, pool);
        write_text_file(mf_out, manifest_to_jsonl(result));
    });

    // ---- generate ----
    auto *generate = app.add_subcommand(
        "generate", "Emit a synthetic scene/question corpus with configured bias");
    std::string gen_config, gen_out_dir;
    generate->add_option("--config", gen_config, "Generator config JSON (defaults when omitted)");
    generate->add_option("--out-dir", gen_out_dir, "Output directory")->required();
    generate->callback([&] {
        GeneratorConfig config;
        if (!gen_config.empty()) {
            nlohmann::json doc = nlohmann::json::parse(read_text_file(gen_config), nullptr, false);
            if (doc.is_discarded()) throw ValidationError(gen_config + ": not valid JSON");
            config = config_from_json(doc, gen_config);
        } else {
            config = default_generator_config();
        }
        if (seed_opt->count() > 0) config.seed = global.seed;
        write_generated(generate_dataset(config), gen_out_dir);
    });

    // ---- report ----
    auto *report = app.add_subcommand("report", "Render a bundle produced by audit or eval");
    std::string rp_bundle, rp_out;
    std::string rp_format = "markdown";
    report->add_option("--bundle", rp_bundle, "Bundle JSON")->required();
    report->add_option("--format", rp_format, "markdown|json")
        ->check(CLI::IsMember({"markdown", "json"}));
    report->add_option("--out", rp_out, "Output file (stdout when omitted)");
    report->callback([&] {
        ordered_json bundle = load_bundle(rp_bundle);
        std::string text = rp_format == "json" ? bundle.dump(2) + "\n" : render_markdown(bundle);
        if (rp_out.empty())
            std::cout << text;
        else
            write_text_file(rp_out, text);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
