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

#include "vqabias/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "vqabias/jsonl.hpp"

namespace vqabias {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string pct_from_bp(std::int64_t basis_points) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld.%02lld", static_cast<long long>(basis_points / 100),
                  static_cast<long long>(basis_points % 100));
    return buf;
}

ordered_json mean_std_json(const MeanStd &ms) {
    ordered_json obj;
    obj["mean"] = ms.mean;
    obj["std"] = ms.stddev;
    obj["pct"] = format_mean_std(ms);
    return obj;
}

ordered_json metric_value_json(const MetricValue &v) {
    ordered_json obj;
    if (v.degenerate) {
        obj["degenerate"] = true;
        obj["pct"] = "n/a";
    } else {
        obj["value"] = v.value;
        obj["pct"] = format_percent(v.value);
        if (v.negative()) obj["negative"] = true;
    }
    obj["model_acc"] = v.model_acc;
    obj["lower_bound"] = v.lower_bound;
    return obj;
}

ordered_json bias_row_json(const BiasRow &row) {
    ordered_json obj;
    obj["key"] = row.key;
    obj["n"] = row.n;
    obj["answer_card"] = row.answer_card;
    obj["modal_answer"] = row.modal_answer;
    obj["prior_matches"] = row.prior_matches;
    obj["prior_acc"] = ratio_json(row.prior_acc);
    obj["uni_acc"] = ratio_json(row.uni_acc);
    if (row.used_fallback) obj["used_fallback"] = true;
    return obj;
}

}  // namespace

ordered_json ratio_json(const Ratio &r) {
    ordered_json obj;
    obj["num"] = r.num;
    obj["den"] = r.den;
    obj["pct"] = format_percent(r);
    return obj;
}

ordered_json bias_report_json(const BiasReport &report) {
    ordered_json doc;
    doc["granularity"] = to_string(report.granularity);
    doc["same_split"] = report.same_split;
    doc["fitted_on"] = to_string(report.fitted_on);
    doc["fallback_answer"] = report.fallback_answer;
    doc["all"] = bias_row_json(report.all_row);
    ordered_json rows = ordered_json::array();
    for (const BiasRow &row : report.rows) rows.push_back(bias_row_json(row));
    doc["rows"] = std::move(rows);
    ordered_json aggregates;
    aggregates["average"] = {{"prior", report.aggregates.average_prior},
                             {"prior_pct", format_percent(report.aggregates.average_prior)},
                             {"uni", report.aggregates.average_uni},
                             {"uni_pct", format_percent(report.aggregates.average_uni)}};
    aggregates["overall"] = {{"prior", ratio_json(report.aggregates.overall_prior)},
                             {"uni", report.aggregates.overall_uni},
                             {"uni_pct", format_percent(report.aggregates.overall_uni)}};
    doc["aggregates"] = std::move(aggregates);
    ordered_json dist = ordered_json::array();
    for (const DistributionRow &row : report.distribution.rows) {
        ordered_json r;
        r["group"] = row.key;
        r["split"] = to_string(row.split);
        r["n"] = row.n;
        ordered_json answers = ordered_json::array();
        for (const AnswerShare &share : row.shares)
            answers.push_back({{"answer", share.answer},
                               {"count", share.count},
                               {"pct", pct_from_bp(share.basis_points)}});
        r["answers"] = std::move(answers);
        dist.push_back(std::move(r));
    }
    doc["distribution"] = std::move(dist);
    if (!report.notes.empty()) doc["notes"] = report.notes;
    return doc;
}

ordered_json run_aggregate_json(const RunAggregate &agg, const std::vector<std::string> &warnings) {
    ordered_json doc;
    doc["granularity"] = to_string(agg.granularity);
    doc["n_runs"] = agg.n_runs;
    ordered_json groups;
    for (const auto &[key, ms] : agg.per_group) groups[key] = mean_std_json(ms);
    doc["per_group"] = std::move(groups);
    doc["aa"] = mean_std_json(agg.aa);
    doc["oa"] = mean_std_json(agg.oa);
    if (!warnings.empty()) doc["warnings"] = warnings;
    return doc;
}

ordered_json io_table_json(const IoTable &table) {
    ordered_json doc;
    doc["name"] = table.name;
    doc["granularity"] = to_string(table.granularity);
    ordered_json groups;
    for (const auto &[key, value] : table.per_group) groups[key] = metric_value_json(value);
    doc["per_group"] = std::move(groups);
    doc["average"] = metric_value_json(table.average);
    doc["overall"] = metric_value_json(table.overall);
    return doc;
}

ordered_json delta_table_json(const DeltaTable &delta) {
    ordered_json doc;
    doc["granularity"] = to_string(delta.granularity);
    ordered_json groups;
    for (const auto &[key, value] : delta.per_group)
        groups[key] = {{"value", value}, {"pct", format_percent(value)}};
    doc["per_group"] = std::move(groups);
    doc["aa"] = {{"value", delta.aa}, {"pct", format_percent(delta.aa)}};
    doc["oa"] = {{"value", delta.oa}, {"pct", format_percent(delta.oa)}};
    return doc;
}

ordered_json make_bundle(const std::string &kind) {
    ordered_json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["kind"] = kind;
    return doc;
}

ordered_json provenance_json(const std::map<std::string, std::string> &inputs,
                             std::optional<std::uint64_t> seed) {
    ordered_json doc;
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    doc["created"] = buf;
    doc["inputs"] = inputs;
    if (seed) doc["seed"] = *seed;
    return doc;
}

ordered_json load_bundle(const std::filesystem::path &path) {
    ordered_json doc = ordered_json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || doc.value("tool", "") != kToolName)
        throw ValidationError(path.string() + ": not a " + std::string(kToolName) + " bundle");
    return doc;
}

// ---- Markdown projection ---------------------------------------------------

namespace {

std::string md_escape(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

// Cell helpers pull already-rendered strings out of the bundle; the renderer
// never recomputes a number.
std::string pct_cell(const ordered_json &obj, const char *field) {
    if (!obj.contains(field)) return "";
    const auto &v = obj.at(field);
    if (v.is_object()) return v.value("pct", "");
    return v.get<std::string>();
}

std::string io_cell(const ordered_json &io_section, const std::string &group) {
    if (io_section.is_null()) return "";
    const auto &groups = io_section.at("per_group");
    if (!groups.contains(group)) return "";
    return groups.at(group).value("pct", "");
}

void render_bias_table(std::string &out, const ordered_json &report, const ordered_json &eval) {
    std::string granularity = report.value("granularity", "");
    bool with_eval = eval.is_object() && eval.value("granularity", "") == granularity;
    const ordered_json *reference = nullptr;
    ordered_json null_json;
    const ordered_json &io_prior =
        with_eval && eval.contains("io_prior") ? eval.at("io_prior") : null_json;
    const ordered_json &io_adtest =
        with_eval && eval.contains("io_adtest") ? eval.at("io_adtest") : null_json;
    if (with_eval && eval.contains("reference")) reference = &eval.at("reference");

    out += "## Bias profile — granularity: " + granularity + "\n\n";
    if (report.value("same_split", false))
        out += "Priors fitted and evaluated on the same split.\n\n";
    std::string header = granularity == "question_type" ? "Question Type" : "Group";
    out += "| " + header + " | N_s | \\|A_q\\| | Most common answer | Prior_Acc | Uni_Acc";
    std::string separator = "|---|---:|---:|---|---:|---:";
    if (with_eval) {
        out += " | RSVQA_Acc | IO_Prior | IO_AdTest";
        separator += "|---:|---:|---:";
    }
    out += " |\n" + separator + "|\n";

    auto row_cells = [&](const ordered_json &row) {
        std::string key = row.value("key", "");
        out += "| " + md_escape(key);
        out += " | " + std::to_string(row.value("n", std::int64_t{0}));
        out += " | " + std::to_string(row.value("answer_card", std::int64_t{0}));
        out += " | " + md_escape(row.value("modal_answer", std::string()));
        out += " | " + pct_cell(row, "prior_acc");
        out += " | " + pct_cell(row, "uni_acc");
        if (with_eval) {
            std::string acc;
            if (reference && reference->at("per_group").contains(key))
                acc = reference->at("per_group").at(key).value("pct", "");
            out += " | " + acc;
            out += " | " + io_cell(io_prior, key);
            out += " | " + io_cell(io_adtest, key);
        }
        out += " |\n";
    };

    row_cells(report.at("all"));
    for (const auto &row : report.at("rows")) row_cells(row);

    const ordered_json &aggregates = report.at("aggregates");
    out += "| Average |  |  |  | " + pct_cell(aggregates.at("average"), "prior_pct") + " | " +
           pct_cell(aggregates.at("average"), "uni_pct");
    if (with_eval) {
        out += " | " + (reference ? pct_cell(*reference, "aa") : std::string());
        out += " | " + (io_prior.is_object() ? io_prior.at("average").value("pct", "") : std::string());
        out += " | " + (io_adtest.is_object() ? io_adtest.at("average").value("pct", "") : std::string());
    }
    out += " |\n";
    out += "| Overall |  |  |  | " + pct_cell(aggregates.at("overall"), "prior") + " | " +
           pct_cell(aggregates.at("overall"), "uni_pct");
    if (with_eval) {
        out += " | " + (reference ? pct_cell(*reference, "oa") : std::string());
        out += " | " + (io_prior.is_object() ? io_prior.at("overall").value("pct", "") : std::string());
        out += " | " + (io_adtest.is_object() ? io_adtest.at("overall").value("pct", "") : std::string());
    }
    out += " |\n\n";

    if (report.contains("notes")) {
        for (const auto &note : report.at("notes"))
            out += "- note: " + note.get<std::string>() + "\n";
        out += "\n";
    }

    if (report.contains("distribution") && !report.at("distribution").empty()) {
        out += "### Answer distribution — " + granularity + "\n\n";
        out += "| Group | Split | N | Answers |\n|---|---|---:|---|\n";
        for (const auto &row : report.at("distribution")) {
            out += "| " + md_escape(row.value("group", "")) + " | " + row.value("split", "") +
                   " | " + std::to_string(row.value("n", std::int64_t{0})) + " | ";
            bool first = true;
            for (const auto &share : row.at("answers")) {
                if (!first) out += ", ";
                first = false;
                out += md_escape(share.value("answer", "")) + " " + share.value("pct", "") + "%";
            }
            out += " |\n";
        }
        out += "\n";
    }
}

void render_condition_table(std::string &out, const ordered_json &eval) {
    bool has_adv = eval.contains("adversarial");
    bool has_blind = eval.contains("blind");
    if (!has_adv && !has_blind) return;
    const ordered_json &reference = eval.at("reference");
    out += "## Disturbed conditions — granularity: " + eval.value("granularity", "") + "\n\n";
    out += "| Group | Reference";
    std::string separator = "|---|---:";
    if (has_blind) {
        out += " | Blind | Δ blind";
        separator += "|---:|---:";
    }
    if (has_adv) {
        out += " | Adversarial | Δ adversarial | IO_AdTest";
        separator += "|---:|---:|---:";
    }
    out += " |\n" + separator + "|\n";

    auto group_pct = [](const ordered_json &section, const std::string &key) {
        const auto &groups = section.at("per_group");
        return groups.contains(key) ? groups.at(key).value("pct", "") : std::string();
    };

    struct RowRef {
        std::string label;
        const char *aggregate;  // null for group rows, else "aa"/"oa"
    };
    std::vector<RowRef> rows;
    for (const auto &[key, value] : reference.at("per_group").items()) {
        (void)value;
        rows.push_back({key, nullptr});
    }
    rows.push_back({"AA", "aa"});
    rows.push_back({"OA", "oa"});

    for (const RowRef &row : rows) {
        auto cell = [&](const ordered_json &section) {
            return row.aggregate ? pct_cell(section, row.aggregate) : group_pct(section, row.label);
        };
        out += "| " + md_escape(row.label) + " | " + cell(reference);
        if (has_blind)
            out += " | " + cell(eval.at("blind")) + " | " + cell(eval.at("deltas_blind"));
        if (has_adv) {
            out += " | " + cell(eval.at("adversarial")) + " | " + cell(eval.at("deltas_adversarial"));
            const ordered_json &io = eval.at("io_adtest");
            std::string io_pct;
            if (!row.aggregate) {
                io_pct = io_cell(io, row.label);
            } else if (row.label == "AA") {
                io_pct = io.at("average").value("pct", "");
            } else {
                io_pct = io.at("overall").value("pct", "");
            }
            out += " | " + io_pct;
        }
        out += " |\n";
    }
    out += "\n";
}

}  // namespace

std::string render_markdown(const ordered_json &bundle) {
    std::string out;
    out += "# ";
    out += kToolName;
    out += " report (";
    out += bundle.value("kind", "unknown");
    out += ")\n\n";

    ordered_json null_json;
    const ordered_json &eval = bundle.contains("eval") ? bundle.at("eval") : null_json;

    if (bundle.contains("bias_reports"))
        for (const auto &report : bundle.at("bias_reports")) render_bias_table(out, report, eval);

    if (eval.is_object()) {
        if (eval.contains("reference") && eval.at("reference").contains("warnings"))
            for (const auto &w : eval.at("reference").at("warnings"))
                out += "- warning: " + w.get<std::string>() + "\n";
        render_condition_table(out, eval);
    }

    if (bundle.contains("provenance")) {
        const auto &prov = bundle.at("provenance");
        out += "---\n";
        out += std::string(kToolName) + " " + bundle.value("version", "") + ", created " +
               prov.value("created", "") + "\n";
        if (prov.contains("inputs"))
            for (const auto &[key, value] : prov.at("inputs").items())
                out += "- " + key + ": " + value.get<std::string>() + "\n";
        if (prov.contains("seed")) out += "- seed: " + std::to_string(prov.at("seed").get<std::uint64_t>()) + "\n";
    }
    return out;
}

}  // namespace vqabias
