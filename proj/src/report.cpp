#include "callcost/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace callcost {

namespace {

std::string fmt(const char* format, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, value);
    return buf;
}

// Hex float representation preserves the exact bits across a text round trip.
std::string hex_double(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", value);
    return buf;
}

}  // namespace

TimeUnit time_unit_from_name(std::string_view name) {
    if (name == "ns") return TimeUnit::Ns;
    if (name == "us") return TimeUnit::Us;
    if (name == "ms") return TimeUnit::Ms;
    throw ConfigError("unknown time unit \"" + std::string(name) + "\" (expected ns, us or ms)");
}

std::string_view time_unit_name(TimeUnit unit) {
    switch (unit) {
        case TimeUnit::Ns: return "ns";
        case TimeUnit::Us: return "us";
        case TimeUnit::Ms: return "ms";
    }
    return "ns";
}

double ns_to_unit(double ns, TimeUnit unit) {
    switch (unit) {
        case TimeUnit::Ns: return ns;
        case TimeUnit::Us: return ns / 1e3;
        case TimeUnit::Ms: return ns / 1e6;
    }
    return ns;
}

std::string render_comparison_table_md(const ResultRecord& record, TimeUnit unit) {
    const ComparisonResult& r = record.result;
    const std::string u(time_unit_name(unit));
    std::ostringstream out;
    out << "### " << model_display_name(r.model) << " (factor " << record.factor << ", "
        << record.element_count << " elements)\n\n";
    out << "| Repetition | Inline code (" << u << ") | Function call (" << u << ") |\n";
    out << "|---:|---:|---:|\n";
    const std::size_t reps = std::max(r.inline_run.times_ns.size(), r.call_run.times_ns.size());
    for (std::size_t i = 0; i < reps; ++i) {
        out << "| " << (i + 1) << " | ";
        if (i < r.inline_run.times_ns.size())
            out << fmt("%.4f", ns_to_unit(r.inline_run.times_ns[i], unit));
        else
            out << "-";
        out << " | ";
        if (i < r.call_run.times_ns.size())
            out << fmt("%.4f", ns_to_unit(r.call_run.times_ns[i], unit));
        else
            out << "-";
        out << " |\n";
    }
    out << "| **Average** | **" << fmt("%.4f", ns_to_unit(r.inline_run.mean_ns, unit)) << "** | **"
        << fmt("%.4f", ns_to_unit(r.call_run.mean_ns, unit)) << "** |\n\n";
    out << "Overhead: " << fmt("%.2f", r.overhead_pct) << " % (per-element gap "
        << fmt("%.4f", r.per_call_ns) << " ns over " << r.weight_count << " weights)\n";
    return out.str();
}

std::string render_raw_csv(std::span<const ResultRecord> records) {
    std::ostringstream out;
    out << "model,form,repetition,time_ns,weight_count,factor\n";
    for (const ResultRecord& record : records) {
        const ComparisonResult& r = record.result;
        for (const Measurement* m : {&r.inline_run, &r.call_run}) {
            for (std::size_t i = 0; i < m->times_ns.size(); ++i) {
                out << model_name(r.model) << ',' << form_name(m->kernel.form) << ',' << (i + 1)
                    << ',' << fmt("%.17g", m->times_ns[i]) << ',' << r.weight_count << ','
                    << record.factor << '\n';
            }
        }
    }
    return out.str();
}

std::string render_summary_csv(std::span<const ResultRecord> records) {
    std::ostringstream out;
    out << "model,factor,element_count,inline_mean_ns,call_mean_ns,overhead_pct,per_call_ns\n";
    for (const ResultRecord& record : records) {
        const ComparisonResult& r = record.result;
        out << model_name(r.model) << ',' << record.factor << ',' << record.element_count << ','
            << fmt("%.4f", r.inline_run.mean_ns) << ',' << fmt("%.4f", r.call_run.mean_ns) << ','
            << fmt("%.2f", r.overhead_pct) << ',' << fmt("%.4f", r.per_call_ns) << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

[[noreturn]] void bad_csv(std::size_t line, std::size_t field, const std::string& why) {
    throw ParseError("raw csv, line " + std::to_string(line) + ", field " + std::to_string(field) +
                         ": " + why,
                     line, field);
}

double parse_double_field(const std::string& text, std::size_t line, std::size_t field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) bad_csv(line, field, "trailing characters in number");
        return v;
    } catch (const std::invalid_argument&) {
        bad_csv(line, field, "expected a number, got \"" + text + "\"");
    } catch (const std::out_of_range&) {
        bad_csv(line, field, "number out of range");
    }
}

std::uint64_t parse_uint_field(const std::string& text, std::size_t line, std::size_t field) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        bad_csv(line, field, "expected a non-negative integer, got \"" + text + "\"");
    try {
        return std::stoull(text);
    } catch (const std::out_of_range&) {
        bad_csv(line, field, "integer out of range");
    }
}

}  // namespace

std::vector<ResultRecord> parse_raw_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("raw csv is empty", 1, 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "model,form,repetition,time_ns,weight_count,factor")
        throw ParseError("raw csv has an unexpected header: \"" + line + "\"", 1, 1);

    struct Group {
        Model model;
        std::uint32_t factor;
        std::uint64_t weight_count;
        // repetition -> time, per form, so rows may arrive in any order
        std::map<std::uint64_t, double> times[2];
    };
    std::vector<Group> groups;  // first-appearance order
    auto group_for = [&](Model model, std::uint32_t factor, std::uint64_t weight_count,
                         std::size_t line_no) -> Group& {
        for (Group& g : groups) {
            if (g.model == model && g.factor == factor) {
                if (g.weight_count != weight_count)
                    bad_csv(line_no, 5, "weight_count disagrees with an earlier row of the same run");
                return g;
            }
        }
        groups.push_back(Group{model, factor, weight_count, {}});
        return groups.back();
    };

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6)
            bad_csv(line_no, 1, "expected 6 fields, got " + std::to_string(fields.size()));

        Model model = Model::Tfidf;
        try {
            model = model_from_name(fields[0]);
        } catch (const ConfigError& e) {
            bad_csv(line_no, 1, e.what());
        }
        int form;
        if (fields[1] == "inline")
            form = 0;
        else if (fields[1] == "call")
            form = 1;
        else
            bad_csv(line_no, 2, "expected form \"inline\" or \"call\", got \"" + fields[1] + "\"");
        const std::uint64_t rep = parse_uint_field(fields[2], line_no, 3);
        if (rep < 1) bad_csv(line_no, 3, "repetition must be >= 1");
        const double time_ns = parse_double_field(fields[3], line_no, 4);
        if (!(time_ns >= 0.0)) bad_csv(line_no, 4, "time_ns must be >= 0");
        const std::uint64_t weight_count = parse_uint_field(fields[4], line_no, 5);
        if (weight_count == 0) bad_csv(line_no, 5, "weight_count must be >= 1");
        const std::uint64_t factor64 = parse_uint_field(fields[5], line_no, 6);
        if (factor64 < 1 || factor64 > 0xffffffffu) bad_csv(line_no, 6, "factor out of range");

        Group& group = group_for(model, static_cast<std::uint32_t>(factor64), weight_count, line_no);
        if (!group.times[form].emplace(rep, time_ns).second)
            bad_csv(line_no, 3, "duplicate repetition for this model/form/factor");
    }
    if (groups.empty()) throw ParseError("raw csv has a header but no rows", 1, 1);

    std::vector<ResultRecord> records;
    records.reserve(groups.size());
    for (const Group& g : groups) {
        for (int form = 0; form < 2; ++form) {
            if (g.times[form].empty())
                throw ParseError("raw csv: run " + std::string(model_name(g.model)) + "/factor " +
                                 std::to_string(g.factor) + " has no " +
                                 (form == 0 ? "inline" : "call") + " rows");
        }
        ResultRecord record;
        record.factor = g.factor;
        record.element_count = g.weight_count;
        ComparisonResult& r = record.result;
        r.model = g.model;
        std::vector<double> inline_times, call_times;
        for (const auto& [rep, t] : g.times[0]) inline_times.push_back(t);
        for (const auto& [rep, t] : g.times[1]) call_times.push_back(t);
        r.inline_run = make_measurement(KernelId{g.model, Form::Inline}, std::move(inline_times));
        r.call_run = make_measurement(KernelId{g.model, Form::Call}, std::move(call_times));
        r.weight_count = g.weight_count;
        r.overhead_pct = overhead_pct(r.inline_run.mean_ns, r.call_run.mean_ns);
        r.per_call_ns =
            (r.call_run.mean_ns - r.inline_run.mean_ns) / static_cast<double>(g.weight_count);
        records.push_back(std::move(record));
    }
    return records;
}

namespace {

std::string fit_line(const char* name, const ScalingFit& fit) {
    std::string out = std::string("#fit ") + name + " slope=" + fmt("%.9g", fit.slope) +
                      " intercept=" + fmt("%.9g", fit.intercept) + " r2=" + fmt("%.9g", fit.r2);
    if (fit.flag == FitFlag::ConstantY) out += " flag=constant-y";
    return out + "\n";
}

}  // namespace

std::string render_plot_csv(const ScalingResult& scaling) {
    if (scaling.points.empty())
        throw ConfigError("render_plot_csv: scaling series has no points");
    std::ostringstream out;
    out << "element_count,inline_mean,call_mean\n";
    for (const ScalingPoint& p : scaling.points) {
        out << p.element_count << ',' << fmt("%.9g", p.inline_mean_ns) << ','
            << fmt("%.9g", p.call_mean_ns) << '\n';
    }
    if (scaling.points.size() == 1) {
        out << "#fit degenerate: single-point series, no line fitted\n";
    } else {
        out << fit_line("inline", scaling.inline_fit);
        out << fit_line("call", scaling.call_fit);
    }
    for (const std::string& warning : scaling.warnings) out << "#warning " << warning << '\n';
    if (!scaling.error.empty()) out << "#error " << scaling.error << '\n';
    return out.str();
}

void emit_plot_data(const ScalingResult& scaling, const std::filesystem::path& path) {
    write_text_file(path, render_plot_csv(scaling));
}

std::string render_run_metadata_json(const RunMetadata& meta) {
    nlohmann::ordered_json j;
    j["command"] = meta.command;
    j["reps"] = meta.reps;
    j["warmup"] = meta.warmup;
    j["seed"] = meta.seed;
    j["params"] = {{"k1", meta.k1}, {"b", meta.b}, {"pad", meta.pad}};
    nlohmann::ordered_json models = nlohmann::ordered_json::array();
    for (Model m : meta.models) models.push_back(std::string(model_name(m)));
    j["models"] = std::move(models);
    j["factors"] = meta.factors;
    j["unit"] = std::string(time_unit_name(meta.unit));
    j["corpus"] = {{"source", meta.corpus_source}, {"detail", meta.corpus_detail}};
    j["clock_resolution_ns"] = meta.clock_res_ns;
    j["toolchain"] = meta.toolchain;
    j["call_contract"] = meta.call_contract;
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const ResultRecord& record : meta.results) {
        const ComparisonResult& r = record.result;
        nlohmann::ordered_json one;
        one["model"] = std::string(model_name(r.model));
        one["factor"] = record.factor;
        one["element_count"] = record.element_count;
        one["weight_count"] = r.weight_count;
        one["inline_times_ns"] = r.inline_run.times_ns;
        one["call_times_ns"] = r.call_run.times_ns;
        one["inline_mean_ns"] = r.inline_run.mean_ns;
        one["call_mean_ns"] = r.call_run.mean_ns;
        one["overhead_pct"] = r.overhead_pct;
        one["per_call_ns"] = r.per_call_ns;
        one["checksum_inline"] = hex_double(r.checksum_inline);
        one["checksum_call"] = hex_double(r.checksum_call);
        results.push_back(std::move(one));
    }
    j["results"] = std::move(results);
    return j.dump(2) + "\n";
}

std::string ReportDocument::to_markdown() const {
    std::ostringstream out;
    out << "# " << title << "\n";
    for (const std::string& section : sections) out << '\n' << section;
    return out.str();
}

ReportDocument make_report(std::string title, std::span<const ResultRecord> records,
                           TimeUnit unit) {
    ReportDocument doc;
    doc.title = std::move(title);
    for (const ResultRecord& record : records)
        doc.sections.push_back(render_comparison_table_md(record, unit));
    return doc;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("failed while writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed while reading " + path.string());
    return text;
}

}  // namespace callcost
