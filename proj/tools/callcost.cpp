// callcost - measures the cost of function calls against inline code using
// inverted-index term-weighting workloads (tf-idf, BM25 and a padded BM25
// variant), then reports repetition tables, overhead percentages and
// dataset-scaling fits.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "callcost/bench.hpp"
#include "callcost/corpus.hpp"
#include "callcost/kernels.hpp"
#include "callcost/report.hpp"

namespace {

constexpr const char* kVersion = "callcost 1.0.0";

bool color_enabled() {
    return ::isatty(::fileno(stderr)) != 0 && std::getenv("CALLCOST_NO_COLOR") == nullptr;
}

void print_error(const std::string& message) {
    if (color_enabled())
        std::cerr << "\033[31merror:\033[0m " << message << '\n';
    else
        std::cerr << "error: " << message << '\n';
}

void print_warning(const std::string& message) {
    if (color_enabled())
        std::cerr << "\033[33mwarning:\033[0m " << message << '\n';
    else
        std::cerr << "warning: " << message << '\n';
}

// ---- options shared by subcommands ----

struct TokenOpts {
    std::size_t min_len = 3;
    std::string stopword_file;
    bool keep_all = false;

    callcost::TokenFilterConfig build() const {
        if (keep_all) return callcost::TokenFilterConfig::none();
        callcost::TokenFilterConfig filter = callcost::TokenFilterConfig::defaults();
        filter.min_len = min_len;
        if (!stopword_file.empty()) {
            std::ifstream in(stopword_file, std::ios::binary);
            if (!in) throw callcost::IoError("cannot read stopword file " + stopword_file);
            filter.stopwords.clear();
            std::string word;
            while (in >> word) filter.stopwords.insert(word);
        }
        return filter;
    }
};

struct SyntheticOpts {
    std::uint64_t docs = 4573;
    std::uint64_t vocab = 21624;
    std::uint64_t mean_dl = 100;
};

struct WorkloadOpts {
    std::string index_path;
    bool synthetic = false;
    SyntheticOpts syn;
    std::uint64_t seed = 42;

    callcost::IndexedCorpus acquire(std::string& source, std::string& detail) const {
        if (synthetic && !index_path.empty())
            throw callcost::ConfigError("--index and --synthetic are mutually exclusive");
        if (!synthetic && index_path.empty())
            throw callcost::ConfigError("choose a workload: --index FILE or --synthetic");
        if (synthetic) {
            source = "synthetic";
            detail = "docs=" + std::to_string(syn.docs) + " vocab=" + std::to_string(syn.vocab) +
                     " mean-dl=" + std::to_string(syn.mean_dl) + " seed=" + std::to_string(seed);
            return callcost::build_index(
                callcost::generate_synthetic_corpus(syn.docs, syn.vocab, syn.mean_dl, seed));
        }
        source = "index";
        detail = index_path;
        return callcost::load_index(index_path);
    }
};

CLI::Option* add_synthetic_options(CLI::App* cmd, WorkloadOpts& wl) {
    auto* synthetic =
        cmd->add_flag("--synthetic", wl.synthetic, "Use a generated synthetic corpus");
    cmd->add_option("--docs", wl.syn.docs, "Synthetic corpus: number of documents")
        ->needs(synthetic)
        ->capture_default_str();
    cmd->add_option("--vocab", wl.syn.vocab, "Synthetic corpus: vocabulary size")
        ->needs(synthetic)
        ->capture_default_str();
    cmd->add_option("--mean-dl", wl.syn.mean_dl, "Synthetic corpus: mean document length")
        ->needs(synthetic)
        ->capture_default_str();
    cmd->add_option("--seed", wl.seed, "Synthetic corpus: generator seed")
        ->capture_default_str();
    return synthetic;
}

void add_workload_options(CLI::App* cmd, WorkloadOpts& wl) {
    auto* index = cmd->add_option("--index", wl.index_path, "Benchmark an existing index file");
    auto* synthetic = add_synthetic_options(cmd, wl);
    index->excludes(synthetic);
}

struct BenchCliOpts {
    int reps = 3;
    int warmup = 1;
    double k1 = 1.2;
    double b = 0.2;
    double pad = 100.0;
    std::string unit = "us";
};

void add_bench_options(CLI::App* cmd, BenchCliOpts& opts) {
    cmd->add_option("--reps", opts.reps, "Timed repetitions per kernel form")
        ->capture_default_str();
    cmd->add_option("--warmup", opts.warmup, "Untimed warmup runs per kernel form")
        ->capture_default_str();
    cmd->add_option("--k1", opts.k1, "BM25 k1 parameter")->capture_default_str();
    cmd->add_option("--b", opts.b, "BM25 b parameter")->capture_default_str();
    cmd->add_option("--pad", opts.pad, "Padding constant for the modified BM25 model")
        ->capture_default_str();
    cmd->add_option("--unit", opts.unit, "Time unit for rendered tables (ns, us, ms)")
        ->capture_default_str();
}

std::string command_line(int argc, char** argv) {
    std::string joined;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) joined += ' ';
        joined += argv[i];
    }
    return joined;
}

callcost::RunMetadata base_metadata(const std::string& command, const BenchCliOpts& bench,
                                    std::uint64_t seed, const std::string& source,
                                    const std::string& detail) {
    callcost::RunMetadata meta;
    meta.command = command;
    meta.reps = bench.reps;
    meta.warmup = bench.warmup;
    meta.seed = seed;
    meta.k1 = bench.k1;
    meta.b = bench.b;
    meta.pad = bench.pad;
    meta.unit = callcost::time_unit_from_name(bench.unit);
    meta.corpus_source = source;
    meta.corpus_detail = detail;
    meta.clock_res_ns = callcost::clock_resolution_ns();
    meta.toolchain = callcost::toolchain_description();
    meta.call_contract = std::string(callcost::call_contract_description());
    return meta;
}

// ---- subcommand bodies ----

struct IngestArgs {
    WorkloadOpts wl;  // reuses --synthetic/--docs/--vocab/--mean-dl/--seed
    std::string dir;
    std::string jsonl;
    TokenOpts tokens;
    std::string out;
};

int do_ingest(const IngestArgs& args, bool quiet) {
    std::vector<callcost::Document> docs;
    const int sources = int(!args.dir.empty()) + int(!args.jsonl.empty()) + int(args.wl.synthetic);
    if (sources != 1)
        throw callcost::ConfigError(
            "choose exactly one corpus source: --dir, --jsonl or --synthetic");
    if (!args.dir.empty())
        docs = callcost::load_corpus_dir(args.dir, args.tokens.build());
    else if (!args.jsonl.empty())
        docs = callcost::load_corpus_jsonl(args.jsonl, args.tokens.build());
    else
        docs = callcost::generate_synthetic_corpus(args.wl.syn.docs, args.wl.syn.vocab,
                                                   args.wl.syn.mean_dl, args.wl.seed);

    callcost::IndexedCorpus corpus = callcost::build_index(docs);
    callcost::save_index(corpus.index, corpus.stats, args.out);
    if (!quiet) {
        std::cout << "indexed " << corpus.stats.doc_count() << " documents: "
                  << corpus.index.entries.size() << " distinct words, "
                  << corpus.index.total_postings() << " postings (avdl "
                  << corpus.stats.avdl() << ")\n";
        std::cout << "wrote " << args.out << '\n';
    }
    return 0;
}

struct RunArgs {
    WorkloadOpts wl;
    BenchCliOpts bench;
    std::vector<std::string> models;
    std::uint32_t factor = 1;
    std::string out_report;
    std::string out_raw;
    std::string out_summary;
    std::string out_meta;
};

int do_run(const RunArgs& args, const std::string& command, bool quiet) {
    const callcost::TimeUnit unit = callcost::time_unit_from_name(args.bench.unit);
    if (args.factor == 0) throw callcost::ConfigError("--factor must be >= 1");

    std::vector<callcost::Model> models;
    if (args.models.empty()) {
        models.assign(std::begin(callcost::kAllModels), std::end(callcost::kAllModels));
    } else {
        for (const std::string& name : args.models) models.push_back(callcost::model_from_name(name));
    }

    std::string source, detail;
    callcost::IndexedCorpus corpus = args.wl.acquire(source, detail);
    if (args.factor > 1) {
        corpus.index = callcost::replicate_index(corpus.index, args.factor);
        corpus.stats = callcost::replicate_stats(corpus.stats, args.factor);
    }

    const callcost::Bm25Params params{args.bench.k1, args.bench.b};
    const callcost::BenchOptions opts{args.bench.reps, args.bench.warmup};
    std::vector<callcost::ResultRecord> records;
    for (callcost::Model model : models) {
        callcost::ResultRecord record;
        record.result = callcost::run_comparison(model, corpus.index, corpus.stats, params,
                                                 args.bench.pad, opts);
        record.factor = args.factor;
        record.element_count = record.result.weight_count;
        records.push_back(std::move(record));
        if (!quiet) std::cout << callcost::render_comparison_table_md(records.back(), unit) << '\n';
    }

    if (!args.out_report.empty())
        callcost::write_text_file(
            args.out_report,
            callcost::make_report("Function call overhead", records, unit).to_markdown());
    if (!args.out_raw.empty())
        callcost::write_text_file(args.out_raw, callcost::render_raw_csv(records));
    if (!args.out_summary.empty())
        callcost::write_text_file(args.out_summary, callcost::render_summary_csv(records));
    if (!args.out_meta.empty()) {
        callcost::RunMetadata meta =
            base_metadata(command, args.bench, args.wl.seed, source, detail);
        meta.models = models;
        meta.factors = {args.factor};
        meta.results = records;
        callcost::write_text_file(args.out_meta, callcost::render_run_metadata_json(meta));
    }
    return 0;
}

struct ScaleArgs {
    WorkloadOpts wl;
    BenchCliOpts bench;
    std::string model = "tfidf";
    std::vector<std::uint32_t> factors = {1, 5, 10, 15, 20};
    std::string out_plot;
    std::string out_report;
    std::string out_raw;
    std::string out_summary;
    std::string out_meta;
};

int do_scale(const ScaleArgs& args, const std::string& command, bool quiet) {
    const callcost::TimeUnit unit = callcost::time_unit_from_name(args.bench.unit);
    const callcost::Model model = callcost::model_from_name(args.model);

    std::string source, detail;
    const callcost::IndexedCorpus corpus = args.wl.acquire(source, detail);
    const callcost::Bm25Params params{args.bench.k1, args.bench.b};
    const callcost::BenchOptions opts{args.bench.reps, args.bench.warmup};

    const callcost::ScalingResult scaling = callcost::run_scaling(
        model, corpus.index, corpus.stats, params, args.bench.pad, args.factors, opts);

    std::vector<callcost::ResultRecord> records;
    for (std::size_t i = 0; i < scaling.comparisons.size(); ++i) {
        callcost::ResultRecord record;
        record.result = scaling.comparisons[i];
        record.factor = scaling.points[i].factor;
        record.element_count = scaling.points[i].element_count;
        records.push_back(std::move(record));
    }

    if (!quiet) {
        for (const callcost::ResultRecord& record : records) {
            const callcost::ComparisonResult& r = record.result;
            char line[256];
            std::snprintf(line, sizeof line,
                          "factor %2u  %10llu elements  inline %12.4f %s  call %12.4f %s  "
                          "overhead %6.2f %%",
                          record.factor,
                          static_cast<unsigned long long>(record.element_count),
                          callcost::ns_to_unit(r.inline_run.mean_ns, unit),
                          std::string(callcost::time_unit_name(unit)).c_str(),
                          callcost::ns_to_unit(r.call_run.mean_ns, unit),
                          std::string(callcost::time_unit_name(unit)).c_str(), r.overhead_pct);
            std::cout << line << '\n';
        }
        if (scaling.points.size() >= 2) {
            std::printf("fit inline: slope %.6g ns/element, intercept %.6g ns, r2 %.6f\n",
                        scaling.inline_fit.slope, scaling.inline_fit.intercept,
                        scaling.inline_fit.r2);
            std::printf("fit call:   slope %.6g ns/element, intercept %.6g ns, r2 %.6f\n",
                        scaling.call_fit.slope, scaling.call_fit.intercept, scaling.call_fit.r2);
        }
    }
    for (const std::string& warning : scaling.warnings) print_warning(warning);

    if (!args.out_plot.empty() && !scaling.points.empty())
        callcost::emit_plot_data(scaling, args.out_plot);
    if (!args.out_report.empty())
        callcost::write_text_file(
            args.out_report,
            callcost::make_report("Function call overhead scaling", records, unit).to_markdown());
    if (!args.out_raw.empty())
        callcost::write_text_file(args.out_raw, callcost::render_raw_csv(records));
    if (!args.out_summary.empty())
        callcost::write_text_file(args.out_summary, callcost::render_summary_csv(records));
    if (!args.out_meta.empty()) {
        callcost::RunMetadata meta =
            base_metadata(command, args.bench, args.wl.seed, source, detail);
        meta.models = {model};
        meta.factors.assign(args.factors.begin(), args.factors.end());
        meta.results = records;
        callcost::write_text_file(args.out_meta, callcost::render_run_metadata_json(meta));
    }

    if (!scaling.error.empty()) {
        // Partial results are already on disk; now report the failure.
        print_error(scaling.error);
        switch (scaling.error_kind) {
            case callcost::ScalingErrorKind::Equivalence: return 2;
            case callcost::ScalingErrorKind::ParseOrIo: return 3;
            default: return 1;
        }
    }
    return 0;
}

struct ReportArgs {
    std::string raw;
    std::string format = "md";
    std::string unit = "us";
    std::string out;
};

int do_report(const ReportArgs& args, bool quiet) {
    const callcost::TimeUnit unit = callcost::time_unit_from_name(args.unit);
    if (args.format != "md" && args.format != "csv")
        throw callcost::ConfigError("unknown report format \"" + args.format +
                                    "\" (expected md or csv)");
    const std::vector<callcost::ResultRecord> records =
        callcost::parse_raw_csv(callcost::read_text_file(args.raw));
    const std::string rendered =
        args.format == "md"
            ? callcost::make_report("Function call overhead", records, unit).to_markdown()
            : callcost::render_summary_csv(records);
    if (args.out.empty()) {
        std::cout << rendered;
    } else {
        callcost::write_text_file(args.out, rendered);
        if (!quiet) std::cout << "wrote " << args.out << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measures function-call overhead against inline code on "
                 "inverted-index term-weighting workloads"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Read options from an INI file");
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet,-q", quiet, "Suppress informational output");

    IngestArgs ingest_args;
    CLI::App* ingest = app.add_subcommand("ingest", "Build an index file from a corpus");
    ingest->fallthrough();  // lets app-level flags like --quiet follow the subcommand
    ingest->add_option("--dir", ingest_args.dir, "Directory of *.txt documents");
    ingest->add_option("--jsonl", ingest_args.jsonl,
                       "JSON-lines corpus ({\"id\":..., \"text\":...} per line)");
    add_synthetic_options(ingest, ingest_args.wl);
    ingest->add_option("--min-token-len", ingest_args.tokens.min_len,
                       "Drop tokens shorter than this")
        ->capture_default_str();
    ingest->add_option("--stopwords", ingest_args.tokens.stopword_file,
                       "Replace the built-in stopword list with words from this file");
    ingest->add_flag("--keep-all", ingest_args.tokens.keep_all,
                     "Keep every token (no length or stopword filtering)");
    ingest->add_option("--out", ingest_args.out, "Index file to write")->required();

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Time inline vs call kernels at one workload size");
    run->fallthrough();
    add_workload_options(run, run_args.wl);
    add_bench_options(run, run_args.bench);
    run->add_option("--models", run_args.models,
                    "Models to measure (tfidf, bm25, bm25mod; default all)")
        ->delimiter(',');
    run->add_option("--factor", run_args.factor, "Replicate the workload this many times")
        ->capture_default_str();
    run->add_option("--out-report", run_args.out_report, "Write a Markdown report here");
    run->add_option("--out-raw", run_args.out_raw, "Write per-repetition CSV here");
    run->add_option("--out-summary", run_args.out_summary, "Write per-model summary CSV here");
    run->add_option("--out-meta", run_args.out_meta, "Write run metadata JSON here");

    ScaleArgs scale_args;
    CLI::App* scale = app.add_subcommand("scale", "Sweep replication factors and fit time vs size");
    scale->fallthrough();
    add_workload_options(scale, scale_args.wl);
    add_bench_options(scale, scale_args.bench);
    scale->add_option("--model", scale_args.model, "Model to sweep")->capture_default_str();
    scale->add_option("--factors", scale_args.factors, "Replication factors to visit")
        ->delimiter(',')
        ->capture_default_str();
    scale->add_option("--out-plot", scale_args.out_plot, "Write plot-friendly CSV here");
    scale->add_option("--out-report", scale_args.out_report, "Write a Markdown report here");
    scale->add_option("--out-raw", scale_args.out_raw, "Write per-repetition CSV here");
    scale->add_option("--out-summary", scale_args.out_summary, "Write per-model summary CSV here");
    scale->add_option("--out-meta", scale_args.out_meta, "Write run metadata JSON here");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "Re-render reports from a raw CSV");
    report->fallthrough();
    report->add_option("--raw", report_args.raw, "Raw CSV produced by run or scale")->required();
    report->add_option("--format", report_args.format, "Output format: md or csv")
        ->capture_default_str();
    report->add_option("--unit", report_args.unit, "Time unit for md tables (ns, us, ms)")
        ->capture_default_str();
    report->add_option("--out", report_args.out, "Write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const std::string command = command_line(argc, argv);
    try {
        if (ingest->parsed()) return do_ingest(ingest_args, quiet);
        if (run->parsed()) return do_run(run_args, command, quiet);
        if (scale->parsed()) return do_scale(scale_args, command, quiet);
        if (report->parsed()) return do_report(report_args, quiet);
        throw callcost::ConfigError("no subcommand given");
    } catch (const callcost::EquivalenceError& e) {
        print_error(e.what());
        return 2;
    } catch (const callcost::ParseError& e) {
        print_error(e.what());
        return 3;
    } catch (const callcost::IoError& e) {
        print_error(e.what());
        return 3;
    } catch (const callcost::Error& e) {
        print_error(e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error(e.what());
        return 1;
    }
}
