#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "patmine/corpus.hpp"
#include "patmine/pipeline.hpp"
#include "patmine/store.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kIoError = 2;

struct MineArgs {
  std::string corpus;
  std::string lexicon;
  std::string config;
  std::string frames = "sdlc";
  std::string frames_file;
  std::string rules;
  std::string enrichment;
  std::string mode;
  std::string out;
  bool matrix = false;
};

int run_validate(const std::string& corpus_path) {
  patmine::Corpus corpus;
  try {
    corpus = patmine::parse_corpus(corpus_path);
  } catch (const patmine::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const patmine::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  const auto diagnostics = patmine::validate_corpus(corpus);
  for (const auto& d : diagnostics) {
    std::cout << d.to_string() << "\n";
  }
  return patmine::has_errors(diagnostics) ? kDomainError : kOk;
}

int run_mine(const MineArgs& args) {
  try {
    const patmine::Corpus corpus = patmine::ingest_corpus(args.corpus);

    const patmine::Lexicon lexicon = args.lexicon.empty()
                                         ? patmine::starter_lexicon()
                                         : patmine::load_lexicon(args.lexicon);

    patmine::OperatorConfig cfg;
    if (!args.config.empty()) {
      cfg = patmine::load_operator_config(args.config);
    }
    if (!args.mode.empty()) {
      cfg.clustering_mode = patmine::clustering_mode_from_string(args.mode);
    }
    cfg.validate();

    patmine::MineOptions options;
    options.frames_mode = patmine::frames_mode_from_string(args.frames);
    if (!args.frames_file.empty()) options.frames_file = fs::path(args.frames_file);
    if (!args.rules.empty()) options.rules = patmine::load_split_rules(args.rules);
    if (!args.enrichment.empty()) {
      options.enrichment = patmine::load_enrichment(args.enrichment);
    }

    options.flag_echo["corpus"] = args.corpus;
    options.flag_echo["lexicon"] = args.lexicon.empty() ? "<builtin>" : args.lexicon;
    options.flag_echo["config"] = args.config.empty() ? "<defaults>" : args.config;
    options.flag_echo["frames"] = args.frames;
    options.flag_echo["frames-file"] = args.frames_file;
    options.flag_echo["rules"] = args.rules;
    options.flag_echo["enrichment"] = args.enrichment;
    options.flag_echo["mode"] = patmine::to_string(cfg.clustering_mode);
    options.flag_echo["out"] = args.out;
    options.flag_echo["matrix"] = args.matrix ? "true" : "false";

    const patmine::MineResult result = patmine::mine(corpus, lexicon, cfg, options);

    const fs::path out_dir(args.out);
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    // All writes happen after the pipeline completed.
    patmine::save_library(result.library, out_dir / "library.json");
    const std::string report = patmine::render_report(result.library, corpus);
    {
      std::ofstream out(out_dir / "report.md", std::ios::binary | std::ios::trunc);
      if (!out) throw patmine::IoError("cannot write report");
      out << report;
    }
    if (args.matrix) {
      const auto matrix = patmine::trace_matrix(result.library, corpus);
      std::ofstream out(out_dir / "trace_matrix.csv", std::ios::binary | std::ios::trunc);
      if (!out) throw patmine::IoError("cannot write trace matrix");
      out << patmine::matrix_csv(matrix);
    }

    for (const auto& warning : result.warnings) {
      std::cerr << warning.to_string() << "\n";
    }
    std::cout << "library: " << (out_dir / "library.json").string() << "\n";
    std::cout << "report: " << (out_dir / "report.md").string() << "\n";
    if (args.matrix) {
      std::cout << "matrix: " << (out_dir / "trace_matrix.csv").string() << "\n";
    }
    return kOk;
  } catch (const patmine::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const patmine::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
}

int run_report(const std::string& library_path, const std::string& corpus_path,
               const std::string& out_path, bool matrix) {
  try {
    const patmine::LoadedLibrary loaded = patmine::load_library(library_path);
    for (const auto& warning : loaded.warnings) {
      std::cerr << warning.to_string() << "\n";
    }
    const patmine::Corpus corpus = patmine::ingest_corpus(corpus_path);

    const auto dangling = patmine::dangling_provenance(loaded.library, corpus);
    if (!dangling.empty()) {
      std::cerr << "error: library provenance does not match the corpus:\n";
      for (const auto& ref : dangling) {
        std::cerr << "  dangling ref " << ref.key() << "\n";
      }
      return kDomainError;
    }

    const fs::path out_dir(out_path);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    {
      std::ofstream out(out_dir / "report.md", std::ios::binary | std::ios::trunc);
      if (!out) throw patmine::IoError("cannot write report");
      out << patmine::render_report(loaded.library, corpus);
    }
    if (matrix) {
      const auto trace = patmine::trace_matrix(loaded.library, corpus);
      std::ofstream out(out_dir / "trace_matrix.csv", std::ios::binary | std::ios::trunc);
      if (!out) throw patmine::IoError("cannot write trace matrix");
      out << patmine::matrix_csv(trace);
    }
    std::cout << "report: " << (out_dir / "report.md").string() << "\n";
    if (matrix) {
      std::cout << "matrix: " << (out_dir / "trace_matrix.csv").string() << "\n";
    }
    return kOk;
  } catch (const patmine::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const patmine::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process pattern extraction from software development methodology corpora"};
  app.require_subcommand(1);

  std::string validate_corpus_path;
  CLI::App* validate = app.add_subcommand("validate", "Validate a corpus directory");
  validate->add_option("--corpus", validate_corpus_path, "Corpus directory")->required();

  MineArgs mine_args;
  CLI::App* mine = app.add_subcommand("mine", "Extract a pattern library from a corpus");
  mine->add_option("--corpus", mine_args.corpus, "Corpus directory")->required();
  mine->add_option("--lexicon", mine_args.lexicon,
                   "Lexicon file (defaults to the built-in starter lexicon)");
  mine->add_option("--config", mine_args.config, "Run configuration file");
  mine->add_option("--frames", mine_args.frames, "Frame mode: sdlc, derived, or file")
      ->check(CLI::IsMember({"sdlc", "derived", "file"}));
  mine->add_option("--frames-file", mine_args.frames_file,
                   "Frames file (required with --frames file)");
  mine->add_option("--rules", mine_args.rules, "Split rules file");
  mine->add_option("--enrichment", mine_args.enrichment, "Task enrichment file");
  mine->add_option("--mode", mine_args.mode, "Clustering mode: seed-star or components")
      ->check(CLI::IsMember({"seed-star", "seed_star", "components"}));
  mine->add_option("--out", mine_args.out, "Output directory")->required();
  mine->add_flag("--matrix", mine_args.matrix, "Also write the trace matrix as CSV");

  std::string report_library, report_corpus, report_out;
  bool report_matrix = false;
  CLI::App* report =
      app.add_subcommand("report", "Render the report for a saved library");
  report->add_option("--library", report_library, "Saved library file")->required();
  report->add_option("--corpus", report_corpus, "Corpus directory")->required();
  report->add_option("--out", report_out, "Output directory")->required();
  report->add_flag("--matrix", report_matrix, "Also write the trace matrix as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoError;
  }

  if (validate->parsed()) return run_validate(validate_corpus_path);
  if (mine->parsed()) return run_mine(mine_args);
  if (report->parsed()) {
    return run_report(report_library, report_corpus, report_out, report_matrix);
  }
  return kOk;
}
