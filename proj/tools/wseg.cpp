// wseg: page-to-word segmentation, evaluation and synthetic page generation.
//
// Exit codes: 0 ok, 1 bad arguments, 2 I/O failure, 3 malformed input file.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wseg/wseg.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kBadArguments = 1;
constexpr int kIoFailure = 2;
constexpr int kMalformedInput = 3;

struct SegmentArgs
{
  std::vector<std::string> inputs;
  std::string out_dir;
  std::optional<int> alpha;
  std::optional<double> sigma;
  std::optional<double> d_sat;
  std::optional<std::string> scale_mode;
  std::optional<double> beta;
  std::optional<std::string> overlay;
  std::optional<std::string> boxes;
  std::optional<std::string> config;
};

struct EvalArgs
{
  std::string pred;
  std::string truth;
  std::string report;
  double coverage = 0.5;
};

struct SynthArgs
{
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string out_image;
  std::string out_truth;
};

std::string word_name(std::size_t index)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "word_%04zu.pgm", index + 1);
  return buf;
}

struct PageOutput
{
  fs::path input;
  fs::path dir;
  std::vector<fs::path> files;
  std::vector<wseg::StageTiming> timings;
  std::size_t words = 0;
};

PageOutput segment_one(
  const fs::path & input, const fs::path & dir, const wseg::SegConfig & cfg, unsigned threads,
  const std::optional<std::string> & overlay, const std::optional<std::string> & boxes)
{
  PageOutput out{input, dir, {}, {}, 0};
  const wseg::GrayImage page = wseg::load_gray(input);
  const wseg::PageResult result = wseg::segment_page(page, cfg, threads);
  out.timings = result.timings;
  out.words = result.words.size();

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw wseg::IoError(dir, "cannot create directory: " + ec.message());
  }
  for (std::size_t i = 0; i < result.words.size(); ++i) {
    const fs::path file = dir / word_name(i);
    wseg::save_gray(wseg::word_crop(page, result.words[i]), file);
    out.files.push_back(file);
  }
  const wseg::BoxList list = wseg::boxes_of(result.words);
  if (overlay) {
    wseg::save_rgb(wseg::render_overlay(page, list), *overlay);
    out.files.emplace_back(*overlay);
  }
  if (boxes) {
    wseg::write_truth(list, *boxes);
    out.files.emplace_back(*boxes);
  }
  return out;
}

void write_manifest(
  const fs::path & out_dir, const wseg::SegConfig & cfg, unsigned threads,
  const std::vector<PageOutput> & pages)
{
  std::ostringstream m;
  m << "# wseg run manifest\n"
    << "threads = " << threads << "\n\n[config]\n"
    << wseg::format_config(cfg);
  for (const auto & p : pages) {
    m << "\n[page]\ninput = " << p.input.string() << "\nwords = " << p.words << '\n';
    for (const auto & f : p.files) {
      m << "output = " << f.string() << '\n';
    }
    for (const auto & t : p.timings) {
      m << "time_ms." << t.stage << " = " << t.milliseconds << '\n';
    }
  }
  wseg::detail::write_file(out_dir / "manifest.txt", m.str());
}

int run_segment(const SegmentArgs & args)
{
  if (args.inputs.size() > 1 && (args.overlay || args.boxes)) {
    std::cerr << "wseg segment: --overlay and --boxes need exactly one --input\n";
    return kBadArguments;
  }

  wseg::SegConfig cfg;
  try {
    if (args.config) {
      cfg = wseg::apply_config(cfg, wseg::KeyValues::load(*args.config));
    }
    if (args.alpha) {cfg.alpha = *args.alpha;}
    if (args.sigma) {cfg.sigma = *args.sigma;}
    if (args.d_sat) {cfg.d_sat = *args.d_sat;}
    if (args.scale_mode) {cfg.scale_mode = wseg::parse_scale_mode(*args.scale_mode);}
    if (args.beta) {cfg.beta_factor = *args.beta;}
    cfg.validate();
  } catch (const wseg::IoError & e) {
    std::cerr << "wseg segment: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception & e) {
    std::cerr << "wseg segment: bad configuration: " << e.what() << '\n';
    return kBadArguments;
  }

  const unsigned threads = wseg::threads_from_env();
  const fs::path out_dir(args.out_dir);
  std::vector<PageOutput> pages(args.inputs.size());
  try {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      throw wseg::IoError(out_dir, "cannot create directory: " + ec.message());
    }
    if (args.inputs.size() == 1) {
      pages[0] = segment_one(args.inputs[0], out_dir, cfg, threads, args.overlay, args.boxes);
    } else {
      wseg::parallel_for(
        args.inputs.size(), threads, [&](std::size_t i) {
          const fs::path input(args.inputs[i]);
          pages[i] = segment_one(input, out_dir / input.stem(), cfg, 1, std::nullopt, std::nullopt);
        });
    }
    write_manifest(out_dir, cfg, threads, pages);
  } catch (const wseg::IoError & e) {
    std::cerr << "wseg segment: " << e.what() << '\n';
    return kIoFailure;
  } catch (const wseg::FormatError & e) {
    std::cerr << "wseg segment: malformed image: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const std::exception & e) {
    std::cerr << "wseg segment: " << e.what() << '\n';
    return kMalformedInput;
  }
  return 0;
}

int run_eval(const EvalArgs & args)
{
  try {
    const wseg::BoxList pred = wseg::read_truth(args.pred);
    const wseg::BoxList truth = wseg::read_truth(args.truth);
    if (truth.empty()) {
      std::cerr << "wseg eval: " << args.truth << " lists no words\n";
      return kMalformedInput;
    }
    const std::string report = wseg::format_report(wseg::evaluate(pred, truth, args.coverage));
    wseg::detail::write_file(args.report, report);
    std::cout << report;
  } catch (const wseg::IoError & e) {
    std::cerr << "wseg eval: " << e.what() << '\n';
    return kIoFailure;
  } catch (const wseg::FormatError & e) {
    std::cerr << "wseg eval: malformed box list: " << e.what() << '\n';
    return kMalformedInput;
  }
  return 0;
}

int run_synth(const SynthArgs & args)
{
  wseg::SynthSpec spec;
  try {
    spec = wseg::apply_synth_settings(spec, wseg::KeyValues::load(args.spec));
    if (args.seed) {
      spec.seed = *args.seed;
    }
  } catch (const wseg::IoError & e) {
    std::cerr << "wseg synth: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception & e) {
    std::cerr << "wseg synth: bad spec: " << e.what() << '\n';
    return kBadArguments;
  }
  try {
    const wseg::SynthPage page = wseg::synth_page(spec);
    wseg::save_gray(page.image, args.out_image);
    wseg::write_truth(page.truth, args.out_truth);
  } catch (const wseg::LayoutOverflow & e) {
    std::cerr << "wseg synth: " << e.what() << '\n';
    return kBadArguments;
  } catch (const wseg::IoError & e) {
    std::cerr << "wseg synth: " << e.what() << '\n';
    return kIoFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Word segmentation of handwritten page images by distance-transform smearing"};
  app.require_subcommand(1);

  SegmentArgs seg;
  auto * segment = app.add_subcommand("segment", "Segment page images into word crops");
  segment->add_option("--input", seg.inputs, "Page image (P5/P6); repeat for a batch")->required();
  segment->add_option("--out", seg.out_dir, "Output directory for word_NNNN.pgm crops")->required();
  segment->add_option("--alpha", seg.alpha, "Smear threshold on the 0-255 distance scale")
    ->check(CLI::Range(0, 255));
  segment->add_option("--sigma", seg.sigma, "Gaussian sigma in pixels");
  segment->add_option("--d-sat", seg.d_sat, "Distance (px) mapped to 255 in fixed scale mode");
  segment->add_option("--scale-mode", seg.scale_mode, "Distance scaling: fixed or max")
    ->check(CLI::IsMember({"fixed", "max"}));
  segment->add_option("--beta", seg.beta, "Beta factor for cross-line splits");
  segment->add_option("--overlay", seg.overlay, "Write a PPM with word boxes drawn in red");
  segment->add_option("--boxes", seg.boxes, "Write word boxes in WSGT 1 format");
  segment->add_option("--config", seg.config, "key = value settings file (flags take precedence)");

  EvalArgs ev;
  auto * eval = app.add_subcommand("eval", "Score predicted word boxes against ground truth");
  eval->add_option("--pred", ev.pred, "Predicted boxes (WSGT 1)")->required();
  eval->add_option("--truth", ev.truth, "Ground-truth boxes (WSGT 1)")->required();
  eval->add_option("--report", ev.report, "Report output file")->required();
  eval->add_option("--coverage", ev.coverage, "Fraction of a truth box a prediction must cover")
    ->check(CLI::Range(0.0, 1.0));

  SynthArgs sy;
  auto * synth = app.add_subcommand("synth", "Generate a synthetic page with ground truth");
  synth->add_option("--spec", sy.spec, "Synth spec (key = value)")->required();
  synth->add_option("--seed", sy.seed, "Seed, overrides the spec");
  synth->add_option("--out-image", sy.out_image, "Output page (P5)")->required();
  synth->add_option("--out-truth", sy.out_truth, "Output ground truth (WSGT 1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kBadArguments;
  }

  if (segment->parsed()) {
    return run_segment(seg);
  }
  if (eval->parsed()) {
    return run_eval(ev);
  }
  return run_synth(sy);
}
