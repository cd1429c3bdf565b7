#include "mclamp/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "mclamp/dataset.hpp"
#include "mclamp/pipeline.hpp"
#include "mclamp/report.hpp"

namespace mclamp {
namespace {

namespace fs = std::filesystem;

// Raised for bad user input; maps to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string grid = "4x4x8";
  double clamp_c = 0.2;
  double epsilon = 1.0;
  double magnification = kDefaultMagnification;
  int sweep_samples = kDefaultSweepSamples;

  void attach(CLI::App& cmd) {
    cmd.add_option("--grid", grid, "Histogram grid NXxNYxNT")->capture_default_str();
    cmd.add_option("--clamp-c", clamp_c, "Lowe clamp value")->capture_default_str();
    cmd.add_option("--epsilon", epsilon, "NFA detection budget")->capture_default_str();
    cmd.add_option("--magnification", magnification, "Patch radius in units of frame scale")->capture_default_str();
    cmd.add_option("--sweep-samples", sweep_samples, "Thresholds per PR curve")->capture_default_str();
  }

  DescribeOptions describe_options() const {
    DescribeOptions o;
    try {
      o.grid = HistogramGrid::parse(grid);
      o.acontrario.epsilon = epsilon;
      o.acontrario.validate();
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    if (!(magnification > 0.0)) throw InputError("--magnification must be positive");
    if (sweep_samples < 2) throw InputError("--sweep-samples must be at least 2");
    return o;
  }

  std::vector<ClampPolicy> policies(const std::string& list) const {
    std::vector<ClampPolicy> out;
    std::stringstream in(list);
    for (std::string name; std::getline(in, name, ',');) {
      try {
        out.push_back(ClampPolicy::parse(name, clamp_c));
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
    }
    if (out.empty()) throw InputError("no policies given");
    return out;
  }
};

void require_file(const fs::path& path, const std::string& what) {
  if (!fs::is_regular_file(path)) throw InputError(what + " not found: " + path.string());
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string plot_name(const std::string& category, int pair) {
  return category + "_1-" + std::to_string(pair) + ".svg";
}

struct PairJob {
  std::string category;
  int pair = 2;
  // Loaded lazily by the worker for Oxford inputs, given directly for synth.
  std::function<void(GrayImage&, std::vector<FeatureFrame>&, GrayImage&, std::vector<FeatureFrame>&, Homography&)>
      load;
};

struct PairOutcome {
  std::vector<PolicyEvaluation> evaluations;
  std::string error;
};

std::vector<PairOutcome> run_jobs(const std::vector<PairJob>& jobs, const std::vector<ClampPolicy>& policies,
                                  const DescribeOptions& options, int sweep_samples, int threads) {
  std::vector<PairOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        GrayImage img_a, img_b;
        std::vector<FeatureFrame> fa, fb;
        Homography h;
        jobs[i].load(img_a, fa, img_b, fb, h);
        outcomes[i].evaluations = evaluate_policies(img_a, fa, img_b, fb, h, policies, options, sweep_samples);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return outcomes;
}

int finish_report(BenchReport& report, const std::vector<PairJob>& jobs, const std::vector<PairOutcome>& outcomes,
                  const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  fs::create_directories(out_dir / "plots");
  std::size_t evaluated = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      report.skipped.push_back(jobs[i].category + " 1-" + std::to_string(jobs[i].pair) + ": " + outcomes[i].error);
      continue;
    }
    ++evaluated;
    std::vector<NamedCurve> curves;
    for (const auto& pe : outcomes[i].evaluations) {
      report.rows.push_back(make_row(jobs[i].category, jobs[i].pair, pe.policy.name(), pe.evaluation.result));
      curves.push_back({pe.policy.name(), pe.evaluation.curve});
    }
    write_file(out_dir / "plots" / plot_name(jobs[i].category, jobs[i].pair),
               pr_curve_svg(jobs[i].category + " 1-" + std::to_string(jobs[i].pair), curves));
  }
  report.sort_rows();
  write_file(out_dir / "pairs.csv", pairs_csv(report));
  write_file(out_dir / "summary.csv", summary_csv(report));
  write_file(out_dir / "report.json", to_json(report).dump(2) + "\n");

  out << summary_csv(report);
  for (const auto& [policy, v] : report.improvements())
    out << "improvement " << policy << " over lowe: " << format_fixed(v, 2) << "%\n";
  for (const auto& s : report.skipped) err << "skipped " << s << '\n';
  if (evaluated == 0) {
    err << "error: no usable image pairs\n";
    return kExitNoPairs;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Descriptor clamping benchmarks: Lowe vs a contrario meaningful clamping"};
  app.require_subcommand(1);
  CommonFlags flags;

  // describe
  auto* describe = app.add_subcommand("describe", "Write clamped descriptors for the frames of one image");
  std::string d_image, d_frames, d_out, d_policy = "mc-approx";
  describe->add_option("--image", d_image, "PGM image")->required();
  describe->add_option("--frames", d_frames, "Frame file (x y scale orientation per line)")->required();
  describe->add_option("--out", d_out, "Output .desc file")->required();
  describe->add_option("--policy", d_policy, "none|lowe|mc-exact|mc-approx")->capture_default_str();
  flags.attach(*describe);

  // eval
  auto* eval = app.add_subcommand("eval", "Average precision of each policy on one image pair");
  std::string e_img_a, e_img_b, e_fr_a, e_fr_b, e_h, e_out, e_category = "pair";
  std::string e_policies = "none,lowe,mc-exact,mc-approx";
  int e_pair = 2;
  eval->add_option("--image-a", e_img_a)->required();
  eval->add_option("--frames-a", e_fr_a)->required();
  eval->add_option("--image-b", e_img_b)->required();
  eval->add_option("--frames-b", e_fr_b)->required();
  eval->add_option("--homography", e_h, "Homography text file mapping a to b")->required();
  eval->add_option("--policies", e_policies)->capture_default_str();
  eval->add_option("--category", e_category)->capture_default_str();
  eval->add_option("--pair", e_pair, "Target image index used in row labels")->capture_default_str();
  eval->add_option("--out", e_out, "Optional directory for report files");
  flags.attach(*eval);

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark policies over an Oxford-layout dataset or a synthetic suite");
  std::string b_root, b_out = "bench_out", b_policies = "none,lowe,mc-exact,mc-approx";
  int b_synth = 0, b_jobs = 1;
  std::uint64_t b_seed = 1;
  auto* b_root_opt = bench->add_option("--oxford", b_root, "Dataset root with one directory per category");
  auto* b_synth_opt = bench->add_option("--synth", b_synth, "Number of synthetic pairs");
  b_root_opt->excludes(b_synth_opt);
  bench->add_option("--seed", b_seed, "Synthetic suite seed")->capture_default_str();
  bench->add_option("--policies", b_policies)->capture_default_str();
  bench->add_option("--out", b_out)->capture_default_str();
  bench->add_option("--jobs", b_jobs, "Pairs evaluated concurrently")->capture_default_str();
  flags.attach(*bench);

  // thresholds
  auto* thresholds = app.add_subcommand("thresholds", "Exact vs approximate clamping thresholds for a sample mass");
  double t_mass = 0.0;
  std::optional<double> t_tests;
  thresholds->add_option("--mass", t_mass, "Total descriptor mass M")->required();
  thresholds->add_option("--tests", t_tests, "Override the number of tests (default: rectangular count)");
  flags.attach(*thresholds);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic suite in the Oxford directory layout");
  std::string s_out;
  int s_cases = 6;
  std::uint64_t s_seed = 1;
  synth->add_option("--out", s_out)->required();
  synth->add_option("--cases", s_cases)->capture_default_str();
  synth->add_option("--seed", s_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (describe->parsed()) {
      const DescribeOptions options = flags.describe_options();
      const ClampPolicy policy = flags.policies(d_policy).front();
      require_file(d_image, "image");
      require_file(d_frames, "frames file");
      const GrayImage image = read_pgm(d_image);
      const FrameFile frames = load_frames(d_frames);
      const RawDescriptorSet raw = describe_raw(image, frames.frames, options);
      write_descriptor_set(d_out, apply_policy(raw, policy, options));
      err << "described " << raw.frames.size() << " frames, skipped " << raw.skipped << " near the border\n";
      return kExitOk;
    }

    if (eval->parsed()) {
      const DescribeOptions options = flags.describe_options();
      const auto policies = flags.policies(e_policies);
      for (const auto& [p, what] : {std::pair{e_img_a, "image"}, {e_img_b, "image"}, {e_fr_a, "frames file"},
                                    {e_fr_b, "frames file"}, {e_h, "homography"}})
        require_file(p, what);
      std::vector<PairJob> jobs{{e_category, e_pair, [&](GrayImage& ia, auto& fa, GrayImage& ib, auto& fb, Homography& h) {
                                   ia = read_pgm(e_img_a);
                                   ib = read_pgm(e_img_b);
                                   fa = load_frames(e_fr_a).frames;
                                   fb = load_frames(e_fr_b).frames;
                                   h = load_homography(e_h);
                                 }}};
      const auto outcomes = run_jobs(jobs, policies, options, flags.sweep_samples, 1);
      if (!outcomes[0].error.empty()) throw InputError(outcomes[0].error);
      BenchReport report;
      for (const auto& p : policies) report.policies.push_back(p.name());
      for (const auto& pe : outcomes[0].evaluations)
        report.rows.push_back(make_row(e_category, e_pair, pe.policy.name(), pe.evaluation.result));
      report.sort_rows();
      out << pairs_csv(report);
      if (!e_out.empty()) {
        fs::create_directories(e_out);
        write_file(fs::path(e_out) / "pairs.csv", pairs_csv(report));
        write_file(fs::path(e_out) / "report.json", to_json(report).dump(2) + "\n");
        std::vector<NamedCurve> curves;
        for (const auto& pe : outcomes[0].evaluations) curves.push_back({pe.policy.name(), pe.evaluation.curve});
        write_file(fs::path(e_out) / plot_name(e_category, e_pair), pr_curve_svg(e_category, curves));
      }
      return kExitOk;
    }

    if (bench->parsed()) {
      const DescribeOptions options = flags.describe_options();
      const auto policies = flags.policies(b_policies);
      if (b_root.empty() && b_synth <= 0) throw InputError("bench needs --oxford ROOT or --synth N");
      BenchReport report;
      for (const auto& p : policies) report.policies.push_back(p.name());
      std::vector<PairJob> jobs;
      std::vector<SynthCase> suite;
      if (!b_root.empty()) {
        OxfordScan scan;
        try {
          scan = scan_oxford(b_root);
        } catch (const std::runtime_error& e) {
          throw InputError(e.what());
        }
        report.skipped = scan.skipped;
        for (const auto& spec : scan.pairs) {
          jobs.push_back({spec.category, spec.target, [spec](GrayImage& ia, auto& fa, GrayImage& ib, auto& fb, Homography& h) {
                            ia = read_pgm(spec.image_a);
                            ib = read_pgm(spec.image_b);
                            fa = load_frames(spec.frames_a).frames;
                            fb = load_frames(spec.frames_b).frames;
                            h = load_homography(spec.homography);
                          }});
        }
      } else {
        SynthOptions so;
        so.cases = b_synth;
        so.seed = b_seed;
        suite = make_synthetic_suite(so);
        for (const auto& sc : suite) {
          jobs.push_back({sc.name, 2, [&sc](GrayImage& ia, auto& fa, GrayImage& ib, auto& fb, Homography& h) {
                            ia = sc.pair.a;
                            ib = sc.pair.b;
                            fa = sc.frames_a;
                            fb = sc.frames_b;
                            h = sc.pair.h;
                          }});
        }
      }
      const auto outcomes = run_jobs(jobs, policies, options, flags.sweep_samples, std::max(1, b_jobs));
      return finish_report(report, jobs, outcomes, b_out, out, err);
    }

    if (thresholds->parsed()) {
      DescribeOptions options = flags.describe_options();
      options.acontrario.explicit_tests = t_tests;
      const HistogramGrid& grid = options.grid;
      const double p = grid.bin_probability();
      const double tests = test_count(options.acontrario, grid);
      const double approx = approx_threshold(tests, t_mass, p);
      std::optional<ExactThreshold> exact;
      std::string exact_error;
      try {
        exact = exact_threshold(options.acontrario, tests, t_mass, p);
      } catch (const std::domain_error& e) {
        exact_error = e.what();
      }
      out << std::setprecision(10);
      out << "grid: " << grid.to_string() << "\n";
      out << "bins: " << grid.bin_count() << "\n";
      out << "p: " << p << "\n";
      out << "mass: " << t_mass << "\n";
      out << "n_rect: " << n_rect(grid) << "\n";
      out << "tests: " << tests << "\n";
      out << "epsilon: " << options.acontrario.epsilon << "\n";
      out << "alpha: " << approx_alpha(tests) << "\n";
      out << "approx_threshold: " << format_fixed(approx, 4) << "\n";
      if (exact) {
        out << "exact_threshold: " << exact->value << (exact->saturated ? " (saturated)" : "") << "\n";
        out << "approx_le_exact: " << (approx <= static_cast<double>(exact->value) ? "yes" : "no") << "\n";
      } else {
        out << "exact_threshold: undefined (" << exact_error << ")\n";
        out << "approx_le_exact: n/a\n";
      }
      const double r = t_mass > 0.0 ? approx / t_mass : 0.0;
      out << "slud_condition_a: " << ((p <= 0.25 && p <= r) ? "yes" : "no") << "\n";
      out << "slud_condition_b: " << ((p <= r && r <= 1.0 - p) ? "yes" : "no") << "\n";
      out << "slud_conditions_hold: " << (slud_conditions_hold(p, r) ? "yes" : "no") << "\n";
      return kExitOk;
    }

    if (synth->parsed()) {
      SynthOptions so;
      so.cases = s_cases;
      so.seed = s_seed;
      for (const auto& sc : make_synthetic_suite(so)) {
        const fs::path dir = fs::path(s_out) / sc.name;
        fs::create_directories(dir);
        write_pgm(dir / "img1.pgm", sc.pair.a);
        write_pgm(dir / "img2.pgm", sc.pair.b);
        std::ostringstream h;
        h << std::setprecision(17);
        const auto& m = sc.pair.h.matrix();
        for (int r = 0; r < 3; ++r) h << m[r * 3] << ' ' << m[r * 3 + 1] << ' ' << m[r * 3 + 2] << '\n';
        write_file(dir / "H1to2p", h.str());
        for (const auto& [name, frames] : {std::pair{"img1.frames", &sc.frames_a}, {"img2.frames", &sc.frames_b}}) {
          DescriptorSet set;
          set.frames = *frames;
          set.descriptors.resize(frames->size());
          write_file(dir / name, format_descriptor_set(set));
        }
      }
      out << "wrote " << s_cases << " synthetic pairs to " << s_out << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    // Bad paths, malformed files and out-of-domain arguments alike.
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace mclamp
