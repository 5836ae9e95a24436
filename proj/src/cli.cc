#include "pacebench/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pacebench/aggregate_report.h"
#include "pacebench/atomic_file.h"
#include "pacebench/bd_metrics.h"
#include "pacebench/benchmark.h"
#include "pacebench/byte_sink.h"
#include "pacebench/dataset.h"
#include "pacebench/error.h"
#include "pacebench/pacer.h"
#include "pacebench/run_store.h"

namespace pacebench {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  int verbose = 0;
  bool quiet = false;
  std::string manifest;
  std::string color = "auto";
};

struct PaceArgs {
  std::string input;
  std::string seq;
  std::string fps_override;
  std::string out = "-";
  bool y4m = false;
};

struct BenchArgs {
  std::string config;
  std::string mode;
  std::string only;
};

struct BdArgs {
  std::string ref;
  std::string test;
  std::string kind;
  std::string method = "paper-area";
  std::string rate_domain = "linear";
};

struct ReportArgs {
  std::string runs;
  std::string anchor;
  std::string kind;
  std::string format = "md";
  std::string out = "-";
  std::string method = "paper-area";
  std::string rate_domain = "linear";
  std::vector<std::string> columns;
};

constexpr std::string_view kLevelNames[] = {"trace", "debug", "info", "warn",
                                            "error", "critical", "off"};

void ConfigureLogging(const GlobalOptions& global) {
  spdlog::color_mode mode = spdlog::color_mode::automatic;
  if (global.color == "always") mode = spdlog::color_mode::always;
  if (global.color == "never") mode = spdlog::color_mode::never;
  auto sink = std::make_shared<spdlog::sinks::stderr_color_sink_mt>(mode);
  auto logger = std::make_shared<spdlog::logger>("pacebench", std::move(sink));
  logger->set_pattern("%^[%l]%$ %v");

  spdlog::level::level_enum level = spdlog::level::warn;
  if (global.verbose == 1) level = spdlog::level::info;
  if (global.verbose >= 2) level = spdlog::level::debug;
  if (global.quiet) level = spdlog::level::err;
  if (const char* env = std::getenv("PACEBENCH_LOG"); env && *env) {
    const std::string_view name(env);
    if (std::find(std::begin(kLevelNames), std::end(kLevelNames), name) ==
        std::end(kLevelNames)) {
      throw Error(ErrorCode::kUsage, "PACEBENCH_LOG must be one of trace, debug, info, "
                                     "warn, error, critical, off; got '" +
                                         std::string(name) + "'");
    }
    level = spdlog::level::from_str(std::string(name));
  }
  logger->set_level(level);
  spdlog::set_default_logger(std::move(logger));
}

void WriteOutput(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
  } else {
    WriteFileAtomically(path, text);
  }
}

std::string TwoDecimals(double value) {
  std::string text = fmt::format("{:.2f}", value);
  return text == "-0.00" ? "0.00" : text;
}

std::vector<VideoSequence> RequireManifest(const GlobalOptions& global,
                                           std::string_view command) {
  if (global.manifest.empty()) {
    throw Error(ErrorCode::kUsage, std::string(command) + " needs --manifest");
  }
  return LoadManifest(global.manifest);
}

int RunPace(const GlobalOptions& global, const PaceArgs& args, std::ostream& out) {
  const std::vector<VideoSequence> manifest = RequireManifest(global, "pace");
  VideoSequence seq = FindSequence(manifest, args.seq);
  const FrameRate fps = args.fps_override.empty() ? seq.fps : FrameRate::Parse(args.fps_override);
  FrameInterval(fps);

  VideoReader reader(seq, args.input.empty() ? seq.path : fs::path(args.input));
  IgnoreSigpipe();
  FdSink file_sink = FdSink::OpenPath(args.out);
  std::optional<Y4mFramingSink> framed;
  ByteSink* sink = &file_sink;
  if (args.y4m) {
    framed.emplace(file_sink, MakeY4mHeader(seq.width, seq.height, fps));
    sink = &*framed;
  }
  const PacingReport report = RunPaced(reader, *sink, fps);

  // Timing lines vary from run to run.
  const std::string summary = fmt::format(
      "frames: {}\nfps_target: {}\nduration_s: {:.6f}\ndelivery_fps: {:.3f}\n"
      "lateness_p50_ms: {:.3f}\nlateness_p99_ms: {:.3f}\nlateness_max_ms: {:.3f}\n"
      "blocked_s: {:.6f}\n",
      report.frames_sent, fps.ToString(), report.total_duration_s, report.DeliveryRateFps(),
      report.LatenessPercentile(50) * 1e3, report.LatenessPercentile(99) * 1e3,
      report.MaxLateness() * 1e3, report.blocked_time_s);
  if (args.out == "-") {
    spdlog::info("pacing summary\n{}", summary);
  } else {
    out << summary;
  }
  return 0;
}

int RunBench(const GlobalOptions& global, const BenchArgs& args, std::ostream& out) {
  BenchmarkConfig config = LoadBenchmarkConfig(args.config);
  if (!args.mode.empty()) {
    if (args.mode == "both") {
      config.modes = {RunMode::kPaced, RunMode::kUnpaced};
    } else if (args.mode == "paced" || args.mode == "unpaced") {
      config.modes = {ParseRunMode(args.mode)};
    } else {
      throw Error(ErrorCode::kUsage, "--mode must be paced, unpaced or both");
    }
  }
  if (!global.manifest.empty()) config.manifest_path = global.manifest;
  if (config.manifest_path.empty()) {
    throw Error(ErrorCode::kUsage, "no manifest: set 'manifest' in the config or pass --manifest");
  }
  const std::vector<VideoSequence> manifest = LoadManifest(config.manifest_path);
  const BenchFilter filter = ParseBenchFilter(args.only);

  const BenchOutcome outcome = RunBenchmark(config, manifest, filter);
  // Timing columns vary from run to run.
  out << "run_id,throughput_fps,achieved_kbps\n";
  for (const auto& record : outcome.records) {
    out << fmt::format("{},{:.3f},{:.3f}\n", RunId(record), record.throughput_fps,
                       record.achieved_bitrate_kbps);
  }
  if (outcome.failures.empty()) return 0;
  for (const auto& failure : outcome.failures) {
    spdlog::error("{}: {}", failure.run_id, failure.message);
  }
  const BenchFailure& first = outcome.failures.front();
  throw Error(first.code, fmt::format("{} of {} runs failed; first: {}: {}",
                                      outcome.failures.size(),
                                      outcome.failures.size() + outcome.records.size(),
                                      first.run_id, first.message));
}

BdKind ParseKind(const std::string& kind) {
  if (kind == "rate") return BdKind::kRatePercent;
  if (kind == "quality") return BdKind::kQualityPoints;
  throw Error(ErrorCode::kUsage, "--kind must be rate or quality");
}

BdRateMethod ParseMethod(const std::string& method) {
  if (method == "paper-area") return BdRateMethod::kPaperArea;
  if (method == "log-domain") return BdRateMethod::kLogDomain;
  throw Error(ErrorCode::kUsage, "--method must be paper-area or log-domain");
}

RateDomain ParseDomain(const std::string& domain) {
  if (domain == "linear") return RateDomain::kLinear;
  if (domain == "log") return RateDomain::kLog;
  throw Error(ErrorCode::kUsage, "--rate-domain must be linear or log");
}

int RunBd(const BdArgs& args, std::ostream& out) {
  const BdKind kind = ParseKind(args.kind);
  const BdRateMethod method = ParseMethod(args.method);
  const RateDomain domain = ParseDomain(args.rate_domain);
  const RateQualityCurve test = PruneMonotone(LoadCurveCsv(args.test)).curve;
  const RateQualityCurve ref = PruneMonotone(LoadCurveCsv(args.ref)).curve;

  const BdResult result =
      kind == BdKind::kRatePercent ? BdRate(test, ref, method) : BdQuality(test, ref, domain);
  out << TwoDecimals(result.value) << "\n";
  out << "kind: " << BdKindName(result.kind) << "\n";
  out << "value: " << fmt::format("{:.10g}", result.value) << "\n";
  if (kind == BdKind::kRatePercent) {
    out << "method: " << BdRateMethodName(result.method) << "\n";
  } else {
    out << "rate_domain: " << RateDomainName(result.rate_domain) << "\n";
  }
  out << fmt::format("common_range: {} [{}, {}]\n", AxisName(result.common_range.axis),
                     result.common_range.lo, result.common_range.hi);
  out << fmt::format("points_used: test={} ref={}\n", result.points_used.first,
                     result.points_used.second);
  return 0;
}

int RunReport(const GlobalOptions& global, const ReportArgs& args, std::ostream& out) {
  const BdKind kind = ParseKind(args.kind);
  MatrixOptions options{ParseMethod(args.method), ParseDomain(args.rate_domain)};
  if (args.format != "md" && args.format != "csv") {
    throw Error(ErrorCode::kUsage, "--format must be md or csv");
  }
  const fs::path runs_dir = args.runs;
  const std::vector<RunRecord> records = LoadRunRecords(runs_dir);
  const fs::path snapshot = runs_dir / "manifest.json";
  std::vector<VideoSequence> manifest;
  if (!global.manifest.empty()) {
    manifest = LoadManifest(global.manifest);
  } else if (fs::is_regular_file(snapshot)) {
    manifest = LoadManifest(snapshot);
  } else {
    throw Error(ErrorCode::kUsage, "no manifest.json under --runs; pass --manifest");
  }

  std::vector<std::string> profiles = args.columns;
  if (profiles.empty()) {
    std::set<std::string> names;
    for (const auto& r : records) names.insert(r.profile_name);
    profiles.assign(names.begin(), names.end());
  } else if (std::find(profiles.begin(), profiles.end(), args.anchor) == profiles.end()) {
    profiles.insert(profiles.begin(), args.anchor);
  }

  const auto curves = CurvesFromRuns(records, runs_dir);
  for (const auto& [key, curve] : curves) {
    WriteFileAtomically(runs_dir / "curves" /
                            (SafeFileStem(key.first) + "__" + SafeFileStem(key.second) + ".csv"),
                        CurveToCsv(curve));
  }
  WriteFileAtomically(runs_dir / "throughput.csv", ThroughputCsv(records, manifest));

  const ComparisonMatrix matrix =
      BuildMatrix(curves, manifest, profiles, args.anchor, kind, options);
  WriteOutput(args.out, args.format == "md" ? RenderMarkdown(matrix) : RenderCsv(matrix), out);
  return 0;
}

void ReportError(std::ostream& err, std::string_view kind, std::string_view message) {
  std::string flat(message);
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  err << "error: kind=" << kind << " message=" << flat << "\n";
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paced encoder benchmarking and Bjontegaard-delta comparison", "pacebench"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_flag("-v,--verbose", global.verbose, "More log output (repeatable)");
  app.add_flag("-q,--quiet", global.quiet, "Only log errors");
  app.add_option("--manifest", global.manifest, "Sequence manifest (JSON)");
  app.add_option("--color", global.color, "Log coloring")
      ->check(CLI::IsMember({"auto", "always", "never"}));

  PaceArgs pace_args;
  CLI::App* pace = app.add_subcommand("pace", "Deliver a sequence's frames at its frame rate");
  pace->add_option("--input", pace_args.input, "Source file (default: manifest path)");
  pace->add_option("--seq", pace_args.seq, "Sequence short name")->required();
  pace->add_option("--fps-override", pace_args.fps_override, "Delivery rate as n/d");
  pace->add_option("--out", pace_args.out, "Destination path, FIFO or '-' for stdout");
  pace->add_flag("--y4m", pace_args.y4m, "Wrap the frames in a Y4M stream");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Run encoder profiles over sequences");
  bench->add_option("--config", bench_args.config, "Benchmark config (JSON)")->required();
  bench->add_option("--mode", bench_args.mode, "paced, unpaced or both (default: config)");
  bench->add_option("--only", bench_args.only, "Restrict runs, e.g. profile=x264,seq=BS25");

  BdArgs bd_args;
  CLI::App* bd = app.add_subcommand("bd", "Bjontegaard delta between two curve CSVs");
  bd->add_option("--ref", bd_args.ref, "Reference curve CSV")->required();
  bd->add_option("--test", bd_args.test, "Test curve CSV")->required();
  bd->add_option("--kind", bd_args.kind, "rate or quality")->required();
  bd->add_option("--method", bd_args.method, "paper-area or log-domain (BD-rate)");
  bd->add_option("--rate-domain", bd_args.rate_domain, "linear or log (BD-quality)");

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "Comparison matrix from benchmark runs");
  report->add_option("--runs", report_args.runs, "Benchmark output directory")->required();
  report->add_option("--anchor", report_args.anchor, "Anchor profile")->required();
  report->add_option("--kind", report_args.kind, "rate or quality")->required();
  report->add_option("--format", report_args.format, "md or csv");
  report->add_option("--out", report_args.out, "Output path or '-' for stdout");
  report->add_option("--method", report_args.method, "paper-area or log-domain");
  report->add_option("--rate-domain", report_args.rate_domain, "linear or log");
  report->add_option("--columns", report_args.columns, "Competitor column order")
      ->delimiter(',');

  // The first bare word after the global options names the subcommand.
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg == "--manifest" || arg == "--color") {
      ++i;
      continue;
    }
    if (arg.empty() || arg[0] == '-') continue;
    if (!app.get_subcommand_no_throw(arg)) {
      ReportError(err, ErrorCodeName(ErrorCode::kUsage), "unknown subcommand '" + arg + "'");
      return ExitStatusFor(ErrorCode::kUsage);
    }
    break;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    ReportError(err, ErrorCodeName(ErrorCode::kUsage), e.what());
    err << app.help();
    return ExitStatusFor(ErrorCode::kUsage);
  }

  try {
    ConfigureLogging(global);
    if (pace->parsed()) return RunPace(global, pace_args, out);
    if (bench->parsed()) return RunBench(global, bench_args, out);
    if (bd->parsed()) return RunBd(bd_args, out);
    return RunReport(global, report_args, out);
  } catch (const Error& e) {
    ReportError(err, ErrorCodeName(e.code()), e.what());
    return ExitStatusFor(e.code());
  } catch (const fs::filesystem_error& e) {
    ReportError(err, ErrorCodeName(ErrorCode::kIo), e.what());
    return ExitStatusFor(ErrorCode::kIo);
  } catch (const std::exception& e) {
    ReportError(err, "internal", e.what());
    return 1;
  }
}

}  // namespace pacebench
