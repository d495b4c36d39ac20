#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>

#include "classd/audio_io.hpp"
#include "classd/config.hpp"
#include "classd/dse.hpp"
#include "classd/error.hpp"
#include "classd/profiler.hpp"
#include "classd/signals.hpp"
#include "classd/verification.hpp"

namespace classd::cli {
namespace {

namespace fs = std::filesystem;

// Raised for bad command-line input; carries the message printed to stderr.
struct UsageError : Error {
  using Error::Error;
};

void require_input(const std::string& path, const char* what = "input") {
  if (path.empty()) throw UsageError(std::string("--") + what + " is required");
  if (!fs::exists(path)) throw UsageError(std::string(what) + " not found: " + path);
}

void require_output(const std::string& path) {
  if (path.empty()) throw UsageError("--output is required");
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw UsageError("output directory not found: " + parent.string());
  }
}

std::vector<ProcessingElement> pe_library(const RunConfig& cfg) {
  if (cfg.pe_lib.empty()) return default_pe_library();
  require_input(cfg.pe_lib, "pe-lib");
  return load_pe_library(cfg.pe_lib);
}

std::map<std::string, dse::Side> parse_pins(const std::vector<std::string>& pins) {
  std::map<std::string, dse::Side> out;
  for (const auto& p : pins) {
    const auto eq = p.find('=');
    std::string side = eq == std::string::npos ? "" : p.substr(eq + 1);
    std::transform(side.begin(), side.end(), side.begin(), ::tolower);
    if (eq == std::string::npos || (side != "hw" && side != "sw")) {
      throw UsageError("--pin expects NAME=hw|sw, got '" + p + "'");
    }
    out[p.substr(0, eq)] = side == "hw" ? dse::Side::Hw : dse::Side::Sw;
  }
  return out;
}

dse::Micros deadline_us(double ms) {
  if (!(ms > 0)) throw UsageError("--deadline-ms must be positive");
  return static_cast<dse::Micros>(std::llround(ms * 1000.0));
}

}  // namespace

int cmd_convert(const RunConfig& cfg, std::ostream& out) {
  require_input(cfg.input);
  require_output(cfg.output);
  const PcmStream pcm = read_wav(cfg.input);
  const PwmBitstream pwm = convert(pcm, cfg.chain);
  write_pwm(pwm, cfg.output);

  out << "input:        " << cfg.input << " (" << pcm.samples.size() << " samples @ "
      << pcm.sample_rate << " Hz)\n";
  out << "output:       " << cfg.output << '\n';
  out << "frames:       " << pwm.frame_count() << '\n';
  out << "bits:         " << pwm.bit_count() << '\n';
  out << "frame bits:   " << pwm.frame_bits() << '\n';
  out << "clock:        " << pwm.clock_hz() << " Hz\n";
  out << "naive clock: " << cfg.chain.naive_clock_hz() << " Hz\n";
  return kOk;
}

int cmd_profile(const RunConfig& cfg, std::ostream& out) {
  const auto pes = pe_library(cfg);

  if (cfg.input.empty()) {
    // Whole-design cycle counts from a fixture.
    require_input(cfg.scenario, "scenario");
    const Scenario sc = load_scenario(cfg.scenario);
    if (sc.cycles.empty()) throw UsageError("scenario has no 'cycles' rows");
    const dse::Micros dl = cfg.deadline_ms ? deadline_us(*cfg.deadline_ms) : sc.cost_model.deadline;
    const Rational playback(static_cast<std::uint64_t>(dl), 1'000'000);
    report::write_pe_estimates(out, report::estimate_all(sc.cycles, pes, playback), cfg.format);
    return kOk;
  }

  require_input(cfg.input);
  const PcmStream pcm = read_wav(cfg.input);
  Profiler prof;
  convert(pcm, cfg.chain, &prof);

  Rational playback(4'300'000, 1'000'000);
  if (cfg.deadline_ms) {
    playback = Rational(static_cast<std::uint64_t>(deadline_us(*cfg.deadline_ms)), 1'000'000);
  } else if (!pcm.samples.empty()) {
    playback = Rational(pcm.samples.size(), pcm.sample_rate);
  }

  std::vector<std::pair<std::string, std::uint64_t>> totals;
  for (const auto& pe : pes) totals.emplace_back(pe.name, cycles(prof.counts(), pe).total);

  report::write_op_counts(out, prof.counts(), pes, cfg.format);
  out << '\n';
  if (cfg.format == report::Format::Text) {
    out << "Whole-design estimate (playback " << report::seconds_2dp(playback) << " s)\n";
  }
  report::write_pe_estimates(out, report::estimate_all(totals, pes, playback), cfg.format);
  return kOk;
}

int cmd_explore(const RunConfig& cfg, std::ostream& out) {
  require_input(cfg.scenario, "scenario");
  Scenario sc = load_scenario(cfg.scenario);
  if (cfg.deadline_ms) sc.cost_model.deadline = deadline_us(*cfg.deadline_ms);
  const auto pins = parse_pins(cfg.pins);
  const auto& cm = sc.cost_model;

  const auto options = dse::enumerate(sc.table, cm, pins);
  std::optional<dse::PartitionOption> selected;
  std::string failure;
  try {
    selected = dse::select(options, cm);
  } catch (const NoFeasibleOption& e) {
    failure = e.what();
  }
  const auto feasible = std::count_if(options.begin(), options.end(),
                                      [](const auto& o) { return o.feasible; });

  const bool text = cfg.format == report::Format::Text;
  if (text) out << "Behavior estimates (ms, US$)\n";
  report::write_behavior_table(out, sc.table, cfg.format);
  out << '\n';
  if (text) {
    out << "Mappings: " << options.size() << " evaluated, " << feasible
        << " meet the deadline of " << dse::format_ms(cm.deadline) << " ms\n";
  }
  report::write_options(out, options, selected, cfg.format);
  out << '\n';
  if (text) out << "Reference options\n";
  report::write_reference_options(out, sc.table, cm, cfg.format);

  if (!selected) {
    out << (text ? "\nNo feasible partition: " : "\n# no feasible partition: ") << failure << '\n';
    return kNoFeasible;
  }
  out << (text ? "\nSelected: " : "\n# selected: ") << dse::format_set(selected->hw_set) << " ("
      << dse::format_ms(selected->t_total) << " ms, $" << dse::format_money(selected->cost)
      << ")\n";
  return kOk;
}

int cmd_roundtrip(const RunConfig& cfg, std::ostream& out) {
  require_input(cfg.input);
  const PcmStream pcm = read_wav(cfg.input);
  const PwmBitstream pwm = convert(pcm, cfg.chain);
  const SampleStream ref = s0_condition(pcm);
  const SampleStream back = demodulate(pwm, pcm.sample_rate, demod_options_for(cfg.chain));
  const SpectrumReport rep = measure(ref, back);

  if (cfg.format == report::Format::Csv) {
    write_report_csv(out, rep);
  } else {
    write_report_text(out, rep);
  }
  const bool pass = rep.snr_db >= cfg.snr_floor_db;
  out << (pass ? "PASS" : "FAIL") << ": SNR " << (pass ? ">= " : "< ") << cfg.snr_floor_db
      << " dB\n";
  return pass ? kOk : kQualityFloor;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  require_output(cfg.output);
  if (!(cfg.duration_s >= 0)) throw UsageError("--duration-s must be non-negative");
  ToneSpec spec;
  spec.freq_hz = cfg.freq_hz;
  spec.level_dbfs = cfg.level_dbfs;
  spec.sample_rate = cfg.chain.input_rate;
  spec.samples = samples_for(cfg.duration_s, spec.sample_rate);
  spec.noise_dbfs = cfg.noise_dbfs;
  spec.seed = cfg.seed;
  const PcmStream pcm = make_tone(spec);
  write_wav(pcm, cfg.output);
  out << "wrote " << pcm.samples.size() << " samples @ " << pcm.sample_rate << " Hz to "
      << cfg.output << '\n';
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PCM to Class-D PWM conversion, profiling and HW/SW partition exploration",
               "classd"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "text";
  bool no_linearize = false;

  auto chain_flags = [&](CLI::App* sub) {
    sub->add_option("--quantizer-bits", cfg.chain.quantizer_bits, "PWM quantizer bits")
        ->capture_default_str();
    sub->add_option("--shaper-order", cfg.chain.shaper_order, "noise shaper order (0 = none)")
        ->capture_default_str();
    sub->add_flag("--no-linearize", no_linearize, "bypass the LINE stage");
  };
  auto format_flag = [&](CLI::App* sub) {
    sub->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();
  };

  auto* convert_cmd = app.add_subcommand("convert", "convert a WAV file to a PWM1 bitstream");
  convert_cmd->add_option("--input", cfg.input, "16-bit PCM WAV file");
  convert_cmd->add_option("--output", cfg.output, "PWM1 output file");
  chain_flags(convert_cmd);

  auto* profile_cmd = app.add_subcommand("profile", "operation counts and per-PE time estimates");
  profile_cmd->add_option("--input", cfg.input, "WAV file to run through the instrumented chain");
  profile_cmd->add_option("--scenario", cfg.scenario, "fixture with 'cycles' rows (no --input)");
  profile_cmd->add_option("--pe-lib", cfg.pe_lib, "processing-element library");
  profile_cmd->add_option("--deadline-ms", cfg.deadline_ms, "real-time goal (ms)");
  chain_flags(profile_cmd);
  format_flag(profile_cmd);

  auto* explore_cmd = app.add_subcommand("explore", "enumerate HW/SW partitions");
  explore_cmd->add_option("--scenario", cfg.scenario, "behavior estimate fixture");
  explore_cmd->add_option("--deadline-ms", cfg.deadline_ms, "override the fixture deadline");
  explore_cmd->add_option("--pin", cfg.pins, "force a behavior to a side, NAME=hw|sw");
  format_flag(explore_cmd);

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "convert, demodulate and measure SNR");
  roundtrip_cmd->add_option("--input", cfg.input, "16-bit PCM WAV file");
  roundtrip_cmd->add_option("--snr-floor-db", cfg.snr_floor_db, "minimum acceptable SNR")
      ->capture_default_str();
  chain_flags(roundtrip_cmd);
  format_flag(roundtrip_cmd);

  auto* generate_cmd = app.add_subcommand("generate", "write a test tone WAV");
  generate_cmd->add_option("--output", cfg.output, "WAV output file");
  generate_cmd->add_option("--freq-hz", cfg.freq_hz)->capture_default_str();
  generate_cmd->add_option("--level-dbfs", cfg.level_dbfs)->capture_default_str();
  generate_cmd->add_option("--duration-s", cfg.duration_s)->capture_default_str();
  generate_cmd->add_option("--noise-dbfs", cfg.noise_dbfs, "add white noise at this RMS level");
  generate_cmd->add_option("--seed", cfg.seed, "noise generator seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  cfg.chain.linearize = !no_linearize;
  cfg.format = format == "csv" ? report::Format::Csv : report::Format::Text;

  try {
    if (*convert_cmd) return cmd_convert(cfg, out);
    if (*profile_cmd) return cmd_profile(cfg, out);
    if (*explore_cmd) return cmd_explore(cfg, out);
    if (*roundtrip_cmd) return cmd_roundtrip(cfg, out);
    if (*generate_cmd) return cmd_generate(cfg, out);
  } catch (const NoFeasibleOption& e) {
    err << "error: " << e.what() << '\n';
    return kNoFeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInputError;
}

}  // namespace classd::cli
