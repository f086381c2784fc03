// seamix: automatic two-track DJ transitions via a per-frequency min-cut
// seam over the overlapped spectrograms.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "seamix/pipeline.hpp"
#include "seamix/synth.hpp"

namespace {

using seamix::errc;

int exit_code_for(const seamix::Error& err) {
  switch (err.code()) {
    case errc::format:
    case errc::unsupported:
    case errc::empty_input:
      return 2;
    case errc::incompatible_tempo:
      return 3;
    case errc::too_short:
      return 4;
    case errc::low_confidence:
      return 5;
    default:
      return 1;
  }
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw seamix::Error(errc::format, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void write_seam_json(const std::filesystem::path& path,
                     const seamix::TransitionArtifacts& artifacts) {
  nlohmann::ordered_json j;
  j["cut_cost"] = artifacts.result.cut_cost;
  j["tempo_a"] = artifacts.tempo_a;
  j["tempo_b"] = artifacts.tempo_b;
  j["stretch_ratio"] = artifacts.stretch_ratio;
  j["seams"] = artifacts.result.seam.flips_per_bin;

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw seamix::Error(errc::format, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

void emit_artifacts(const seamix::TransitionArtifacts& artifacts, const std::string& out_wav,
                    const std::string& out_png, const std::string& out_json) {
  seamix::save_wav_file(out_wav, artifacts.result.output);
  std::cerr << "wrote " << out_wav << " (" << artifacts.result.output.duration() << " s, cut cost "
            << artifacts.result.cut_cost << ")\n";
  if (!out_png.empty()) {
    write_bytes(out_png, seamix::spectrogram_png(artifacts.overlap_db, artifacts.result.seam));
    std::cerr << "wrote " << out_png << "\n";
  }
  if (!out_json.empty()) {
    write_seam_json(out_json, artifacts);
    std::cerr << "wrote " << out_json << "\n";
  }
}

struct CommonOptions {
  std::size_t fft_size = 2048;
  std::size_t hop = 0;  // 0 = fft_size / 4
  seamix::TransitionConfig to_config() const {
    seamix::TransitionConfig config;
    config.fft_size = fft_size;
    config.hop = hop == 0 ? fft_size / 4 : hop;
    return config;
  }
};

void add_stft_flags(CLI::App& app, CommonOptions& opts) {
  app.add_option("--fft-size", opts.fft_size, "STFT size in samples (power of two)")
      ->capture_default_str();
  app.add_option("--hop", opts.hop, "STFT hop in samples (default fft-size/4)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automatic DJ transitions: tempo-match, beat-align, and cut the "
               "overlapped spectrograms along a per-frequency min-cut seam"};
  app.require_subcommand(1);

  // --- transition ---------------------------------------------------------
  std::string tr_a, tr_b, tr_out = "transition.wav", tr_png, tr_json;
  CommonOptions tr_opts;
  int tr_overlap = 64;
  bool tr_force = false;
  std::optional<double> tr_a_start, tr_b_start;
  auto* transition =
      app.add_subcommand("transition", "Render a full transition from track A into track B");
  transition->add_option("track_a", tr_a, "first track (WAV)")->required();
  transition->add_option("track_b", tr_b, "second track (WAV)")->required();
  transition->add_option("--out", tr_out, "output WAV path")->capture_default_str();
  transition->add_option("--png", tr_png, "write the seam spectrogram image here");
  transition->add_option("--seam-json", tr_json, "write seam metadata (JSON) here");
  transition->add_option("--overlap-beats", tr_overlap, "overlap length in beats")
      ->capture_default_str();
  transition->add_flag("--force-tempo", tr_force,
                       "proceed even when tempo estimation is low-confidence");
  transition->add_option("--a-start", tr_a_start,
                         "start of A's overlap window (seconds, snapped to a beat)");
  transition->add_option("--b-start", tr_b_start,
                         "start of B's overlap window (seconds, snapped to a beat)");
  add_stft_flags(*transition, tr_opts);

  // --- analyze ------------------------------------------------------------
  std::string an_track;
  CommonOptions an_opts;
  auto* analyze = app.add_subcommand("analyze", "Print tempo and beat grid for one track");
  analyze->add_option("track", an_track, "track to analyze (WAV)")->required();
  add_stft_flags(*analyze, an_opts);

  // --- cut ----------------------------------------------------------------
  std::string cut_a, cut_b, cut_out = "cut.wav", cut_png, cut_json;
  CommonOptions cut_opts;
  auto* cut = app.add_subcommand(
      "cut", "Min-cut two pre-aligned segment WAVs directly, skipping tempo/beat alignment");
  cut->add_option("segment_a", cut_a, "first segment (WAV)")->required();
  cut->add_option("segment_b", cut_b, "second segment (WAV)")->required();
  cut->add_option("--out", cut_out, "output WAV path")->capture_default_str();
  cut->add_option("--png", cut_png, "write the seam spectrogram image here");
  cut->add_option("--seam-json", cut_json, "write seam metadata (JSON) here");
  add_stft_flags(*cut, cut_opts);

  // --- synth --------------------------------------------------------------
  std::string sy_out = "synth.wav";
  double sy_bpm = 120.0, sy_seconds = 40.0, sy_accent = 1.0;
  std::vector<double> sy_chord;
  auto* synth = app.add_subcommand("synth", "Generate a click+chord test track");
  synth->add_option("--out", sy_out, "output WAV path")->capture_default_str();
  synth->add_option("--bpm", sy_bpm, "tempo")->capture_default_str();
  synth->add_option("--seconds", sy_seconds, "duration")->capture_default_str();
  synth->add_option("--chord", sy_chord, "chord frequencies in Hz (default 220 330 440)");
  synth->add_option("--accent", sy_accent, "gain factor for every 4th click")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*transition) {
      seamix::TransitionConfig config = tr_opts.to_config();
      config.overlap_beats = tr_overlap;
      config.force_tempo = tr_force;
      config.a_start = tr_a_start;
      config.b_start = tr_b_start;
      const auto artifacts = seamix::run_transition(seamix::load_wav_file(tr_a),
                                                    seamix::load_wav_file(tr_b), config);
      std::cerr << "tempo A " << artifacts.tempo_a << " BPM, tempo B " << artifacts.tempo_b
                << " BPM, stretch " << artifacts.stretch_ratio << "\n";
      emit_artifacts(artifacts, tr_out, tr_png, tr_json);
    } else if (*analyze) {
      const seamix::TransitionConfig config = an_opts.to_config();
      config.validate();
      const auto analysis = seamix::analyze_track(seamix::load_wav_file(an_track), config);
      std::printf("tempo_bpm: %.3f%s\n", analysis.tempo.bpm,
                  analysis.tempo.low_confidence ? " (low confidence)" : "");
      std::printf("beats: %zu\n", analysis.grid.beat_times.size());
      for (double t : analysis.grid.beat_times) std::printf("%.4f\n", t);
    } else if (*cut) {
      const auto artifacts = seamix::run_segment_cut(seamix::load_wav_file(cut_a),
                                                     seamix::load_wav_file(cut_b),
                                                     cut_opts.to_config());
      emit_artifacts(artifacts, cut_out, cut_png, cut_json);
    } else if (*synth) {
      seamix::ClickTrackParams params;
      params.bpm = sy_bpm;
      params.seconds = sy_seconds;
      params.accent = sy_accent;
      if (!sy_chord.empty()) params.chord_hz = sy_chord;
      seamix::save_wav_file(sy_out, seamix::make_click_track(params));
      std::cerr << "wrote " << sy_out << " (" << sy_bpm << " BPM, " << sy_seconds << " s)\n";
    }
  } catch (const seamix::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
