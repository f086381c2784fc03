#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "seamix/pipeline.hpp"
#include "seamix/synth.hpp"
#include "support/oracles.hpp"

using namespace seamix;
namespace fs = std::filesystem;

namespace {

#ifndef SEAMIX_CLI_PATH
#define SEAMIX_CLI_PATH ""
#endif

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "seamix_pipeline_tests";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SEAMIX_CLI_PATH + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

AudioClip click_chord(double bpm, double seconds, std::vector<double> chord = {220.0, 330.0, 440.0}) {
  ClickTrackParams params;
  params.bpm = bpm;
  params.seconds = seconds;
  params.chord_hz = std::move(chord);
  return make_click_track(params);
}

std::vector<std::uint8_t> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config validation") {
  TransitionConfig config;
  CHECK_NOTHROW(config.validate());
  config.fft_size = 1000;
  CHECK_THROWS_AS(config.validate(), Error);
  config.fft_size = 2048;
  config.hop = 1024;  // 2x overlap: squared window does not satisfy COLA
  CHECK_THROWS_AS(config.validate(), Error);
  config.hop = 256;  // 8x overlap is fine
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("analyze_track produces a consistent grid") {
  TransitionConfig config;
  const auto analysis = analyze_track(click_chord(120.0, 30.2), config);
  CHECK(std::abs(analysis.tempo.bpm - 120.0) <= 2.0);
  CHECK(!analysis.tempo.low_confidence);
  CHECK(analysis.grid.beat_times.size() >= 55);
}

TEST_CASE("transition of two equal-tempo tracks") {
  TransitionConfig config;
  config.overlap_beats = 16;
  const AudioClip a = click_chord(150.0, 20.1);
  const AudioClip b = click_chord(150.0, 20.1, {275.0, 330.0, 550.0});

  const auto artifacts = run_transition(a, b, config);
  CHECK(std::abs(artifacts.stretch_ratio - 1.0) <= 0.03);
  CHECK(artifacts.result.cut_cost >= 0.0);
  CHECK(artifacts.result.seam.flips_per_bin.size() == 1025);
  for (const auto& flips : artifacts.result.seam.flips_per_bin) {
    REQUIRE(flips.size() % 2 == 1);
  }

  // Output should be about: A up to its overlap start, the overlap, and the
  // rest of B after its overlap.
  const auto& plan = artifacts.result.plan;
  CHECK(plan.overlap_beats == 16);
  const double expected =
      plan.a_start_time + (plan.frames * 512.0 / 44100.0) +
      (b.duration() - plan.b_end_time);
  CHECK(std::abs(artifacts.result.output.duration() - expected) <= 0.2);
}

TEST_CASE("tempo matching stretches B to A's tempo") {
  TransitionConfig config;
  config.overlap_beats = 8;
  const AudioClip a = click_chord(100.0, 22.2);
  const AudioClip b = click_chord(130.0, 22.2);

  const auto artifacts = run_transition(a, b, config);
  CHECK(artifacts.stretch_ratio == doctest::Approx(1.3).epsilon(0.03));
  CHECK(std::abs(artifacts.tempo_a - 100.0) <= 2.0);
  CHECK(std::abs(artifacts.tempo_b - 130.0) <= 2.0);
}

TEST_CASE("incompatible tempi raise the dedicated error") {
  TransitionConfig config;
  const AudioClip a = click_chord(62.0, 25.0);
  const AudioClip b = click_chord(170.0, 25.0);
  try {
    run_transition(a, b, config);
    FAIL("expected incompatible-tempo error");
  } catch (const Error& err) {
    CHECK(err.code() == errc::incompatible_tempo);
  }
}

TEST_CASE("too short tracks raise too-short") {
  TransitionConfig config;  // 64-beat overlap needs 65+ beats
  const AudioClip a = click_chord(120.0, 16.0);  // ~32 beats
  try {
    run_transition(a, a, config);
    FAIL("expected too-short error");
  } catch (const Error& err) {
    CHECK(err.code() == errc::too_short);
  }
}

TEST_CASE("low-confidence tempo is gated behind force") {
  TransitionConfig config;
  config.overlap_beats = 4;
  AudioClip silence;
  silence.sample_rate = 44100;
  silence.samples.assign(44100 * 8, 0.0f);
  try {
    run_transition(silence, silence, config);
    FAIL("expected low-confidence error");
  } catch (const Error& err) {
    CHECK(err.code() == errc::low_confidence);
  }
  // Forcing proceeds past the gate; silence then fails downstream because a
  // flat envelope still yields a usable isochronous grid, so it either runs
  // or reports a structural error, never low_confidence.
  config.force_tempo = true;
  try {
    run_transition(silence, silence, config);
  } catch (const Error& err) {
    CHECK(err.code() != errc::low_confidence);
  }
}

TEST_CASE("segment cut runs the mincut stage in isolation") {
  TransitionConfig config;
  const AudioClip a = make_tone(440.0, 2.0, 44100, 0.4);
  const AudioClip b = make_tone(554.0, 2.5, 44100, 0.4);
  const auto artifacts = run_segment_cut(a, b, config);

  CHECK(artifacts.result.plan.frames == stft(a, 2048, 512).frames);  // shorter input rules
  CHECK(artifacts.result.cut_cost > 0.0);
  CHECK(artifacts.overlap_db.frames == artifacts.result.plan.frames);
  for (float s : artifacts.result.output.samples) REQUIRE(std::isfinite(s));
}

TEST_CASE("cli: transition writes all artifacts and is deterministic") {
  const fs::path dir = work_dir();
  const AudioClip a = click_chord(150.0, 20.1);
  const AudioClip b = click_chord(150.0, 20.1, {275.0, 330.0, 550.0});
  save_wav_file(dir / "a.wav", a);
  save_wav_file(dir / "b.wav", b);

  const std::string base = "transition \"" + (dir / "a.wav").string() + "\" \"" +
                           (dir / "b.wav").string() + "\" --overlap-beats 16";
  const int code = run_cli(base + " --out \"" + (dir / "out1.wav").string() + "\" --png \"" +
                           (dir / "seam1.png").string() + "\" --seam-json \"" +
                           (dir / "seam1.json").string() + "\"");
  REQUIRE(code == 0);
  REQUIRE(fs::exists(dir / "out1.wav"));
  REQUIRE(fs::exists(dir / "seam1.png"));
  REQUIRE(fs::exists(dir / "seam1.json"));

  // Seam JSON schema.
  const auto json = nlohmann::json::parse(std::ifstream(dir / "seam1.json"));
  CHECK(json["cut_cost"].is_number());
  CHECK(json["tempo_a"].is_number());
  CHECK(json["tempo_b"].is_number());
  CHECK(json["stretch_ratio"].is_number());
  REQUIRE(json["seams"].is_array());
  CHECK(json["seams"].size() == 1025);

  // PNG dimensions match the overlap grid.
  const auto info = test::parse_png_header(slurp(dir / "seam1.png"));
  CHECK(info.height == 1025);
  CHECK(info.width > 0);

  // Second run, byte-identical artifacts.
  const int code2 = run_cli(base + " --out \"" + (dir / "out2.wav").string() + "\" --png \"" +
                            (dir / "seam2.png").string() + "\" --seam-json \"" +
                            (dir / "seam2.json").string() + "\"");
  REQUIRE(code2 == 0);
  CHECK(slurp(dir / "out1.wav") == slurp(dir / "out2.wav"));
  CHECK(slurp(dir / "seam1.png") == slurp(dir / "seam2.png"));
  CHECK(slurp(dir / "seam1.json") == slurp(dir / "seam2.json"));
}

TEST_CASE("cli: exit codes match the error classes") {
  const fs::path dir = work_dir();

  // 2: undecodable input
  std::ofstream(dir / "garbage.wav") << "not audio";
  CHECK(run_cli("transition \"" + (dir / "garbage.wav").string() + "\" \"" +
                (dir / "garbage.wav").string() + "\"") == 2);

  // 3: incompatible tempi
  save_wav_file(dir / "slow.wav", click_chord(62.0, 25.0));
  save_wav_file(dir / "fast.wav", click_chord(170.0, 25.0));
  CHECK(run_cli("transition \"" + (dir / "slow.wav").string() + "\" \"" +
                (dir / "fast.wav").string() + "\" --out \"" + (dir / "x.wav").string() +
                "\"") == 3);

  // 4: too short for the default 64-beat overlap
  save_wav_file(dir / "short.wav", click_chord(120.0, 16.0));
  CHECK(run_cli("transition \"" + (dir / "short.wav").string() + "\" \"" +
                (dir / "short.wav").string() + "\" --out \"" + (dir / "x.wav").string() +
                "\"") == 4);

  // 5: low-confidence tempo without --force-tempo
  AudioClip silence;
  silence.sample_rate = 44100;
  silence.samples.assign(44100 * 8, 0.0f);
  save_wav_file(dir / "silence.wav", silence);
  CHECK(run_cli("transition \"" + (dir / "silence.wav").string() + "\" \"" +
                (dir / "silence.wav").string() + "\" --overlap-beats 4 --out \"" +
                (dir / "x.wav").string() + "\"") == 5);
}

TEST_CASE("cli: analyze prints tempo and beats") {
  const fs::path dir = work_dir();
  save_wav_file(dir / "an.wav", click_chord(120.0, 15.1));
  const std::string out_file = (dir / "analyze.txt").string();
  const std::string cmd = std::string("\"") + SEAMIX_CLI_PATH + "\" analyze \"" +
                          (dir / "an.wav").string() + "\" > \"" + out_file + "\" 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream in(out_file);
  std::string first;
  std::getline(in, first);
  CHECK(first.find("tempo_bpm: 1") != std::string::npos);
}

TEST_CASE("cli: cut works on raw segments") {
  const fs::path dir = work_dir();
  save_wav_file(dir / "seg_a.wav", make_tone(440.0, 2.0, 44100, 0.4));
  save_wav_file(dir / "seg_b.wav", make_tone(523.0, 2.0, 44100, 0.4));
  CHECK(run_cli("cut \"" + (dir / "seg_a.wav").string() + "\" \"" +
                (dir / "seg_b.wav").string() + "\" --out \"" + (dir / "cut.wav").string() +
                "\" --png \"" + (dir / "cut.png").string() + "\"") == 0);
  CHECK(fs::exists(dir / "cut.wav"));
  CHECK(fs::exists(dir / "cut.png"));
}
