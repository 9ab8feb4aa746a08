// Copyright 2026 The rdino authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rdino/trainer/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rdino/common/error.h"
#include "rdino/features/wav.h"

namespace rdino {
namespace {

// Seed-stream tags so the shuffle, the noise bank and the per-item
// augmentation never collide.
constexpr uint64_t kShuffleTag = 0x5455FF1E;
constexpr uint64_t kNoiseTag = 0x4015EBA0;

std::string EpochCheckpointName(int epoch) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "checkpoint_epoch_%03d.ckpt", epoch);
  return std::string(buf);
}

struct Logger {
  std::ofstream file;

  void Open(const std::string& out_dir, bool append) {
    if (out_dir.empty()) return;
    file.open(out_dir + "/train.log",
              append ? std::ios::app : std::ios::trunc);
    if (!file) throw InputError("trainer: cannot write log in " + out_dir);
  }
  void Line(const StepRecord& rec) {
    if (!file.is_open()) return;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%lld %.6f %.6f %.6f %.6f %.6f %.6f\n",
                  static_cast<long long>(rec.step), rec.loss.ce, rec.loss.dr,
                  rec.loss.rer, rec.loss.total, rec.collapse.mean_std,
                  rec.collapse.entropy);
    file << buf;
    file.flush();
  }
};

TrainResult RunLoop(const TrainConfig& cfg, const Corpus& corpus,
                    CheckpointState state, int start_epoch,
                    const std::string& out_dir, bool append_log) {
  int64_t n = static_cast<int64_t>(corpus.utterances.size());
  if (n == 0) throw InputError("trainer: empty corpus");
  int64_t steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;

  NoiseBank bank = BuildNoiseBank(Rng::Derive(cfg.seed, kNoiseTag),
                                  cfg.sample_rate);
  FbankOptions fbank_opts = cfg.FbankOpts();
  ObjectiveOptions objective = cfg.Objective();
  SgdOptimizer opt(state.pair.student);
  opt.velocities() = state.velocities;

  Logger log;
  log.Open(out_dir, append_log);

  TrainResult result;
  for (int epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
    // without-replacement epoch order
    std::vector<int64_t> order(n);
    for (int64_t i = 0; i < n; ++i) order[i] = i;
    Rng shuffle_rng(Rng::Derive(cfg.seed, kShuffleTag,
                                static_cast<uint64_t>(epoch)));
    for (int64_t i = n - 1; i > 0; --i) {
      std::swap(order[i], order[shuffle_rng.UniformInt(0, i)]);
    }

    for (int64_t start = 0; start < n; start += cfg.batch_size) {
      int64_t end = std::min<int64_t>(start + cfg.batch_size, n);
      std::vector<ViewSet> batch;
      std::vector<uint64_t> batch_seeds;
      batch.reserve(end - start);
      for (int64_t i = start; i < end; ++i) {
        int64_t item = order[i];
        uint64_t item_seed = Rng::Derive(cfg.seed, static_cast<uint64_t>(epoch),
                                         static_cast<uint64_t>(item));
        batch_seeds.push_back(item_seed);
        Rng rng(item_seed);
        ViewSet views = MultiCrop(corpus.utterances[item].wave, cfg.augment,
                                  bank, fbank_opts, rng);
        views.utterance_id = corpus.utterances[item].utterance_id;
        batch.push_back(std::move(views));
      }

      TotalLossResult loss = TotalLoss(batch, state.pair, objective);
      if (!std::isfinite(loss.breakdown.total)) {
        std::string seeds;
        for (uint64_t s : batch_seeds) seeds += " " + std::to_string(s);
        if (!out_dir.empty()) {
          state.velocities = opt.velocities();
          SaveCheckpoint(state, out_dir + "/checkpoint_abort.ckpt");
        }
        throw TrainingError("non-finite loss at step " +
                            std::to_string(state.step) +
                            "; offending batch seeds:" + seeds);
      }
      Backward(loss.total);
      double lr = LrAt(state.step, steps_per_epoch, cfg);
      opt.Step(state.pair.student, lr, cfg.momentum);
      EmaUpdate(state.pair, cfg.ema_momentum);
      if (cfg.centering) {
        UpdateCenter(state.pair.center, loss.teacher_logits_raw,
                     cfg.center_momentum);
      }

      StepRecord rec;
      rec.step = state.step;
      rec.loss = loss.breakdown;
      rec.collapse = ComputeCollapseStats(loss.z_teacher, loss.teacher_probs);
      log.Line(rec);
      result.steps.push_back(rec);
      ++state.step;
    }

    if (!out_dir.empty()) {
      state.velocities = opt.velocities();
      SaveCheckpoint(state, out_dir + "/" + EpochCheckpointName(epoch));
    }
  }

  state.velocities = opt.velocities();
  if (!out_dir.empty()) {
    result.final_checkpoint_path = out_dir + "/checkpoint_final.ckpt";
    SaveCheckpoint(state, result.final_checkpoint_path);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace

Corpus BuildCorpus(const TrainConfig& cfg) {
  if (cfg.audio_dir.empty()) {
    return SynthCorpus(cfg.corpus_speakers, cfg.corpus_utts_per_speaker,
                       cfg.corpus_utt_seconds, cfg.corpus_seed,
                       cfg.sample_rate);
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(cfg.audio_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      paths.push_back(entry.path());
    }
  }
  if (paths.empty()) {
    throw InputError("trainer: no wav files in " + cfg.audio_dir);
  }
  std::sort(paths.begin(), paths.end());
  Corpus corpus;
  for (const auto& p : paths) {
    SynthUtterance utt;
    utt.utterance_id = p.stem().string();
    utt.speaker_id = utt.utterance_id.substr(0, utt.utterance_id.find('_'));
    utt.wave = ReadWav(p.string());
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

TrainResult Train(const TrainConfig& cfg, const Corpus& corpus,
                  const std::string& out_dir) {
  cfg.Validate();
  CheckpointState state;
  state.config = cfg;
  state.pair = MakeNetworkPair(cfg.encoder, cfg.head, cfg.seed);
  state.velocities = SgdOptimizer(state.pair.student).velocities();
  state.step = 0;
  return RunLoop(cfg, corpus, std::move(state), /*start_epoch=*/0, out_dir,
                 /*append_log=*/false);
}

TrainResult Resume(const std::string& checkpoint_path,
                   const std::string& out_dir) {
  CheckpointState state = LoadCheckpoint(checkpoint_path);
  TrainConfig cfg = state.config;
  Corpus corpus = BuildCorpus(cfg);
  int64_t n = static_cast<int64_t>(corpus.utterances.size());
  int64_t steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  // checkpoints are written at epoch boundaries
  int start_epoch = static_cast<int>(state.step / steps_per_epoch);
  return RunLoop(cfg, corpus, std::move(state), start_epoch, out_dir,
                 /*append_log=*/true);
}

}  // namespace rdino
