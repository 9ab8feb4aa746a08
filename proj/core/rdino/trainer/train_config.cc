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

#include "rdino/trainer/train_config.h"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rdino/common/error.h"

namespace rdino {

FbankOptions TrainConfig::FbankOpts() const {
  FbankOptions opts;
  opts.n_mels = n_mels;
  opts.frame_length_ms = frame_length_ms;
  opts.frame_shift_ms = frame_shift_ms;
  return opts;
}

ObjectiveOptions TrainConfig::Objective() const {
  ObjectiveOptions opts;
  opts.lambda = lambda;
  opts.tau_teacher = tau_t;
  opts.tau_student = tau_s;
  opts.eps = eps;
  opts.use_centering = centering;
  opts.centered_correlation = centered_correlation;
  return opts;
}

void TrainConfig::Validate() const {
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (warmup_epochs < 0) throw ConfigError("warmup_epochs must be >= 0");
  if (epochs > 0 && warmup_epochs >= epochs) {
    throw ConfigError("warmup_epochs must be < epochs");
  }
  if (epochs == 0 && warmup_epochs != 0) {
    throw ConfigError("warmup_epochs must be 0 when epochs is 0");
  }
  if (!(peak_lr > 0.0)) throw ConfigError("peak_lr must be positive");
  if (momentum < 0.0 || momentum >= 1.0) {
    throw ConfigError("momentum must be in [0, 1)");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (!(tau_t > 0.0) || !(tau_s > 0.0)) {
    throw ConfigError("temperatures must be positive");
  }
  if (!(tau_t < tau_s)) {
    throw ConfigError("sharpening requires tau_t < tau_s");
  }
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (ema_momentum < 0.0 || ema_momentum > 1.0) {
    throw ConfigError("ema_momentum must be in [0, 1]");
  }
  if (center_momentum < 0.0 || center_momentum > 1.0) {
    throw ConfigError("center_momentum must be in [0, 1]");
  }
  if (augment.snr_min_db > augment.snr_max_db) {
    throw ConfigError("snr_min must be <= snr_max");
  }
  if (!(augment.local_crop_seconds > 0.0) ||
      !(augment.global_crop_seconds >= augment.local_crop_seconds)) {
    throw ConfigError("crop lengths must satisfy 0 < local <= global");
  }
  if (sample_rate < 1000) throw ConfigError("sample_rate is implausibly low");
  if (audio_dir.empty()) {
    if (corpus_speakers < 1 || corpus_utts_per_speaker < 1) {
      throw ConfigError("synthetic corpus needs speakers and utterances >= 1");
    }
    if (!(corpus_utt_seconds > 0.0)) {
      throw ConfigError("corpus_utt_seconds must be positive");
    }
  }
  encoder.Validate();
  head.Validate();
}

namespace {

std::string Trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string JoinInts(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::vector<int> SplitInts(const std::string& s, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    try {
      size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad integer list entry \"" + item + "\" for key " +
                        key);
    }
  }
  if (out.empty()) throw ConfigError("empty integer list for key " + key);
  return out;
}

int64_t ParseInt(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    long long r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("bad integer \"" + v + "\" for key " + key);
  }
}

uint64_t ParseU64(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    unsigned long long r = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("bad unsigned integer \"" + v + "\" for key " + key);
  }
}

double ParseDouble(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("bad number \"" + v + "\" for key " + key);
  }
}

bool ParseBool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad boolean \"" + v + "\" for key " + key +
                    " (expected true/false)");
}

}  // namespace

std::vector<std::string> SerializeConfig(const TrainConfig& cfg) {
  std::vector<std::string> lines;
  auto put = [&lines](const std::string& key, const std::string& value) {
    lines.push_back(key + " = " + value);
  };
  put("seed", std::to_string(cfg.seed));
  put("epochs", std::to_string(cfg.epochs));
  put("warmup_epochs", std::to_string(cfg.warmup_epochs));
  put("peak_lr", FormatDouble(cfg.peak_lr));
  put("momentum", FormatDouble(cfg.momentum));
  put("batch_size", std::to_string(cfg.batch_size));
  put("lambda", FormatDouble(cfg.lambda));
  put("tau_t", FormatDouble(cfg.tau_t));
  put("tau_s", FormatDouble(cfg.tau_s));
  put("eps", FormatDouble(cfg.eps));
  put("ema_momentum", FormatDouble(cfg.ema_momentum));
  put("center_momentum", FormatDouble(cfg.center_momentum));
  put("centering", cfg.centering ? "true" : "false");
  put("centered_correlation", cfg.centered_correlation ? "true" : "false");
  put("augment_strategy", AugmentStrategyName(cfg.augment.strategy));
  put("snr_min", FormatDouble(cfg.augment.snr_min_db));
  put("snr_max", FormatDouble(cfg.augment.snr_max_db));
  put("time_mask_max", std::to_string(cfg.augment.time_mask_max));
  put("freq_mask_max", std::to_string(cfg.augment.freq_mask_max));
  put("shuffle_segment", std::to_string(cfg.augment.shuffle_segment));
  put("global_crop_seconds", FormatDouble(cfg.augment.global_crop_seconds));
  put("local_crop_seconds", FormatDouble(cfg.augment.local_crop_seconds));
  put("n_mels", std::to_string(cfg.n_mels));
  put("frame_length_ms", FormatDouble(cfg.frame_length_ms));
  put("frame_shift_ms", FormatDouble(cfg.frame_shift_ms));
  put("sample_rate", std::to_string(cfg.sample_rate));
  put("encoder_channels", JoinInts(cfg.encoder.channels));
  put("encoder_dilations", JoinInts(cfg.encoder.dilations));
  put("encoder_kernel", std::to_string(cfg.encoder.kernel));
  put("encoder_attention_dim", std::to_string(cfg.encoder.attention_dim));
  put("encoder_embed_dim", std::to_string(cfg.encoder.embed_dim));
  put("head_hidden1", std::to_string(cfg.head.hidden1));
  put("head_hidden2", std::to_string(cfg.head.hidden2));
  put("head_tap_dim", std::to_string(cfg.head.tap_dim));
  put("head_bottleneck", std::to_string(cfg.head.bottleneck));
  put("head_out_dim", std::to_string(cfg.head.out_dim));
  put("corpus_speakers", std::to_string(cfg.corpus_speakers));
  put("corpus_utts_per_speaker", std::to_string(cfg.corpus_utts_per_speaker));
  put("corpus_utt_seconds", FormatDouble(cfg.corpus_utt_seconds));
  put("corpus_seed", std::to_string(cfg.corpus_seed));
  put("audio_dir", cfg.audio_dir);
  return lines;
}

void WriteConfigFile(const std::string& path, const TrainConfig& cfg) {
  std::ofstream os(path);
  if (!os) throw InputError("config: cannot write " + path);
  for (const std::string& line : SerializeConfig(cfg)) os << line << "\n";
}

TrainConfig ParseConfigLines(const std::vector<std::string>& lines) {
  TrainConfig cfg;
  bool corpus_seed_set = false;

  // handler per key; n_mels and feat_dim are a single knob
  std::map<std::string, std::function<void(const std::string&, const std::string&)>>
      handlers;
  auto u64 = [](uint64_t& dst) {
    return [&dst](const std::string& k, const std::string& v) {
      dst = ParseU64(v, k);
    };
  };
  auto ints = [](int& dst) {
    return [&dst](const std::string& k, const std::string& v) {
      dst = static_cast<int>(ParseInt(v, k));
    };
  };
  auto dbl = [](double& dst) {
    return [&dst](const std::string& k, const std::string& v) {
      dst = ParseDouble(v, k);
    };
  };
  auto boolean = [](bool& dst) {
    return [&dst](const std::string& k, const std::string& v) {
      dst = ParseBool(v, k);
    };
  };
  handlers["seed"] = u64(cfg.seed);
  handlers["epochs"] = ints(cfg.epochs);
  handlers["warmup_epochs"] = ints(cfg.warmup_epochs);
  handlers["peak_lr"] = dbl(cfg.peak_lr);
  handlers["momentum"] = dbl(cfg.momentum);
  handlers["batch_size"] = ints(cfg.batch_size);
  handlers["lambda"] = dbl(cfg.lambda);
  handlers["tau_t"] = dbl(cfg.tau_t);
  handlers["tau_s"] = dbl(cfg.tau_s);
  handlers["eps"] = dbl(cfg.eps);
  handlers["ema_momentum"] = dbl(cfg.ema_momentum);
  handlers["center_momentum"] = dbl(cfg.center_momentum);
  handlers["centering"] = boolean(cfg.centering);
  handlers["centered_correlation"] = boolean(cfg.centered_correlation);
  handlers["augment_strategy"] = [&cfg](const std::string&, const std::string& v) {
    cfg.augment.strategy = ParseAugmentStrategy(v);
  };
  handlers["snr_min"] = dbl(cfg.augment.snr_min_db);
  handlers["snr_max"] = dbl(cfg.augment.snr_max_db);
  handlers["time_mask_max"] = ints(cfg.augment.time_mask_max);
  handlers["freq_mask_max"] = ints(cfg.augment.freq_mask_max);
  handlers["shuffle_segment"] = ints(cfg.augment.shuffle_segment);
  handlers["global_crop_seconds"] = dbl(cfg.augment.global_crop_seconds);
  handlers["local_crop_seconds"] = dbl(cfg.augment.local_crop_seconds);
  handlers["n_mels"] = ints(cfg.n_mels);
  handlers["frame_length_ms"] = dbl(cfg.frame_length_ms);
  handlers["frame_shift_ms"] = dbl(cfg.frame_shift_ms);
  handlers["sample_rate"] = ints(cfg.sample_rate);
  handlers["encoder_channels"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.encoder.channels = SplitInts(v, k);
  };
  handlers["encoder_dilations"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.encoder.dilations = SplitInts(v, k);
  };
  handlers["encoder_kernel"] = ints(cfg.encoder.kernel);
  handlers["encoder_attention_dim"] = ints(cfg.encoder.attention_dim);
  handlers["encoder_embed_dim"] = ints(cfg.encoder.embed_dim);
  handlers["head_hidden1"] = ints(cfg.head.hidden1);
  handlers["head_hidden2"] = ints(cfg.head.hidden2);
  handlers["head_tap_dim"] = ints(cfg.head.tap_dim);
  handlers["head_bottleneck"] = ints(cfg.head.bottleneck);
  handlers["head_out_dim"] = ints(cfg.head.out_dim);
  handlers["corpus_speakers"] = ints(cfg.corpus_speakers);
  handlers["corpus_utts_per_speaker"] = ints(cfg.corpus_utts_per_speaker);
  handlers["corpus_utt_seconds"] = dbl(cfg.corpus_utt_seconds);
  handlers["corpus_seed"] = [&cfg, &corpus_seed_set](const std::string& k,
                                                     const std::string& v) {
    cfg.corpus_seed = ParseU64(v, k);
    corpus_seed_set = true;
  };
  handlers["audio_dir"] = [&cfg](const std::string&, const std::string& v) {
    cfg.audio_dir = v;
  };

  for (const std::string& raw : lines) {
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line without '=': \"" + raw + "\"");
    }
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    auto it = handlers.find(key);
    if (it == handlers.end()) {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
    it->second(key, value);
  }
  if (!corpus_seed_set) cfg.corpus_seed = cfg.seed;
  cfg.encoder.feat_dim = cfg.n_mels;
  return cfg;
}

TrainConfig ReadConfigFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("config: cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return ParseConfigLines(lines);
}

}  // namespace rdino
