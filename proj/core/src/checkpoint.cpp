// Copyright 2026 The layoutvqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "layoutvqa/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "layoutvqa/error.hpp"

namespace layoutvqa {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

using nlohmann::json;

constexpr std::array<char, 8> kMagic = {'L', 'V', 'Q', 'A', 'C', 'K', 'P', 'T'};

json config_to_json(const ModelConfig& c) {
  json j = {{"d_model", c.d_model},
            {"heads", c.heads},
            {"d_ff", c.d_ff},
            {"encoder_layers", c.encoder_layers},
            {"decoder_layers", c.decoder_layers},
            {"levels", c.levels},
            {"max_input_len", c.max_input_len},
            {"max_answer_len", c.max_answer_len},
            {"rho_init", c.rho_init},
            {"layout", std::string(to_string(c.layout))},
            {"per_dim_ratio", c.per_dim_ratio},
            {"tie_embeddings", c.tie_embeddings},
            {"init_std", c.init_std},
            {"seed", c.seed}};
  j["forced_omega"] = c.forced_omega ? json(*c.forced_omega) : json(nullptr);
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.d_model = j.at("d_model").get<int>();
  c.heads = j.at("heads").get<int>();
  c.d_ff = j.at("d_ff").get<int>();
  c.encoder_layers = j.at("encoder_layers").get<int>();
  c.decoder_layers = j.at("decoder_layers").get<int>();
  c.levels = j.at("levels").get<int>();
  c.max_input_len = j.at("max_input_len").get<std::size_t>();
  c.max_answer_len = j.at("max_answer_len").get<std::size_t>();
  c.rho_init = j.at("rho_init").get<double>();
  const auto mode = parse_layout_mode(j.at("layout").get<std::string>());
  if (!mode) throw SchemaError("checkpoint: unknown layout mode");
  c.layout = *mode;
  c.per_dim_ratio = j.at("per_dim_ratio").get<bool>();
  c.tie_embeddings = j.at("tie_embeddings").get<bool>();
  c.init_std = j.at("init_std").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("forced_omega").is_null()) c.forced_omega = j.at("forced_omega").get<double>();
  return c;
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw SchemaError("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  Model copy = model;
  auto views = tensors(copy.params);
  json manifest = json::array();
  for (const auto& t : views) manifest.push_back({{"name", t.name}, {"size", t.size}});
  const json header = {{"config", config_to_json(model.config)},
                       {"vocab", model.vocab.tokens()},
                       {"tensors", manifest}};
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(kMagic.data(), kMagic.size());
  write_pod(out, kCheckpointVersion);
  write_pod(out, static_cast<std::uint64_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& t : views) {
    out.write(reinterpret_cast<const char*>(t.data),
              static_cast<std::streamsize>(t.size * sizeof(double)));
  }
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw SchemaError("checkpoint: bad magic");
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw SchemaError("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto header_len = read_pod<std::uint64_t>(in);
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw SchemaError("checkpoint: truncated header");

  Model model;
  try {
    const json header = json::parse(text);
    ModelConfig config = config_from_json(header.at("config"));
    Vocabulary vocab(header.at("vocab").get<std::vector<std::string>>());
    model = init_model(config, std::move(vocab));
    auto views = tensors(model.params);
    const json& manifest = header.at("tensors");
    if (manifest.size() != views.size()) throw SchemaError("checkpoint: tensor count mismatch");
    for (std::size_t i = 0; i < views.size(); ++i) {
      if (manifest[i].at("name").get<std::string>() != views[i].name ||
          manifest[i].at("size").get<std::size_t>() != views[i].size) {
        throw SchemaError("checkpoint: tensor '" + views[i].name + "' does not match config");
      }
    }
    for (auto& t : views) {
      in.read(reinterpret_cast<char*>(t.data), static_cast<std::streamsize>(t.size * sizeof(double)));
      if (!in) throw SchemaError("checkpoint: truncated tensor data");
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("checkpoint: malformed header: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("checkpoint: ") + e.what());
  }
  return model;
}

}  // namespace layoutvqa
