#include "relspan/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

namespace relspan {
namespace {

constexpr char kMagic[4] = {'R', 'S', 'P', 'B'};
constexpr std::uint32_t kBinaryVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in, const std::string& what) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw std::runtime_error("truncated checkpoint while reading " + what);
  }
  return v;
}

std::uint64_t read_u64(std::istream& in, const std::string& what) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw std::runtime_error("truncated checkpoint while reading " + what);
  }
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const JointModel& model,
                     const TrainConfig& train, double dev_f1,
                     long global_step) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "params.bin", std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + (dir / "params.bin").string());
    }
    out.write(kMagic, sizeof kMagic);
    write_u32(out, kBinaryVersion);
    write_u64(out, model.store().params().size());
    for (const auto& p : model.store().params()) {
      write_u32(out, static_cast<std::uint32_t>(p->name.size()));
      out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
      write_u32(out, static_cast<std::uint32_t>(p->value.rows));
      write_u32(out, static_cast<std::uint32_t>(p->value.cols));
      out.write(reinterpret_cast<const char*>(p->value.a.data()),
                static_cast<std::streamsize>(p->value.size() * sizeof(double)));
    }
    if (!out) {
      throw std::runtime_error("failed writing " + (dir / "params.bin").string());
    }
  }
  model.vocabs().save(dir);
  nlohmann::json manifest = {
      {"schema_version", 1},
      {"model", model_config_to_json(model.config())},
      {"train", train_config_to_json(train)},
      {"dev_f1", dev_f1},
      {"global_step", global_step},
      {"param_file", "params.bin"},
  };
  std::ofstream out(dir / "manifest.json");
  if (!out) {
    throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  }
  out << manifest.dump(2) << '\n';
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream mf(dir / "manifest.json");
  if (!mf) {
    throw std::runtime_error("cannot open " + (dir / "manifest.json").string());
  }
  nlohmann::json manifest = nlohmann::json::parse(mf);
  if (manifest.at("schema_version").get<int>() != 1) {
    throw std::runtime_error("unsupported checkpoint schema version");
  }

  LoadedCheckpoint out;
  out.meta.model = model_config_from_json(manifest.at("model"));
  out.meta.train = train_config_from_json(manifest.at("train"));
  out.meta.dev_f1 = manifest.at("dev_f1").get<double>();
  out.meta.global_step = manifest.at("global_step").get<long>();

  Vocabularies vocabs = Vocabularies::load(dir);
  out.model = std::make_unique<JointModel>(out.meta.model, std::move(vocabs),
                                           out.meta.train.seed);

  const std::filesystem::path bin =
      dir / manifest.at("param_file").get<std::string>();
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + bin.string());
  char magic[4];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error(bin.string() + ": not a parameter file");
  }
  if (read_u32(in, "version") != kBinaryVersion) {
    throw std::runtime_error(bin.string() + ": unsupported binary version");
  }
  const std::uint64_t count = read_u64(in, "tensor count");
  std::set<std::string> seen;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = read_u32(in, "name length");
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len)) {
      throw std::runtime_error("truncated checkpoint while reading a name");
    }
    const int rows = static_cast<int>(read_u32(in, "rows"));
    const int cols = static_cast<int>(read_u32(in, "cols"));
    nn::Param* p = out.model->store().find(name);
    if (p == nullptr) {
      throw std::runtime_error("checkpoint tensor '" + name +
                               "' has no matching model parameter");
    }
    if (p->value.rows != rows || p->value.cols != cols) {
      throw std::runtime_error("checkpoint tensor '" + name + "' is " +
                               std::to_string(rows) + "x" +
                               std::to_string(cols) + ", model expects " +
                               std::to_string(p->value.rows) + "x" +
                               std::to_string(p->value.cols));
    }
    if (!in.read(reinterpret_cast<char*>(p->value.a.data()),
                 static_cast<std::streamsize>(p->value.size() *
                                              sizeof(double)))) {
      throw std::runtime_error("truncated checkpoint while reading '" + name +
                               "'");
    }
    seen.insert(name);
  }
  for (const auto& p : out.model->store().params()) {
    if (!seen.count(p->name)) {
      throw std::runtime_error("model parameter '" + p->name +
                               "' missing from checkpoint");
    }
  }
  return out;
}

}  // namespace relspan
