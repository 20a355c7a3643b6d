#include "pdqp/checkpoint.hpp"

#include <cstring>

#include "pdqp/errors.hpp"
#include "pdqp/json_io.hpp"

namespace pdqp {

namespace {

constexpr char kMagic[8] = {'P', 'D', 'Q', 'P', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

void put_u64(std::string& out, std::uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  out.append(b, 8);
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  void raw(void* dst, std::size_t count) {
    if (pos_ + count > bytes_.size()) throw ParseError("checkpoint: truncated file");
    std::memcpy(dst, bytes_.data() + pos_, count);
    pos_ += count;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, 4);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, 8);
    return v;
  }
  std::string str(std::size_t len) {
    std::string s(len, '\0');
    raw(s.data(), len);
    return s;
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

/// Shape-correct parameters for a config; all values zero.
NetParams skeleton(const NetConfig& cfg, bool squash) {
  NetParams p;
  p.config = cfg;
  p.squash_scalars = squash;
  p.layers.resize(cfg.layers);
  const std::size_t d = cfg.width;
  for (NetParams::Layer& l : p.layers) {
    l.w_qx.assign(d * d, 0.0);
    l.w_aty.assign(d * d, 0.0);
    l.w_ax.assign(d * d, 0.0);
  }
  p.embed_x = zeros_like(identity_mlp(1, d, cfg.mlp_hidden, cfg.mlp_depth));
  p.embed_y = zeros_like(identity_mlp(1, d, cfg.mlp_hidden, cfg.mlp_depth));
  p.read_x = zeros_like(identity_mlp(d, 1, cfg.mlp_hidden, cfg.mlp_depth));
  p.read_y = zeros_like(identity_mlp(d, 1, cfg.mlp_hidden, cfg.mlp_depth));
  return p;
}

}  // namespace

std::string checkpoint_bytes(const NetParams& params) {
  params.validate();
  std::string out;
  out.append(kMagic, 8);
  put_u32(out, kVersion);
  put_u64(out, params.config.layers);
  put_u64(out, params.config.width);
  put_u64(out, params.config.mlp_hidden);
  put_u64(out, params.config.mlp_depth);
  out.push_back(params.squash_scalars ? 1 : 0);

  struct Entry {
    std::string name;
    const double* data;
    std::uint64_t count;
  };
  std::vector<Entry> entries;
  for_each_tensor(const_cast<NetParams&>(params),
                  [&](const std::string& name, const double* data, std::size_t count) {
                    entries.push_back({name, data, count});
                  });

  put_u64(out, entries.size());
  std::uint64_t offset = 0;
  for (const Entry& e : entries) {
    put_u32(out, static_cast<std::uint32_t>(e.name.size()));
    out.append(e.name);
    put_u64(out, offset);
    put_u64(out, e.count);
    offset += e.count;
  }
  for (const Entry& e : entries)
    out.append(reinterpret_cast<const char*>(e.data), e.count * sizeof(double));
  return out;
}

void save_checkpoint(const NetParams& params, const std::string& path) {
  write_text_file(path, checkpoint_bytes(params));
}

NetParams checkpoint_from_bytes(const std::string& bytes) {
  Reader r(bytes);
  char magic[8];
  r.raw(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0) throw ParseError("checkpoint: bad magic");
  if (r.u32() != kVersion) throw ParseError("checkpoint: unsupported version");

  NetConfig cfg;
  cfg.layers = r.u64();
  cfg.width = r.u64();
  cfg.mlp_hidden = r.u64();
  cfg.mlp_depth = r.u64();
  std::uint8_t squash;
  r.raw(&squash, 1);

  NetParams params = skeleton(cfg, squash != 0);

  struct Entry {
    std::string name;
    std::uint64_t offset, count;
  };
  const std::uint64_t n_tensors = r.u64();
  std::vector<Entry> entries(n_tensors);
  for (Entry& e : entries) {
    const std::uint32_t len = r.u32();
    e.name = r.str(len);
    e.offset = r.u64();
    e.count = r.u64();
  }

  std::size_t idx = 0;
  for_each_tensor(params, [&](const std::string& name, double*, std::size_t count) {
    if (idx >= entries.size()) throw ParseError("checkpoint: missing tensor '" + name + "'");
    const Entry& e = entries[idx++];
    if (e.name != name || e.count != count)
      throw ParseError("checkpoint: tensor mismatch at '" + name + "'");
  });
  if (idx != entries.size()) throw ParseError("checkpoint: extra tensors in directory");

  for_each_tensor(params, [&](const std::string&, double* data, std::size_t count) {
    r.raw(data, count * sizeof(double));
  });
  try {
    params.validate();
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("checkpoint: invalid parameters: ") + e.what());
  }
  return params;
}

NetParams load_checkpoint(const std::string& path) {
  return checkpoint_from_bytes(read_text_file(path));
}

}  // namespace pdqp
