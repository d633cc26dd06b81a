#include "macs/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "macs/errors.hpp"

namespace macs {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'A', 'C', 'S', 'N', 'E', 'T', '\0'};

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(const char* p, std::size_t n) { bytes.insert(bytes.end(), p, p + n); }
  std::vector<std::uint8_t> bytes;

 private:
  void put(std::uint64_t v, int width) {
    for (int k = 0; k < width; ++k) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  void raw(char* p, std::size_t n) {
    need(n);
    std::memcpy(p, bytes_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw CheckpointError("checkpoint truncated");
  }
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int k = 0; k < width; ++k) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * k);
    return v;
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const BranchingNet& net) {
  Writer w;
  w.raw(kMagic.data(), kMagic.size());
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(net.shape().arms));
  w.u32(static_cast<std::uint32_t>(net.shape().trunk_hidden1));
  w.u32(static_cast<std::uint32_t>(net.shape().trunk_hidden2));
  w.u32(static_cast<std::uint32_t>(net.shape().head_hidden));
  w.f64(net.input_scale());
  w.f64(net.input_cap());
  w.u64(static_cast<std::uint64_t>(net.adam().step));
  auto dump = [&](const auto& t) {
    for (Eigen::Index k = 0; k < t.size(); ++k) w.f64(t.data()[k]);
  };
  for_each_tensor(dump, net.weights());
  for_each_tensor(dump, net.adam().m);
  for_each_tensor(dump, net.adam().v);
  return std::move(w.bytes);
}

BranchingNet deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  std::array<char, 8> magic{};
  r.raw(magic.data(), magic.size());
  if (magic != kMagic) throw CheckpointError("not a network checkpoint");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  NetShape shape;
  shape.arms = static_cast<int>(r.u32());
  shape.trunk_hidden1 = static_cast<int>(r.u32());
  shape.trunk_hidden2 = static_cast<int>(r.u32());
  shape.head_hidden = static_cast<int>(r.u32());
  if (shape.arms < 1 || shape.trunk_hidden1 < 1 || shape.trunk_hidden2 < 1 || shape.head_hidden < 1) {
    throw CheckpointError("checkpoint has an invalid layer shape");
  }
  const double input_scale = r.f64();
  const double input_cap = r.f64();
  if (!(input_cap > 0.0)) throw CheckpointError("checkpoint has a non-positive input cap");
  AdamState adam;
  adam.step = static_cast<std::int64_t>(r.u64());
  NetTensors weights = NetTensors::zeros(shape);
  adam.m = NetTensors::zeros(shape);
  adam.v = NetTensors::zeros(shape);
  auto load = [&](auto& t) {
    for (Eigen::Index k = 0; k < t.size(); ++k) t.data()[k] = r.f64();
  };
  for_each_tensor(load, weights);
  for_each_tensor(load, adam.m);
  for_each_tensor(load, adam.v);
  if (!r.done()) throw CheckpointError("trailing bytes after checkpoint tensors");
  return BranchingNet::from_parts(shape, input_scale, input_cap, std::move(weights), std::move(adam));
}

void save_checkpoint(const BranchingNet& net, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(net);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing " + path.string());
}

BranchingNet load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingCheckpoint("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace macs
