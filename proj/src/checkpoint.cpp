// Copyright 2026 The nqsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "nqsdyn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace nqsdyn {

namespace {

class Writer {
 public:
  void bytes(const void *data, std::size_t n) {
    const auto *p = static_cast<const std::uint8_t *>(data);
    out_.insert(out_.end(), p, p + n);
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out_.push_back(std::uint8_t(v >> (8 * k)));
  }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out_.push_back(std::uint8_t(v >> (8 * k)));
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t> &in) : in_(in) {}
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw ValidationError("checkpoint truncated");
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t(in_[pos_++]) << (8 * k);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t(in_[pos_++]) << (8 * k);
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void bytes(void *data, std::size_t n) {
    need(n);
    std::memcpy(data, in_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  const std::vector<std::uint8_t> &in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint &checkpoint) {
  const auto &p = checkpoint.params;
  Writer w;
  w.bytes(kCheckpointMagic, sizeof kCheckpointMagic);
  w.u32(kCheckpointVersion);
  w.u32(std::uint32_t(p.n_visible()));
  w.u32(std::uint32_t(p.n_hidden()));
  w.u32(std::bit_cast<std::uint32_t>(std::int32_t(checkpoint.sector)));
  w.u8(checkpoint.e0.has_value() ? 1 : 0);
  w.f64(checkpoint.e0.value_or(0.0));
  w.f64(checkpoint.e0_error);
  const VectorXc alpha = p.flatten();
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    w.f64(alpha(k).real());
    w.f64(alpha(k).imag());
  }
  return w.take();
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t> &bytes) {
  Reader r(bytes);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
    throw ValidationError("not a checkpoint file (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw ValidationError("unsupported checkpoint version " +
                          std::to_string(version));
  }
  const auto n = static_cast<int>(r.u32());
  const auto m = static_cast<int>(r.u32());
  if (n <= 0 || m <= 0 || n > 4096 || m > 1 << 16) {
    throw ValidationError("checkpoint has implausible layer sizes");
  }
  Checkpoint out;
  out.sector = std::bit_cast<std::int32_t>(r.u32());
  const bool has_e0 = r.u8() != 0;
  const double e0 = r.f64();
  out.e0_error = r.f64();
  if (has_e0) out.e0 = e0;
  RbmParameters params(n, m);
  VectorXc alpha(params.size());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    const double re = r.f64();
    const double im = r.f64();
    alpha(k) = Complex(re, im);
  }
  if (!r.done()) throw ValidationError("trailing bytes after checkpoint");
  params.assign_flat(alpha);
  out.params = std::move(params);
  return out;
}

void write_checkpoint(const std::filesystem::path &path,
                      const Checkpoint &checkpoint) {
  const auto bytes = encode_checkpoint(checkpoint);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char *>(bytes.data()),
              std::streamsize(bytes.size()));
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace nqsdyn
