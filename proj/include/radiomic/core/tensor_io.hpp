#pragma once

#include <nlohmann/json.hpp>

#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "radiomic/core/error.hpp"

namespace radiomic {

// Dense row-major tensor of float or complex<float>, the element types the
// RSPG interchange format carries.
template <typename T>
struct Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::uint64_t> shape) : dims(std::move(shape)), data(count(dims)) {}

  static std::size_t count(const std::vector<std::uint64_t>& shape) {
    std::size_t n = 1;
    for (auto d : shape) {
      if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d) throw ParameterError("tensor too large");
      n *= static_cast<std::size_t>(d);
    }
    return n;
  }
  std::size_t size() const { return data.size(); }
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

using RealTensor = Tensor<float>;
using ComplexTensor = Tensor<std::complex<float>>;
using AnyTensor = std::variant<RealTensor, ComplexTensor>;

struct TensorFile {
  AnyTensor tensor;
  nlohmann::json metadata = nlohmann::json::object();
};

namespace rspg {

static_assert(std::endian::native == std::endian::little, "RSPG I/O assumes a little-endian host");

inline constexpr char kMagic[4] = {'R', 'S', 'P', 'G'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::uint8_t kFloat32 = 0;
inline constexpr std::uint8_t kComplex64 = 1;
inline constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 32;

namespace internal {

template <typename T>
void put(std::string& out, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  out.append(bytes, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& buf) : buf_(buf) {}
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  const char* take(std::size_t n) {
    need(n);
    const char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (buf_.size() - pos_ < n) throw FormatError("RSPG: truncated file");
  }
  const std::string& buf_;
  std::size_t pos_ = 0;
};

template <typename T>
std::string encode_impl(const Tensor<T>& t, std::uint8_t dtype, const nlohmann::json& metadata) {
  if (t.dims.size() > 255) throw ParameterError("RSPG: too many dimensions");
  for (auto d : t.dims)
    if (d > kMaxDim) throw ParameterError("RSPG: dimension exceeds 2^32");
  if (Tensor<T>::count(t.dims) != t.data.size()) throw ParameterError("RSPG: data size does not match dims");
  std::string out(kMagic, 4);
  put<std::uint16_t>(out, kVersion);
  put<std::uint8_t>(out, dtype);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(t.dims.size()));
  for (auto d : t.dims) put<std::uint64_t>(out, d);
  out.append(reinterpret_cast<const char*>(t.data.data()), t.data.size() * sizeof(T));
  const std::string meta = metadata.dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  out += meta;
  return out;
}

}  // namespace internal

inline std::string encode(const TensorFile& file) {
  if (const auto* real = std::get_if<RealTensor>(&file.tensor)) return internal::encode_impl(*real, kFloat32, file.metadata);
  return internal::encode_impl(std::get<ComplexTensor>(file.tensor), kComplex64, file.metadata);
}

inline TensorFile decode(const std::string& buf) {
  internal::Reader in(buf);
  if (std::memcmp(in.take(4), kMagic, 4) != 0) throw FormatError("RSPG: bad magic");
  const auto version = in.get<std::uint16_t>();
  if (version != kVersion) throw FormatError("RSPG: unsupported version " + std::to_string(version));
  const auto dtype = in.get<std::uint8_t>();
  const auto ndim = in.get<std::uint8_t>();
  std::vector<std::uint64_t> dims(ndim);
  for (auto& d : dims) {
    d = in.get<std::uint64_t>();
    if (d > kMaxDim) throw FormatError("RSPG: dimension exceeds 2^32");
  }
  // A zero dimension anywhere makes the tensor empty, whatever the others say.
  std::size_t count = 1;
  bool empty = false;
  for (auto d : dims) empty = empty || d == 0;
  if (empty) count = 0;
  for (auto d : dims) {
    if (empty) break;
    if (count > in.remaining() / d) throw FormatError("RSPG: truncated payload");
    count *= static_cast<std::size_t>(d);
  }
  TensorFile file;
  auto read_payload = [&](auto& tensor) {
    using T = typename std::decay_t<decltype(tensor.data)>::value_type;
    if (count > in.remaining() / sizeof(T)) throw FormatError("RSPG: truncated payload");
    tensor.dims = dims;
    tensor.data.resize(count);
    std::memcpy(tensor.data.data(), in.take(count * sizeof(T)), count * sizeof(T));
  };
  if (dtype == kFloat32) {
    RealTensor t;
    read_payload(t);
    file.tensor = std::move(t);
  } else if (dtype == kComplex64) {
    ComplexTensor t;
    read_payload(t);
    file.tensor = std::move(t);
  } else {
    throw FormatError("RSPG: unknown dtype " + std::to_string(dtype));
  }
  const auto meta_len = in.get<std::uint32_t>();
  const char* meta = in.take(meta_len);
  try {
    file.metadata = meta_len == 0 ? nlohmann::json::object() : nlohmann::json::parse(meta, meta + meta_len);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("RSPG: invalid metadata JSON: ") + e.what());
  }
  return file;
}

}  // namespace rspg

inline void save_tensor(const TensorFile& file, const std::filesystem::path& path) {
  const std::string bytes = rspg::encode(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write tensor file: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing tensor file: " + path.string());
}

inline TensorFile load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tensor file: " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return rspg::decode(bytes);
}

}  // namespace radiomic
