#include "asc/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "asc/error.hpp"

namespace asc {

static_assert(std::endian::native == std::endian::little, "tensor container assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'L', 'M', 'T', '1'};
constexpr std::uint32_t kMaxRank = 8;

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorCode::ParseError, "truncated tensor header");
  return v;
}

std::filesystem::path meta_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".meta";
  return p;
}

}  // namespace

std::size_t TensorRecord::element_count() const noexcept {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void write_tensor(std::ostream& out, std::span<const std::uint32_t> dims, std::span<const float> values) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  if (n != values.size()) {
    throw Error(ErrorCode::ShapeMismatch, "dims describe " + std::to_string(n) + " elements, got " +
                                              std::to_string(values.size()));
  }
  out.write(kMagic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dims.size()));
  for (auto d : dims) put<std::uint32_t>(out, d);
  put<std::uint8_t>(out, kDtypeFloat32);
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(float)));
}

TensorRecord read_tensor(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw Error(ErrorCode::ParseError, "truncated tensor header");
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::ParseError, "bad tensor magic");
  const auto rank = get<std::uint32_t>(in);
  if (rank > kMaxRank) throw Error(ErrorCode::ParseError, "implausible tensor rank " + std::to_string(rank));
  TensorRecord rec;
  rec.dims.resize(rank);
  for (auto& d : rec.dims) d = get<std::uint32_t>(in);
  const auto dtype = get<std::uint8_t>(in);
  if (dtype != kDtypeFloat32) throw Error(ErrorCode::ParseError, "unsupported dtype tag " + std::to_string(dtype));
  const std::size_t n = rec.element_count();
  if (n > (std::size_t{1} << 32)) throw Error(ErrorCode::ParseError, "implausible tensor size");
  rec.values.resize(n);
  if (!in.read(reinterpret_cast<char*>(rec.values.data()), static_cast<std::streamsize>(n * sizeof(float)))) {
    throw Error(ErrorCode::ParseError, "truncated tensor payload");
  }
  return rec;
}

std::filesystem::path feature_path(const std::filesystem::path& dir, std::string_view clip_id, ComboName combo) {
  return dir / (std::string(clip_id) + "." + std::string(to_string(combo)) + ".lmt");
}

void save_feature_tensor(const std::filesystem::path& path, const FeatureTensor& tensor, std::string_view label) {
  // on disk: n_mels x frames x C, channels fastest
  std::vector<float> interleaved(tensor.values.size());
  const std::size_t plane = tensor.plane_size();
  for (std::size_t c = 0; c < tensor.channels; ++c) {
    for (std::size_t i = 0; i < plane; ++i) interleaved[i * tensor.channels + c] = tensor.values[c * plane + i];
  }
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(tensor.n_mels), static_cast<std::uint32_t>(tensor.frames),
                                 static_cast<std::uint32_t>(tensor.channels)};
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    write_tensor(out, dims, interleaved);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
  }
  std::ofstream meta(meta_path(path));
  if (!meta) throw Error(ErrorCode::Io, "cannot write " + meta_path(path).string());
  meta << tensor.clip_id << '\t' << to_string(tensor.combo) << '\t' << label << '\n';
}

LoadedFeature load_feature_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  TensorRecord rec = read_tensor(in);
  if (rec.dims.size() != 3) throw Error(ErrorCode::ParseError, path.string() + ": feature tensor must have rank 3");

  LoadedFeature out;
  std::ifstream meta(meta_path(path));
  if (!meta) throw Error(ErrorCode::Io, "missing sidecar " + meta_path(path).string());
  std::string line;
  std::getline(meta, line);
  const auto a = line.find('\t');
  const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
  if (b == std::string::npos) throw Error(ErrorCode::ParseError, meta_path(path).string() + ": malformed sidecar");
  out.meta = {line.substr(0, a), line.substr(a + 1, b - a - 1), line.substr(b + 1)};

  auto& t = out.tensor;
  t.n_mels = rec.dims[0];
  t.frames = rec.dims[1];
  t.channels = rec.dims[2];
  t.clip_id = out.meta.clip_id;
  t.combo = combo_by_name(out.meta.combo).name;
  t.values.resize(rec.values.size());
  const std::size_t plane = t.plane_size();
  for (std::size_t c = 0; c < t.channels; ++c) {
    for (std::size_t i = 0; i < plane; ++i) t.values[c * plane + i] = rec.values[i * t.channels + c];
  }
  return out;
}

}  // namespace asc
