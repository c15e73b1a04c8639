#include <bit>
#include <cstring>
#include <fstream>

#include "edgetrack/error.hpp"
#include "edgetrack/segmenter.hpp"

namespace edgetrack {

namespace {

constexpr char kMagic[8] = {'E', 'T', 'S', 'E', 'G', '0', '0', '1'};

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(char((v >> (8 * b)) & 0xFF));
}

void put_f32(std::vector<char>& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

}  // namespace

void Segmenter::write_snapshot(const std::filesystem::path& path) const {
  const std::size_t n_pixels = plane_size();
  const int n = config_.n_samples;
  std::vector<char> out;
  out.reserve(20 + n_pixels * (n + 12));
  out.insert(out.end(), kMagic, kMagic + 8);
  put_u32(out, std::uint32_t(dims_.width));
  put_u32(out, std::uint32_t(dims_.height));
  put_u32(out, std::uint32_t(n));
  for (std::size_t i = 0; i < n_pixels; ++i) {
    for (int k = 0; k < n; ++k) out.push_back(char(samples_[std::size_t(k) * n_pixels + i]));
    put_f32(out, radius_[i]);
    put_f32(out, period_[i]);
    put_f32(out, dmin_avg_[i]);
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  file.write(out.data(), std::streamsize(out.size()));
  if (!file) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

SegmenterSnapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (bytes.size() < 20 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw Error(ErrorCode::MalformedImage, path.string() + ": not a segmenter snapshot");

  SegmenterSnapshot snap;
  snap.dims = {int(get_u32(&bytes[8])), int(get_u32(&bytes[12]))};
  snap.n_samples = int(get_u32(&bytes[16]));
  const std::size_t n_pixels = std::size_t(snap.dims.pixels());
  const std::size_t record = std::size_t(snap.n_samples) + 12;
  if (bytes.size() != 20 + n_pixels * record)
    throw Error(ErrorCode::TruncatedStream, path.string() + ": snapshot size mismatch");

  snap.samples.reserve(n_pixels * snap.n_samples);
  for (std::size_t i = 0; i < n_pixels; ++i) {
    const unsigned char* p = &bytes[20 + i * record];
    snap.samples.insert(snap.samples.end(), p, p + snap.n_samples);
    p += snap.n_samples;
    snap.radius.push_back(std::bit_cast<float>(get_u32(p)));
    snap.period.push_back(std::bit_cast<float>(get_u32(p + 4)));
    snap.dmin_avg.push_back(std::bit_cast<float>(get_u32(p + 8)));
  }
  return snap;
}

}  // namespace edgetrack
