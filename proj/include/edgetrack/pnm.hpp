#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "edgetrack/box.hpp"

namespace edgetrack {

// Binary PGM (P5, channels = 1) or PPM (P6, channels = 3), maxval 255.
struct PnmImage {
  FrameDims dims;
  int channels = 1;
  std::vector<std::uint8_t> pixels;
};

// Throws Error(MalformedImage) on bad headers or short payloads and
// Error(IoFailure) when the file cannot be opened.
PnmImage read_pnm(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, FrameDims dims, const std::uint8_t* data);
void write_ppm(const std::filesystem::path& path, FrameDims dims, const std::uint8_t* rgb);

}  // namespace edgetrack
