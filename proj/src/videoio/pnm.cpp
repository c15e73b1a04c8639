#include "edgetrack/pnm.hpp"

#include <cctype>
#include <fstream>

#include "edgetrack/error.hpp"

namespace edgetrack {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(char(c));
  }
  return token;
}

int header_int(std::istream& in, const std::filesystem::path& path) {
  const std::string token = header_token(in);
  if (token.empty() || token.size() > 9 || token.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::MalformedImage, path.string() + ": bad header field '" + token + "'");
  return std::stoi(token);
}

void write_pnm(const std::filesystem::path& path, const char* magic, FrameDims dims,
               const std::uint8_t* data, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << magic << '\n' << dims.width << ' ' << dims.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(data), std::streamsize(bytes));
  if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

}  // namespace

PnmImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());

  const std::string magic = header_token(in);
  PnmImage img;
  if (magic == "P5") {
    img.channels = 1;
  } else if (magic == "P6") {
    img.channels = 3;
  } else {
    throw Error(ErrorCode::MalformedImage, path.string() + ": not a binary PGM/PPM");
  }
  img.dims.width = header_int(in, path);
  img.dims.height = header_int(in, path);
  const int maxval = header_int(in, path);
  if (!img.dims.valid() || maxval != 255)
    throw Error(ErrorCode::MalformedImage, path.string() + ": unsupported dimensions or maxval");

  img.pixels.resize(std::size_t(img.dims.pixels()) * img.channels);
  in.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
  if (std::size_t(in.gcount()) != img.pixels.size())
    throw Error(ErrorCode::MalformedImage, path.string() + ": truncated pixel data");
  return img;
}

void write_pgm(const std::filesystem::path& path, FrameDims dims, const std::uint8_t* data) {
  write_pnm(path, "P5", dims, data, std::size_t(dims.pixels()));
}

void write_ppm(const std::filesystem::path& path, FrameDims dims, const std::uint8_t* rgb) {
  write_pnm(path, "P6", dims, rgb, std::size_t(dims.pixels()) * 3);
}

}  // namespace edgetrack
