#include "elan/manifest.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <openssl/evp.h>

#include <json.hpp>

#include "elan/errors.hpp"

namespace elan {

namespace {

using nlohmann::json;

std::string to_hex(const unsigned char* bytes, std::size_t length) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(length * 2);
  for (std::size_t i = 0; i < length; ++i) {
    hex.push_back(kDigits[bytes[i] >> 4]);
    hex.push_back(kDigits[bytes[i] & 0x0f]);
  }
  return hex;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr ||
      EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &digest_len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256 computation failed");
  }
  EVP_MD_CTX_free(ctx);
  return to_hex(digest, digest_len);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingFileError(path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_hex(buffer.str());
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs.emplace_back(path.string(), sha256_file(path));
}

std::string RunManifest::to_json() const {
  json inputs_json = json::array();
  for (const auto& [path, digest] : inputs) {
    inputs_json.push_back(json{{"path", path}, {"sha256", digest}});
  }
  const json manifest = {{"tool_version", tool_version},
                         {"command", command},
                         {"inputs", std::move(inputs_json)},
                         {"thresholds", thresholds},
                         {"settings", settings}};
  return manifest.dump(2) + "\n";
}

std::string RunManifest::digest() const { return sha256_hex(to_json()); }

void OutputStage::add(std::string filename, std::string content) {
  files_.emplace_back(std::move(filename), std::move(content));
}

std::vector<std::filesystem::path> OutputStage::commit(
    const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir)) {
    throw MissingFileError(dir.string() + " (" + ec.message() + ")");
  }

  std::vector<fs::path> temporaries;
  std::vector<fs::path> finals;
  try {
    for (const auto& [filename, content] : files_) {
      const fs::path tmp = dir / (filename + ".tmp");
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw MissingFileError(tmp.string());
      }
      out << content;
      out.flush();
      if (!out) {
        throw MissingFileError(tmp.string());
      }
      out.close();
      temporaries.push_back(tmp);
      finals.push_back(dir / filename);
    }
    for (std::size_t i = 0; i < temporaries.size(); ++i) {
      fs::rename(temporaries[i], finals[i]);
    }
  } catch (...) {
    for (const fs::path& tmp : temporaries) {
      fs::remove(tmp, ec);
    }
    throw;
  }
  return finals;
}

}  // namespace elan
