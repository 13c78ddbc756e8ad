#include "textfx/core/sha256.hpp"

#include <openssl/evp.h>

#include "textfx/core/error.hpp"

namespace textfx {

std::string sha256_hex(std::span<const unsigned char> data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::IoError, "SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  return sha256_hex(std::span(reinterpret_cast<const unsigned char*>(data.data()), data.size()));
}

}  // namespace textfx
