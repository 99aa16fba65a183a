#include "cloze/backend.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cloze/errors.hpp"
#include "cloze/text.hpp"
#include "json.hpp"

namespace cloze {

namespace {

std::size_t count_tokens(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::string tok;
  std::size_t n = 0;
  while (in >> tok) ++n;
  return n;
}

ClozeFill certain_fill(std::size_t factor_index, std::string surface) {
  ClozeFill fill;
  fill.factor_index = factor_index;
  fill.token_probs.assign(count_tokens(surface), 1.0);
  fill.filled = std::move(surface);
  return fill;
}

ClozeFill abstain(std::size_t factor_index) { return ClozeFill{factor_index, "", {}}; }

}  // namespace

void GoldReferenceBackend::prime(const std::string& unit_id,
                                 const std::vector<std::string>& factor_surfaces,
                                 const std::vector<std::string>& gold_surfaces) {
  (void)factor_surfaces;
  std::lock_guard lock(mu_);
  gold_[unit_id] = gold_surfaces;
}

std::vector<ClozeFill> GoldReferenceBackend::fill(const ClozeRequest& request) {
  std::vector<std::string> gold;
  {
    std::lock_guard lock(mu_);
    auto it = gold_.find(request.request_id);
    if (it != gold_.end()) gold = it->second;
  }
  std::vector<ClozeFill> out;
  for (const auto& slot : request.masked.slots) {
    if (slot.factor_index < gold.size() && !gold[slot.factor_index].empty())
      out.push_back(certain_fill(slot.factor_index, gold[slot.factor_index]));
    else
      out.push_back(abstain(slot.factor_index));
  }
  return out;
}

void DocumentLookupBackend::prime(const std::string& unit_id,
                                  const std::vector<std::string>& factor_surfaces,
                                  const std::vector<std::string>& gold_surfaces) {
  (void)gold_surfaces;
  std::lock_guard lock(mu_);
  surfaces_[unit_id] = factor_surfaces;
}

std::vector<ClozeFill> DocumentLookupBackend::fill(const ClozeRequest& request) {
  std::vector<std::string> surfaces;
  {
    std::lock_guard lock(mu_);
    auto it = surfaces_.find(request.request_id);
    if (it != surfaces_.end()) surfaces = it->second;
  }
  std::string doc_lower = to_lower_ascii(request.document);
  std::vector<ClozeFill> out;
  for (const auto& slot : request.masked.slots) {
    if (slot.factor_index < surfaces.size()) {
      const std::string& surface = surfaces[slot.factor_index];
      if (!surface.empty() && doc_lower.find(to_lower_ascii(surface)) != std::string::npos) {
        out.push_back(certain_fill(slot.factor_index, surface));
        continue;
      }
    }
    out.push_back(abstain(slot.factor_index));
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string fills_to_json(const std::vector<ClozeFill>& fills) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : fills) {
    arr.push_back({{"factor_index", f.factor_index},
                   {"text", f.filled},
                   {"token_probs", f.token_probs}});
  }
  return arr.dump();
}

std::vector<ClozeFill> fills_from_json(const std::string& json_text) {
  auto arr = nlohmann::json::parse(json_text);
  if (!arr.is_array()) throw MalformedResponse("fill list is not a JSON array");
  std::vector<ClozeFill> fills;
  for (const auto& item : arr) {
    ClozeFill f;
    f.factor_index = item.at("factor_index").get<std::size_t>();
    f.filled = item.at("text").get<std::string>();
    f.token_probs = item.at("token_probs").get<std::vector<double>>();
    for (double p : f.token_probs)
      if (p < 0.0 || p > 1.0) throw MalformedResponse("token probability outside [0,1]");
    if (f.filled.empty() != f.token_probs.empty())
      throw MalformedResponse("empty fill must carry empty token_probs");
    fills.push_back(std::move(f));
  }
  return fills;
}

CachedBackend::CachedBackend(std::shared_ptr<Backend> inner, std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::vector<ClozeFill> CachedBackend::fill(const ClozeRequest& request) {
  std::string key_material =
      request.document + '\x1f' + request.masked.text + '\x1f' + inner_->identity();
  auto path = dir_ / (sha256_hex(key_material) + ".json");

  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      auto fills = fills_from_json(buf.str());
      if (fills.size() == request.masked.slots.size()) return fills;
      throw CacheCorrupt("cached slot count mismatch");
    } catch (const std::exception&) {
      // Unreadable entry: evict and recompute.
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  }

  auto fills = inner_->fill(request);
  {
    std::lock_guard lock(write_mu_);
    auto tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    out << fills_to_json(fills);
    out.close();
    std::filesystem::rename(tmp, path);
  }
  return fills;
}

}  // namespace cloze
