#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "cloze/backend_types.hpp"

namespace cloze {

// Pluggable cloze-filling: document + masked text in, one fill per
// slot (in slot order) out. Implementations must accept concurrent
// fill calls.
class Backend {
 public:
  virtual ~Backend() = default;

  // Stable name; part of the cache key.
  virtual std::string identity() const = 0;

  virtual std::vector<ClozeFill> fill(const ClozeRequest& request) = 0;

  // Called by the pipeline before a unit's passes with the unit's
  // factor surfaces (and gold factor surfaces when a gold summary
  // exists). Real backends ignore this; the bundled oracles use it.
  virtual void prime(const std::string& unit_id, const std::vector<std::string>& factor_surfaces,
                     const std::vector<std::string>& gold_surfaces) {
    (void)unit_id;
    (void)factor_surfaces;
    (void)gold_surfaces;
  }
};

// Fills each slot with the gold summary's factor at that index, with
// probability 1.0 per token. Slots without a gold factor abstain.
class GoldReferenceBackend final : public Backend {
 public:
  std::string identity() const override { return "gold-oracle"; }
  std::vector<ClozeFill> fill(const ClozeRequest& request) override;
  void prime(const std::string& unit_id, const std::vector<std::string>& factor_surfaces,
             const std::vector<std::string>& gold_surfaces) override;

 private:
  std::mutex mu_;
  std::unordered_map<std::string, std::vector<std::string>> gold_;
};

// Returns the masked surface iff it occurs verbatim (case-insensitive)
// in the document; otherwise abstains.
class DocumentLookupBackend final : public Backend {
 public:
  std::string identity() const override { return "doc-lookup"; }
  std::vector<ClozeFill> fill(const ClozeRequest& request) override;
  void prime(const std::string& unit_id, const std::vector<std::string>& factor_surfaces,
             const std::vector<std::string>& gold_surfaces) override;

 private:
  std::mutex mu_;
  std::unordered_map<std::string, std::vector<std::string>> surfaces_;
};

// HTTP client for the remote cloze protocol: one JSON object per POST
// body, response fills in slot order.
class RemoteBackend final : public Backend {
 public:
  // endpoint: "http://host:port/path"
  explicit RemoteBackend(std::string endpoint, int max_retries = 3);
  std::string identity() const override { return "remote:" + endpoint_; }
  std::vector<ClozeFill> fill(const ClozeRequest& request) override;

 private:
  std::string endpoint_;
  std::string host_port_;
  std::string path_;
  int max_retries_;
};

// On-disk cache keyed by 256-bit content hash of (document, masked
// text, backend identity). Extensionally transparent.
class CachedBackend final : public Backend {
 public:
  CachedBackend(std::shared_ptr<Backend> inner, std::filesystem::path dir);
  std::string identity() const override { return inner_->identity(); }
  std::vector<ClozeFill> fill(const ClozeRequest& request) override;
  void prime(const std::string& unit_id, const std::vector<std::string>& factor_surfaces,
             const std::vector<std::string>& gold_surfaces) override {
    inner_->prime(unit_id, factor_surfaces, gold_surfaces);
  }

 private:
  std::shared_ptr<Backend> inner_;
  std::filesystem::path dir_;
  std::mutex write_mu_;
};

// Hex-encoded SHA-256, used for cache keys.
std::string sha256_hex(std::string_view data);

// JSON (de)serialization of fill lists; shared by the cache and the
// remote protocol.
std::string fills_to_json(const std::vector<ClozeFill>& fills);
std::vector<ClozeFill> fills_from_json(const std::string& json_text);

}  // namespace cloze
