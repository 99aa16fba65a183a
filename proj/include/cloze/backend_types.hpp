#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cloze/masking.hpp"

namespace cloze {

// A backend's answer for one masked factor. An empty `filled` means
// the backend declared the slot unanswerable.
struct ClozeFill {
  std::size_t factor_index = 0;
  std::string filled;
  std::vector<double> token_probs;  // one per token of `filled`
};

struct ClozeRequest {
  std::string document;
  MaskedText masked;
  std::string request_id;
  std::string sentinel = kDefaultSentinel;
};

}  // namespace cloze
