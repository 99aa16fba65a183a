#include <regex>

#include "cloze/backend.hpp"
#include "cloze/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cloze {

RemoteBackend::RemoteBackend(std::string endpoint, int max_retries)
    : endpoint_(std::move(endpoint)), max_retries_(max_retries) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint_, m, url_re))
    throw BackendUnavailable("bad endpoint url: " + endpoint_);
  host_port_ = m[1];
  path_ = m[2].matched && m[2].length() > 0 ? m[2].str() : "/";
}

std::vector<ClozeFill> RemoteBackend::fill(const ClozeRequest& request) {
  nlohmann::json body = {{"document", request.document},
                         {"masked_text", request.masked.text},
                         {"sentinel", request.sentinel},
                         {"slots", nlohmann::json::array()}};
  for (const auto& slot : request.masked.slots)
    body["slots"].push_back({{"factor_index", slot.factor_index}});
  std::string payload = body.dump();

  httplib::Client client(host_port_);
  client.set_read_timeout(60, 0);

  std::string response_body;
  std::string last_error;
  bool got_response = false;
  for (int attempt = 0; attempt < max_retries_ && !got_response; ++attempt) {
    auto res = client.Post(path_, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "http status " + std::to_string(res->status);
      continue;
    }
    response_body = res->body;
    got_response = true;
  }
  if (!got_response)
    throw BackendUnavailable("remote backend " + endpoint_ + " unreachable: " + last_error);

  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(response_body);
  } catch (const std::exception& e) {
    throw MalformedResponse(std::string("response is not JSON: ") + e.what());
  }
  if (!parsed.contains("fills")) throw MalformedResponse("response missing 'fills'");

  std::vector<ClozeFill> fills;
  try {
    fills = fills_from_json(parsed["fills"].dump());
  } catch (const MalformedResponse&) {
    throw;
  } catch (const std::exception& e) {
    throw MalformedResponse(std::string("bad fill record: ") + e.what());
  }

  if (fills.size() != request.masked.slots.size())
    throw MalformedResponse("expected " + std::to_string(request.masked.slots.size()) +
                            " fills, got " + std::to_string(fills.size()));
  for (std::size_t i = 0; i < fills.size(); ++i) {
    if (fills[i].factor_index != request.masked.slots[i].factor_index)
      throw MalformedResponse("fill order does not match slot order");
  }
  return fills;
}

}  // namespace cloze
