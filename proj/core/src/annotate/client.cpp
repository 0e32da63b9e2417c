#include "candist/annotate/client.hpp"

#include <cstdlib>

#if defined(CANDIST_WITH_OPENSSL)
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "candist/core/io.hpp"
#include "candist/error.hpp"

namespace candist::annotate {

nlohmann::json make_chat_body(const ChatRequest& request, const std::string& model) {
  return nlohmann::json{
      {"model", model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.temperature},
      {"n", request.n},
  };
}

std::vector<std::string> parse_chat_response(const std::string& body) {
  try {
    auto j = nlohmann::json::parse(body);
    std::vector<std::string> out;
    for (const auto& choice : j.at("choices")) {
      const auto& content = choice.at("message").at("content");
      out.push_back(content.is_null() ? std::string{} : content.get<std::string>());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw RuntimeFailure(std::string("malformed chat completion response: ") + e.what());
  }
}

HttpChatClient::HttpChatClient(LlmClientConfig config) : config_(std::move(config)) {
  const auto& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InputError("endpoint needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
#if !defined(CANDIST_WITH_OPENSSL)
  if (url.rfind("https://", 0) == 0) {
    throw InputError("built without TLS support; https endpoints are unavailable");
  }
#endif
  if (const char* token = std::getenv(config_.token_env.c_str())) token_ = token;
}

std::vector<std::string> HttpChatClient::complete(const ChatRequest& request) {
  httplib::Client client(origin_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
  const auto body = make_chat_body(request, config_.model).dump();
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    throw RuntimeFailure("endpoint unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw RuntimeFailure("endpoint returned HTTP " + std::to_string(res->status));
  }
  return parse_chat_response(res->body);
}

nlohmann::ordered_json to_json(const ReplayEntry& entry) {
  nlohmann::ordered_json j;
  j["sample_id"] = entry.sample_id;
  j["prompt"] = entry.prompt;
  j["responses"] = entry.responses;
  return j;
}

ReplayRecorder::ReplayRecorder(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw RuntimeFailure("cannot open replay log " + path.string());
}

void ReplayRecorder::append(const ReplayEntry& entry) {
  const auto line = to_json(entry).dump() + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
}

ReplayClient::ReplayClient(const std::filesystem::path& path) {
  io::for_each_line(path, [&](const std::string& line, std::size_t number) {
    try {
      auto j = nlohmann::json::parse(line);
      ReplayEntry e{j.at("sample_id").get<std::string>(), j.at("prompt").get<std::string>(),
                    j.at("responses").get<std::vector<std::string>>()};
      // Later lines win: a log may hold retries of the same sample.
      entries_[e.sample_id] = std::move(e);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), number, e.what());
    }
  });
}

ReplayClient::ReplayClient(std::vector<ReplayEntry> entries) {
  for (auto& e : entries) entries_[e.sample_id] = std::move(e);
}

std::vector<std::string> ReplayClient::complete(const ChatRequest& request) {
  auto it = entries_.find(request.sample_id);
  if (it == entries_.end()) {
    throw ReplayMiss("replay fixture has no entry for sample \"" + request.sample_id + "\"");
  }
  if (it->second.prompt != request.prompt) {
    throw ReplayMiss("replay fixture prompt differs for sample \"" + request.sample_id + "\"");
  }
  return it->second.responses;
}

}  // namespace candist::annotate
