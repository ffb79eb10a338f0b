#include "selcot/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_map>

#include "httplib.h"
#include "json.hpp"
#include "selcot/errors.hpp"
#include "selcot/text.hpp"

namespace selcot {

using ojson = nlohmann::ordered_json;

void BackendSpec::validate() const {
    if (timeout_seconds <= 0) throw ConfigError("timeout_seconds must be > 0");
    if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
    if (backoff_base_seconds < 0 || backoff_cap_seconds < 0) {
        throw ConfigError("backoff seconds must be >= 0");
    }
    if (kind == BackendKind::HttpChat && endpoint.empty()) {
        throw ConfigError("http backend needs an endpoint");
    }
    if (kind == BackendKind::MockFixture && fixture_path.empty()) {
        throw ConfigError("mock backend needs a fixture path");
    }
}

long long count_tokens_fallback(std::string_view text) {
    long long total = 0;
    for (const auto word : text::split_words(text)) {
        const auto cps = text::codepoint_count(word);
        total += std::max<long long>(1, static_cast<long long>((cps + 3) / 4));
    }
    return total;
}

std::string fixture_key(std::string_view item_id, CallRole role) {
    return std::string(item_id) + ":" + std::string(to_string(role));
}

std::string fixture_key(std::string_view item_id, CallRole role,
                        const PromptStrategy& strategy) {
    return fixture_key(item_id, role) + ":" + strategy.token();
}

namespace {

struct FixtureEntry {
    std::string completion_text;
    long long prompt_tokens = -1;      // -1 = not scripted, fall back
    long long completion_tokens = -1;  // -1 = not scripted, fall back
    double latency_seconds = 0.0;
};

class MockBackend final : public Backend {
public:
    explicit MockBackend(const BackendSpec& spec) {
        std::ifstream in(spec.fixture_path, std::ios::binary);
        if (!in) throw FixtureError("cannot open fixture: " + spec.fixture_path);
        std::string line;
        long long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (text::trim(line).empty()) continue;
            const ojson j = ojson::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("key") ||
                !j["key"].is_string() || !j.contains("completion_text") ||
                !j["completion_text"].is_string()) {
                throw FixtureError(spec.fixture_path + ":" + std::to_string(line_no) +
                                   ": fixture line needs string 'key' and 'completion_text'");
            }
            FixtureEntry e;
            e.completion_text = j["completion_text"].get<std::string>();
            if (j.contains("prompt_tokens")) e.prompt_tokens = j["prompt_tokens"].get<long long>();
            if (j.contains("completion_tokens")) {
                e.completion_tokens = j["completion_tokens"].get<long long>();
            }
            if (j.contains("latency_seconds")) {
                e.latency_seconds = j["latency_seconds"].get<double>();
            }
            entries_[j["key"].get<std::string>()] = std::move(e);
        }
        if (entries_.empty()) throw FixtureError("fixture has no entries: " + spec.fixture_path);
    }

    GenerationRecord complete(const RenderedPrompt& prompt, CallRole role,
                              const RunConfig& config) override {
        // Read-only after construction, so lookups need no locking.
        const FixtureEntry* entry = find(fixture_key(prompt.item_id, role, prompt.strategy));
        if (!entry) entry = find(fixture_key(prompt.item_id, role));
        if (!entry) {
            throw BackendError(BackendError::Kind::Protocol, 0, 1,
                               "no fixture entry for " + fixture_key(prompt.item_id, role));
        }

        GenerationRecord r;
        r.item_id = prompt.item_id;
        r.call_role = role;
        r.prompt_text = prompt.user_text;
        r.completion_text = entry->completion_text;
        r.latency_seconds = entry->latency_seconds;
        r.config_snapshot = ConfigSnapshot::of(config);
        if (entry->prompt_tokens >= 0 && entry->completion_tokens >= 0) {
            r.prompt_tokens = entry->prompt_tokens;
            r.completion_tokens = entry->completion_tokens;
        } else {
            r.prompt_tokens =
                entry->prompt_tokens >= 0 ? entry->prompt_tokens
                                          : count_tokens_fallback(r.prompt_text);
            r.completion_tokens =
                entry->completion_tokens >= 0 ? entry->completion_tokens
                                              : count_tokens_fallback(r.completion_text);
            r.usage_approximate = true;
        }
        return r;
    }

private:
    const FixtureEntry* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::unordered_map<std::string, FixtureEntry> entries_;
};

// Splits "http://host:port/path" into origin ("http://host:port") and
// path prefix ("/path", possibly empty).
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must start with http:// or https://");
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string path = endpoint.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {endpoint.substr(0, path_start), path};
}

bool retryable_status(int status) {
    return status == 408 || status == 429 || (status >= 500 && status < 600);
}

class HttpChatBackend final : public Backend {
public:
    explicit HttpChatBackend(const BackendSpec& spec) : spec_(spec) {
        std::tie(origin_, path_prefix_) = split_endpoint(spec.endpoint);
        if (!spec.api_key_env.empty()) {
            if (const char* v = std::getenv(spec.api_key_env.c_str())) api_key_ = v;
        }
    }

    GenerationRecord complete(const RenderedPrompt& prompt, CallRole role,
                              const RunConfig& config) override {
        const std::string body = request_body(prompt, config);

        const auto t0 = std::chrono::steady_clock::now();
        int attempts = 0;
        int last_status = 0;
        std::string failure = "connection failed";
        while (attempts <= spec_.max_retries) {
            ++attempts;
            httplib::Client client(origin_);
            configure(client);
            auto res = client.Post(path_prefix_ + "/chat/completions", headers(), body,
                                   "application/json");
            if (res && res->status == 200) {
                const double latency = seconds_since(t0);
                return parse_response(res->body, prompt, role, config, latency, attempts - 1);
            }
            if (res) {
                last_status = res->status;
                failure = "http status " + std::to_string(res->status);
                if (!retryable_status(res->status)) {
                    throw BackendError(BackendError::Kind::Http, res->status, attempts, failure);
                }
            } else {
                last_status = 0;
                failure = "no response: " + httplib::to_string(res.error());
            }
            if (attempts <= spec_.max_retries) sleep_backoff(attempts);
        }
        if (last_status != 0) {
            throw BackendError(BackendError::Kind::Http, last_status, attempts, failure);
        }
        throw BackendError(BackendError::Kind::Timeout, 0, attempts, failure);
    }

private:
    static double seconds_since(std::chrono::steady_clock::time_point t0) {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    void configure(httplib::Client& client) const {
        const auto whole = std::max(1, static_cast<int>(spec_.timeout_seconds));
        const auto frac = static_cast<int>((spec_.timeout_seconds - std::floor(spec_.timeout_seconds)) * 1e6);
        client.set_connection_timeout(whole, frac);
        client.set_read_timeout(whole, frac);
        client.set_write_timeout(whole, frac);
    }

    httplib::Headers headers() const {
        httplib::Headers h;
        if (!api_key_.empty()) h.emplace("Authorization", "Bearer " + api_key_);
        return h;
    }

    std::string request_body(const RenderedPrompt& prompt, const RunConfig& config) const {
        ojson messages = ojson::array();
        if (prompt.system_text) {
            messages.push_back(ojson{{"role", "system"}, {"content", *prompt.system_text}});
        }
        messages.push_back(ojson{{"role", "user"}, {"content", prompt.user_text}});
        ojson j;
        j["model"] = config.model_name;
        j["messages"] = std::move(messages);
        j["temperature"] = config.temperature;
        j["max_tokens"] = config.max_tokens;
        j["seed"] = config.seed;
        return j.dump();
    }

    GenerationRecord parse_response(const std::string& body, const RenderedPrompt& prompt,
                                    CallRole role, const RunConfig& config, double latency,
                                    int retries) const {
        const ojson j = ojson::parse(body, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw BackendError(BackendError::Kind::Protocol, 200, retries + 1,
                               "response is not a JSON object");
        }
        auto choices = j.find("choices");
        if (choices == j.end() || !choices->is_array() || choices->empty()) {
            throw BackendError(BackendError::Kind::Protocol, 200, retries + 1,
                               "response has no choices");
        }
        const auto& first = (*choices)[0];
        if (!first.contains("message") || !first["message"].contains("content") ||
            !first["message"]["content"].is_string()) {
            throw BackendError(BackendError::Kind::Protocol, 200, retries + 1,
                               "choice has no message content");
        }

        GenerationRecord r;
        r.item_id = prompt.item_id;
        r.call_role = role;
        r.prompt_text = prompt.user_text;
        r.completion_text = first["message"]["content"].get<std::string>();
        r.latency_seconds = latency;
        r.retry_count = retries;
        r.config_snapshot = ConfigSnapshot::of(config);

        // A missing usage block is not an error; fall back to approximate
        // counting and say so on the record.
        auto usage = j.find("usage");
        if (usage != j.end() && usage->is_object() && usage->contains("prompt_tokens") &&
            usage->contains("completion_tokens")) {
            r.prompt_tokens = (*usage)["prompt_tokens"].get<long long>();
            r.completion_tokens = (*usage)["completion_tokens"].get<long long>();
        } else {
            r.prompt_tokens = count_tokens_fallback(r.prompt_text);
            r.completion_tokens = count_tokens_fallback(r.completion_text);
            r.usage_approximate = true;
        }
        return r;
    }

    void sleep_backoff(int attempts_so_far) const {
        double delay = spec_.backoff_base_seconds * std::pow(2.0, attempts_so_far - 1);
        delay = std::min(delay, spec_.backoff_cap_seconds);
        // Jitter desynchronizes concurrent workers; it never affects
        // recorded outputs, so a nondeterministic source is fine.
        thread_local std::mt19937_64 rng{std::random_device{}()};
        std::uniform_real_distribution<double> jitter(0.0, delay * 0.25 + 1e-9);
        delay += jitter(rng);
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }

    BackendSpec spec_;
    std::string origin_;
    std::string path_prefix_;
    std::string api_key_;
};

}  // namespace

std::unique_ptr<Backend> make_backend(const BackendSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case BackendKind::MockFixture: return std::make_unique<MockBackend>(spec);
        case BackendKind::HttpChat: return std::make_unique<HttpChatBackend>(spec);
    }
    throw ConfigError("unknown backend kind");
}

}  // namespace selcot
