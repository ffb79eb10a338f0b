#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "selcot/prompt.hpp"
#include "selcot/types.hpp"

namespace selcot {

enum class BackendKind { HttpChat, MockFixture };

struct BackendSpec {
    BackendKind kind = BackendKind::MockFixture;
    std::string endpoint;      // HttpChat: base URL, e.g. http://127.0.0.1:8000/v1
    std::string api_key_env;   // HttpChat: env var holding the bearer token; empty = none
    std::string fixture_path;  // MockFixture: JSONL of scripted completions
    double timeout_seconds = 120.0;
    int max_retries = 3;
    double backoff_base_seconds = 0.25;  // doubled per retry, capped below, plus jitter
    double backoff_cap_seconds = 10.0;

    void validate() const;  // throws ConfigError
};

// Approximate token count used only when the endpoint reports no usage:
// Unicode-whitespace word segmentation, each word counting
// ceil(codepoints/4) with a minimum of 1. Records built this way carry
// usage_approximate = true.
long long count_tokens_fallback(std::string_view text);

class Backend {
public:
    virtual ~Backend() = default;

    // Executes one model call. Throws BackendError once retries are
    // exhausted; never partially succeeds. Safe to call from up to
    // RunConfig::concurrency threads at once.
    virtual GenerationRecord complete(const RenderedPrompt& prompt, CallRole role,
                                      const RunConfig& config) = 0;
};

// Throws ConfigError for a bad spec and FixtureError for an unusable
// fixture file.
std::unique_ptr<Backend> make_backend(const BackendSpec& spec);

// Fixture lookup keys. The strategy-qualified form is consulted first so
// one fixture can script different completions per prompt variant; the
// bare form is the fallback.
std::string fixture_key(std::string_view item_id, CallRole role);
std::string fixture_key(std::string_view item_id, CallRole role, const PromptStrategy& strategy);

}  // namespace selcot
