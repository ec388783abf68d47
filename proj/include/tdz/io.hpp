#pragma once

// JSON request dispatch shared by the command-line tool and its tests.
//
// Request: {"algebra": "disk" | "linf"} or {"operator": "mult" | "compose_lp" |
// "compose_hardy"}, the module payload, optional "tolerances" overrides and
// "mode": "analyze" (default) | "certify" | "section". Section mode takes its
// order from "N" or from "section": {"N": n} / "section": n.

#include <cstddef>
#include <optional>
#include <string_view>

#include "json.hpp"

namespace tdz::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitVerification = 3;

/// Command-line overrides; they win over the request's "tolerances" object.
struct RunOptions {
  std::optional<double> eps_norm;
  std::optional<std::size_t> n_witness;
};

struct RunResult {
  nlohmann::json body;
  int exit_code = kExitOk;
  std::string diagnostic;  // empty on success
};

RunResult run_request(const nlohmann::json& request, const RunOptions& options = {});

/// Parses text first; malformed JSON yields exit 2 with the line, column and
/// byte offset of the failure.
RunResult run_text(std::string_view text, const RunOptions& options = {});

}  // namespace tdz::io
