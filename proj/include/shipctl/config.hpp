#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "shipctl/sim.hpp"

namespace shipctl {

// Parse/validation failure; line is 1-based, 0 when no single line applies.
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& msg)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg
                                       : msg),
          line(line_) {}
};

// Flat `key = value` document with '#' comments. Unknown keys are rejected.
// `init` and `ref_init` take six whitespace-separated numbers
// (x y psi u v r). Unspecified keys keep the built-in defaults. A mode given
// by the caller (CLI subcommand) must agree with a `mode` key if both exist.
Scenario parse_config(std::string_view text,
                      std::optional<Mode> mode_override = std::nullopt);

// Serializes every scenario field; parse_config(dump_config(sc)) == sc.
std::string dump_config(const Scenario& sc);

}  // namespace shipctl
