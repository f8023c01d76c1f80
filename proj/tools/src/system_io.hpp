#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "turingrad/rdmodel.hpp"

namespace turingrad::cli {

// Accepted documents:
//   {"M1": [[.,.],[.,.]], "M2": ..., "Q": [Q0, Q1], "C": [C0, C1]}
//     with Q_k a symmetric 2x2 block and C_k[i][j][l] a symmetric 2x2x2 block;
//   {"model": "swift_hohenberg", "nu": <real>}.
struct ParsedSystem {
  RDSystem system;
  std::optional<double> nu;       // set for the swift_hohenberg shorthand
  double symmetrization = 0.0;    // largest entry change applied on load
};

// nu_override replaces the shorthand's nu; explicit tensors reject it.
ParsedSystem parse_system_json(const nlohmann::json& doc, std::optional<double> nu_override = {});

struct LoadedSystem {
  RDSystem system;
  std::string hash;    // FNV-1a of the file bytes (of the canonical dump without a file)
  std::string source;  // path or "builtin:swift_hohenberg"
  std::optional<double> nu;
};

// Warns on `warn` when asymmetric input was symmetrised.
LoadedSystem parse_system_file(const std::string& path, std::optional<double> nu_override,
                               std::ostream& warn);
// Built-in Swift-Hohenberg instance used when no --system is given.
LoadedSystem builtin_system(double nu);

nlohmann::json system_to_json(const RDSystem& system);
void write_system_file(const std::string& path, const RDSystem& system);

std::uint64_t fnv1a(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

} // namespace turingrad::cli
