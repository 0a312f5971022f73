#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include <bellman/martingale.hpp>
#include <bellman/verifier.hpp>

namespace bellman {

inline constexpr const char* kToolName = "bellman-verify";
#ifdef BELLMAN_VERIFY_VERSION
inline constexpr const char* kToolVersion = BELLMAN_VERIFY_VERSION;
#else
inline constexpr const char* kToolVersion = "0.0.0";
#endif

/// FNV-1a, used to stamp reports with a stable hash of their configuration.
std::uint64_t fnv1a(std::string_view data);
std::string config_hash_hex(std::string_view canonical_config);

/// Serialization is deliberately free of wall-clock fields: identical
/// configurations produce byte-identical documents on the same platform.
nlohmann::ordered_json to_json(const Witness& witness);
nlohmann::ordered_json to_json(const VerificationReport& report);
nlohmann::ordered_json to_json(const EnsembleSummary& summary);
nlohmann::ordered_json to_json(const SweepRow& row);
nlohmann::ordered_json to_json(const BellmanEval& eval);

/// "# bellman-verify <version> config=<hash>" followed by the column header.
void write_csv_header(std::ostream& os, const std::string& config_hash,
                      const std::string& columns);

/// Per-point grid dump: index,x,y,w,v,region,value (value = normalized
/// violation returned by the check).
void dump_point_check_csv(const PointCheck& check, std::ostream& os,
                          const std::string& config_hash);

}  // namespace bellman
