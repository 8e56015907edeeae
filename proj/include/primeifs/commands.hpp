#ifndef PRIMEIFS_COMMANDS_HPP
#define PRIMEIFS_COMMANDS_HPP

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace primeifs {

// Everything needed to re-run a command. Output locations are not part of it:
// artifacts are listed relative to the directory holding the manifest.
struct RunManifest {
    std::string subcommand;
    nlohmann::json parameters;
    nlohmann::json convention;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> artifacts;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

struct RunOptions {
    std::size_t workers = 0;        // 0: PRIME_IFS_THREADS / hardware
    std::ostream* pretty = nullptr; // human-readable tables go here when set
};

// Subcommand names: gasket, drive, rotdist, absdiff, twins, tuple, sigma-scan.
const std::vector<std::string>& subcommand_names();

// Fills defaults and validates; the result is what the manifest records.
nlohmann::json normalize_parameters(const std::string& subcommand, nlohmann::json parameters);

// `out` is a directory for most subcommands and a file path for gasket and
// sigma-scan. Writes every artifact plus the manifest and returns it.
RunManifest run_command(const std::string& subcommand, const nlohmann::json& parameters,
                        const std::filesystem::path& out, const RunOptions& options = {});

// Re-executes a manifest into `out`.
RunManifest replay(const std::filesystem::path& manifest_path, const std::filesystem::path& out,
                   const RunOptions& options = {});

// "1000000", "1e6", "10^6" -> 1000000.
std::uint64_t parse_count(const std::string& text);
std::vector<std::uint64_t> parse_count_list(const std::string& text);

// Where the manifest for a run into `out` is written.
std::filesystem::path manifest_path_for(const std::string& subcommand,
                                        const std::filesystem::path& out);

} // namespace primeifs

#endif // PRIMEIFS_COMMANDS_HPP
