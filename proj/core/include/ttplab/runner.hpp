#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace ttplab {

// Batch entry point shared by the command-line tool and the test suites.
struct RunConfig {
    nlohmann::json doc;        // parsed configuration document
    std::string out_dir = ".";
    std::uint64_t seed = 0;    // effective seed (config value unless overridden)
    bool seed_overridden = false;
    int threads = 1;
    bool emit_plot_data = false;
};

RunConfig load_run_config(const std::string& path);

// Executes the configured command, writes outputs and a manifest under
// config.out_dir. Returns the process exit code: 0 success, 2 schema or
// usage error, 3 numerical failure.
int run(const RunConfig& config);

// FNV-1a 64-bit digest, used for output manifests and determinism checks.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace ttplab
