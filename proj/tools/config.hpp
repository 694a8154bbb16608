#pragma once

#include <map>
#include <optional>
#include <string>

#include "fractrunc/operators.hpp"
#include "fractrunc/quad.hpp"

namespace fractrunc::cli {

// Resolved run configuration.  Sources, lowest to highest precedence:
// built-in defaults, a key=value file, FRACTRUNC_<KEY> environment variables,
// explicit command-line flags.
struct Config {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double root_residual = 1e-9;
    int restarts = 10;
    int sweeps = 3;
    int angles = 32;
    int radii = 8;
    int dirs = 8;
    int threads = 0;
    long long seed = 42;
    std::string format = "json";

    // Keys accepted everywhere, in the spelling used by files and flags.
    static const char* const keys[];

    quad::Tolerance tolerance() const { return {abs_tol, rel_tol, 10'000'000}; }
    SearchBudget budget() const;

    // Applies one key; throws DomainError naming the key on bad values.
    void set(const std::string& key, const std::string& value);

    // file may be empty.  flags holds only the options given on the command line.
    static Config resolve(const std::string& file, const std::map<std::string, std::string>& flags);
};

// Parses "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_key_value_file(const std::string& path);

// Writes through a temporary file in the same directory and renames it into place.
void write_atomically(const std::string& path, const std::string& contents);

}  // namespace fractrunc::cli
