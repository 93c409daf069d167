#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "censim/censoring.hpp"

namespace censim {

// CSV with header "t,delta", one row per observation, full double precision
// (%.17g), LF line endings.
std::string censored_csv(const CensoredSample& sample);

// CSV with a single "t" column (no censoring indicator).
std::string values_csv(const std::vector<double>& values,
                       const std::string& column = "t");

// Raw latent-lifetime dump for cure samples: column "x"; cured subjects are
// written as the numeric sentinel kCuredSentinel.
std::string latent_csv(const std::vector<double>& latent,
                       const std::vector<int>& cured_flags);

// Parses "t,delta" (or bare "t") CSV. A missing delta column yields all
// delta = 1 and sets *had_delta = false when the pointer is non-null.
// Throws std::runtime_error naming the 1-based line number on malformed
// input.
CensoredSample parse_censored_csv(std::istream& in, bool* had_delta = nullptr);
CensoredSample read_censored_csv(const std::string& path,
                                 bool* had_delta = nullptr);

// Writes content to path via a temporary file in the same directory plus an
// atomic rename, so no partial file is ever visible.
void atomic_write_file(const std::string& path, const std::string& content);

} // namespace censim
