#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ripple {

// Runs fn(i) for i in [0, n). With threads <= 1 (or tiny n) the loop is
// serial; otherwise a worker pool pulls indices from a shared counter.
// Callers that need deterministic results must write into index i of a
// pre-sized container instead of appending.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Resolves a thread-count request: 0 means "use the hardware count".
int effective_threads(int requested);

// Shell-style glob match over '/'-separated relative paths.
// Supports '*' (within a component), '?' and '**' (across components).
bool glob_match(std::string_view pattern, std::string_view path);

std::string to_lower(std::string_view s);

// Splits a '/'-separated path into components, dropping empty ones.
std::vector<std::string_view> path_components(std::string_view path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Repository-relative path with '/' separators, regardless of platform.
std::string relative_slash_path(const std::filesystem::path& file, const std::filesystem::path& root);

}  // namespace ripple
