#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ntn {

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Deterministic shortest-roundtrip style formatting ("%.10g"); negative zero
// collapses to "0" so zero crossings don't depend on sign noise.
std::string format_double(double value);

// Minimal CSV assembly: fields are joined with commas and must not themselves
// contain commas or newlines (all emitted data is numeric or simple tokens).
class Csv {
  public:
    explicit Csv(const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    const std::string& str() const { return data_; }

  private:
    std::size_t columns_;
    std::string data_;
};

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace ntn
