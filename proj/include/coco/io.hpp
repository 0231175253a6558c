#pragma once

#include "coco/scheme.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coco {

/// Syntax error in one of the text formats. Line and column are 1-based.
class ParseError : public std::runtime_error
{
public:
    ParseError(std::size_t line, std::size_t column, const std::string &message);

    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

/// Body of a ".cc" file. Rows may be ragged: shape is verify_scheme's call.
struct ColorMatrixFile
{
    std::size_t declared_points = 0;
    std::size_t declared_colors = 0;
    RawMatrix rows;
};

struct PermutationGroupInput
{
    std::size_t degree = 0;
    std::vector<std::vector<std::size_t>> generators;
};

struct DesignInput
{
    /// points x blocks, 0/1
    std::vector<std::vector<std::uint8_t>> incidence;
};

[[nodiscard]] ColorMatrixFile parse_color_matrix(std::string_view text);
[[nodiscard]] std::string format_color_matrix(const Scheme &s);

[[nodiscard]] PermutationGroupInput parse_permutations(std::string_view text);
[[nodiscard]] DesignInput parse_design(std::string_view text);

/// Parses a ".cc" body and verifies it, including that the declared color
/// count matches the colors that occur.
[[nodiscard]] Scheme scheme_from_text(std::string_view text);

[[nodiscard]] std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, std::string_view text);

}  // namespace coco
