#include "coco/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace coco {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string &message) :
    std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
    line_(line),
    column_(column)
{
}

namespace {

struct Line
{
    std::string_view text;
    std::size_t number;
};

// Splits on '\n'. A single trailing newline does not produce an empty line;
// a '\r' before the newline is rejected like any other stray character.
std::vector<Line> split_lines(std::string_view text)
{
    std::vector<Line> lines;
    std::size_t start = 0, number = 1;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        lines.push_back({text.substr(start, end - start), number++});
        start = end + 1;
    }
    return lines;
}

std::size_t parse_unsigned(std::string_view token, const Line &line, std::size_t column)
{
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(line.number, column, "expected a non-negative integer, got '" + std::string(token) + "'");
    return value;
}

// "key=<n>" occupying the whole of `text`, starting at `column`.
std::size_t parse_key_value(std::string_view text, std::string_view key, const Line &line, std::size_t column)
{
    if (text.substr(0, key.size()) != key || text.size() <= key.size() || text[key.size()] != '=')
        throw ParseError(line.number, column, "expected '" + std::string(key) + "=<n>'");
    return parse_unsigned(text.substr(key.size() + 1), line, column + key.size() + 1);
}

// Single-space separated integers; no leading/trailing blanks.
std::vector<std::size_t> parse_row(const Line &line)
{
    std::vector<std::size_t> out;
    if (line.text.empty())
        throw ParseError(line.number, 1, "empty row");
    std::size_t pos = 0;
    while (true) {
        auto end = line.text.find(' ', pos);
        auto token = line.text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        out.push_back(parse_unsigned(token, line, pos + 1));
        if (end == std::string_view::npos)
            break;
        pos = end + 1;
    }
    return out;
}

}  // namespace

ColorMatrixFile parse_color_matrix(std::string_view text)
{
    auto lines = split_lines(text);
    if (lines.size() < 2)
        throw ParseError(lines.size() + 1, 1, "missing header line");
    ColorMatrixFile out;
    out.declared_points = parse_key_value(lines[0].text, "points", lines[0], 1);
    out.declared_colors = parse_key_value(lines[1].text, "colors", lines[1], 1);
    if (out.declared_points == 0)
        throw ParseError(1, 8, "points must be positive");
    if (lines.size() - 2 != out.declared_points)
        throw ParseError(lines.size() + 1, 1,
                         "expected " + std::to_string(out.declared_points) + " rows, found " +
                             std::to_string(lines.size() - 2));
    for (std::size_t i = 2; i < lines.size(); ++i) {
        auto row = parse_row(lines[i]);
        std::vector<std::int64_t> converted;
        std::size_t column = 1;
        for (auto c : row) {
            if (c >= out.declared_colors)
                throw ParseError(lines[i].number, column,
                                 "color " + std::to_string(c) + " outside 0.." +
                                     std::to_string(out.declared_colors == 0 ? 0 : out.declared_colors - 1));
            converted.push_back(static_cast<std::int64_t>(c));
            column += std::to_string(c).size() + 1;
        }
        out.rows.push_back(std::move(converted));
    }
    return out;
}

std::string format_color_matrix(const Scheme &s)
{
    std::ostringstream out;
    const auto n = s.point_count();
    out << "points=" << n << '\n' << "colors=" << s.relation_count() << '\n';
    for (Point u = 0; u < n; ++u) {
        for (Point v = 0; v < n; ++v) {
            if (v)
                out << ' ';
            out << s.color(u, v);
        }
        out << '\n';
    }
    return out.str();
}

Scheme scheme_from_text(std::string_view text)
{
    auto file = parse_color_matrix(text);
    auto scheme = verify_scheme(file.rows);
    if (scheme.relation_count() != file.declared_colors)
        throw VerificationError(VerifyErrorKind::NonContiguousColors,
                                "header declares " + std::to_string(file.declared_colors) + " colors but " +
                                    std::to_string(scheme.relation_count()) + " occur");
    return scheme;
}

PermutationGroupInput parse_permutations(std::string_view text)
{
    auto lines = split_lines(text);
    if (lines.empty())
        throw ParseError(1, 1, "missing header line");
    PermutationGroupInput out;
    out.degree = parse_key_value(lines[0].text, "degree", lines[0], 1);
    if (out.degree == 0)
        throw ParseError(1, 8, "degree must be positive");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto images = parse_row(lines[i]);
        if (images.size() != out.degree)
            throw ParseError(lines[i].number, 1,
                             "generator has " + std::to_string(images.size()) + " images, expected " +
                                 std::to_string(out.degree));
        std::vector<bool> hit(out.degree, false);
        for (auto x : images) {
            if (x >= out.degree || hit[x])
                throw ParseError(lines[i].number, 1, "generator is not a permutation of 0.." +
                                                         std::to_string(out.degree - 1));
            hit[x] = true;
        }
        out.generators.push_back(std::move(images));
    }
    if (out.generators.empty())
        throw ParseError(2, 1, "at least one generator is required");
    return out;
}

DesignInput parse_design(std::string_view text)
{
    auto lines = split_lines(text);
    if (lines.empty())
        throw ParseError(1, 1, "missing header line");
    const auto &header = lines[0];
    auto space = header.text.find(' ');
    if (space == std::string_view::npos)
        throw ParseError(1, 1, "expected 'v=<v> b=<b>'");
    auto v = parse_key_value(header.text.substr(0, space), "v", header, 1);
    auto b = parse_key_value(header.text.substr(space + 1), "b", header, space + 2);
    if (v == 0 || b == 0)
        throw ParseError(1, 1, "v and b must be positive");
    if (lines.size() - 1 != v)
        throw ParseError(lines.size() + 1, 1,
                         "expected " + std::to_string(v) + " rows, found " + std::to_string(lines.size() - 1));
    DesignInput out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto &line = lines[i];
        if (line.text.size() != b)
            throw ParseError(line.number, std::min(line.text.size(), b) + 1,
                             "expected " + std::to_string(b) + " characters from {0,1}");
        std::vector<std::uint8_t> row;
        for (std::size_t j = 0; j < b; ++j) {
            if (line.text[j] != '0' && line.text[j] != '1')
                throw ParseError(line.number, j + 1, "expected '0' or '1'");
            row.push_back(line.text[j] == '1');
        }
        out.incidence.push_back(std::move(row));
    }
    return out;
}

std::string read_text_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path &path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (! out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (! out)
        throw std::runtime_error("write failed for " + path.string());
}

}  // namespace coco
