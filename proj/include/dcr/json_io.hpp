#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dcr/graph.hpp"

namespace dcr {

/// Malformed JSON text or a document of the wrong shape. line() is 1-based,
/// or 0 when the problem is structural rather than textual.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(message), line_{line}, column_{column} {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Thrown when a file cannot be opened or read.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json parse_json(std::string_view text);
std::string read_file(const std::filesystem::path& path);

graph_document document_from_json(const nlohmann::json& j);
nlohmann::json to_json(const graph_document& doc);

graph_document parse_document(std::string_view text);
graph_document load_document(const std::filesystem::path& path);

nlohmann::json to_json(const validation_report& report);

}  // namespace dcr
