#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "ssr/pipeline.hpp"

namespace ssr {

using Json = nlohmann::json;

Json to_json(const Complex& c);
Json to_json(const ComplexMorphism& f);
Json to_json(const ReductionTrace& trace);

// Relative paths inside a morphism document resolve against base_dir.
Complex complex_from_json(const Json& doc);
ComplexMorphism morphism_from_json(const Json& doc, const std::filesystem::path& base_dir = {});
ReductionTrace trace_from_json(const Json& doc);

Json parse_json_text(const std::string& text);
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

Complex read_complex(const std::filesystem::path& path);
ComplexMorphism read_morphism(const std::filesystem::path& path);

// Parses, then checks both complexes and the morphism; itemized failures throw ValidationError.
ComplexMorphism parse_morphism_document(const std::string& text, const std::filesystem::path& base_dir = {});

// Hex SHA-256 of the canonical serialization.
std::string sha256_hex(const std::string& bytes);
std::string digest(const Complex& c);
std::string digest(const ComplexMorphism& f);

}  // namespace ssr
