#pragma once

// State documents and canonical JSON output for the command-line tool.

#include "cvree/gaussian.hpp"
#include "cvree/gree.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace cvree::cli {

using Json = nlohmann::ordered_json;

enum class DocumentKind { cm, em };

struct StateDocument {
  int n = 0;
  DocumentKind kind = DocumentKind::cm;
  Matrix matrix;
  Json metadata = Json::object();
};

/// Parses and validates a document: ordering must be "qqpp", the matrix must be
/// 2n x 2n (nested rows or a flat row-major array) and symmetric within 1e-10.
StateDocument parse_document(const Json& j);
StateDocument load_document(const std::string& path);

Json to_json(const StateDocument& doc);
StateDocument make_document(const CovarianceMatrix& cm, Json metadata = Json::object());
StateDocument make_document(const ExponentialMatrix& em, Json metadata = Json::object());

CovarianceMatrix as_cm(const StateDocument& doc);
ExponentialMatrix as_em(const StateDocument& doc);

/// Two-space indented JSON with every float written at 17 significant digits
/// and non-finite values written as null. Keys keep insertion order.
std::string dump_canonical(const Json& j);

/// Writes to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

std::string format_double(double v);

Json border_params_json(const BorderParams& p);
Json gree_result_json(const GreeResult& r, bool bits);

double nats_to_bits(double v);

}  // namespace cvree::cli
