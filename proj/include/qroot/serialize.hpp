#pragma once

#include "qroot/block_encoding.hpp"

#include <json.hpp>

namespace qroot {

nlohmann::json to_json(const CostLedger& ledger);
CostLedger ledger_from_json(const nlohmann::json& j);

/// Debug dump: entries as [re, im] pairs in row-major order, plus metadata.
nlohmann::json to_json(const BlockEncoding& u);
BlockEncoding encoding_from_json(const nlohmann::json& j);

}  // namespace qroot
