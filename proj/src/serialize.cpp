#include "qroot/serialize.hpp"

namespace qroot {

nlohmann::json to_json(const CostLedger& c) {
    return {{"base_unitary_uses", c.base_unitary_uses},
            {"state_prep_queries", c.state_prep_queries},
            {"modeled_depth", c.modeled_depth},
            {"qsvt_degree_total", c.qsvt_degree_total}};
}

CostLedger ledger_from_json(const nlohmann::json& j) {
    CostLedger c;
    c.base_unitary_uses = j.at("base_unitary_uses").get<double>();
    c.state_prep_queries = j.at("state_prep_queries").get<double>();
    c.modeled_depth = j.at("modeled_depth").get<double>();
    c.qsvt_degree_total = j.at("qsvt_degree_total").get<double>();
    return c;
}

nlohmann::json to_json(const BlockEncoding& u) {
    nlohmann::json entries = nlohmann::json::array();
    for (Index i = 0; i < u.rows(); ++i)
        for (Index k = 0; k < u.cols(); ++k) entries.push_back({u.op(i, k).real(), u.op(i, k).imag()});
    return {{"rows", u.rows()},       {"cols", u.cols()},         {"entries", entries},
            {"alpha", u.alpha},       {"ancillas", u.ancillas},   {"eps", u.eps},
            {"diagonal", u.diagonal}, {"cost", to_json(u.cost)}};
}

BlockEncoding encoding_from_json(const nlohmann::json& j) {
    BlockEncoding u;
    const auto rows = j.at("rows").get<Index>(), cols = j.at("cols").get<Index>();
    const auto& entries = j.at("entries");
    if (static_cast<Index>(entries.size()) != rows * cols)
        throw PreconditionError("encoding_from_json: entry count does not match shape");
    u.op.resize(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index k = 0; k < cols; ++k) {
            const auto& e = entries[static_cast<std::size_t>(i * cols + k)];
            u.op(i, k) = {e.at(0).get<double>(), e.at(1).get<double>()};
        }
    u.alpha = j.at("alpha").get<double>();
    u.ancillas = j.at("ancillas").get<int>();
    u.eps = j.at("eps").get<double>();
    u.diagonal = j.at("diagonal").get<bool>();
    u.cost = ledger_from_json(j.at("cost"));
    return u;
}

}  // namespace qroot
