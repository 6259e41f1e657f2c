#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "kllab/verify.hpp"

namespace kllab::io {

enum class Format { text, csv, json };

/// "text" / "csv" / "json". Throws ParseError otherwise.
Format parse_format(std::string_view text);

/// {"1": 1, "3": 1}: exponent (as string) -> coefficient.
nlohmann::ordered_json poly_to_json(const LaurentPoly& p);
LaurentPoly poly_from_json(const nlohmann::ordered_json& j);

/// One entry of a polynomial table.
struct PolyRow {
  ElementId y;
  ElementId x;
  LaurentPoly value;
};

/// Metadata carried alongside a table: which family and, for parabolic
/// tables, flavor and I.
struct TableInfo {
  std::string table;  // "kl", "invkl", "mu", "parabolic_kl", "parabolic_invkl"
  std::string group;
  std::optional<int> cap;
  std::optional<Flavor> flavor;
  std::optional<GenSet> parabolic;
};

/// CSV columns y,x,len_y,len_x,poly[,flavor,I]; JSON object with "entries"
/// keyed "y|x"; text as "y | x : poly" lines.
std::string render_poly_table(const GroupTable& group, const TableInfo& info, const std::vector<PolyRow>& rows,
                              Format format);

/// Entries of a JSON table produced by render_poly_table, keyed "y|x".
std::vector<std::pair<std::string, LaurentPoly>> parse_json_table(std::string_view text);

std::string render_rouquier(const GroupTable& group, const std::string& group_spec,
                            const std::vector<RouquierTable>& tables, Format format);

nlohmann::ordered_json check_to_json(const CheckResult& check);
CheckResult check_from_json(const nlohmann::ordered_json& j);

/// Whole report; a single check renders as one object in JSON.
std::string render_report(const SuiteReport& report, Format format);
SuiteReport parse_json_report(std::string_view text);

}  // namespace kllab::io
