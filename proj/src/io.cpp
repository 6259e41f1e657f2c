#include "kllab/io.hpp"

#include <sstream>

#include "kllab/error.hpp"

namespace kllab::io {

using json = nlohmann::ordered_json;

Format parse_format(std::string_view text) {
  if (text == "text") return Format::text;
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw ParseError("unknown output format: " + std::string(text));
}

json poly_to_json(const LaurentPoly& p) {
  json j = json::object();
  for (const auto& t : p.terms()) j[std::to_string(t.exponent)] = t.coeff;
  return j;
}

LaurentPoly poly_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("polynomial JSON must be an object");
  std::vector<LaurentPoly::Term> terms;
  for (const auto& [key, value] : j.items()) {
    try {
      std::size_t used = 0;
      const int exponent = std::stoi(key, &used);
      if (used != key.size()) throw ParseError("bad exponent key: " + key);
      terms.push_back({exponent, value.get<LaurentPoly::Coeff>()});
    } catch (const std::logic_error&) {
      throw ParseError("bad polynomial JSON entry: " + key);
    } catch (const nlohmann::json::exception&) {
      throw ParseError("bad polynomial JSON entry: " + key);
    }
  }
  return LaurentPoly::from_terms(std::move(terms));
}

namespace {

json cap_json(const std::optional<int>& cap) { return cap ? json(*cap) : json(nullptr); }

std::string cap_text(const std::optional<int>& cap) { return cap ? std::to_string(*cap) : "full"; }

json set_json(const std::optional<GenSet>& I) { return I ? json(generator_list(*I)) : json(nullptr); }

}  // namespace

std::string render_poly_table(const GroupTable& group, const TableInfo& info, const std::vector<PolyRow>& rows,
                              Format format) {
  const bool parabolic = info.flavor.has_value();
  std::ostringstream os;
  switch (format) {
    case Format::csv: {
      os << "y,x,len_y,len_x,poly";
      if (parabolic) os << ",flavor,I";
      os << '\n';
      for (const auto& r : rows) {
        // Element words contain commas, so they are quoted.
        os << '"' << group.render(r.y) << "\",\"" << group.render(r.x) << "\"," << group.length(r.y) << ','
           << group.length(r.x) << ',' << r.value.to_csv_string();
        if (parabolic) os << ',' << to_string(*info.flavor) << ",\"" << render_generator_set(*info.parabolic) << '"';
        os << '\n';
      }
      break;
    }
    case Format::json: {
      json j;
      j["table"] = info.table;
      j["group"] = info.group;
      j["cap"] = cap_json(info.cap);
      if (parabolic) {
        j["flavor"] = std::string(to_string(*info.flavor));
        j["I"] = set_json(info.parabolic);
      }
      json entries = json::object();
      for (const auto& r : rows) entries[group.render(r.y) + "|" + group.render(r.x)] = poly_to_json(r.value);
      j["entries"] = std::move(entries);
      os << j.dump(2) << '\n';
      break;
    }
    case Format::text: {
      os << info.table << " table for " << info.group;
      if (parabolic) os << ", " << to_string(*info.flavor) << " I={" << render_generator_set(*info.parabolic) << '}';
      os << " (" << rows.size() << " entries)\n";
      for (const auto& r : rows) os << group.render(r.y) << " | " << group.render(r.x) << " : " << r.value << '\n';
      break;
    }
  }
  return os.str();
}

std::vector<std::pair<std::string, LaurentPoly>> parse_json_table(std::string_view text) {
  const json j = json::parse(text);
  std::vector<std::pair<std::string, LaurentPoly>> out;
  for (const auto& [key, value] : j.at("entries").items()) out.emplace_back(key, poly_from_json(value));
  return out;
}

std::string render_rouquier(const GroupTable& group, const std::string& group_spec,
                            const std::vector<RouquierTable>& tables, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::csv:
      os << "x,y,len_y,degree,multiplicity\n";
      for (const auto& rt : tables) {
        for (const auto& [key, m] : rt.mult) {
          os << '"' << group.render(rt.x) << "\",\"" << group.render(key.first) << "\"," << group.length(key.first)
             << ',' << key.second << ',' << m << '\n';
        }
      }
      break;
    case Format::json: {
      json j;
      j["group"] = group_spec;
      json list = json::array();
      for (const auto& rt : tables) {
        json entry;
        entry["x"] = group.render(rt.x);
        json mult = json::array();
        for (const auto& [key, m] : rt.mult) {
          mult.push_back({{"y", group.render(key.first)}, {"degree", key.second}, {"multiplicity", m}});
        }
        entry["multiplicities"] = std::move(mult);
        list.push_back(std::move(entry));
      }
      j["tables"] = std::move(list);
      os << j.dump(2) << '\n';
      break;
    }
    case Format::text:
      for (const auto& rt : tables) {
        os << "Delta_" << group.render(rt.x) << ":\n";
        for (const auto& [key, m] : rt.mult) {
          os << "  m^" << key.second << "_{" << group.render(key.first) << "} = " << m << '\n';
        }
      }
      break;
  }
  return os.str();
}

json check_to_json(const CheckResult& c) {
  json j;
  j["check"] = c.check;
  j["group"] = c.group;
  j["I"] = set_json(c.parabolic);
  j["cap"] = cap_json(c.cap);
  j["flavor"] = c.flavor ? json(std::string(to_string(*c.flavor))) : json(nullptr);
  j["expect_violations"] = c.expect_violations;
  j["pairs_checked"] = c.pairs_checked;
  auto findings = [](const std::vector<Finding>& list) {
    json arr = json::array();
    for (const auto& f : list) {
      json o = json::object();
      for (const auto& [k, v] : f.fields) o[k] = v;
      arr.push_back(std::move(o));
    }
    return arr;
  };
  j["violations"] = findings(c.violations);
  j["missing"] = findings(c.missing);
  j["error"] = c.error ? json(*c.error) : json(nullptr);
  j["passed"] = c.passed;
  return j;
}

CheckResult check_from_json(const json& j) {
  CheckResult c;
  c.check = j.at("check").get<std::string>();
  c.group = j.at("group").get<std::string>();
  if (!j.at("I").is_null()) {
    GenSet I = 0;
    for (int s : j.at("I")) I |= GenSet{1} << (s - 1);
    c.parabolic = I;
  }
  if (!j.at("cap").is_null()) c.cap = j.at("cap").get<int>();
  if (!j.at("flavor").is_null()) c.flavor = parse_flavor(j.at("flavor").get<std::string>());
  c.expect_violations = j.at("expect_violations").get<bool>();
  c.pairs_checked = j.at("pairs_checked").get<std::uint64_t>();
  // Field order inside a finding follows the key order of the JSON object.
  auto findings = [](const json& arr) {
    std::vector<Finding> out;
    for (const auto& o : arr) {
      Finding f;
      for (const auto& [k, v] : o.items()) f.fields.emplace_back(k, v.get<std::string>());
      out.push_back(std::move(f));
    }
    return out;
  };
  c.violations = findings(j.at("violations"));
  c.missing = findings(j.at("missing"));
  if (!j.at("error").is_null()) c.error = j.at("error").get<std::string>();
  c.passed = j.at("passed").get<bool>();
  return c;
}

std::string render_report(const SuiteReport& report, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::json: {
      if (report.checks.size() == 1) {
        os << check_to_json(report.checks.front()).dump(2) << '\n';
        break;
      }
      json j;
      j["passed"] = report.passed();
      json checks = json::array();
      for (const auto& c : report.checks) checks.push_back(check_to_json(c));
      j["checks"] = std::move(checks);
      os << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      os << "check,group,I,cap,flavor,pairs_checked,violations,missing,status\n";
      for (const auto& c : report.checks) {
        os << c.check << ',' << c.group << ",\"" << (c.parabolic ? render_generator_set(*c.parabolic) : "") << "\","
           << cap_text(c.cap) << ',' << (c.flavor ? std::string(to_string(*c.flavor)) : "") << ','
           << c.pairs_checked << ',' << c.violations.size() << ',' << c.missing.size() << ','
           << (c.error ? "ERROR" : (c.passed ? "PASS" : "FAIL")) << '\n';
      }
      break;
    case Format::text:
      for (const auto& c : report.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.check << " group=" << c.group;
        if (c.parabolic) os << " I={" << render_generator_set(*c.parabolic) << '}';
        if (c.flavor) os << " flavor=" << to_string(*c.flavor);
        os << " cap=" << cap_text(c.cap) << " checked=" << c.pairs_checked << " violations=" << c.violations.size();
        if (c.expect_violations) os << " (EXPECTED)";
        os << '\n';
        if (c.error) os << "  error: " << *c.error << '\n';
        for (const auto& f : c.violations) {
          os << (c.expect_violations ? "  expected:" : "  violation:");
          for (const auto& [k, v] : f.fields) os << ' ' << k << '=' << v;
          os << '\n';
        }
        for (const auto& f : c.missing) {
          os << "  missing:";
          for (const auto& [k, v] : f.fields) os << ' ' << k << '=' << v;
          os << '\n';
        }
      }
      os << (report.passed() ? "ALL PASSED" : "FAILED") << '\n';
      break;
  }
  return os.str();
}

SuiteReport parse_json_report(std::string_view text) {
  const json j = json::parse(text);
  SuiteReport report;
  if (j.contains("checks")) {
    for (const auto& c : j.at("checks")) report.checks.push_back(check_from_json(c));
  } else {
    report.checks.push_back(check_from_json(j));
  }
  return report;
}

}  // namespace kllab::io
