#include "concord/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "concord/errors.hpp"

namespace concord {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct Field {
    std::string_view text;
    std::size_t column;  // 1-based
};

std::vector<Field> split_row(std::string_view line) {
    std::vector<Field> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        std::string_view raw = line.substr(start, comma == std::string_view::npos ? line.npos
                                                                                 : comma - start);
        std::size_t lead = 0;
        while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
        raw.remove_prefix(lead);
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) {
            raw.remove_suffix(1);
        }
        fields.push_back({raw, start + lead + 1});
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_field(const Field& f, std::size_t line, const char* what) {
    T value{};
    const char* first = f.text.data();
    const char* last = first + f.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (f.text.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(std::string("expected ") + what + ", got '" + std::string(f.text) + "'",
                         line, f.column);
    }
    return value;
}

// Cell index 0..3 in the order P/control, P/exposed, Q/control, Q/exposed.
std::size_t cell_index(const Field& stratum, const Field& group, std::size_t line) {
    const std::string s = lower(stratum.text);
    const std::string g = lower(group.text);
    std::size_t idx = 0;
    if (s == "q") {
        idx = 2;
    } else if (s != "p") {
        throw ParseError("stratum must be P or Q, got '" + std::string(stratum.text) + "'", line,
                         stratum.column);
    }
    if (g == "exposed") {
        idx += 1;
    } else if (g != "control") {
        throw ParseError("group must be control or exposed, got '" + std::string(group.text) + "'",
                         line, group.column);
    }
    return idx;
}

constexpr std::array<const char*, 4> kCellLabels = {"P/control", "P/exposed", "Q/control",
                                                    "Q/exposed"};

void check_risk(double r, const std::string& where) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw ValidationError(where + ": risk must lie in [0, 1], got " + std::to_string(r));
    }
}

StratifiedRisks risks_from_cells(const std::array<double, 4>& r) {
    for (std::size_t i = 0; i < 4; ++i) check_risk(r[i], kCellLabels[i]);
    return {RiskPair(r[0], r[1]), RiskPair(r[2], r[3])};
}

StrataInput parse_csv(std::string_view text) {
    std::vector<std::pair<std::string_view, std::size_t>> lines;
    std::size_t pos = 0, number = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == text.npos ? text.npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++number;
        if (line.find_first_not_of(" \t") != std::string_view::npos) lines.emplace_back(line, number);
        if (nl == text.npos) break;
        pos = nl + 1;
    }
    if (lines.empty()) throw ParseError("empty input", 1, 1);

    const auto header = split_row(lines.front().first);
    std::vector<std::string> names;
    for (const auto& f : header) names.push_back(lower(f.text));
    const bool risks = names == std::vector<std::string>{"stratum", "group", "risk"};
    const bool counts = names == std::vector<std::string>{"stratum", "group", "events", "total"};
    if (!risks && !counts) {
        throw ParseError("header must be 'stratum,group,risk' or 'stratum,group,events,total'",
                         lines.front().second, 1);
    }

    std::array<bool, 4> seen{};
    std::array<double, 4> risk{};
    std::array<CellCount, 4> cell{};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [line, ln] = lines[i];
        const auto fields = split_row(line);
        if (fields.size() != header.size()) {
            const std::size_t col = fields.size() > header.size() ? fields[header.size()].column
                                                                  : line.size() + 1;
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             ln, col);
        }
        const std::size_t idx = cell_index(fields[0], fields[1], ln);
        if (seen[idx]) {
            throw ParseError(std::string("duplicate row for ") + kCellLabels[idx], ln,
                             fields[0].column);
        }
        seen[idx] = true;
        if (risks) {
            risk[idx] = parse_field<double>(fields[2], ln, "a risk");
        } else {
            cell[idx].events = parse_field<std::uint64_t>(fields[2], ln, "a non-negative integer");
            cell[idx].total = parse_field<std::uint64_t>(fields[3], ln, "a non-negative integer");
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (!seen[i]) throw ValidationError(std::string("missing row for ") + kCellLabels[i]);
    }
    if (risks) return risks_from_cells(risk);
    CountTable t{cell[0], cell[1], cell[2], cell[3]};
    t.validate();
    return t;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    // nlohmann reports the 1-based byte index of the offending character.
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        throw ParseError("malformed JSON", line, column);
    }
}

const Json& member(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError("missing key " + path + key);
    return j.at(key);
}

double json_risk(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path + " must be a number");
    const double r = j.get<double>();
    check_risk(r, path);
    return r;
}

std::uint64_t json_count(const Json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw ValidationError(path + " must be a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

StrataInput parse_json_strata(std::string_view text) {
    const Json root = parse_json_text(text);
    if (!root.is_object()) throw ValidationError("top level must be an object");
    const bool risks = root.contains("strata");
    if (!risks && !root.contains("counts")) {
        throw ValidationError("expected a 'strata' or 'counts' object");
    }
    const std::string top = risks ? "strata" : "counts";
    const Json& body = root.at(top);
    std::array<double, 4> risk{};
    std::array<CellCount, 4> cell{};
    std::size_t idx = 0;
    for (const char* s : {"P", "Q"}) {
        const std::string spath = top + "." + s + ".";
        const Json& stratum = member(body, s, top + ".");
        for (const char* g : {"control", "exposed"}) {
            const Json& v = member(stratum, g, spath);
            const std::string path = spath + g;
            if (risks) {
                risk[idx] = json_risk(v, path);
            } else {
                cell[idx].events = json_count(member(v, "events", path + "."), path + ".events");
                cell[idx].total = json_count(member(v, "total", path + "."), path + ".total");
            }
            ++idx;
        }
    }
    if (risks) return risks_from_cells(risk);
    CountTable t{cell[0], cell[1], cell[2], cell[3]};
    t.validate();
    return t;
}

Json directions_json(const std::array<Direction, kKindCount>& d) {
    Json out = Json::object();
    for (MeasureKind k : kAllKinds) out[std::string(name(k))] = std::string(name(d[index_of(k)]));
    return out;
}

Json oriented(const Oriented<double>& o) {
    return {{"value", number(o.value)},
            {"orientation", o.orientation == Orientation::Direct ? "direct" : "inverse"}};
}

Json interval_json(const ConfidenceInterval& ci) {
    return {{"lower", number(ci.lower)}, {"upper", number(ci.upper)}};
}

}  // namespace

std::optional<InputFormat> parse_format(std::string_view text) {
    const std::string t = lower(text);
    if (t == "csv") return InputFormat::Csv;
    if (t == "json") return InputFormat::Json;
    return std::nullopt;
}

std::optional<InputFormat> format_from_extension(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext.empty()) return std::nullopt;
    return parse_format(ext.substr(1));
}

StrataInput parse_strata(std::string_view text, InputFormat format) {
    return format == InputFormat::Csv ? parse_csv(text) : parse_json_strata(text);
}

StrataInput load_strata(const std::filesystem::path& path, InputFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_strata(buf.str(), format);
}

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double number_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ValidationError("expected a number, got " + j.dump());
}

Json to_json(const RiskPair& p) {
    return {{"control", number(p.control())}, {"exposed", number(p.exposed())}};
}

Json to_json(const StratifiedRisks& s) {
    return {{"P", to_json(s.stratum_p)}, {"Q", to_json(s.stratum_q)}};
}

Json to_json(const CountTable& t) {
    auto cell = [](const CellCount& c) { return Json{{"events", c.events}, {"total", c.total}}; };
    return {{"P", {{"control", cell(t.p_control)}, {"exposed", cell(t.p_exposed)}}},
            {"Q", {{"control", cell(t.q_control)}, {"exposed", cell(t.q_exposed)}}}};
}

Json to_json(const MeasureVector& v) {
    Json out = Json::object();
    for (MeasureKind k : kAllKinds) out[std::string(name(k))] = number(v[k]);
    return out;
}

Json to_json(const DerivedMeasures& d) {
    return {{"cp_generative", oriented(d.cp_generative)},
            {"cp_preventative", oriented(d.cp_preventative)},
            {"prob_necessity", oriented(d.prob_necessity)},
            {"prob_sufficiency", oriented(d.prob_sufficiency)},
            {"pns", oriented(d.pns)},
            {"nnt", oriented(d.nnt)},
            {"vaccine_efficacy", oriented(d.vaccine_efficacy)},
            {"grrr", oriented(d.grrr)}};
}

Json to_json(const AgreementReport& r) {
    Json pairwise = Json::object();
    for (MeasureKind a : kAllKinds) {
        Json row = Json::object();
        for (MeasureKind b : kAllKinds) {
            row[std::string(name(b))] = r.pairwise[index_of(a)][index_of(b)];
        }
        pairwise[std::string(name(a))] = row;
    }
    Json disagreeing = Json::array();
    for (std::size_t bits = 0; bits < kSubsetCount; ++bits) {
        if (!r.subsets[bits]) disagreeing.push_back(MeasureSet(static_cast<std::uint8_t>(bits)).label());
    }
    Json conditions = Json::array();
    for (const auto& c : r.sufficient_conditions) {
        conditions.push_back({{"condition", std::string(name(c.id))},
                              {"forced", c.forced.label()},
                              {"strata_relabelled", c.strata_relabelled},
                              {"groups_relabelled", c.groups_relabelled}});
    }
    return {{"directions", directions_json(r.directions)},
            {"queried", r.queried.label()},
            {"agree", r.verdict},
            {"rr_gate", r.rr_gate_fired},
            {"pairwise", pairwise},
            {"disagreeing_subsets", disagreeing},
            {"sufficient_conditions", conditions},
            {"tolerance", r.tolerance.relative}};
}

Json to_json(const Interval& i) {
    return {{"lower", number(i.lower)},
            {"upper", number(i.upper)},
            {"empty", i.empty()},
            {"width", number(i.width())}};
}

Json to_json(const SimulationResult& r) {
    Json venn = Json::array();
    for (const VennRow& row : venn_table(r)) {
        venn.push_back({{"bitmask", row.subset.bits()},
                        {"members", row.subset.label()},
                        {"count", row.count},
                        {"frequency", number(row.frequency)}});
    }
    return {{"distribution", std::string(name(r.config.distribution))},
            {"trials", r.trials},
            {"workers", r.config.workers},
            {"bounds", {number(r.config.lower), number(r.config.upper)}},
            {"all_agree", number(r.frequency(MeasureSet::all()))},
            {"venn", venn}};
}

Json to_json(Region region, const QuadratureResult& r) {
    return {{"region", std::string(name(region))},
            {"estimate", number(r.estimate)},
            {"error", number(r.error)},
            {"resolution", r.cells}};
}

Json to_json(const TestVerdict& v) {
    const auto& e = v.estimate;
    return {{"reject", v.reject},
            {"direction", std::string(name(v.direction))},
            {"alpha", number(v.alpha)},
            {"z", number(v.z)},
            {"log_rrr", {number(e.log_rrr1), number(e.log_rrr2)}},
            {"covariance",
             {{number(e.covariance[0][0]), number(e.covariance[0][1])},
              {number(e.covariance[1][0]), number(e.covariance[1][1])}}},
            {"region", {interval_json(v.region[0]), interval_json(v.region[1])}}};
}

Json to_json(const ReportEnvelope& e) {
    Json out = {{"command", e.command},
                {"version", e.version},
                {"inputs", e.inputs},
                {"results", e.results}};
    out["seed"] = e.seed ? Json(*e.seed) : Json(nullptr);
    return out;
}

ReportEnvelope envelope_from_json(const Json& j) {
    ReportEnvelope e;
    try {
        e.command = j.at("command").get<std::vector<std::string>>();
        e.version = j.at("version").get<std::string>();
        e.inputs = j.at("inputs");
        e.results = j.at("results");
        const Json& seed = j.at("seed");
        if (!seed.is_null()) e.seed = seed.get<std::uint64_t>();
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("report envelope: ") + ex.what());
    }
    return e;
}

std::string serialize(const ReportEnvelope& e) { return to_json(e).dump(2) + "\n"; }

ReportEnvelope parse_envelope(std::string_view text) {
    return envelope_from_json(parse_json_text(text));
}

std::string venn_csv(const SimulationResult& r) {
    std::ostringstream out;
    out.precision(17);
    out << "bitmask,members,count,frequency\n";
    for (const VennRow& row : venn_table(r)) {
        out << static_cast<unsigned>(row.subset.bits()) << ',' << row.subset.label() << ','
            << row.count << ',' << row.frequency << '\n';
    }
    return out.str();
}

}  // namespace concord
