#include "concord/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "concord/case_studies.hpp"
#include "concord/errors.hpp"
#include "concord/io.hpp"

namespace concord {
namespace {

struct Options {
    std::optional<double> p1, p2, p3, p4;
    std::string in;
    std::string format;
    std::string out;
    int digits = 4;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1'000'000;
    std::string dist = "uniform";
    std::string bounds;
    double alpha = 0.05;
    unsigned workers = 1;
    std::size_t resolution = 256;
    bool table = false;
    std::string kinds;
    bool correction = false;
    bool parts = false;
    std::string case_name;
};

// Rows of "key  value" text for --table output.
class Table {
public:
    explicit Table(int digits) : digits_(digits) {}

    void row(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
    void row(const std::string& key, double value) { row(key, fmt(value)); }

    std::string fmt(double x) const {
        if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
        std::ostringstream s;
        s << std::fixed << std::setprecision(digits_) << x;
        return s.str();
    }

    std::string str() const {
        std::size_t width = 0;
        for (const auto& [k, v] : rows_) width = std::max(width, k.size());
        std::ostringstream s;
        for (const auto& [k, v] : rows_) s << std::left << std::setw(int(width) + 2) << k << v << '\n';
        return s.str();
    }

private:
    int digits_;
    std::vector<std::pair<std::string, std::string>> rows_;
};

struct Output {
    ReportEnvelope envelope;
    std::string table;
};

StrataInput strata_input(const Options& o, bool need_q) {
    if (!o.in.empty()) {
        std::optional<InputFormat> fmt =
            o.format.empty() ? format_from_extension(o.in) : parse_format(o.format);
        if (!fmt) throw ConfigError("cannot tell the input format; pass --format csv|json");
        return load_strata(o.in, *fmt);
    }
    if (!o.p1 || !o.p2) throw ConfigError("give --p1 and --p2, or --in");
    if (need_q && (!o.p3 || !o.p4)) throw ConfigError("give --p1 through --p4, or --in");
    const RiskPair p(*o.p1, *o.p2);
    const RiskPair q = o.p3 && o.p4 ? RiskPair(*o.p3, *o.p4) : p;
    return StratifiedRisks{p, q};
}

CellCorrection correction(const Options& o) {
    return o.correction ? CellCorrection::HalfEvent : CellCorrection::None;
}

StratifiedRisks risks_of(const StrataInput& in, const Options& o) {
    if (const auto* s = std::get_if<StratifiedRisks>(&in)) return *s;
    return from_counts(std::get<CountTable>(in), correction(o));
}

Json input_json(const StrataInput& in) {
    if (const auto* s = std::get_if<StratifiedRisks>(&in)) return {{"strata", to_json(*s)}};
    return {{"counts", to_json(std::get<CountTable>(in))}};
}

MeasureSet parse_kinds(const std::string& text, MeasureSet fallback) {
    if (text.empty()) return fallback;
    MeasureSet set;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        const auto k = parse_kind(item);
        if (!k) throw ConfigError("unknown measure '" + item + "'");
        set = set.with(*k);
    }
    return set;
}

std::pair<double, double> parse_bounds(const std::string& text) {
    if (text.empty()) return {0.0, 1.0};
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument("");
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::logic_error&) {
        throw ConfigError("--bounds expects L,U");
    }
}

void add_measures(Json& results, Table& t, const std::string& label, const RiskPair& pair) {
    const MeasureVector v = measure_vector(pair);
    Json entry = {{"risks", to_json(pair)}, {"measures", to_json(v)}};
    if (pair.is_strict()) entry["derived"] = to_json(derived_measures(pair));
    results[label] = entry;
    for (MeasureKind k : kAllKinds) t.row(label + " " + std::string(name(k)), v[k]);
}

Output cmd_measures(const Options& o) {
    Output r;
    Table t(o.digits);
    const bool both = !o.in.empty() || (o.p3 && o.p4);
    const StrataInput in = strata_input(o, false);
    const StratifiedRisks s = risks_of(in, o);
    r.envelope.inputs = both ? input_json(in) : Json{{"pair", to_json(s.stratum_p)}};
    add_measures(r.envelope.results, t, "P", s.stratum_p);
    if (both) add_measures(r.envelope.results, t, "Q", s.stratum_q);
    r.table = t.str();
    return r;
}

Output cmd_agree(const Options& o) {
    Output r;
    Table t(o.digits);
    const StrataInput in = strata_input(o, true);
    const StratifiedRisks s = risks_of(in, o);
    const AgreementReport rep = agree(s, parse_kinds(o.kinds, MeasureSet::all()));
    r.envelope.inputs = input_json(in);
    r.envelope.results = to_json(rep);
    for (MeasureKind k : kAllKinds) t.row(std::string(name(k)), std::string(name(rep.direction(k))));
    t.row(rep.queried.label(), rep.verdict ? "agree" : "disagree");
    t.row("rr_gate", rep.rr_gate_fired ? "fired" : "not fired");
    for (const auto& c : rep.sufficient_conditions) {
        t.row("condition", std::string(name(c.id)) + " => " + c.forced.label());
    }
    r.table = t.str();
    return r;
}

std::array<double, 3> three_risks(const Options& o) {
    if (!o.p1 || !o.p2 || !o.p3) throw ConfigError("give --p1, --p2 and --p3");
    return {*o.p1, *o.p2, *o.p3};
}

Output cmd_critical(const Options& o) {
    Output r;
    Table t(o.digits);
    const auto [p1, p2, p3] = three_risks(o);
    r.envelope.inputs = {{"p1", p1}, {"p2", p2}, {"p3", p3}};
    Json crit = Json::object();
    for (MeasureKind k : parse_kinds(o.kinds, MeasureSet::all()).kinds()) {
        const double c = critical_p4(p1, p2, p3, k);
        crit[std::string(name(k))] = {{"p4", number(c)}, {"in_range", c > 0.0 && c < 1.0}};
        t.row(std::string(name(k)), c);
    }
    r.envelope.results = {{"critical_p4", crit}};
    r.table = t.str();
    return r;
}

Output cmd_window(const Options& o) {
    Output r;
    Table t(o.digits);
    const auto [p1, p2, p3] = three_risks(o);
    const auto kinds = parse_kinds(o.kinds, {MeasureKind::RR, MeasureKind::RRStar}).kinds();
    if (kinds.size() != 2) throw ConfigError("--kinds must name exactly two measures");
    const Interval w = disagreement_window(p1, p2, p3, kinds[0], kinds[1]);
    r.envelope.inputs = {{"p1", p1}, {"p2", p2}, {"p3", p3},
                         {"kinds", {std::string(name(kinds[0])), std::string(name(kinds[1]))}}};
    r.envelope.results = {{"window", to_json(w)}};
    t.row("lower", w.lower);
    t.row("upper", w.upper);
    t.row("width", w.width());
    r.table = t.str();
    return r;
}

Output cmd_simulate(const Options& o) {
    Output r;
    SimulationConfig c;
    c.trials = o.trials;
    c.seed = o.seed;
    c.workers = o.workers;
    if (o.dist == "uniform") {
        c.distribution = RiskDistribution::UniformUnit;
    } else if (o.dist == "rare") {
        c.distribution = RiskDistribution::UniformRare;
    } else if (o.dist == "tent") {
        c.distribution = RiskDistribution::TentDependent;
    } else {
        throw ConfigError("--dist must be uniform, rare or tent");
    }
    std::tie(c.lower, c.upper) = parse_bounds(o.bounds);
    const SimulationResult res = run(c);
    r.envelope.seed = o.seed;
    r.envelope.inputs = {{"distribution", o.dist},
                         {"trials", c.trials},
                         {"workers", c.workers},
                         {"bounds", {c.lower, c.upper}}};
    r.envelope.results = to_json(res);
    r.table = venn_csv(res);
    return r;
}

Output cmd_exact(const Options& o) {
    Output r;
    Table t(o.digits);
    QuadratureSpec spec;
    spec.cells = o.resolution;
    spec.workers = o.workers;
    Json regions = Json::array();
    double total = 0.0, total_err = 0.0;
    for (Region reg : kAllRegions) {
        const QuadratureResult q = region_probability(reg, spec);
        regions.push_back(to_json(reg, q));
        total += q.estimate;
        total_err += q.error;
        t.row("region " + std::string(name(reg)), q.estimate);
    }
    t.row("total", total);
    r.envelope.inputs = {{"resolution", spec.cells}, {"workers", spec.workers}};
    r.envelope.results = {{"regions", regions},
                          {"total", {{"estimate", total}, {"error", total_err}}}};
    if (o.parts) {
        const RegionAParts a = region_a_parts(spec);
        r.envelope.results["region_a_parts"] = {{"first", to_json(Region::A, a.first)},
                                                {"second", to_json(Region::A, a.second)},
                                                {"third", to_json(Region::A, a.third)}};
        t.row("A first", a.first.estimate);
        t.row("A second", a.second.estimate);
        t.row("A third", a.third.estimate);
    }
    r.table = t.str();
    return r;
}

Output cmd_test(const Options& o) {
    Output r;
    Table t(o.digits);
    if (o.in.empty()) throw ConfigError("test-modification needs --in with a count table");
    const StrataInput in = strata_input(o, true);
    const auto* counts = std::get_if<CountTable>(&in);
    if (!counts) throw ConfigError("test-modification needs event counts, not risks");
    const TestVerdict v = modification_test(*counts, o.alpha, correction(o));
    r.envelope.inputs = input_json(in);
    r.envelope.inputs["alpha"] = o.alpha;
    r.envelope.inputs["correction"] = o.correction;
    r.envelope.results = to_json(v);
    t.row("log RRR (RR)", v.estimate.log_rrr1);
    t.row("log RRR (RR*)", v.estimate.log_rrr2);
    t.row("interval (RR)", "[" + t.fmt(v.region[0].lower) + ", " + t.fmt(v.region[0].upper) + "]");
    t.row("interval (RR*)", "[" + t.fmt(v.region[1].lower) + ", " + t.fmt(v.region[1].upper) + "]");
    t.row("reject", v.reject ? "yes" : "no");
    t.row("direction", std::string(name(v.direction)));
    r.table = t.str();
    return r;
}

Output cmd_case(const Options& o) {
    Output r;
    Table t(o.digits);
    const CaseStudy c = case_study(o.case_name);
    Json expected = Json::array();
    for (const auto& e : c.expected) {
        const std::string label = std::string(e.stratum == StratumId::P ? c.label_p : c.label_q) +
                                  (e.opposite_outcome ? " (opposite) " : " ") +
                                  std::string(name(e.quantity));
        const double v = c.recompute(e);
        expected.push_back({{"stratum", e.stratum == StratumId::P ? "P" : "Q"},
                            {"opposite_outcome", e.opposite_outcome},
                            {"quantity", std::string(name(e.quantity))},
                            {"printed", e.printed},
                            {"decimals", e.decimals},
                            {"rule", e.rule == PrintRule::Rounded ? "rounded" : "truncated"},
                            {"computed", number(v)},
                            {"matches", c.matches(e)}});
        std::ostringstream printed;
        printed << std::fixed << std::setprecision(e.decimals) << e.printed;
        t.row(label, t.fmt(v) + "  printed " + printed.str() +
                         (e.rule == PrintRule::Truncated ? " (truncated)" : "") +
                         (c.matches(e) ? "  ok" : "  MISMATCH"));
    }
    r.envelope.inputs = {{"case", c.name}};
    Json res = {{"description", c.description},
                {"labels", {c.label_p, c.label_q}},
                {"expected", expected}};
    Json measures = Json::object();
    add_measures(measures, t, "P", c.stratum_p);
    if (c.stratum_q) add_measures(measures, t, "Q", *c.stratum_q);
    res["strata"] = measures;
    if (const auto s = c.stratified()) res["agreement"] = to_json(agree(*s));
    r.envelope.results = res;
    r.table = t.str();
    return r;
}

void add_risk_options(CLI::App* sub, Options& o, bool with_q) {
    sub->add_option("--p1", o.p1, "control risk, stratum P");
    sub->add_option("--p2", o.p2, "exposed risk, stratum P");
    sub->add_option("--p3", o.p3, "control risk, stratum Q");
    if (with_q) sub->add_option("--p4", o.p4, "exposed risk, stratum Q");
}

void add_input_options(CLI::App* sub, Options& o) {
    sub->add_option("--in", o.in, "strata file (CSV or JSON)");
    sub->add_option("--format", o.format, "csv or json (default: from extension)");
    sub->add_flag("--correction", o.correction, "add 0.5 to events and 1 to totals");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Agreement between effect measures across two strata", "concord"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", o.out, "write the report here instead of stdout");
    app.add_option("--digits", o.digits, "decimals in --table output")->check(CLI::Range(0, 17));
    app.add_flag("--table", o.table, "plain-text table instead of JSON");

    auto* measures = app.add_subcommand("measures", "six effect measures per stratum");
    add_risk_options(measures, o, true);
    add_input_options(measures, o);

    auto* agree_cmd = app.add_subcommand("agree", "direction of modification and agreement");
    add_risk_options(agree_cmd, o, true);
    add_input_options(agree_cmd, o);
    agree_cmd->add_option("--kinds", o.kinds, "comma-separated subset to judge (default: all)");

    auto* critical = app.add_subcommand("critical", "critical value of p4 for each measure");
    add_risk_options(critical, o, false);
    critical->add_option("--kinds", o.kinds, "comma-separated measures (default: all)");

    auto* window = app.add_subcommand("window", "values of p4 where two measures disagree");
    add_risk_options(window, o, false);
    window->add_option("--kinds", o.kinds, "two measures (default: RR,RR*)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo agreement frequencies");
    simulate->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
    simulate->add_option("--seed", o.seed)->envname("CONCORD_SEED");
    simulate->add_option("--dist", o.dist)->check(CLI::IsMember({"uniform", "rare", "tent"}));
    simulate->add_option("--bounds", o.bounds, "tent support L,U");
    simulate->add_option("--workers", o.workers)->check(CLI::PositiveNumber);

    auto* exact = app.add_subcommand("exact", "RR/RR* disagreement probability by quadrature");
    exact->add_option("--resolution", o.resolution, "cells per axis");
    exact->add_option("--workers", o.workers, "threads (0 = all cores)");
    exact->add_flag("--parts", o.parts, "also integrate the three region-A parts");

    auto* test = app.add_subcommand("test-modification", "delta-method test on a count table");
    add_input_options(test, o);
    test->add_option("--alpha", o.alpha)->check(CLI::Range(0.0, 1.0));

    auto* case_cmd = app.add_subcommand("case", "published case study with recomputed values");
    case_cmd->add_option("name", o.case_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    std::vector<std::string> command;
    for (int i = 1; i < argc; ++i) command.emplace_back(argv[i]);

    try {
        Output result;
        const CLI::App* sub = app.get_subcommands().front();
        const std::string& which = sub->get_name();
        if (which == "measures") result = cmd_measures(o);
        else if (which == "agree") result = cmd_agree(o);
        else if (which == "critical") result = cmd_critical(o);
        else if (which == "window") result = cmd_window(o);
        else if (which == "simulate") result = cmd_simulate(o);
        else if (which == "exact") result = cmd_exact(o);
        else if (which == "test-modification") result = cmd_test(o);
        else result = cmd_case(o);
        result.envelope.command = command;

        const std::string text = o.table ? result.table : serialize(result.envelope);
        if (o.out.empty()) {
            out << text;
        } else {
            std::ofstream file(o.out, std::ios::binary);
            if (!file) throw ConfigError("cannot write " + o.out);
            file << text;
        }
        return 0;
    } catch (const UndefinedMeasure& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DegenerateCell& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace concord
