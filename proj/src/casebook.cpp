#include "fracdec/casebook.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "fracdec/errors.hpp"

namespace fracdec::casebook {

namespace {

constexpr std::array<std::pair<CaseName, std::string_view>, 7> case_names{{
    {CaseName::nawrocki_harding, "nawrocki-harding"},
    {CaseName::levy, "levy"},
    {CaseName::allais, "allais"},
    {CaseName::portfolio_di, "Di"},
    {CaseName::portfolio_lc, "Lc"},
    {CaseName::portfolio_mc, "Mc"},
    {CaseName::portfolio_hy, "Hy"},
}};

ActionSpec act(std::string label, std::vector<double> x, std::vector<double> p) {
    return ActionSpec(std::move(label), std::move(x), ProbVector(std::move(p)));
}

DecisionProblem linear_problem(std::vector<ActionSpec> actions) {
    return DecisionProblem(std::move(actions), UtilityFunction::linear());
}

// Di holds 32 equally sized-ish positions; the 15th (UltraTech) is listed as
// 0.2 in the source table, which cannot sum to one. 0.025 is the only value
// that both restores the sum and reproduces the published entropies.
std::vector<double> di_weights() {
    return {0.03, 0.025, 0.03, 0.03, 0.05, 0.04,  0.04,  0.04,  0.04,  0.03, 0.03,
            0.03, 0.03,  0.04, 0.025, 0.03, 0.025, 0.025, 0.025, 0.03,  0.03, 0.03,
            0.04, 0.02,  0.03, 0.02, 0.03, 0.03,  0.04,  0.025, 0.03,  0.03};
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string fmt_num(double v, int decimals = 4) { return fmt::format("{:.{}f}", v, decimals); }

std::string action_label(const DecisionProblem& p, std::size_t i) { return p.action(i).label; }

}  // namespace

std::string_view to_string(CaseName name) {
    for (const auto& [n, s] : case_names)
        if (n == name) return s;
    return "?";
}

CaseName parse_case_name(std::string_view text) {
    const std::string t = lower(text);
    for (const auto& [n, s] : case_names)
        if (lower(s) == t) return n;
    if (t == "nh" || t == "nawrocki_harding") return CaseName::nawrocki_harding;
    throw LookupError(fmt::format(
        "unknown case '{}' (expected nawrocki-harding, levy, allais, Di, Lc, Mc or Hy)", text));
}

bool is_decision_case(CaseName name) {
    return name == CaseName::nawrocki_harding || name == CaseName::levy ||
           name == CaseName::allais;
}

const DecisionProblem& CaseStudy::problem() const {
    if (const auto* p = std::get_if<DecisionProblem>(&payload)) return *p;
    throw LookupError(fmt::format("case '{}' is a portfolio, not a decision problem",
                                  to_string(name)));
}

const ProbVector& CaseStudy::pmf() const {
    if (const auto* p = std::get_if<ProbVector>(&payload)) return *p;
    throw LookupError(fmt::format("case '{}' is a decision problem, not a portfolio",
                                  to_string(name)));
}

CaseStudy load_case(CaseName name) {
    switch (name) {
        case CaseName::nawrocki_harding:
            return {name, linear_problem({act("y1", {1, 2, 3, 4, 5}, {0.1, 0.2, 0.4, 0.2, 0.1}),
                                          act("y2", {1, 2, 3, 4, 5}, {0.2, 0.1, 0.4, 0.1, 0.2})})};
        case CaseName::levy:
            return {name, linear_problem({act("y1", {1, 100}, {0.8, 0.2}),
                                          act("y2", {10, 1000}, {0.99, 0.01})})};
        case CaseName::allais:
            return {name, linear_problem({act("y1", {1}, {1.0}),
                                          act("y2", {1, 5, 0}, {0.89, 0.10, 0.01}),
                                          act("y3", {1, 0}, {0.11, 0.89}),
                                          act("y4", {5, 0}, {0.10, 0.90})})};
        case CaseName::portfolio_di:
            return {name, ProbVector(di_weights())};
        case CaseName::portfolio_lc:
            return {name, ProbVector({0.10, 0.08, 0.08, 0.08, 0.05, 0.06, 0.04, 0.05, 0.05, 0.05,
                                      0.08, 0.05, 0.06, 0.04, 0.08, 0.05})};
        case CaseName::portfolio_mc:
            return {name, ProbVector({0.06, 0.06, 0.06, 0.08, 0.06, 0.06, 0.06, 0.08, 0.06, 0.06,
                                      0.06, 0.06, 0.06, 0.06, 0.06, 0.06})};
        case CaseName::portfolio_hy:
            return {name, ProbVector({0.5, 0.04, 0.2, 0.06, 0.2})};
    }
    throw LookupError("unknown case");
}

CaseStudy load_case(std::string_view name) { return load_case(parse_case_name(name)); }

std::vector<std::pair<std::size_t, std::size_t>> comparison_pairs(CaseName name) {
    if (name == CaseName::allais) return {{0, 1}, {3, 2}};
    if (is_decision_case(name)) return {{0, 1}};
    return {};
}

std::vector<UtilityFunction> case_utilities(CaseName name) {
    if (name == CaseName::allais)
        return {UtilityFunction::linear(), UtilityFunction::square_root(),
                UtilityFunction::square()};
    if (is_decision_case(name))
        return {UtilityFunction::linear(), UtilityFunction::logarithm(),
                UtilityFunction::square_root()};
    return {};
}

std::vector<ModelColumn> standard_columns(double alpha) {
    return {{"EU-E", RiskMeasure::eu_fe, 1.0},
            {"EU-EV", RiskMeasure::eu_fev, 1.0},
            {"EU-FE", RiskMeasure::eu_fe, alpha},
            {"EU-FEV", RiskMeasure::eu_fev, alpha}};
}

// ---- entropy table ---------------------------------------------------------

BasePolicy parse_base_policy(std::string_view text) {
    const std::string t = lower(text);
    if (t == "natural" || t == "e" || t == "ln") return BasePolicy::natural;
    if (t == "ten" || t == "10" || t == "log10") return BasePolicy::ten;
    if (t == "mixed") return BasePolicy::mixed;
    throw DomainError(fmt::format("unknown base policy '{}' (expected natural, ten or mixed)",
                                  text));
}

std::vector<double> standard_alphas() { return {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}; }

EntropyTable entropy_table(std::span<const double> alphas, BasePolicy policy) {
    EntropyTable t;
    t.alphas.assign(alphas.begin(), alphas.end());
    std::vector<FractionalOrder> orders;
    for (double a : alphas) orders.emplace_back(a);

    for (CaseName n : {CaseName::portfolio_di, CaseName::portfolio_lc, CaseName::portfolio_mc,
                       CaseName::portfolio_hy}) {
        LogBase base = LogBase::natural;
        if (policy == BasePolicy::ten || (policy == BasePolicy::mixed && n == CaseName::portfolio_hy))
            base = LogBase::ten;
        const CaseStudy cs = load_case(n);
        std::vector<double> row;
        for (const auto& a : orders) row.push_back(ubriaco_entropy(cs.pmf(), a, base));
        t.rows.push_back(n);
        t.row_base.push_back(base);
        t.values.push_back(std::move(row));
    }

    t.notes.emplace_back(
        "Di: the 15th weight is printed as 0.2 in the source table; 0.025 is used so the "
        "weights sum to one and the published row is recovered.");
    switch (policy) {
        case BasePolicy::mixed:
            t.notes.emplace_back(
                "Hy is evaluated with base-10 logarithms and Di/Lc/Mc with natural logarithms; "
                "the published table mixes bases in this way.");
            break;
        case BasePolicy::natural:
            t.notes.emplace_back(
                "All rows use natural logarithms; the published Hy row was computed in base 10 "
                "and will not match.");
            break;
        case BasePolicy::ten:
            t.notes.emplace_back(
                "All rows use base-10 logarithms; the published Di/Lc/Mc rows were computed with "
                "natural logarithms and will not match.");
            break;
    }
    return t;
}

// ---- risk expressions and lambda tables ------------------------------------

RiskExpressionTable risk_expression_table(CaseName name, std::span<const UtilityFunction> utilities,
                                          double alpha) {
    const DecisionProblem base = load_case(name).problem();
    RiskExpressionTable t{name, alpha, standard_columns(alpha), {}};
    const FractionalOrder order(alpha);
    for (const auto& u : utilities) {
        const DecisionProblem p = base.with_utility(u);
        for (std::size_t a = 0; a < p.size(); ++a) {
            RiskExpressionRow row{u, a, ubriaco_entropy(p.action(a).pmf, order), {}};
            for (const auto& c : t.columns)
                row.risks.push_back(risk_affine(p, a, FractionalOrder(c.alpha), c.measure));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

std::vector<LambdaTableEntry> lambda_table(CaseName name,
                                           std::span<const UtilityFunction> utilities,
                                           std::span<const ModelColumn> columns) {
    const DecisionProblem base = load_case(name).problem();
    std::vector<LambdaTableEntry> out;
    for (const auto& u : utilities) {
        const DecisionProblem p = base.with_utility(u);
        for (const auto& [i, j] : comparison_pairs(name))
            for (const auto& c : columns)
                out.push_back({u, c, i, j,
                               lambda_preference_intervals(p, i, j, FractionalOrder(c.alpha),
                                                           c.measure)});
    }
    return out;
}

std::vector<SweepPoint> alpha_sweep(CaseName name, const UtilityFunction& utility,
                                    RiskMeasure measure, double lambda,
                                    std::span<const double> alpha_grid, LogBase base) {
    const DecisionProblem p = load_case(name).problem().with_utility(utility);
    std::vector<SweepPoint> out;
    for (double a : alpha_grid) {
        const RiskParams params(FractionalOrder(a), lambda, measure, base);
        SweepPoint pt{a, {}};
        for (std::size_t i = 0; i < p.size(); ++i) pt.risk.push_back(risk_value(p, i, params));
        out.push_back(std::move(pt));
    }
    return out;
}

// ---- published reference values -------------------------------------------

namespace {

using UK = UtilityKind;
constexpr CaseName NH = CaseName::nawrocki_harding;
constexpr CaseName LV = CaseName::levy;
constexpr CaseName AL = CaseName::allais;

struct CoefRow {
    CaseName name;
    UK utility;
    std::size_t action;
    double intercept;
    std::array<double, 4> slopes;     // EU-E, EU-EV, EU-FE, EU-FEV
    std::array<bool, 4> erratum;
};

constexpr std::array<std::string_view, 4> column_labels{"EU-E", "EU-EV", "EU-FE", "EU-FEV"};
constexpr std::array<bool, 4> ok{false, false, false, false};
// Allais y2 EU-EV is listed as 1.69 for every utility; (H1 + NV)/2 + NEU gives 1.51.
constexpr std::array<bool, 4> allais_ev{false, true, false, false};
// The Nawrocki-Harding H^0.4 split (0.70 vs 1.21) is impossible for two
// permutations of one pmf, so every fractional column inherits it.
constexpr std::array<bool, 4> nh_frac{false, false, true, true};

constexpr std::array<CoefRow, 24> coef_rows{{
    {LV, UK::linear, 0, -1.00, {1.50, 1.33, 1.68, 1.42}, ok},
    {LV, UK::linear, 1, -0.96, {1.02, 1.49, 1.14, 1.55}, ok},
    {LV, UK::logarithm, 0, -0.39, {0.89, 0.72, 1.07, 0.81}, ok},
    {LV, UK::logarithm, 1, -1.00, {1.06, 1.53, 1.18, 1.59}, ok},
    {LV, UK::square_root, 0, -0.81, {1.31, 1.14, 1.49, 1.23}, ok},
    {LV, UK::square_root, 1, -1.00, {1.06, 1.53, 1.18, 1.59}, ok},

    {AL, UK::linear, 0, -0.72, {0.72, 0.72, 0.72, 0.72}, ok},
    {AL, UK::linear, 1, -1.00, {1.38, 1.69, 1.54, 1.59}, allais_ev},
    {AL, UK::linear, 2, -0.08, {0.43, 0.27, 0.61, 0.36}, ok},
    {AL, UK::linear, 3, -0.36, {0.69, 1.02, 0.86, 1.11}, ok},
    {AL, UK::square_root, 0, -0.90, {0.90, 0.90, 0.90, 0.90}, ok},
    {AL, UK::square_root, 1, -1.00, {1.38, 1.69, 1.54, 1.59}, allais_ev},
    {AL, UK::square_root, 2, -0.10, {0.44, 0.29, 0.63, 0.39}, ok},
    {AL, UK::square_root, 3, -0.20, {0.53, 0.86, 0.71, 0.96}, ok},
    {AL, UK::square, 0, -0.29, {0.29, 0.29, 0.29, 0.29}, ok},
    // EU-FEV is also listed as 1.37 here; the formula gives 1.59.
    {AL, UK::square, 1, -1.00, {1.38, 1.69, 1.54, 1.37}, {false, true, false, true}},
    {AL, UK::square, 2, -0.03, {0.38, 0.22, 0.56, 0.32}, ok},
    {AL, UK::square, 3, -0.74, {1.06, 1.40, 1.24, 1.49}, ok},

    {NH, UK::linear, 0, -1.00, {2.47, 2.07, 1.70, 1.68}, nh_frac},
    {NH, UK::linear, 1, -1.00, {2.47, 2.24, 2.21, 1.94}, nh_frac},
    {NH, UK::logarithm, 0, -1.00, {2.47, 2.07, 1.70, 1.68}, nh_frac},
    {NH, UK::logarithm, 1, -0.95, {2.42, 2.19, 2.16, 2.06}, nh_frac},
    {NH, UK::square_root, 0, -1.00, {2.47, 2.07, 1.70, 1.68}, nh_frac},
    {NH, UK::square_root, 1, -0.99, {2.46, 2.23, 2.20, 2.10}, nh_frac},
}};

std::vector<PublishedCoefficient> build_coefficients() {
    std::vector<PublishedCoefficient> out;
    for (const auto& r : coef_rows) {
        for (std::size_t c = 0; c < 4; ++c)
            out.push_back({r.name, r.utility, r.action, column_labels[c], r.slopes[c],
                           r.intercept, r.erratum[c]});
    }
    return out;
}

const std::vector<PublishedCoefficient>& coefficient_store() {
    static const std::vector<PublishedCoefficient> store = build_coefficients();
    return store;
}

constexpr std::array<PublishedEntropy, 8> entropy_cells{{
    {LV, 0, 0.68, false},
    {LV, 1, 0.18, false},
    {AL, 0, 0.00, false},
    {AL, 1, 0.54, false},
    {AL, 2, 0.53, false},
    {AL, 3, 0.51, false},
    {NH, 0, 0.70, true},
    {NH, 1, 1.21, true},
}};

constexpr Preference P1 = Preference::first;
constexpr Preference P2 = Preference::second;
constexpr Preference EQ = Preference::indifferent;

PublishedRegion closed(Preference p, double lo, double hi) { return {p, lo, hi, true, true}; }
PublishedRegion lo_open(Preference p, double lo, double hi) { return {p, lo, hi, false, true}; }
PublishedRegion hi_open(Preference p, double lo, double hi) { return {p, lo, hi, true, false}; }

std::vector<PublishedLambdaCell> build_lambda_cells() {
    std::vector<PublishedLambdaCell> v;
    auto add = [&](CaseName n, UK u, std::string_view col, std::size_t i, std::size_t j,
                   std::vector<PublishedRegion> regions, bool erratum = false) {
        v.push_back({n, u, col, i, j, std::move(regions), erratum});
    };

    // Levy, (y1, y2).
    add(LV, UK::linear, "EU-E", 0, 1, {hi_open(P1, 0, 0.08), lo_open(P2, 0.08, 1)});
    add(LV, UK::linear, "EU-EV", 0, 1, {closed(P1, 0, 1)});
    add(LV, UK::linear, "EU-FE", 0, 1, {hi_open(P1, 0, 0.07), lo_open(P2, 0.07, 1)});
    add(LV, UK::linear, "EU-FEV", 0, 1, {closed(P1, 0, 1)});
    add(LV, UK::logarithm, "EU-E", 0, 1, {closed(P2, 0, 1)});
    add(LV, UK::logarithm, "EU-EV", 0, 1, {hi_open(P2, 0, 0.75), lo_open(P1, 0.75, 1)});
    add(LV, UK::logarithm, "EU-FE", 0, 1, {closed(P2, 0, 1)});
    add(LV, UK::logarithm, "EU-FEV", 0, 1, {hi_open(P2, 0, 0.78), lo_open(P1, 0.78, 1)});
    add(LV, UK::square_root, "EU-E", 0, 1, {closed(P2, 0, 1)});
    add(LV, UK::square_root, "EU-EV", 0, 1, {hi_open(P2, 0, 0.49), lo_open(P1, 0.49, 1)});
    add(LV, UK::square_root, "EU-FE", 0, 1, {closed(P2, 0, 1)});
    add(LV, UK::square_root, "EU-FEV", 0, 1, {hi_open(P2, 0, 0.53), lo_open(P1, 0.53, 1)});

    // Allais first experiment: the region where y1 is preferred to y2.
    const std::array<std::pair<UK, std::array<double, 4>>, 3> first{{
        {UK::linear, {0.42, 0.28, 0.34, 0.32}},
        {UK::square_root, {0.21, 0.13, 0.16, 0.14}},
        {UK::square, {0.65, 0.51, 0.57, 0.66}},
    }};
    for (const auto& [u, th] : first)
        for (std::size_t c = 0; c < 4; ++c) {
            // EU-EV thresholds follow from the erroneous y2 slope; so does the
            // x^2 EU-FEV threshold.
            const bool bad = c == 1 || (u == UK::square && c == 3);
            add(AL, u, column_labels[c], 0, 1, {lo_open(P1, th[c], 1)}, bad);
        }

    // Allais second experiment: the region where y4 is preferred to y3.
    const std::array<std::pair<UK, std::array<double, 4>>, 3> second{{
        {UK::linear, {1, 0.37, 1, 0.37}},
        {UK::square_root, {1, 0.18, 1, 0.18}},
        {UK::square, {1, 0.60, 1, 0.61}},
    }};
    for (const auto& [u, th] : second)
        for (std::size_t c = 0; c < 4; ++c)
            add(AL, u, column_labels[c], 3, 2,
                {th[c] == 1 ? closed(P1, 0, 1) : hi_open(P1, 0, th[c])});

    // Nawrocki-Harding, (y1, y2).
    add(NH, UK::linear, "EU-E", 0, 1, {closed(EQ, 0, 1)});
    add(NH, UK::linear, "EU-EV", 0, 1, {closed(EQ, 0, 0), lo_open(P1, 0, 1)});
    add(NH, UK::linear, "EU-FE", 0, 1, {closed(EQ, 0, 0), lo_open(P1, 0, 1)}, true);
    add(NH, UK::linear, "EU-FEV", 0, 1, {closed(EQ, 0, 0), lo_open(P1, 0, 1)});
    for (UK u : {UK::logarithm, UK::square_root}) {
        add(NH, u, "EU-E", 0, 1, {hi_open(P1, 0, 1), closed(EQ, 1, 1)});
        add(NH, u, "EU-EV", 0, 1, {closed(P1, 0, 1)});
        add(NH, u, "EU-FE", 0, 1, {closed(P1, 0, 1)}, true);
        add(NH, u, "EU-FEV", 0, 1, {closed(P1, 0, 1)});
    }
    return v;
}

}  // namespace

std::span<const PublishedCoefficient> published_coefficients() { return coefficient_store(); }

std::span<const PublishedEntropy> published_entropies() { return entropy_cells; }

const std::vector<PublishedLambdaCell>& published_lambda_cells() {
    static const std::vector<PublishedLambdaCell> cells = build_lambda_cells();
    return cells;
}

const std::vector<std::vector<double>>& published_entropy_table() {
    static const std::vector<std::vector<double>> t{
        {1.1314, 1.4486, 1.8549, 2.3756, 3.0429, 3.4440},
        {1.1053, 1.3508, 1.6515, 2.0199, 2.4716, 2.7344},
        {1.1071, 1.3569, 1.6632, 2.0388, 2.4994, 2.7674},
        {0.9319, 0.8160, 0.7224, 0.6467, 0.5854, 0.5593},
    };
    return t;
}

std::optional<PublishedCoefficient> find_published(CaseName name, UtilityKind utility,
                                                   std::size_t action, std::string_view column) {
    for (const auto& c : coefficient_store())
        if (c.name == name && c.utility == utility && c.action == action && c.column == column)
            return c;
    return std::nullopt;
}

std::optional<PublishedLambdaCell> find_published_lambda(CaseName name, UtilityKind utility,
                                                         std::string_view column, std::size_t i,
                                                         std::size_t j) {
    for (const auto& c : published_lambda_cells())
        if (c.name == name && c.utility == utility && c.column == column && c.i == i && c.j == j)
            return c;
    return std::nullopt;
}

// ---- report output ----------------------------------------------------------

namespace {

std::string region_text(const PublishedRegion& r) {
    LambdaInterval iv{r.lo, r.hi, r.lo_closed, r.hi_closed, r.preferred};
    return iv.format(2);
}

std::string preference_label(Preference p, const std::string& a, const std::string& b) {
    switch (p) {
        case Preference::first: return a;
        case Preference::second: return b;
        case Preference::indifferent: return "=";
    }
    return "?";
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::vector<ReportRow> report_rows(const EntropyTable& table) {
    std::vector<ReportRow> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t a = 0; a < table.alphas.size(); ++a)
            out.push_back({std::string(to_string(table.rows[r])), "", "", "",
                           table.alphas[a],
                           fmt::format("entropy_{}", to_string(table.row_base[r])),
                           fmt_num(table.values[r][a])});
    return out;
}

std::vector<ReportRow> report_rows(const RiskExpressionTable& table) {
    const DecisionProblem p = load_case(table.name).problem();
    const std::string cname(to_string(table.name));
    std::vector<ReportRow> out;
    for (const auto& row : table.rows) {
        const std::string label = action_label(p, row.action);
        const std::string uname(to_string(row.utility.kind()));
        out.push_back({cname, label, uname, "", table.alpha, "entropy", fmt_num(row.entropy)});
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const auto& col = table.columns[c];
            out.push_back({cname, label, uname, col.label, col.alpha, "slope",
                           fmt_num(row.risks[c].slope)});
            out.push_back({cname, label, uname, col.label, col.alpha, "intercept",
                           fmt_num(row.risks[c].intercept)});
            if (auto pub = find_published(table.name, row.utility.kind(), row.action, col.label)) {
                out.push_back({cname, label, uname, col.label, col.alpha, "published_slope",
                               fmt_num(pub->slope, 2)});
                out.push_back({cname, label, uname, col.label, col.alpha, "published_intercept",
                               fmt_num(pub->intercept, 2)});
            }
        }
    }
    return out;
}

std::vector<ReportRow> report_rows(CaseName name, std::span<const LambdaTableEntry> entries) {
    const DecisionProblem p = load_case(name).problem();
    const std::string cname(to_string(name));
    std::vector<ReportRow> out;
    for (const auto& e : entries) {
        const std::string a = action_label(p, e.i);
        const std::string b = action_label(p, e.j);
        const std::string pair = a + "|" + b;
        const std::string uname(to_string(e.utility.kind()));
        const auto& col = e.column;
        out.push_back({cname, pair, uname, col.label, col.alpha, "lambda_star",
                       e.partition.crossing ? fmt_num(*e.partition.crossing) : "none"});
        for (const auto& piece : e.partition.pieces)
            out.push_back({cname, pair, uname, col.label, col.alpha,
                           "prefers_" + preference_label(piece.preferred, a, b), piece.format(4)});
        if (auto pub = find_published_lambda(name, e.utility.kind(), col.label, e.i, e.j))
            for (const auto& r : pub->regions)
                out.push_back({cname, pair, uname, col.label, col.alpha,
                               "published_prefers_" + preference_label(r.preferred, a, b),
                               region_text(r)});
    }
    return out;
}

std::vector<ReportRow> report_rows(CaseName name, const UtilityFunction& utility,
                                   RiskMeasure measure, std::span<const SweepPoint> sweep) {
    const DecisionProblem p = load_case(name).problem();
    const std::string cname(to_string(name));
    const std::string uname(to_string(utility.kind()));
    const std::string mname(to_string(measure));
    std::vector<ReportRow> out;
    for (const auto& pt : sweep)
        for (std::size_t i = 0; i < pt.risk.size(); ++i)
            out.push_back({cname, action_label(p, i), uname, mname, pt.alpha, "risk",
                           fmt_num(pt.risk[i], 6)});
    return out;
}

std::string render_csv(std::span<const ReportRow> rows, bool header) {
    std::string out;
    if (header) out += "case,action,utility,measure,alpha,quantity,value\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{},{}\n", csv_escape(r.case_name), csv_escape(r.action),
                           csv_escape(r.utility), csv_escape(r.measure), fmt_num(r.alpha, 2),
                           csv_escape(r.quantity), csv_escape(r.value));
    return out;
}

std::string render_text(const EntropyTable& table) {
    std::string out = fmt::format("{:<6}{:<9}", "row", "base");
    for (double a : table.alphas) out += fmt::format("{:>10}", fmt::format("a={:.1f}", a));
    out += '\n';
    const auto& pub = published_entropy_table();
    const bool standard = table.alphas == standard_alphas();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out += fmt::format("{:<6}{:<9}", to_string(table.rows[r]), to_string(table.row_base[r]));
        for (double v : table.values[r]) out += fmt::format("{:>10.4f}", v);
        out += '\n';
        if (standard) {
            out += fmt::format("{:<6}{:<9}", "", "publ.");
            for (double v : pub[r]) out += fmt::format("{:>10.4f}", v);
            out += '\n';
        }
    }
    for (const auto& n : table.notes) out += "note: " + n + '\n';
    return out;
}

std::string render_text(const RiskExpressionTable& table) {
    const DecisionProblem p = load_case(table.name).problem();
    std::string out = fmt::format("{} risk expressions, alpha = {:.2f}\n", to_string(table.name),
                                  table.alpha);
    out += fmt::format("{:<14}{:<7}{:>8}", "utility", "action", "H");
    for (const auto& c : table.columns) out += fmt::format("{:>22}", c.label);
    out += '\n';
    for (const auto& row : table.rows) {
        out += fmt::format("{:<14}{:<7}{:>8.4f}", to_string(row.utility.kind()),
                           action_label(p, row.action), row.entropy);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const auto& r = row.risks[c];
            std::string cell = fmt::format("{:.4f}l{:+.4f}", r.slope, r.intercept);
            if (auto pub = find_published(table.name, row.utility.kind(), row.action,
                                          table.columns[c].label))
                cell += pub->erratum ? " *" : "";
            out += fmt::format("{:>22}", cell);
        }
        out += '\n';
    }
    out += "(* published value disagrees with the defining formula)\n";
    return out;
}

std::string render_text(CaseName name, std::span<const LambdaTableEntry> entries) {
    const DecisionProblem p = load_case(name).problem();
    std::string out = fmt::format("{} preference regions over lambda\n", to_string(name));
    for (const auto& e : entries) {
        const std::string a = action_label(p, e.i);
        const std::string b = action_label(p, e.j);
        out += fmt::format("{:<12}{:<8}{}|{}  ", to_string(e.utility.kind()), e.column.label, a, b);
        out += e.partition.crossing ? fmt::format("lambda*={:.4f}", *e.partition.crossing)
                                    : std::string("lambda*=none  ");
        for (const auto& piece : e.partition.pieces)
            out += fmt::format("  {}:{}", preference_label(piece.preferred, a, b), piece.format(4));
        if (auto pub = find_published_lambda(name, e.utility.kind(), e.column.label, e.i, e.j)) {
            out += "  | published";
            for (const auto& r : pub->regions)
                out += fmt::format(" {}:{}", preference_label(r.preferred, a, b), region_text(r));
            if (pub->erratum) out += " *";
        }
        out += '\n';
    }
    return out;
}

std::string render_text(CaseName name, const UtilityFunction& utility, RiskMeasure measure,
                        std::span<const SweepPoint> sweep) {
    const DecisionProblem p = load_case(name).problem();
    std::string out = fmt::format("{} {} {} alpha sweep\n{:>8}", to_string(name),
                                  to_string(utility.kind()), to_string(measure), "alpha");
    for (std::size_t i = 0; i < p.size(); ++i) out += fmt::format("{:>12}", action_label(p, i));
    out += '\n';
    for (const auto& pt : sweep) {
        out += fmt::format("{:>8.3f}", pt.alpha);
        for (double r : pt.risk) out += fmt::format("{:>12.6f}", r);
        out += '\n';
    }
    return out;
}

}  // namespace fracdec::casebook
