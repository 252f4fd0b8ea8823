#pragma once

// Built-in case studies: three classic decision problems (Nawrocki-Harding,
// Levy, Allais) and four portfolio weight vectors, together with the
// published reference tables they are checked against and generators for
// the corresponding reports.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fracdec/decision.hpp"
#include "fracdec/entropy.hpp"

namespace fracdec::casebook {

enum class CaseName {
    nawrocki_harding,
    levy,
    allais,
    portfolio_di,
    portfolio_lc,
    portfolio_mc,
    portfolio_hy,
};

std::string_view to_string(CaseName name);
/// Throws LookupError for unknown names.
CaseName parse_case_name(std::string_view text);
bool is_decision_case(CaseName name);

struct CaseStudy {
    CaseName name;
    /// Decision cases carry a problem with u(x) = x; swap the utility with
    /// DecisionProblem::with_utility.
    std::variant<DecisionProblem, ProbVector> payload;

    [[nodiscard]] const DecisionProblem& problem() const;
    [[nodiscard]] const ProbVector& pmf() const;
};

CaseStudy load_case(CaseName name);
CaseStudy load_case(std::string_view name);

/// Action pairs (i, j) whose preference the published tables report:
/// (y1, y2) everywhere, plus (y4, y3) for the second Allais experiment.
std::vector<std::pair<std::size_t, std::size_t>> comparison_pairs(CaseName name);
/// Utilities studied for each decision case.
std::vector<UtilityFunction> case_utilities(CaseName name);

// ---- model columns ---------------------------------------------------------

/// One column of the risk tables: EU-E and EU-EV are the alpha = 1 forms.
struct ModelColumn {
    std::string label;
    RiskMeasure measure;
    double alpha;
};

/// EU-E, EU-EV (alpha = 1) and EU-FE, EU-FEV at the given alpha.
std::vector<ModelColumn> standard_columns(double alpha);

// ---- entropy table ---------------------------------------------------------

enum class BasePolicy { natural, ten, mixed };
BasePolicy parse_base_policy(std::string_view text);

std::vector<double> standard_alphas();  // 0.1, 0.3, 0.5, 0.7, 0.9, 1.0

struct EntropyTable {
    std::vector<double> alphas;
    std::vector<CaseName> rows;
    std::vector<LogBase> row_base;
    std::vector<std::vector<double>> values;  // [row][alpha]
    std::vector<std::string> notes;
};

/// Rows Di/Lc/Mc/Hy. `mixed` uses natural log for Di/Lc/Mc and base ten for
/// Hy, the only combination under which every published cell is recovered.
EntropyTable entropy_table(std::span<const double> alphas, BasePolicy policy);

// ---- risk expressions and lambda tables ------------------------------------

struct RiskExpressionRow {
    UtilityFunction utility;
    std::size_t action;
    double entropy;                  // H^alpha at the table's alpha
    std::vector<AffineRisk> risks;   // one per column
};

struct RiskExpressionTable {
    CaseName name;
    double alpha;
    std::vector<ModelColumn> columns;
    std::vector<RiskExpressionRow> rows;
};

RiskExpressionTable risk_expression_table(CaseName name, std::span<const UtilityFunction> utilities,
                                          double alpha);

struct LambdaTableEntry {
    UtilityFunction utility;
    ModelColumn column;
    std::size_t i;
    std::size_t j;
    LambdaPartition partition;
};

std::vector<LambdaTableEntry> lambda_table(CaseName name,
                                           std::span<const UtilityFunction> utilities,
                                           std::span<const ModelColumn> columns);

struct SweepPoint {
    double alpha;
    std::vector<double> risk;  // per action
};

std::vector<SweepPoint> alpha_sweep(CaseName name, const UtilityFunction& utility,
                                    RiskMeasure measure, double lambda,
                                    std::span<const double> alpha_grid,
                                    LogBase base = LogBase::natural);

// ---- published reference values -------------------------------------------

/// One cell of a published risk-expression table, rounded to 2 decimals.
struct PublishedCoefficient {
    CaseName name;
    UtilityKind utility;
    std::size_t action;
    std::string_view column;  // EU-E, EU-EV, EU-FE, EU-FEV
    double slope;
    double intercept;
    /// Set for cells that cannot be derived from the defining formulas.
    bool erratum;
};

/// Published H^0.4 per action (same for every utility).
struct PublishedEntropy {
    CaseName name;
    std::size_t action;
    double value;
    bool erratum;
};

/// A region of [0, 1] the published threshold tables assign to one preference
/// between actions (i, j).
struct PublishedRegion {
    Preference preferred;
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;
};

struct PublishedLambdaCell {
    CaseName name;
    UtilityKind utility;
    std::string_view column;
    std::size_t i;
    std::size_t j;
    std::vector<PublishedRegion> regions;
    bool erratum;
};

std::span<const PublishedCoefficient> published_coefficients();
std::span<const PublishedEntropy> published_entropies();
const std::vector<PublishedLambdaCell>& published_lambda_cells();
/// [row Di/Lc/Mc/Hy][alpha 0.1 .. 1.0]
const std::vector<std::vector<double>>& published_entropy_table();

std::optional<PublishedCoefficient> find_published(CaseName name, UtilityKind utility,
                                                   std::size_t action, std::string_view column);
std::optional<PublishedLambdaCell> find_published_lambda(CaseName name, UtilityKind utility,
                                                         std::string_view column, std::size_t i,
                                                         std::size_t j);

// ---- report output ----------------------------------------------------------

/// One table cell: case, action, utility, measure, alpha, quantity, value.
struct ReportRow {
    std::string case_name;
    std::string action;
    std::string utility;
    std::string measure;
    double alpha;
    std::string quantity;
    std::string value;
};

std::vector<ReportRow> report_rows(const EntropyTable& table);
std::vector<ReportRow> report_rows(const RiskExpressionTable& table);
std::vector<ReportRow> report_rows(CaseName name, std::span<const LambdaTableEntry> entries);
std::vector<ReportRow> report_rows(CaseName name, const UtilityFunction& utility,
                                   RiskMeasure measure, std::span<const SweepPoint> sweep);

std::string render_csv(std::span<const ReportRow> rows, bool header = true);

std::string render_text(const EntropyTable& table);
std::string render_text(const RiskExpressionTable& table);
std::string render_text(CaseName name, std::span<const LambdaTableEntry> entries);
std::string render_text(CaseName name, const UtilityFunction& utility, RiskMeasure measure,
                        std::span<const SweepPoint> sweep);

}  // namespace fracdec::casebook
