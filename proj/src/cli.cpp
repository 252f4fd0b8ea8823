#include "fracdec/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fracdec/casebook.hpp"
#include "fracdec/csv.hpp"
#include "fracdec/decision.hpp"
#include "fracdec/decision_io.hpp"
#include "fracdec/entropy.hpp"
#include "fracdec/errors.hpp"
#include "fracdec/frontier.hpp"
#include "fracdec/market_data.hpp"
#include "fracdec/parallel.hpp"
#include "fracdec/selector.hpp"

namespace fracdec::cli {

namespace {

using nlohmann::json;

enum class Format { csv, json, text };

struct Options {
    std::string format;
    std::string output;
    std::uint64_t seed = 1;
    long threads = 0;

    double alpha = 0.4;
    double lambda = 0.5;
    std::string measure = "eu-fe";
    std::string utility;
    std::string base = "natural";

    std::string pmf;
    bool normalize = false;
    std::string case_name;
    std::string problem;
    bool table = false;
    std::string base_policy = "mixed";
    std::string alphas;
    std::string first;
    std::string second;
    bool sweep = false;

    std::string prices;
    std::string factors;
    std::size_t bins = 15;
    bool sample_variance = false;
    std::string emit = "returns";

    std::size_t bootstrap = 100;
    std::size_t top = 7;
    std::size_t epochs = 500;
    std::size_t hidden = 10;
    std::size_t patience = 50;
    bool gradient_descent = false;
    double lambda_step = 0.05;
    std::string features_out;
    bool direct = false;

    std::size_t points = 50;
    std::string subset;
    std::string ranking;
    bool unconstrained = false;
    double threshold = 0.05;
};

Format parse_format(const std::string& text, Format fallback) {
    if (text.empty()) return fallback;
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    if (text == "text") return Format::text;
    throw DomainError(fmt::format("unknown format '{}' (expected csv, json or text)", text));
}

std::vector<double> parse_list(const std::string& text, std::string_view what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = csv::parse_number(item);
        if (!v) throw ValidationError(fmt::format("{}: '{}' is not a number", what, item));
        out.push_back(*v);
    }
    if (out.empty()) throw ValidationError(fmt::format("{} is empty", what));
    return out;
}

std::vector<std::string> parse_labels(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = csv::trim(item); !t.empty()) out.emplace_back(t);
    if (out.empty()) throw ValidationError("label list is empty");
    return out;
}

std::string num(double v, int decimals = 6) { return fmt::format("{:.{}f}", v, decimals); }

unsigned threads_of(const Options& o) {
    return resolve_threads(o.threads > 0 ? std::optional<long>(o.threads) : std::nullopt);
}

// ---- entropy ----------------------------------------------------------------

std::string cmd_entropy(const Options& o) {
    const Format f = parse_format(o.format, Format::text);
    if (o.table) {
        const auto alphas = o.alphas.empty() ? casebook::standard_alphas() : parse_list(o.alphas, "--alphas");
        const auto t = casebook::entropy_table(alphas, casebook::parse_base_policy(o.base_policy));
        if (f == Format::text) return casebook::render_text(t);
        const auto rows = casebook::report_rows(t);
        if (f == Format::csv) return casebook::render_csv(rows);
        json j = json::array();
        for (const auto& r : rows)
            j.push_back({{"row", r.case_name}, {"alpha", r.alpha}, {"quantity", r.quantity}, {"value", std::stod(r.value)}});
        return j.dump(2) + "\n";
    }

    std::optional<ProbVector> pmf;
    if (!o.pmf.empty() && !o.case_name.empty()) throw ValidationError("give either --pmf or --case, not both");
    if (!o.pmf.empty()) {
        auto values = parse_list(o.pmf, "--pmf");
        pmf = o.normalize ? ProbVector::normalize(std::move(values)) : ProbVector(std::move(values));
    } else if (!o.case_name.empty()) {
        pmf = casebook::load_case(o.case_name).pmf();
    } else {
        throw ValidationError("entropy needs --pmf, --case or --table");
    }
    const auto alphas = o.alphas.empty() ? std::vector<double>{o.alpha} : parse_list(o.alphas, "--alphas");
    const LogBase base = parse_log_base(o.base);
    std::vector<double> values;
    for (double a : alphas) values.push_back(ubriaco_entropy(*pmf, FractionalOrder(a), base));

    switch (f) {
        case Format::text: {
            if (values.size() == 1) return num(values[0], 4) + "\n";
            std::string out;
            for (std::size_t i = 0; i < values.size(); ++i)
                out += fmt::format("alpha={:<6} {:.4f}\n", alphas[i], values[i]);
            return out;
        }
        case Format::csv: {
            std::string out = "alpha,base,entropy\n";
            for (std::size_t i = 0; i < values.size(); ++i)
                out += fmt::format("{},{},{}\n", csv::format_number(alphas[i]), to_string(base),
                                   csv::format_number(values[i]));
            return out;
        }
        case Format::json: {
            json j = json::array();
            for (std::size_t i = 0; i < values.size(); ++i)
                j.push_back({{"alpha", alphas[i]}, {"base", std::string(to_string(base))}, {"entropy", values[i]}});
            return j.dump(2) + "\n";
        }
    }
    return {};
}

// ---- decision problems -----------------------------------------------------

DecisionProblem load_decision(const Options& o) {
    if (!o.problem.empty() && !o.case_name.empty())
        throw ValidationError("give either --problem or --case, not both");
    std::optional<DecisionProblem> p;
    if (!o.problem.empty())
        p = load_problem(o.problem);
    else if (!o.case_name.empty())
        p = casebook::load_case(o.case_name).problem();
    else
        throw ValidationError("need --problem FILE or --case NAME");
    if (!o.utility.empty()) return p->with_utility(UtilityFunction::from_kind(parse_utility_kind(o.utility)));
    return *p;
}

std::string cmd_decide(const Options& o) {
    const Format f = parse_format(o.format, Format::text);
    const DecisionProblem p = load_decision(o);
    const RiskParams params(FractionalOrder(o.alpha), o.lambda, parse_risk_measure(o.measure),
                            parse_log_base(o.base));
    const auto order = rank_actions(p, params);
    std::vector<std::size_t> rank(p.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;

    struct Row {
        double eu, var, neu, nv, h;
        AffineRisk affine;
        double risk;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto a = risk_affine(p, i, params.alpha, params.measure, params.base);
        rows.push_back({p.expected_utility(i), p.variance(i), p.normalized_expected_utility(i),
                        p.normalized_variance(i),
                        ubriaco_entropy(p.action(i).pmf, params.alpha, params.base), a,
                        a.at(params.lambda)});
    }

    if (f == Format::csv) {
        std::string out = "action,expected_utility,variance,neu,nv,entropy,slope,intercept,risk,rank\n";
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto& r = rows[i];
            out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv::escape(p.action(i).label),
                               csv::format_number(r.eu), csv::format_number(r.var),
                               csv::format_number(r.neu), csv::format_number(r.nv),
                               csv::format_number(r.h), csv::format_number(r.affine.slope),
                               csv::format_number(r.affine.intercept), csv::format_number(r.risk),
                               rank[i]);
        }
        return out;
    }
    if (f == Format::json) {
        json actions = json::array();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto& r = rows[i];
            actions.push_back({{"action", p.action(i).label}, {"expected_utility", r.eu},
                               {"variance", r.var}, {"neu", r.neu}, {"nv", r.nv}, {"entropy", r.h},
                               {"slope", r.affine.slope}, {"intercept", r.affine.intercept},
                               {"risk", r.risk}, {"rank", rank[i]}});
        }
        return json{{"utility", p.utility().display()}, {"measure", std::string(to_string(params.measure))},
                    {"alpha", o.alpha}, {"lambda", o.lambda}, {"base", std::string(to_string(params.base))},
                    {"actions", actions}}.dump(2) + "\n";
    }
    std::string out = fmt::format("{}, {}, alpha = {}, lambda = {}, {} log\n", p.utility().display(),
                                  to_string(params.measure), o.alpha, o.lambda, to_string(params.base));
    out += fmt::format("{:<8}{:>12}{:>12}{:>9}{:>9}{:>9}{:>22}{:>10}{:>6}\n", "action", "E[u]", "Var",
                       "NEU", "NV", "H", "risk(lambda)", "risk", "rank");
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& r = rows[i];
        out += fmt::format("{:<8}{:>12.4f}{:>12.4f}{:>9.4f}{:>9.4f}{:>9.4f}{:>22}{:>10.4f}{:>6}\n",
                           p.action(i).label, r.eu, r.var, r.neu, r.nv, r.h,
                           fmt::format("{:.4f}l{:+.4f}", r.affine.slope, r.affine.intercept), r.risk,
                           rank[i]);
    }
    std::string chain;
    for (std::size_t r = 0; r < order.size(); ++r) {
        if (r) {
            const bool tie = std::abs(rows[order[r]].risk - rows[order[r - 1]].risk) <= preference_tie_eps;
            chain += tie ? " = " : " < ";
        }
        chain += p.action(order[r]).label;
    }
    out += "risk order: " + chain + "\n";
    return out;
}

std::string cmd_intervals(const Options& o) {
    const Format f = parse_format(o.format, Format::text);
    const DecisionProblem p = load_decision(o);
    const FractionalOrder alpha(o.alpha);
    const RiskMeasure measure = parse_risk_measure(o.measure);
    const LogBase base = parse_log_base(o.base);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (!o.first.empty() || !o.second.empty()) {
        if (o.first.empty() || o.second.empty()) throw ValidationError("--first and --second go together");
        pairs.emplace_back(p.index_of(o.first), p.index_of(o.second));
    } else if (!o.case_name.empty()) {
        pairs = casebook::comparison_pairs(casebook::parse_case_name(o.case_name));
    } else {
        if (p.size() < 2) throw ValidationError("need at least two actions to compare");
        pairs.emplace_back(0, 1);
    }

    std::string out;
    json j = json::array();
    if (f == Format::csv) out = "first,second,measure,alpha,lambda_star,lo,hi,lo_closed,hi_closed,preferred\n";
    for (const auto& [i, k] : pairs) {
        const auto part = lambda_preference_intervals(p, i, k, alpha, measure, base);
        const auto& a = p.action(i).label;
        const auto& b = p.action(k).label;
        auto who = [&](Preference pr) {
            return pr == Preference::first ? a : pr == Preference::second ? b : std::string("indifferent");
        };
        const std::string star = part.crossing ? csv::format_number(*part.crossing) : "";
        if (f == Format::text) {
            out += fmt::format("{} vs {} ({}, alpha = {}): lambda* = {}\n", a, b, to_string(measure),
                               o.alpha, part.crossing ? num(*part.crossing, 4) : "none");
            for (const auto& piece : part.pieces)
                out += fmt::format("  {:<20} {}\n", piece.format(4),
                                   piece.preferred == Preference::indifferent ? "indifferent"
                                                                              : who(piece.preferred) + " preferred");
        } else if (f == Format::csv) {
            for (const auto& piece : part.pieces)
                out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv::escape(a), csv::escape(b),
                                   to_string(measure), csv::format_number(o.alpha), star,
                                   csv::format_number(piece.lo), csv::format_number(piece.hi),
                                   piece.lo_closed, piece.hi_closed, csv::escape(who(piece.preferred)));
        } else {
            json pieces = json::array();
            for (const auto& piece : part.pieces)
                pieces.push_back({{"lo", piece.lo}, {"hi", piece.hi}, {"lo_closed", piece.lo_closed},
                                  {"hi_closed", piece.hi_closed}, {"preferred", who(piece.preferred)}});
            j.push_back({{"first", a}, {"second", b}, {"measure", std::string(to_string(measure))},
                         {"alpha", o.alpha},
                         {"lambda_star", part.crossing ? json(*part.crossing) : json(nullptr)},
                         {"pieces", pieces}});
        }
    }
    return f == Format::json ? j.dump(2) + "\n" : out;
}

// ---- casebook ---------------------------------------------------------------

std::string cmd_casebook(const Options& o) {
    const Format f = parse_format(o.format, Format::text);
    if (o.case_name.empty()) throw ValidationError("casebook needs --case");
    const auto name = casebook::parse_case_name(o.case_name);
    std::vector<casebook::ReportRow> rows;
    std::string text;

    if (!casebook::is_decision_case(name)) {
        const auto alphas = o.alphas.empty() ? casebook::standard_alphas() : parse_list(o.alphas, "--alphas");
        const auto t = casebook::entropy_table(alphas, casebook::parse_base_policy(o.base_policy));
        rows = casebook::report_rows(t);
        text = casebook::render_text(t);
    } else {
        std::vector<UtilityFunction> utilities;
        if (o.utility.empty())
            utilities = casebook::case_utilities(name);
        else
            utilities.push_back(UtilityFunction::from_kind(parse_utility_kind(o.utility)));
        (void)FractionalOrder(o.alpha);

        const auto expr = casebook::risk_expression_table(name, utilities, o.alpha);
        const auto columns = casebook::standard_columns(o.alpha);
        const auto lambdas = casebook::lambda_table(name, utilities, columns);
        rows = casebook::report_rows(expr);
        const auto lrows = casebook::report_rows(name, lambdas);
        rows.insert(rows.end(), lrows.begin(), lrows.end());
        text = casebook::render_text(expr) + "\n" + casebook::render_text(name, lambdas);

        if (o.sweep) {
            const auto grid = o.alphas.empty() ? lambda_grid(0.01) : parse_list(o.alphas, "--alphas");
            std::vector<double> alphas;
            for (double a : grid)
                if (a > 0.0) alphas.push_back(a);
            const RiskMeasure measure = parse_risk_measure(o.measure);
            for (const auto& u : utilities) {
                const auto sw = casebook::alpha_sweep(name, u, measure, o.lambda, alphas);
                const auto srows = casebook::report_rows(name, u, measure, sw);
                rows.insert(rows.end(), srows.begin(), srows.end());
                text += "\n" + casebook::render_text(name, u, measure, sw);
            }
        }
    }

    if (f == Format::text) return text;
    if (f == Format::csv) return casebook::render_csv(rows);
    json j = json::array();
    for (const auto& r : rows)
        j.push_back({{"case", r.case_name}, {"action", r.action}, {"utility", r.utility},
                     {"measure", r.measure}, {"alpha", r.alpha}, {"quantity", r.quantity},
                     {"value", r.value}});
    return j.dump(2) + "\n";
}

// ---- market data -------------------------------------------------------------

PricePanel require_prices(const Options& o) {
    if (o.prices.empty()) throw ValidationError("need --prices FILE");
    return load_prices(o.prices);
}

FactorOptions factor_options(const Options& o) {
    FactorOptions fo;
    fo.utility = o.utility.empty() ? UtilityFunction::s_shaped()
                                   : UtilityFunction::from_kind(parse_utility_kind(o.utility));
    fo.alpha = FractionalOrder(o.alpha);
    fo.base = parse_log_base(o.base);
    fo.bins = o.bins;
    fo.variance = o.sample_variance ? VarianceKind::sample : VarianceKind::population;
    fo.threads = threads_of(o);
    return fo;
}

std::string cmd_ingest(const Options& o) {
    const Format f = parse_format(o.format, Format::csv);
    const PricePanel panel = require_prices(o);
    if (o.emit == "prices") {
        if (f == Format::json)
            return json{{"dates", panel.dates}, {"stocks", panel.stocks}, {"prices", panel.prices},
                        {"dropped_rows", panel.dropped_rows}}.dump(2) + "\n";
        return prices_csv(panel);
    }
    const ReturnPanel r = log_returns(panel);
    if (o.emit == "returns") {
        if (f == Format::json)
            return json{{"dates", r.dates}, {"stocks", r.stocks}, {"returns", r.returns}}.dump(2) + "\n";
        return returns_csv(r);
    }
    if (o.emit == "pmf") {
        const BinGrid grid = global_bin_grid(r, o.bins);
        if (f == Format::json) {
            json pmfs = json::object();
            for (std::size_t s = 0; s < r.stock_count(); ++s) {
                const auto p = empirical_pmf(r.returns[s], grid);
                pmfs[r.stocks[s]] = std::vector<double>(p.probs().begin(), p.probs().end());
            }
            return json{{"r_min", grid.r_min}, {"r_max", grid.r_max}, {"bins", grid.bins},
                        {"delta", grid.delta}, {"pmf", pmfs}}.dump(2) + "\n";
        }
        return pmf_csv(r, grid);
    }
    throw ValidationError(fmt::format("unknown --emit '{}' (expected prices, returns or pmf)", o.emit));
}

std::string factors_output(const StockRiskFactors& fac, Format f) {
    if (f == Format::csv) return risk_factors_csv(fac);
    if (f == Format::json) {
        json j = json::array();
        for (std::size_t i = 0; i < fac.size(); ++i)
            j.push_back({{"stock", fac.stocks[i]}, {"neu", fac.neu[i]}, {"nv", fac.nv[i]}, {"h_alpha", fac.h_alpha[i]}});
        return j.dump(2) + "\n";
    }
    std::string out = fmt::format("{:<10}{:>10}{:>10}{:>12}\n", "stock", "NEU", "NV", "H_alpha");
    for (std::size_t i = 0; i < fac.size(); ++i)
        out += fmt::format("{:<10}{:>10.4f}{:>10.4f}{:>12.6f}\n", fac.stocks[i], fac.neu[i], fac.nv[i], fac.h_alpha[i]);
    return out;
}

std::string cmd_factors(const Options& o) {
    const Format f = parse_format(o.format, Format::csv);
    return factors_output(risk_factors(require_prices(o), factor_options(o)), f);
}

StockRiskFactors load_factors(const Options& o) {
    if (!o.factors.empty() && !o.prices.empty()) throw ValidationError("give either --factors or --prices, not both");
    if (!o.factors.empty()) return load_risk_factors(o.factors);
    if (!o.prices.empty()) return risk_factors(load_prices(o.prices), factor_options(o));
    throw ValidationError("need --factors FILE or --prices FILE");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", path));
    out << content;
    if (!out) throw ValidationError(fmt::format("failed writing '{}'", path));
}

std::string cmd_select(const Options& o) {
    const Format f = parse_format(o.format, Format::csv);
    const StockRiskFactors fac = load_factors(o);
    const RiskMeasure measure = parse_risk_measure(o.measure);
    (void)FractionalOrder(o.alpha);
    if (o.top < 1 || o.top > fac.size())
        throw RangeError(fmt::format("--top {} is outside [1, {}]", o.top, fac.size()));

    if (!o.features_out.empty()) {
        const auto grid = lambda_grid(o.lambda_step);
        write_file(o.features_out, feature_table_csv(build_feature_table(fac, o.alpha, measure, grid)));
    }

    if (o.direct) {
        const auto ranking = rank_by_score(fac.stocks, direct_risk_scores(fac, o.lambda, measure));
        if (f == Format::csv) return ranking_csv(ranking);
        if (f == Format::json) {
            json j = json::array();
            for (std::size_t r = 0; r < ranking.stocks.size(); ++r)
                j.push_back({{"rank", r + 1}, {"stock", ranking.stocks[r]}, {"score", ranking.scores[r]}});
            return j.dump(2) + "\n";
        }
        std::string out = fmt::format("{:>4}  {:<10}{:>10}\n", "rank", "stock", "score");
        for (std::size_t r = 0; r < ranking.stocks.size(); ++r)
            out += fmt::format("{:>4}  {:<10}{:>10.4f}{}\n", r + 1, ranking.stocks[r], ranking.scores[r],
                               r < o.top ? "  *" : "");
        return out;
    }

    BootstrapConfig bc;
    bc.replicates = o.bootstrap;
    bc.seed = o.seed;
    bc.threads = threads_of(o);
    bc.lambda_step = o.lambda_step;
    bc.train.max_epochs = o.epochs;
    bc.train.hidden = o.hidden;
    bc.train.patience = o.patience;
    bc.train.gradient_descent = o.gradient_descent;
    const auto outcome = bootstrap_rank(fac, o.alpha, o.lambda, measure, bc);
    const auto top = select_top_k(outcome.ranking, o.top);

    if (f == Format::csv) return ranking_csv(outcome);
    const auto& res = outcome.result;
    auto index = [&](const std::string& s) {
        return static_cast<std::size_t>(std::find(res.stocks.begin(), res.stocks.end(), s) - res.stocks.begin());
    };
    if (f == Format::json) {
        json ranks = json::array();
        for (std::size_t r = 0; r < outcome.ranking.stocks.size(); ++r) {
            const auto s = index(outcome.ranking.stocks[r]);
            ranks.push_back({{"rank", r + 1}, {"stock", res.stocks[s]}, {"mean_risk", res.mean[s]},
                             {"ci_lo", res.ci_lo[s]}, {"ci_hi", res.ci_hi[s]}});
        }
        return json{{"alpha", o.alpha}, {"lambda", o.lambda}, {"measure", std::string(to_string(measure))},
                    {"replicates", res.replicates}, {"seed", o.seed}, {"ranking", ranks}, {"top", top}}
                   .dump(2) + "\n";
    }
    std::string out = fmt::format("{:>4}  {:<10}{:>12}{:>24}\n", "rank", "stock", "mean risk", "95% CI");
    for (std::size_t r = 0; r < outcome.ranking.stocks.size(); ++r) {
        const auto s = index(outcome.ranking.stocks[r]);
        out += fmt::format("{:>4}  {:<10}{:>12.4f}{:>24}\n", r + 1, res.stocks[s], res.mean[s],
                           fmt::format("[{:.4f}, {:.4f}]", res.ci_lo[s], res.ci_hi[s]));
    }
    out += fmt::format("top {}: {}\n", o.top, fmt::join(top, ", "));
    return out;
}

// ---- frontiers --------------------------------------------------------------------

SolveOptions solve_options(const Options& o) {
    SolveOptions so;
    so.long_only = !o.unconstrained;
    return so;
}

std::string cmd_frontier(const Options& o) {
    const Format f = parse_format(o.format, Format::csv);
    const ReturnPanel r = log_returns(require_prices(o));
    std::vector<std::string> subset;
    if (!o.subset.empty()) subset = parse_labels(o.subset);
    const AssetMoments m = estimate_moments(r, subset);
    const Frontier fr = efficient_frontier(m, o.points, threads_of(o), solve_options(o));
    if (f == Format::csv) return frontier_csv(fr);
    if (f == Format::json) {
        json pts = json::array();
        for (const auto& p : fr.points)
            pts.push_back({{"target_return", p.target_return}, {"variance", p.variance}, {"weights", p.weights}});
        return json{{"assets", fr.labels}, {"points", pts}}.dump(2) + "\n";
    }
    std::string out = fmt::format("{:>14}{:>14}{:>14}\n", "target_return", "variance", "stddev");
    for (const auto& p : fr.points)
        out += fmt::format("{:>14.6e}{:>14.6e}{:>14.6e}\n", p.target_return, p.variance, std::sqrt(p.variance));
    return out;
}

std::vector<std::string> subset_from_ranking(const std::string& path, std::size_t k) {
    const csv::Table t = csv::read_file(path);
    const auto rank_col = t.column("rank");
    const auto stock_col = t.column("stock");
    if (!rank_col || !stock_col) throw IngestionError(fmt::format("{}: ranking CSV needs rank and stock columns", path));
    std::vector<std::pair<double, std::string>> rows;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto r = csv::parse_number(t.rows[i][*rank_col]);
        if (!r) throw IngestionError(fmt::format("{}: line {}: bad rank", path, t.line_numbers[i]));
        rows.emplace_back(*r, std::string(csv::trim(t.rows[i][*stock_col])));
    }
    std::sort(rows.begin(), rows.end());
    if (k < 1 || k > rows.size()) throw RangeError(fmt::format("--top {} is outside [1, {}]", k, rows.size()));
    std::vector<std::string> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(rows[i].second);
    return out;
}

std::string cmd_compare(const Options& o) {
    const Format f = parse_format(o.format, Format::csv);
    const ReturnPanel r = log_returns(require_prices(o));
    std::vector<std::string> subset;
    if (!o.subset.empty() && !o.ranking.empty()) throw ValidationError("give either --subset or --ranking, not both");
    if (!o.subset.empty())
        subset = parse_labels(o.subset);
    else if (!o.ranking.empty())
        subset = subset_from_ranking(o.ranking, o.top);
    else
        throw ValidationError("compare needs --subset LIST or --ranking FILE");

    const unsigned threads = threads_of(o);
    const AssetMoments all = estimate_moments(r);
    const AssetMoments sub = restrict_moments(all, subset);
    const Frontier fu = efficient_frontier(all, o.points, threads, solve_options(o));
    const Frontier fs = efficient_frontier(sub, o.points, threads, solve_options(o));
    const FrontierComparison c = compare_frontiers(fu, fs, o.threshold);

    if (f == Format::csv) return comparison_csv(c);
    if (f == Format::json) {
        json rows = json::array();
        for (const auto& row : c.rows)
            rows.push_back({{"target_return", row.target_return}, {"var_universe", row.var_universe},
                            {"var_subset", row.var_subset}, {"gap", row.gap}, {"rel_gap", row.rel_gap}});
        return json{{"subset", subset}, {"threshold", c.threshold},
                    {"crossover_return", c.crossover_return ? json(*c.crossover_return) : json(nullptr)},
                    {"universe_max_return", c.universe_max_return}, {"subset_max_return", c.subset_max_return},
                    {"rows", rows}}.dump(2) + "\n";
    }
    std::string out = fmt::format("subset: {}\n", fmt::join(subset, ", "));
    out += fmt::format("{:>14}{:>14}{:>14}{:>10}\n", "target_return", "var_universe", "var_subset", "rel_gap");
    for (const auto& row : c.rows)
        out += fmt::format("{:>14.6e}{:>14.6e}{:>14.6e}{:>10.4f}\n", row.target_return, row.var_universe,
                           row.var_subset, row.rel_gap);
    out += fmt::format("max return: universe {:.6e}, subset {:.6e}\n", c.universe_max_return, c.subset_max_return);
    out += c.crossover_return
               ? fmt::format("crossover: relative gap below {:.2f}% for target returns >= {:.6e}\n", 100 * c.threshold,
                             *c.crossover_return)
               : fmt::format("crossover: relative gap never stays below {:.2f}%\n", 100 * c.threshold);
    return out;
}

// ---- wiring -------------------------------------------------------------------

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "csv, json or text");
    cmd->add_option("-o,--output", o.output, "write results to this file instead of stdout");
    cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads (default: FRACDEC_THREADS or 1)");
}

void add_model(CLI::App* cmd, Options& o) {
    cmd->add_option("--alpha", o.alpha, "fractional order in (0, 1]")->capture_default_str();
    cmd->add_option("--lambda", o.lambda, "risk tradeoff factor in [0, 1]")->capture_default_str();
    cmd->add_option("--measure", o.measure, "eu-fe or eu-fev")->capture_default_str();
    cmd->add_option("--utility", o.utility, "linear (x), logarithm (log), square_root (sqrt), square (x2), s_shaped (s)");
    cmd->add_option("--base", o.base, "logarithm base: natural or ten")->capture_default_str();
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional-entropy risk measures for decisions and portfolio selection", "fracdec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fracdec 1.0.0");
    Options o;

    auto* entropy = app.add_subcommand("entropy", "fractional (Ubriaco) entropy of a pmf or portfolio");
    add_common(entropy, o);
    entropy->add_option("--pmf", o.pmf, "comma-separated probabilities");
    entropy->add_flag("--normalize", o.normalize, "scale --pmf weights to sum to 1");
    entropy->add_option("--case", o.case_name, "built-in portfolio: Di, Lc, Mc, Hy");
    entropy->add_option("--alpha", o.alpha, "fractional order in (0, 1]")->capture_default_str();
    entropy->add_option("--alphas", o.alphas, "comma-separated list of orders");
    entropy->add_option("--base", o.base, "natural or ten")->capture_default_str();
    entropy->add_flag("--table", o.table, "the portfolio entropy table");
    entropy->add_option("--base-policy", o.base_policy, "for --table: natural, ten or mixed")->capture_default_str();

    auto* decide = app.add_subcommand("decide", "risk of each action and their ranking");
    add_common(decide, o);
    add_model(decide, o);
    decide->add_option("--problem", o.problem, "decision problem JSON file");
    decide->add_option("--case", o.case_name, "built-in case: nawrocki-harding, levy, allais");

    auto* intervals = app.add_subcommand("intervals", "preference regions over lambda for pairs of actions");
    add_common(intervals, o);
    add_model(intervals, o);
    intervals->add_option("--problem", o.problem, "decision problem JSON file");
    intervals->add_option("--case", o.case_name, "built-in case");
    intervals->add_option("--first", o.first, "label of the first action");
    intervals->add_option("--second", o.second, "label of the second action");

    auto* book = app.add_subcommand("casebook", "reference tables for the built-in cases");
    add_common(book, o);
    add_model(book, o);
    book->add_option("--case", o.case_name, "levy, allais, nawrocki-harding, or a portfolio (Di, Lc, Mc, Hy)");
    book->add_flag("--sweep", o.sweep, "append risk as a function of alpha at --lambda");
    book->add_option("--alphas", o.alphas, "alpha grid for the entropy table or --sweep");
    book->add_option("--base-policy", o.base_policy, "entropy table: natural, ten or mixed")->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "validate a price CSV and emit prices, returns or pmfs");
    add_common(ingest, o);
    ingest->add_option("--prices", o.prices, "price CSV (date,STOCK1,...)");
    ingest->add_option("--emit", o.emit, "prices, returns or pmf")->capture_default_str();
    ingest->add_option("--bins", o.bins, "number of return bins J")->capture_default_str();

    auto* factors = app.add_subcommand("factors", "per-stock NEU, NV and H_alpha from prices");
    add_common(factors, o);
    add_model(factors, o);
    factors->add_option("--prices", o.prices, "price CSV");
    factors->add_option("--bins", o.bins, "number of return bins J")->capture_default_str();
    factors->add_flag("--sample-variance", o.sample_variance, "divide by N-1 instead of N");

    auto* select = app.add_subcommand("select", "rank stocks by bootstrapped surrogate risk");
    add_common(select, o);
    add_model(select, o);
    select->add_option("--factors", o.factors, "risk factor CSV (stock,neu,nv,h_alpha)");
    select->add_option("--prices", o.prices, "price CSV, factors computed on the fly");
    select->add_option("--bins", o.bins, "number of return bins J")->capture_default_str();
    select->add_option("--bootstrap", o.bootstrap, "bootstrap replicates B")->capture_default_str();
    select->add_option("--top", o.top, "number of stocks to select")->capture_default_str();
    select->add_option("--epochs", o.epochs, "maximum training epochs")->capture_default_str();
    select->add_option("--hidden", o.hidden, "hidden units")->capture_default_str();
    select->add_option("--patience", o.patience, "early-stopping patience (0 disables)")->capture_default_str();
    select->add_flag("--gradient-descent", o.gradient_descent, "train with plain gradient descent");
    select->add_option("--lambda-step", o.lambda_step, "lambda grid step of the training table")->capture_default_str();
    select->add_option("--features-out", o.features_out, "also write the feature table CSV here");
    select->add_flag("--direct", o.direct, "rank by the direct formula, no surrogate");

    auto* frontier = app.add_subcommand("frontier", "long-only mean-variance efficient frontier");
    add_common(frontier, o);
    frontier->add_option("--prices", o.prices, "price CSV");
    frontier->add_option("--subset", o.subset, "comma-separated stock labels");
    frontier->add_option("--points", o.points, "frontier points")->capture_default_str();
    frontier->add_flag("--unconstrained", o.unconstrained, "allow short positions");

    auto* compare = app.add_subcommand("compare", "subset frontier against the full universe");
    add_common(compare, o);
    compare->add_option("--prices", o.prices, "price CSV");
    compare->add_option("--subset", o.subset, "comma-separated stock labels");
    compare->add_option("--ranking", o.ranking, "ranking CSV; the first --top stocks form the subset");
    compare->add_option("--top", o.top, "subset size taken from --ranking")->capture_default_str();
    compare->add_option("--points", o.points, "frontier points")->capture_default_str();
    compare->add_option("--threshold", o.threshold, "relative variance gap for the crossover")->capture_default_str();
    compare->add_flag("--unconstrained", o.unconstrained, "allow short positions");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << one_line(e.what()) << "\n";
        err << "usage: fracdec <entropy|decide|intervals|casebook|ingest|factors|select|frontier|compare> [options]; "
               "see fracdec --help\n";
        return exit_usage;
    }

    try {
        std::string result;
        if (*entropy) result = cmd_entropy(o);
        else if (*decide) result = cmd_decide(o);
        else if (*intervals) result = cmd_intervals(o);
        else if (*book) result = cmd_casebook(o);
        else if (*ingest) result = cmd_ingest(o);
        else if (*factors) result = cmd_factors(o);
        else if (*select) result = cmd_select(o);
        else if (*frontier) result = cmd_frontier(o);
        else if (*compare) result = cmd_compare(o);
        if (o.output.empty())
            out << result;
        else
            write_file(o.output, result);
        return exit_ok;
    } catch (const ValidationError& e) {
        err << "error: " << one_line(e.what()) << "\n";
        return exit_validation;
    } catch (const ComputationError& e) {
        err << "error: " << one_line(e.what()) << "\n";
        return exit_computation;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << one_line(e.what()) << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << "error: internal: " << one_line(e.what()) << "\n";
        return exit_computation;
    }
}

int run(int argc, char** argv) {
    return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace fracdec::cli
