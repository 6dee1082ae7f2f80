#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "constrank/analysis.hpp"
#include "constrank/construct.hpp"
#include "constrank/report.hpp"
#include "constrank/search.hpp"

namespace constrank::cli {

namespace {

struct Config {
    std::string command;
    std::string field = "GF(2)";
    std::string shape;
    std::size_t rank = 0;
    std::size_t dim = 0;
    std::string input;
    std::string output;
    std::uint64_t budget = 0;
    unsigned workers = 1;
    std::uint64_t sample = 0;
    std::uint64_t seed = 0;
    bool all = false;
    bool oracle = false;
    bool json = false;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<std::size_t, std::size_t> parse_shape(const std::string& text) {
    const auto x = text.find('x');
    std::size_t m = 0, n = 0;
    try {
        if (x == std::string::npos) throw std::invalid_argument("");
        std::size_t used = 0;
        m = std::stoul(text.substr(0, x), &used);
        if (used != x) throw std::invalid_argument("");
        n = std::stoul(text.substr(x + 1), &used);
        if (used != text.size() - x - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw UsageError("--shape must look like MxN, got '" + text + "'");
    }
    if (m == 0 || n == 0) throw UsageError("--shape dimensions must be positive");
    return {m, n};
}

Subspace load(const Config& cfg) {
    if (cfg.input.empty()) throw UsageError(cfg.command + " needs --input");
    std::ifstream in(cfg.input);
    if (!in) throw UsageError("cannot open " + cfg.input);
    try {
        return read_subspace(in);
    } catch (const ParseError& e) {
        throw UsageError(cfg.input + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                         e.message());
    }
}

void emit(const Config& cfg, const Report& rep, std::ostream& out) {
    const std::string doc = cfg.json ? rep.json() : rep.text();
    if (cfg.output.empty() || cfg.command == "search") {
        out << doc;
        return;
    }
    std::ofstream file(cfg.output);
    if (!file) throw UsageError("cannot write " + cfg.output);
    file << doc;
}

void write_subspace_to(const std::string& path, const Subspace& s) {
    std::ofstream file(path);
    if (!file) throw UsageError("cannot write " + path);
    write_subspace(file, s);
}

Report::List to_list(const std::vector<std::uint64_t>& v) { return Report::List(v.begin(), v.end()); }

void describe(Report& rep, const Subspace& s) {
    rep.set("field", s.gf().descriptor()).set("m", s.rows()).set("n", s.cols()).set("d", s.dim());
}

void add_general_bound(Report& rep, const GeneralBoundReport& gb) {
    rep.set("within_general_bound", gb.within_general_bound)
        .set("within_n", gb.within_n)
        .set("field_hypothesis", gb.field_hypothesis);
}

ScanOptions scan_options(const Config& cfg) {
    ScanOptions o;
    if (cfg.budget) o.budget = cfg.budget;
    o.workers = cfg.workers;
    return o;
}

/// Square input, padding with zero rows when m < n.
std::pair<Subspace, bool> squared(const Subspace& s) {
    if (s.rows() == s.cols()) return {s, false};
    if (s.rows() > s.cols()) throw UsageError("input has more rows than columns; transpose it first");
    return {pad_to_square(s), true};
}

int cmd_construct(const Config& cfg, std::ostream& out) {
    if (cfg.shape.empty() || cfg.rank == 0) throw UsageError("construct needs --shape and --rank");
    const auto [m, n] = parse_shape(cfg.shape);
    const Subspace s = truncated_construction(parse_field(cfg.field), m, n, cfg.rank);
    if (cfg.output.empty())
        write_subspace(out, s);
    else
        write_subspace_to(cfg.output, s);
    return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
    const Subspace s = load(cfg);
    Report rep;
    describe(rep, s);
    EnumerationOptions eo;
    if (cfg.budget) eo.budget = cfg.budget;
    eo.workers = cfg.workers;
    const RankProfile profile = rank_profile(s, eo);
    rep.set("rank_counts", to_list(profile.counts));
    const int common = profile.constant_rank();
    bool holds = common >= 0;
    if (cfg.rank) {
        const auto check = is_constant_rank(s, static_cast<int>(cfg.rank), eo.budget);
        holds = check.holds;
        rep.set("rank", cfg.rank);
        if (check.witness) rep.set("witness", inline_matrix(*check.witness)).set("witness_rank", check.witness_rank);
    }
    rep.set("constant_rank", common).set("holds", holds);
    if (holds) add_general_bound(rep, check_general_bound(s, scan_options(cfg)));
    emit(cfg, rep, out);
    return holds ? kOk : kViolated;
}

int cmd_census(const Config& cfg, std::ostream& out) {
    const Subspace s = load(cfg);
    Report rep;
    describe(rep, s);
    EnumerationOptions eo;
    if (cfg.budget) eo.budget = cfg.budget;
    eo.workers = cfg.workers;
    const RankProfile profile = rank_profile(s, eo);
    rep.set("rank_counts", to_list(profile.counts)).set("constant_rank", profile.constant_rank());
    if (s.rows() <= s.cols()) {
        const auto [sq, padded] = squared(s);
        const SliceCensus sc = slice_census(sq, scan_options(cfg));
        rep.set("padded", padded).set("points_by_r_u", to_list(sc.points_by_r_u)).set("min_r_u", sc.min_r_u());
    }
    emit(cfg, rep, out);
    return kOk;
}

void add_lemma2(Report& rep, const Subspace& sq, const Config& cfg) {
    const Lemma2Report l2 = check_lemma2_bound(sq, scan_options(cfg));
    rep.set("lemma2_applicable", l2.applicable)
        .set("min_r_u", l2.min_r_u)
        .set("lemma2_bound", l2.bound)
        .set("lemma2_holds", l2.holds);
}

int cmd_lemma_check(const Config& cfg, std::ostream& out) {
    const auto [sq, padded] = squared(load(cfg));
    Lemma1Options opts;
    opts.scan = scan_options(cfg);
    opts.sample = cfg.sample;
    opts.seed = cfg.seed;
    const Lemma1Report l1 = check_image_of_kernel(sq, opts);
    Report rep;
    describe(rep, sq);
    rep.set("padded", padded)
        .set("max_rank", l1.max_rank)
        .set("field_hypothesis", l1.field_hypothesis)
        .set("elements_checked", l1.elements_checked)
        .set("violations", l1.violation_count)
        .set("lemma1_holds", l1.holds);
    for (std::size_t i = 0; i < l1.violations.size(); ++i) {
        const auto& v = l1.violations[i];
        const std::string key = "violation" + std::to_string(i);
        rep.set(key + ".a", inline_matrix(v.a)).set(key + ".u", inline_matrix(v.u)).set(key + ".b", inline_matrix(v.b));
    }
    if (rank_profile(sq, {opts.scan.budget, opts.scan.workers}).constant_rank() > 0) add_lemma2(rep, sq, cfg);
    emit(cfg, rep, out);
    return l1.holds ? kOk : kViolated;
}

int cmd_counting(const Config& cfg, std::ostream& out) {
    const auto [sq, padded] = squared(load(cfg));
    const CountingReport c = counting_report(sq, scan_options(cfg));
    Report rep;
    describe(rep, sq);
    rep.set("padded", padded)
        .set("q", c.q)
        .set("r", c.r)
        .set("omega_elements", c.omega_elements)
        .set("omega_vectors", c.omega_vectors)
        .set("identity_holds", c.identity_holds)
        .set("vectors_by_r_u", to_list(c.vectors_by_r_u));
    if (c.rearranged_lhs) {
        rep.set("rearranged_lhs", *c.rearranged_lhs)
            .set("rearranged_rhs", *c.rearranged_rhs)
            .set("lhs_valuation", *c.lhs_valuation)
            .set("rhs_min_exponent", *c.rhs_min_exponent);
    }
    rep.set("contradiction", c.contradiction);
    add_lemma2(rep, sq, cfg);
    emit(cfg, rep, out);
    return c.identity_holds && !c.contradiction ? kOk : kViolated;
}

int cmd_oracle(const Config& cfg, std::ostream& out) {
    if (cfg.shape.empty() || cfg.rank == 0 || cfg.dim == 0) throw UsageError(cfg.command + " needs --shape, --rank and --dim");
    const auto [m, n] = parse_shape(cfg.shape);
    const Field f = parse_field(cfg.field);
    const std::uint64_t count = brute_force_census(f, m, n, cfg.rank, cfg.dim, cfg.budget ? cfg.budget : kDefaultCensusLimit);
    Report rep;
    rep.set("field", f->descriptor()).set("m", m).set("n", n).set("r", cfg.rank).set("d", cfg.dim);
    rep.set("subspaces_checked", census_size(f, m, n, cfg.dim)).set("constant_rank_count", count);
    emit(cfg, rep, out);
    return kOk;
}

int cmd_search(const Config& cfg, std::ostream& out) {
    if (cfg.oracle) return cmd_oracle(cfg, out);
    if (cfg.shape.empty() || cfg.rank == 0 || cfg.dim == 0) throw UsageError("search needs --shape, --rank and --dim");
    const auto [m, n] = parse_shape(cfg.shape);
    const Field f = parse_field(cfg.field);
    SearchOptions opts;
    if (cfg.budget) opts.node_budget = cfg.budget;
    opts.workers = cfg.workers;
    opts.count_all = cfg.all;
    const SearchOutcome res = search_constant_rank(f, m, n, cfg.rank, cfg.dim, opts);
    Report rep;
    rep.set("field", f->descriptor()).set("m", m).set("n", n).set("r", cfg.rank).set("d", cfg.dim);
    rep.set("status", std::string(to_string(res.status)))
        .set("nodes_explored", res.nodes_explored)
        .set("candidates", res.candidate_count);
    if (cfg.all) rep.set("found_count", res.found_count);
    if (res.witness) {
        for (std::size_t i = 0; i < res.witness->dim(); ++i)
            rep.set("witness" + std::to_string(i), inline_matrix(res.witness->basis()[i]));
        add_general_bound(rep, check_general_bound(*res.witness));
        if (!cfg.output.empty()) write_subspace_to(cfg.output, *res.witness);
    }
    emit(cfg, rep, out);
    return res.status == SearchStatus::BudgetExceeded ? kBudget : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constant rank subspaces of matrices over finite fields", "constrank"};
    app.require_subcommand(1);
    Config cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--budget", cfg.budget, "Enumeration or node limit")->check(CLI::PositiveNumber);
        sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("-o,--output", cfg.output, "Output path");
        sub->add_flag("--json", cfg.json, "Report as one JSON object");
    };
    auto add_generate = [&](CLI::App* sub, bool with_dim) {
        sub->add_option("--field", cfg.field, "Field descriptor, e.g. GF(2) or GF(3^2)[1,0,1]");
        sub->add_option("--shape", cfg.shape, "Matrix shape MxN")->required();
        sub->add_option("--rank", cfg.rank, "Rank r")->required()->check(CLI::PositiveNumber);
        if (with_dim) sub->add_option("--dim", cfg.dim, "Subspace dimension")->required()->check(CLI::PositiveNumber);
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("-i,--input", cfg.input, "Subspace file")->required();
    };

    auto* construct = app.add_subcommand("construct", "Field-extension construction of dimension n");
    add_generate(construct, false);
    add_common(construct);

    auto* verify = app.add_subcommand("verify", "Rank profile and constant-rank check");
    add_input(verify);
    verify->add_option("--rank", cfg.rank, "Expected rank")->check(CLI::PositiveNumber);
    add_common(verify);

    auto* census = app.add_subcommand("census", "Rank census and kernel slice census");
    add_input(census);
    add_common(census);

    auto* lemma = app.add_subcommand("lemma-check", "Image-of-kernel check over maximal-rank elements");
    add_input(lemma);
    lemma->add_option("--sample", cfg.sample, "Check a seeded sample of this many elements");
    lemma->add_option("--seed", cfg.seed, "Sampling seed");
    add_common(lemma);

    auto* counting = app.add_subcommand("counting", "Double count of (A, u) pairs with A u = 0");
    add_input(counting);
    add_common(counting);

    auto* search = app.add_subcommand("search", "Canonical search for a constant rank subspace");
    add_generate(search, true);
    search->add_flag("--all", cfg.all, "Exhaust the tree and count every subspace");
    search->add_flag("--oracle", cfg.oracle, "Run the brute-force census instead");
    add_common(search);

    auto* oracle = app.add_subcommand("oracle", "Brute-force census over all subspaces");
    add_generate(oracle, true);
    add_common(oracle);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (cfg.command == "construct") return cmd_construct(cfg, out);
        if (cfg.command == "verify") return cmd_verify(cfg, out);
        if (cfg.command == "census") return cmd_census(cfg, out);
        if (cfg.command == "lemma-check") return cmd_lemma_check(cfg, out);
        if (cfg.command == "counting") return cmd_counting(cfg, out);
        if (cfg.command == "search") return cmd_search(cfg, out);
        return cmd_oracle(cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::BudgetExceeded: return kBudget;
            case ErrorKind::NotConstantRank: return kViolated;
            default: return kUsage;
        }
    }
}

}  // namespace constrank::cli
