#ifndef TRUNCVOTE_CLI_HPP
#define TRUNCVOTE_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "classify.hpp"
#include "errors.hpp"
#include "manipulation.hpp"
#include "reductions.hpp"
#include "rules.hpp"
#include "sampling.hpp"
#include "text_format.hpp"
#include "uncertainty.hpp"

// Command-line front end. run_command is the whole program minus process I/O.

namespace truncvote::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_budget = 3;

struct CommandResult {
    int exit_code = exit_ok;
    std::string out;
    std::string err;
};

class UsageError : public Error {
public:
    using Error::Error;
};

namespace detail {

using json = nlohmann::ordered_json;

class Digest {
public:
    void add(std::string_view s) {
        for (unsigned char c : s) {
            h_ ^= c;
            h_ *= 0x100000001b3ULL;
        }
        h_ ^= 0xff; // field separator
        h_ *= 0x100000001b3ULL;
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
        return buf;
    }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct Options {
    bool json = false;
    std::uint64_t budget = 100'000'000;
    std::string file;
    std::string rule;
    std::string model = "nonunique";
    std::string tiebreak = "lex";
    std::string goal = "cwcm";
    std::string target;
    std::string solver = "brute";
    bool weak = false;
    bool complete_only = false;
    std::string family;
    bool check = false;
    int max_t = 6;
    Weight max_value = 10;
    int sample = 0;
    int sample_t = 8;
    std::uint64_t seed = 1;
    bool partial = false;
    bool prob = false;
    bool fast = false;
    std::string r = "0";
    Weight weight = 0;
    int instances = 200;
    int grid_t = 4;
    Weight grid_value = 6;
};

class Runner {
public:
    Runner(std::string command, Options opts, Digest digest)
        : command_(std::move(command)), o_(std::move(opts)), digest_(digest) {}

    CommandResult run() {
        if (command_ == "winners") winners();
        else if (command_ == "manipulate") manipulate();
        else if (command_ == "reduce") reduce();
        else if (command_ == "verify") verify();
        else if (command_ == "evaluate") evaluate();
        else if (command_ == "cwim") cwim();
        else classify_table();
        CommandResult out;
        if (o_.json) {
            json doc;
            doc["command"] = command_;
            doc["inputs_digest"] = digest_.hex();
            doc["result"] = result_;
            out.out = doc.dump(2) + "\n";
        } else {
            out.out = text_.str();
        }
        return out;
    }

private:
    std::string read(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("cannot read '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string s = ss.str();
        digest_.add(s);
        return s;
    }

    ProfileDocument load() {
        ProfileDocument doc = parse_profile(read(o_.file));
        names_ = doc.names;
        return doc;
    }

    WinnerModel model() const { return o_.model == "unique" ? WinnerModel::Unique : WinnerModel::NonUnique; }

    TieBreak tiebreak() const {
        if (o_.tiebreak == "opt") return TieBreak::Optimistic;
        if (o_.tiebreak == "pess") return TieBreak::Pessimistic;
        return TieBreak::Lexicographic;
    }

    CandidateId target() const {
        const auto it = std::find(names_.begin(), names_.end(), o_.target);
        if (it == names_.end()) throw UsageError("unknown candidate '" + o_.target + "'");
        return CandidateId{static_cast<int>(it - names_.begin())};
    }

    std::string name(CandidateId c) const { return names_.at(static_cast<std::size_t>(c.index)); }

    std::string joined(const std::vector<CandidateId>& cs) const {
        std::string s;
        for (std::size_t i = 0; i < cs.size(); ++i) s += (i ? ", " : "") + name(cs[i]);
        return s;
    }

    json names_of(const std::vector<CandidateId>& cs) const {
        json a = json::array();
        for (CandidateId c : cs) a.push_back(name(c));
        return a;
    }

    json ballots(const std::vector<TopOrder>& bs) const {
        json a = json::array();
        for (const auto& b : bs) a.push_back(names_of(std::vector<CandidateId>(b.begin(), b.end())));
        return a;
    }

    void print_ballots(const std::string& label, const std::vector<TopOrder>& bs) {
        text_ << label << ":\n";
        for (const auto& b : bs) text_ << "  " << format_ballot(b, names_) << '\n';
    }

    void winners() {
        const ProfileDocument doc = load();
        const auto* profile = std::get_if<Profile>(&doc.body);
        if (!profile) throw UsageError("winners needs a profile of complete or top-truncated votes");
        const RuleSpec rule = parse_rule(o_.rule, doc.m());
        const auto w = truncvote::winners(*profile, rule, model(), tiebreak());
        result_["rule"] = to_string(rule);
        result_["winners"] = names_of(w);
        text_ << "rule: " << to_string(rule) << '\n' << "winners: " << joined(w) << '\n';
        if (const auto* e = std::get_if<EliminationRule>(&rule); e && tiebreak() == TieBreak::Lexicographic) {
            const auto order = run_elimination(*profile, e->vector, tiebreak()).elimination_order;
            result_["elimination_order"] = names_of(order);
            text_ << "elimination order: " << joined(order) << '\n';
        }
        if (is_elimination_rule(rule)) return;
        const auto scores = rule_scores(*profile, rule);
        std::vector<int> idx(scores.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
        });
        json js = json::array();
        text_ << "scores: ";
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const CandidateId c{idx[i]};
            const std::string v = scores[static_cast<std::size_t>(c.index)].to_string();
            text_ << (i ? ", " : "") << name(c) << ':' << v;
        }
        for (std::size_t c = 0; c < scores.size(); ++c) js.push_back({{"candidate", names_[c]}, {"score", scores[c].to_string()}});
        text_ << '\n';
        result_["scores"] = js;
    }

    void manipulate() {
        const ProfileDocument doc = load();
        const auto* profile = std::get_if<Profile>(&doc.body);
        if (!profile) throw UsageError("manipulate needs a profile of complete or top-truncated votes");
        if (!doc.manipulators) throw UsageError("profile has no manipulators line");
        ManipulationInstance inst;
        inst.m = doc.m();
        inst.fixed = profile->votes();
        inst.manipulator_weights = *doc.manipulators;
        inst.rule = parse_rule(o_.rule, doc.m());
        inst.model = model();
        inst.tiebreak = tiebreak();
        inst.names = doc.names;
        const CandidateId t = target();
        if (o_.goal == "cwcm") inst.goal = Constructive{t};
        else if (o_.goal == "dwcm") inst.goal = Destructive{t};
        else inst.goal = AntiLowest{t, !o_.weak};

        ManipulationOutcome res;
        if (o_.solver == "brute") {
            BruteOptions b;
            b.budget = o_.budget;
            b.complete_only = o_.complete_only;
            res = solve_brute(inst, b);
        } else if (o_.solver == "dp3") {
            res = solve_dp3(inst);
        } else {
            const auto* e = std::get_if<EliminationRule>(&inst.rule);
            const bool elim_veto = e && e->vector.veto_like();
            if (o_.goal == "cwcm") res = elim_veto ? cwcm_eliminate_veto_unique(inst) : cwcm_fast(inst);
            else if (o_.goal == "dwcm") res = elim_veto ? dwcm_eliminate_veto(inst) : dwcm_fast(inst);
            else res = antiwcm_fast(inst);
        }
        result_["rule"] = to_string(inst.rule);
        result_["goal"] = o_.goal;
        result_["target"] = o_.target;
        result_["solver"] = o_.solver;
        result_["feasible"] = res.feasible;
        text_ << "rule: " << to_string(inst.rule) << '\n'
              << "goal: " << o_.goal << ' ' << o_.target << '\n'
              << "feasible: " << (res.feasible ? "yes" : "no") << '\n';
        if (res.witness) {
            result_["witness"] = ballots(*res.witness);
            print_ballots("witness", *res.witness);
        }
    }

    ReductionFamily family(const std::string& s) const {
        for (ReductionFamily f : all_reduction_families) {
            if (to_string(f) == s) return f;
        }
        throw UsageError("unknown family '" + s + "'");
    }

    RuleSpec params(ReductionFamily f) const { return o_.rule.empty() ? default_params(f) : parse_rule(o_.rule, 3); }

    void reduce() {
        const ReductionFamily f = family(o_.family);
        const NumberInstance numbers = parse_numbers(read(o_.file), source_kind(f));
        const RuleSpec rule = params(f);
        const GeneratedInstance g = gen_instance(f, numbers, rule);
        result_["family"] = o_.family;
        text_ << "family: " << o_.family << '\n';
        std::string instance;
        if (const auto* n = std::get_if<NumberInstance>(&g)) {
            instance = serialize(*n);
        } else if (const auto* p = std::get_if<ProbabilisticInstance>(&g)) {
            instance = serialize(ProfileDocument{p->names, *p, std::nullopt});
            result_["rule"] = to_string(rule);
            result_["target"] = "p";
            text_ << "rule: " << to_string(rule) << "\ntarget: p\n";
        } else {
            const auto& inst = std::get<ManipulationInstance>(g);
            const std::string goal = std::holds_alternative<Constructive>(inst.goal) ? "cwcm" : "dwcm";
            const std::string who = document_of(inst).names.at(static_cast<std::size_t>(goal_candidate(inst.goal).index));
            instance = serialize(document_of(inst));
            result_["rule"] = to_string(inst.rule);
            result_["goal"] = goal;
            result_["target"] = who;
            text_ << "rule: " << to_string(inst.rule) << "\ngoal: " << goal << ' ' << who << '\n';
        }
        result_["instance"] = instance;
        text_ << instance;
        if (o_.check) {
            BruteOptions b;
            b.budget = o_.budget;
            const ReductionReport r = verify_reduction(f, numbers, rule, b);
            result_["oracle"] = r.oracle_answer;
            result_["solver"] = r.solver_answer;
            result_["agree"] = r.agree;
            text_ << "oracle: " << (r.oracle_answer ? "yes" : "no") << "\nsolver: " << (r.solver_answer ? "yes" : "no")
                  << "\nagree: " << (r.agree ? "yes" : "no") << '\n';
        }
    }

    void verify() {
        std::vector<ReductionFamily> fams;
        if (o_.family == "all") fams.assign(std::begin(all_reduction_families), std::end(all_reduction_families));
        else fams.push_back(family(o_.family));
        BruteOptions b;
        b.budget = o_.budget;
        bool all = true;
        json rows = json::array();
        for (ReductionFamily f : fams) {
            const RuleSpec rule = params(f);
            std::vector<NumberInstance> inputs = number_grid(o_.max_t, o_.max_value, source_kind(f));
            const std::size_t wanted = inputs.size() + static_cast<std::size_t>(std::max(o_.sample, 0));
            sampling::Rng rng(o_.seed);
            while (inputs.size() < wanted) {
                NumberInstance n{{}, source_kind(f)};
                const int t = sampling::uniform(rng, 0, o_.sample_t);
                for (int i = 0; i < t; ++i) n.values.push_back(sampling::uniform(rng, 0, static_cast<int>(o_.max_value)));
                if (n.sum() % 2 == 0) inputs.push_back(std::move(n));
            }
            std::size_t agree = 0, yes = 0;
            std::optional<NumberInstance> first_bad;
            for (const auto& n : inputs) {
                const ReductionReport r = verify_reduction(f, n, rule, b);
                if (r.agree) ++agree;
                else if (!first_bad) first_bad = n;
                if (r.oracle_answer) ++yes;
            }
            const bool ok = agree == inputs.size();
            all = all && ok;
            json row;
            row["family"] = to_string(f);
            row["rule"] = to_string(rule);
            row["instances"] = inputs.size();
            row["yes"] = yes;
            row["disagree"] = inputs.size() - agree;
            row["all_agree"] = ok;
            text_ << to_string(f) << " (" << to_string(rule) << "): ";
            if (ok) {
                text_ << "all agree, " << inputs.size() << " instances, " << yes << " yes\n";
            } else {
                json vals = first_bad->values;
                row["first_disagreement"] = vals;
                text_ << inputs.size() - agree << " of " << inputs.size() << " disagree; first:";
                for (Weight v : first_bad->values) text_ << ' ' << v;
                text_ << '\n';
            }
            rows.push_back(row);
        }
        result_["families"] = rows;
        result_["all_agree"] = all;
    }

    PartialProfile as_partial(const ProfileDocument& doc) const {
        if (const auto* p = std::get_if<PartialProfile>(&doc.body)) return *p;
        PartialProfile out{doc.m(), {}, doc.names};
        for (const auto& v : std::get<Profile>(doc.body).votes()) out.revealed.push_back({v.ballot, v.weight});
        return out;
    }

    Rational threshold() const {
        const Rational r = Rational::parse(o_.r);
        if (r < 0 || r >= 1) throw UsageError("--r must lie in [0, 1)");
        return r;
    }

    void evaluate() {
        const ProfileDocument doc = load();
        const bool is_prob = std::holds_alternative<ProbabilisticInstance>(doc.body);
        if (o_.prob && !is_prob) throw UsageError("--prob given but the file holds no probabilistic votes");
        if (o_.partial && is_prob) throw UsageError("--partial given but the file is probabilistic");
        const RuleSpec rule = parse_rule(o_.rule, doc.m());
        const CandidateId p = target();
        const Rational r = threshold();
        SearchOptions s;
        s.budget = o_.budget;
        if (is_prob) {
            const Rational pr = weighted_eval_exact(std::get<ProbabilisticInstance>(doc.body), rule, p, model(), tiebreak(), {}, s);
            result_["probability"] = pr.to_string();
            result_["exceeds_r"] = pr > r;
            text_ << "probability: " << pr << '\n' << "exceeds " << r << ": " << (pr > r ? "yes" : "no") << '\n';
            return;
        }
        if (r != 0) throw UsageError("partial profiles support only --r 0");
        const PartialProfile partial = as_partial(doc);
        const EvaluationResult e = o_.fast ? evaluate_fast(partial, rule, p, model(), tiebreak())
                                           : evaluate_possible(partial, rule, p, model(), tiebreak(), {}, s);
        result_["possible"] = e.possible;
        text_ << "possible: " << (e.possible ? "yes" : "no") << '\n';
        if (e.witness_extension) {
            result_["witness_extension"] = ballots(*e.witness_extension);
            print_ballots("extension", *e.witness_extension);
        }
    }

    void cwim() {
        const ProfileDocument doc = load();
        const RuleSpec rule = parse_rule(o_.rule, doc.m());
        const CandidateId p = target();
        const Rational r = threshold();
        SearchOptions s;
        s.budget = o_.budget;
        ManipulationOutcome res;
        if (const auto* prob = std::get_if<ProbabilisticInstance>(&doc.body)) {
            res = cwim_u(*prob, o_.weight, p, r, rule, model(), tiebreak(), s);
        } else {
            if (r != 0) throw UsageError("partial profiles support only --r 0");
            res = cwim_ttu(as_partial(doc), o_.weight, p, rule, model(), tiebreak(), s);
        }
        result_["feasible"] = res.feasible;
        text_ << "feasible: " << (res.feasible ? "yes" : "no") << '\n';
        if (res.witness) {
            result_["witness"] = ballots(*res.witness);
            print_ballots("manipulator ballot", *res.witness);
        }
    }

    void classify_table() {
        ClassifyOptions c;
        c.seed = o_.seed;
        c.instances = o_.instances;
        c.grid_max_t = o_.grid_t;
        c.grid_max_value = o_.grid_value;
        const ClassifyReport rep = classify(c);
        json rows = json::array();
        const auto cell = [](const CellReport& r) {
            json j;
            j["expected"] = to_string(r.expected);
            j["method"] = r.method;
            j["checked"] = r.checked;
            j["agreed"] = r.agreed;
            if (r.expected == Evidence::Hard) j["yes_instances"] = r.yes_instances;
            if (r.expected != Evidence::Cited) j["supported"] = r.supported;
            return j;
        };
        const auto status = [](const CellReport& r) -> std::string {
            if (r.expected == Evidence::Cited) return "cited";
            return r.supported ? "supported" : "NOT supported";
        };
        char line[160];
        std::snprintf(line, sizeof line, "%-22s %-14s %-14s\n", "rule", "CWCM", "DWCM");
        text_ << line;
        for (const auto& row : rep.rows) {
            std::snprintf(line, sizeof line, "%-22s %-14s %-14s\n", row.rule.c_str(), to_string(row.cwcm.expected).c_str(),
                          to_string(row.dwcm.expected).c_str());
            text_ << line;
            for (const auto* c2 : {&row.cwcm, &row.dwcm}) {
                text_ << "    " << (c2 == &row.cwcm ? "CWCM" : "DWCM") << ": " << c2->method;
                if (c2->expected != Evidence::Cited) text_ << ", " << c2->agreed << '/' << c2->checked << " agree";
                if (c2->expected == Evidence::Hard) text_ << ", " << c2->yes_instances << " yes";
                text_ << " [" << status(*c2) << "]\n";
            }
            rows.push_back({{"rule", row.rule}, {"cwcm", cell(row.cwcm)}, {"dwcm", cell(row.dwcm)}});
        }
        text_ << (rep.all_supported() ? "pattern reproduced\n" : "pattern NOT reproduced\n");
        result_["rows"] = rows;
        result_["pattern_reproduced"] = rep.all_supported();
    }

    std::string command_;
    Options o_;
    Digest digest_;
    std::vector<std::string> names_;
    json result_ = json::object();
    std::ostringstream text_;
};

} // namespace detail

/// Parses argv (without the program name) and runs one subcommand.
inline CommandResult run_command(const std::vector<std::string>& args) {
    detail::Options o;
    CLI::App app{"Weighted elections with top-truncated ballots", "truncvote"};
    app.require_subcommand(1);
    app.add_flag("--json", o.json, "emit a JSON report");
    app.add_option("--budget", o.budget, "search budget in evaluated leaves");

    const std::vector<std::string> models{"unique", "nonunique"};
    const std::vector<std::string> ties{"lex", "opt", "pess"};
    const auto common = [&](CLI::App* sub, bool needs_target) {
        sub->add_option("file", o.file, "profile file")->required();
        sub->add_option("--rule", o.rule, "rule spec, e.g. scoring:borda:down")->required();
        sub->add_option("--model", o.model)->check(CLI::IsMember(models));
        sub->add_option("--tiebreak", o.tiebreak)->check(CLI::IsMember(ties));
        if (needs_target) sub->add_option("--target", o.target, "candidate name")->required();
    };

    auto* winners = app.add_subcommand("winners", "winners and scores of a profile");
    common(winners, false);

    auto* manip = app.add_subcommand("manipulate", "coalitional manipulation");
    common(manip, true);
    manip->add_option("--goal", o.goal)->check(CLI::IsMember({"cwcm", "dwcm", "anti"}));
    manip->add_option("--solver", o.solver)->check(CLI::IsMember({"brute", "fast", "dp3"}));
    manip->add_flag("--weak", o.weak, "lowest-score goal allows ties");
    manip->add_flag("--complete-only", o.complete_only, "restrict manipulators to complete orders");

    std::vector<std::string> family_names;
    for (ReductionFamily f : all_reduction_families) family_names.push_back(to_string(f));
    auto* reduce = app.add_subcommand("reduce", "build a reduction instance from a number file");
    reduce->add_option("file", o.file, "number file, one integer per line")->required();
    reduce->add_option("--family", o.family)->required()->check(CLI::IsMember(family_names));
    reduce->add_option("--rule", o.rule, "override the family's default rule");
    reduce->add_flag("--check", o.check, "also run the oracle and the solver");

    auto* verify = app.add_subcommand("verify", "sweep a family over small number instances");
    std::vector<std::string> verify_names = family_names;
    verify_names.push_back("all");
    verify->add_option("--family", o.family)->required()->check(CLI::IsMember(verify_names));
    verify->add_option("--rule", o.rule, "override the family's default rule");
    verify->add_option("--max-t", o.max_t)->check(CLI::Range(0, 12));
    verify->add_option("--max-value", o.max_value)->check(CLI::Range(0, 1000));
    verify->add_option("--sample", o.sample, "extra random instances");
    verify->add_option("--sample-t", o.sample_t)->check(CLI::Range(0, 12));
    verify->add_option("--seed", o.seed);

    auto* evaluate = app.add_subcommand("evaluate", "can p still win given partial or probabilistic votes");
    common(evaluate, true);
    evaluate->add_flag("--partial", o.partial);
    evaluate->add_flag("--prob", o.prob);
    evaluate->add_flag("--fast", o.fast, "use the polynomial strategy");
    evaluate->add_option("--r", o.r, "probability threshold");

    auto* cwim = app.add_subcommand("cwim", "single manipulator under uncertainty");
    common(cwim, true);
    cwim->add_option("--weight", o.weight)->required()->check(CLI::NonNegativeNumber);
    cwim->add_option("--r", o.r, "probability threshold");

    auto* classify = app.add_subcommand("classify", "empirical complexity table");
    classify->add_option("--seed", o.seed);
    classify->add_option("--instances", o.instances)->check(CLI::Range(1, 100000));
    classify->add_option("--grid-t", o.grid_t)->check(CLI::Range(0, 8));
    classify->add_option("--grid-value", o.grid_value)->check(CLI::Range(0, 100));

    CommandResult result;
    std::ostringstream out, err;
    std::vector<std::string> storage{"truncvote"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return {code == 0 ? exit_ok : exit_usage, out.str(), err.str()};
    }

    detail::Digest digest;
    for (const auto& a : args) digest.add(a);
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return detail::Runner(command, o, digest).run();
    } catch (const BudgetExceeded& e) {
        return {exit_budget, "", std::string("budget exhausted: ") + e.what() + "\n"};
    } catch (const std::exception& e) {
        return {exit_usage, "", std::string("error: ") + e.what() + "\n"};
    }
}

} // namespace truncvote::cli

#endif // TRUNCVOTE_CLI_HPP
