#include "cli.hpp"

#include "nabla/chain.hpp"
#include "nabla/error.hpp"
#include "nabla/extrema.hpp"
#include "nabla/format.hpp"
#include "nabla/fracdiff.hpp"
#include "nabla/series.hpp"
#include "nabla/timescale.hpp"
#include "nabla/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <functional>
#include <ostream>

namespace nabla::cli {

namespace {

using json = nlohmann::ordered_json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Args {
    std::string ts, fn, gn, at, a, b, anchor, mode;
    std::string alpha = "1";
    std::vector<std::string> fns;
    unsigned m = 1;
    std::string suite = "all";
    std::uint64_t seed = VerifyOptions{}.seed;
    int cases = VerifyOptions{}.cases;
};

struct Outcome {
    json result;
    json diagnostics = json::object();
    int code = kOk;
};

json point_info(const TimeScale& ts, double t) {
    const auto pc = classify_point(ts, t);
    return {{"rho", number(rho(ts, t))},
            {"nu", number(pc.graininess)},
            {"kind", pc.kind == PointKind::LeftDense ? "left-dense" : "left-scattered"}};
}

json witness_json(const WitnessPair& w) {
    return {{"t1", number(w.t1)},   {"t2", number(w.t2)},   {"lhs", number(w.lhs)},
            {"mid", number(w.mid)}, {"rhs", number(w.rhs)}, {"alpha", w.alpha.to_string()}};
}

Outcome deriv(const Args& a) {
    const TimeScale ts = parse_timescale(a.ts);
    const RealFunction f = parse_function(a.fn);
    const double t = parse_real(a.at, "--at");
    const FracOrder alpha = parse_alpha(a.alpha);
    const auto r = nabla(ts, f, t, alpha, LimitOptions::from_env());
    Outcome o;
    o.result = {{"value", number(r.value)},
                {"method", to_string(r.method)},
                {"error_estimate", number(r.error_estimate)},
                {"samples_used", r.samples_used}};
    o.diagnostics["point"] = point_info(ts, t);
    return o;
}

Outcome extremum(const Args& a) {
    const TimeScale ts = parse_timescale(a.ts);
    const RealFunction f = parse_function(a.fn);
    const double t = parse_real(a.at, "--at");
    const auto rep = local_left_extremum(ts, f, t, parse_alpha(a.alpha), LimitOptions::from_env());
    Outcome o;
    o.result = {{"kind", to_string(rep.kind)},
                {"derivative", rep.derivative ? number(*rep.derivative) : json(nullptr)},
                {"necessary_holds", rep.necessary_holds},
                {"sufficient_holds", rep.sufficient_holds}};
    o.diagnostics["sampled"] = rep.sampled;
    o.diagnostics["point"] = point_info(ts, t);
    return o;
}

Outcome extremes(const Args& a) {
    const TimeScale ts = parse_timescale(a.ts);
    const RealFunction f = parse_function(a.fn);
    const auto e = extreme_values(ts, f, parse_real(a.a, "--a"), parse_real(a.b, "--b"));
    Outcome o;
    o.result = {{"argmin", number(e.argmin)},
                {"argmax", number(e.argmax)},
                {"min", number(e.min_value)},
                {"max", number(e.max_value)}};
    return o;
}

Outcome witnesses(WitnessKind kind, const Args& a) {
    const TimeScale ts = parse_timescale(a.ts);
    const RealFunction f = parse_function(a.fn);
    const double lo = parse_real(a.a, "--a"), hi = parse_real(a.b, "--b");
    const FracOrder alpha = parse_alpha(a.alpha);
    const auto opts = LimitOptions::from_env();
    Outcome o;
    switch (kind) {
    case WitnessKind::Rolle: o.result = witness_json(rolle_witnesses(ts, f, lo, hi, alpha, opts)); break;
    case WitnessKind::Mean: o.result = witness_json(mvt_witnesses(ts, f, lo, hi, alpha, opts)); break;
    case WitnessKind::Generalized:
        o.result = witness_json(gmvt_witnesses(ts, f, parse_function(a.gn), lo, hi, alpha, opts));
        break;
    }
    o.diagnostics["tie_break"] = "smallest t1 and smallest t2";
    return o;
}

Outcome chain(const Args& a) {
    const TimeScale ts = parse_timescale(a.ts);
    const RealFunction f = parse_function(a.fn);
    const double t = parse_real(a.at, "--at");
    const FracOrder alpha = parse_alpha(a.alpha);
    const auto opts = LimitOptions::from_env();
    Outcome o;
    if (a.mode == "inverse") {
        o.result = {{"value", number(inverse_nabla(ts, f, t, alpha, opts))}};
        return o;
    }
    if (a.gn.empty())
        throw ParseError("--gn is required for --mode " + a.mode);
    const RealFunction g = parse_function(a.gn);
    const double direct = nabla(ts, compose(f, g), t, alpha, opts).value;
    if (a.mode == "integral") {
        o.result = {{"value", number(chain_integral(ts, f, g, t, alpha, opts))}};
        o.diagnostics["direct"] = number(direct);
        o.diagnostics["naive_product"] = number(naive_chain(ts, f, g, t, alpha, opts));
    } else if (a.mode == "cpoint") {
        const auto c = chain_c_point(ts, f, g, t, alpha, opts);
        o.result = {{"c", number(c.c)}, {"lhs", number(c.lhs)}, {"rhs", number(c.rhs)}, {"residual", number(c.residual)}};
    } else {
        o.result = {{"value", number(compose_monotone(ts, g, f, t, alpha, opts))}};
        o.diagnostics["direct"] = number(direct);
    }
    return o;
}

Outcome series(const Args& a) {
    const TimeScale ts = parse_timescale(a.ts);
    const double t = parse_real(a.at, "--at");
    const FracOrder alpha = parse_alpha(a.alpha);
    const auto opts = LimitOptions::from_env();
    std::vector<RealFunction> fs;
    for (const auto& text : a.fns)
        fs.push_back(parse_function(text));
    if (fs.empty())
        throw ParseError("--fn is required");
    Outcome o;
    if (a.mode == "product") {
        const double value = general_product_rule(ts, fs, t, alpha, opts);
        const double oracle = nabla(ts, product_function(fs), t, alpha, opts).value;
        o.result = {{"value", number(value)}, {"oracle", number(oracle)}, {"difference", number(value - oracle)}};
    } else if (a.mode == "powersum") {
        const auto closed = power_sum(ts, fs.front(), t, alpha, a.m, opts);
        const auto brute = power_sum_bruteforce(ts, fs.front(), t, a.m);
        o.result = {{"value", number(closed.value)},
                    {"exact", closed.exact ? json(closed.exact->str()) : json(nullptr)},
                    {"oracle", number(brute.value)},
                    {"oracle_exact", brute.exact ? json(brute.exact->str()) : json(nullptr)}};
        o.diagnostics["exact_agreement"] =
            closed.exact && brute.exact ? json(*closed.exact == *brute.exact) : json(nullptr);
    } else {
        if (a.anchor.empty())
            throw ParseError("--anchor is required for --mode expand");
        const auto e = backward_expansion(ts, fs.front(), t, parse_real(a.anchor, "--anchor"), alpha, opts);
        json terms = json::array();
        for (double x : e.terms)
            terms.push_back(number(x));
        o.result = {{"value", number(e.value)}, {"anchor_value", number(e.anchor_value)}, {"steps", e.terms.size()},
                    {"terms", terms}};
        o.diagnostics["f_t"] = number(fs.front()(t));
    }
    return o;
}

Outcome verify(const Args& a) {
    Outcome o;
    json suites = json::array();
    json notes = json::array();
    bool ok = true;
    for (const auto& r : run_suites(a.suite, VerifyOptions{a.seed, a.cases, LimitOptions::from_env()})) {
        ok = ok && r.ok();
        suites.push_back({{"name", r.name},
                          {"seed", r.seed},
                          {"cases", r.cases},
                          {"passed", r.passed},
                          {"failed", r.failed},
                          {"first_counterexample", r.first_counterexample ? json(*r.first_counterexample) : json(nullptr)}});
        for (const auto& d : r.diagnostics)
            notes.push_back(r.name + ": " + d);
    }
    o.result = {{"ok", ok}, {"suites", suites}};
    o.diagnostics["notes"] = notes;
    o.code = ok ? kOk : kSuiteFailed;
    return o;
}

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r')
            c = ' ';
    return s;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nabla fractional derivatives on time scales", "nabla"};
    app.require_subcommand(1, 1);
    Args a;
    json inputs = json::object();
    std::vector<std::pair<CLI::App*, std::function<Outcome()>>> commands;

    auto common = [&](CLI::App* sub, bool with_point) {
        sub->add_option("--ts", a.ts, "time scale, e.g. Z, N, hZ:0.5, interval:-1:1")->required();
        sub->add_option("--fn", a.fn, "function of t")->required();
        if (with_point)
            sub->add_option("--at", a.at, "evaluation point")->required();
        sub->add_option("--alpha", a.alpha, "order p/q in (0, 1]");
    };

    auto* d = app.add_subcommand("deriv", "nabla derivative of order alpha");
    common(d, true);
    commands.emplace_back(d, [&] { return deriv(a); });

    auto* ex = app.add_subcommand("extremum", "local left-extremum test");
    common(ex, true);
    commands.emplace_back(ex, [&] { return extremum(a); });

    auto* ev = app.add_subcommand("extremes", "global extremes on [a, b]_T");
    ev->add_option("--ts", a.ts)->required();
    ev->add_option("--fn", a.fn)->required();
    ev->add_option("--a", a.a)->required();
    ev->add_option("--b", a.b)->required();
    commands.emplace_back(ev, [&] { return extremes(a); });

    const std::pair<const char*, WitnessKind> witness_commands[] = {
        {"rolle", WitnessKind::Rolle}, {"mvt", WitnessKind::Mean}, {"gmvt", WitnessKind::Generalized}};
    for (const auto& [name, kind] : witness_commands) {
        auto* w = app.add_subcommand(name, std::string(name) + " witness search");
        common(w, false);
        w->add_option("--a", a.a)->required();
        w->add_option("--b", a.b)->required();
        if (kind == WitnessKind::Generalized)
            w->add_option("--gn", a.gn, "denominator function g")->required();
        const WitnessKind k = kind;
        commands.emplace_back(w, [&a, k] { return witnesses(k, a); });
    }

    auto* c = app.add_subcommand("chain", "chain rules, monotone composition, inverse rule");
    c->add_option("--mode", a.mode)->required()->check(CLI::IsMember({"integral", "cpoint", "monotone", "inverse"}));
    common(c, true);
    c->add_option("--gn", a.gn, "inner function g");
    commands.emplace_back(c, [&] { return chain(a); });

    auto* s = app.add_subcommand("series", "product rule, power sums, backward expansion");
    s->add_option("--mode", a.mode)->required()->check(CLI::IsMember({"product", "powersum", "expand"}));
    s->add_option("--ts", a.ts)->required();
    s->add_option("--fn", a.fns, "function of t; repeat for product factors")->required();
    s->add_option("--at", a.at)->required();
    s->add_option("--alpha", a.alpha);
    s->add_option("--m", a.m, "power-sum order");
    s->add_option("--anchor", a.anchor, "expansion anchor r");
    commands.emplace_back(s, [&] { return series(a); });

    auto* v = app.add_subcommand("verify", "seeded property suites");
    std::vector<std::string> suites = {"all"};
    suites.insert(suites.end(), suite_names().begin(), suite_names().end());
    v->add_option("--suite", a.suite)->check(CLI::IsMember(suites));
    v->add_option("--seed", a.seed);
    v->add_option("--cases", a.cases)->check(CLI::NonNegativeNumber);
    commands.emplace_back(v, [&] { return verify(a); });

    std::vector<const char*> argv = {"nabla"};
    for (const auto& x : args)
        argv.push_back(x.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "nabla: parse_error: " << one_line(e.what()) << "\n";
        return kParse;
    }

    std::string command;
    std::function<Outcome()> handler;
    for (auto& [sub, fn] : commands) {
        if (sub->parsed()) {
            command = sub->get_name();
            handler = fn;
            for (const auto* opt : sub->get_options())
                if (opt->count() > 0 && !opt->get_name().empty()) {
                    const auto& res = opt->results();
                    inputs[opt->get_lnames().front()] = res.size() == 1 ? json(res.front()) : json(res);
                }
        }
    }

    json doc = {{"command", command}, {"inputs", inputs}, {"result", nullptr}, {"diagnostics", json::object()}};
    auto fail = [&](const char* kind, const std::string& message, int code, json extra = json::object()) {
        extra["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
        doc["diagnostics"] = extra;
        out << doc.dump(2) << "\n";
        err << "nabla: " << kind << ": " << one_line(message) << "\n";
        return code;
    };
    try {
        Outcome o = handler();
        doc["result"] = std::move(o.result);
        doc["diagnostics"] = std::move(o.diagnostics);
        out << doc.dump(2) << "\n";
        if (o.code == kSuiteFailed)
            err << "nabla: suite_failed: at least one property suite has failures\n";
        return o.code;
    } catch (const ParseError& e) {
        return fail("parse_error", e.what(), kParse);
    } catch (const InconclusiveSearch& e) {
        return fail("inconclusive", e.what(), kInconclusive);
    } catch (const NotDifferentiable& e) {
        json trace = json::array();
        for (double q : e.trace())
            trace.push_back(number(q));
        return fail("not_differentiable", e.what(), kDomain, {{"trace", trace}});
    } catch (const DomainError& e) {
        return fail("domain_error", e.what(), kDomain);
    } catch (const std::exception& e) {
        return fail("error", e.what(), kDomain);
    }
}

} // namespace nabla::cli
