#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process. Exit codes: 0 success, 1 validation error,
// 2 resource cap exceeded.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "strlap/estimators.hpp"
#include "strlap/io.hpp"
#include "strlap/mixture.hpp"
#include "strlap/oracle.hpp"

namespace strlap::cli {

struct CorpusOptions {
    std::string path;
    std::string format = "lines";
    std::optional<std::string> alphabet;

    io::Corpus load() const { return io::ingest(path, io::parse_format(format), alphabet); }
};

inline std::string default_assignment_path(const std::string& model_path) {
    std::filesystem::path p(model_path);
    p.replace_extension();
    return p.string() + ".assignments.csv";
}

inline void emit(const std::optional<std::string>& path, std::ostream& out, const std::string& text) {
    if (path)
        io::write_file(*path, text);
    else
        out << text;
}

// ---------------------------------------------------------------------------

struct FitOptions {
    CorpusOptions corpus;
    std::size_t k = 1;
    std::string distance = "ext-hamming";
    double epsilon = 0.05;
    std::size_t max_iters = 100;
    double tol = 1e-8;
    std::size_t restarts = 4;
    std::optional<std::size_t> tau;
    std::uint64_t seed = 0;
    std::string out;
    std::optional<std::string> assignments;
};

inline int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
    const auto corpus = o.corpus.load();
    const auto metric = parse_distance_kind(o.distance);
    SphereCache cache;
    io::ModelFile model;
    model.alphabet = corpus.alphabet;
    model.metric = metric;
    model.fit.epsilon = o.epsilon;
    model.fit.seed = o.seed;
    model.fit.restarts = o.restarts;

    if (o.k == 1) {
        const auto rep = fit_laplace(corpus.strings, metric, o.epsilon, cache);
        model.params.pi = {1.0};
        model.params.lambda = {rep.lambda_hat};
        model.params.rho = {std::max(mixture::kRhoFloor, rep.rho_hat)};
        model.fit.restarts = 1;
        model.fit.iters = rep.trace ? rep.trace->converged_step : 0;
    } else {
        mixture::FitConfig cfg;
        cfg.k = o.k;
        cfg.metric = metric;
        cfg.epsilon = o.epsilon;
        cfg.max_iters = o.max_iters;
        cfg.tol_pi = cfg.tol_rho = o.tol;
        cfg.restarts = o.restarts;
        cfg.tau = o.tau;
        cfg.seed = o.seed;
        const auto fit = mixture::fit(corpus.strings, cfg, cache);
        for (const auto& c : fit.chains)
            if (c.discarded)
                err << "warning: " << c.warning << "\n";
        model.params = fit.params;
        model.fit.iters = fit.iters_used;
    }
    const auto assign = mixture::map_cluster(corpus.strings, model.params, metric, cache);
    mixture::Responsibilities z(corpus.strings.size(), model.params.k());
    for (std::size_t i = 0; i < assign.size(); ++i)
        for (std::size_t g = 0; g < model.params.k(); ++g)
            z(i, g) = assign[i].posterior[g];
    model.fit.weighted_loglik = mixture::weighted_loglik(corpus.strings, z, model.params, metric, cache);

    io::save_model(o.out, model);
    const std::string csv_path = o.assignments.value_or(default_assignment_path(o.out));
    io::write_file(csv_path, io::assignments_csv(corpus.ids, assign, model.params.k()));

    for (std::size_t g = 0; g < model.params.k(); ++g)
        out << "component " << g + 1 << ": pi=" << io::format_real(model.params.pi[g]) << " lambda=\""
            << to_text(model.params.lambda[g]) << "\" rho=" << io::format_real(model.params.rho[g]) << "\n";
    out << "weighted_loglik=" << io::format_real(model.fit.weighted_loglik) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct ClusterOptions {
    CorpusOptions corpus;
    std::string model;
    std::optional<std::string> out;
};

inline int cmd_cluster(const ClusterOptions& o, std::ostream& out) {
    const auto model = io::load_model(o.model);
    CorpusOptions copt = o.corpus;
    copt.alphabet = io::alphabet_chars(*model.alphabet);
    const auto corpus = copt.load();
    // Re-bind the parsed strings to the model's alphabet object.
    std::vector<Str> strings;
    for (const Str& s : corpus.strings)
        strings.emplace_back(model.alphabet, s.symbols());
    SphereCache cache;
    const auto assign = mixture::map_cluster(strings, model.params, model.metric, cache);
    emit(o.out, out, io::assignments_csv(corpus.ids, assign, model.params.k()));
    return 0;
}

// ---------------------------------------------------------------------------

struct SampleOptions {
    std::optional<std::string> model;
    std::optional<std::string> center;
    double rho = 1.0;
    std::optional<std::string> alphabet;
    std::string distance = "ext-hamming";
    std::size_t n = 10;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

inline int cmd_sample(const SampleOptions& o, std::ostream& out) {
    io::ModelFile model;
    if (o.model) {
        model = io::load_model(*o.model);
    } else {
        if (!o.center || !o.alphabet)
            throw Error("sample needs --model, or --center with --alphabet");
        model.alphabet = Alphabet::from_chars(*o.alphabet);
        model.metric = parse_distance_kind(o.distance);
        model.params.pi = {1.0};
        model.params.lambda = {parse(*o.center, model.alphabet)};
        model.params.rho = {o.rho};
        if (!(o.rho > 0.0))
            throw Error("--rho must be positive");
    }
    std::mt19937_64 rng(derive_seed(o.seed, 0));
    std::vector<LaplaceSampler> samplers;
    for (std::size_t g = 0; g < model.params.k(); ++g)
        samplers.emplace_back(model.params.component(g), model.metric);
    std::discrete_distribution<std::size_t> component(model.params.pi.begin(), model.params.pi.end());
    std::string text;
    for (std::size_t i = 0; i < o.n; ++i) {
        const std::size_t g = model.params.k() == 1 ? 0 : component(rng);
        text += to_text(samplers[g](rng)) + "\n";
    }
    emit(o.out, out, text);
    return 0;
}

// ---------------------------------------------------------------------------

struct SphereOptions {
    std::string center;
    std::string alphabet;
    std::string distance = "ext-hamming";
    std::size_t radius = 0;
    bool ball = false;
    bool table = false;
};

inline int cmd_sphere(const SphereOptions& o, std::ostream& out) {
    const auto alpha = Alphabet::from_chars(o.alphabet);
    SphereQuery q{parse(o.center, alpha), o.radius, parse_distance_kind(o.distance)};
    if (o.table) {
        out << "radius,sphere,ball\n";
        BigCount ball = 0;
        for (std::size_t r = 0; r <= o.radius; ++r) {
            const BigCount s = sphere_size({q.center, r, q.metric});
            ball += s;
            out << r << "," << s << "," << ball << "\n";
        }
        return 0;
    }
    out << (o.ball ? ball_size(q) : sphere_size(q)) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct MedianOptions {
    CorpusOptions corpus;
};

inline int cmd_median(const MedianOptions& o, std::ostream& out) {
    const auto corpus = o.corpus.load();
    SphereCache cache;
    const auto m = median_lev::fit(corpus.strings, {}, cache);
    out << "initial \"" << to_text(m.trace.initial) << "\"\n";
    out << "step,lambda,rho,F\n";
    for (std::size_t t = 0; t < m.trace.iterations.size(); ++t) {
        const auto& s = m.trace.iterations[t];
        out << t << ",\"" << to_text(s.lambda) << "\"," << io::format_real(s.rho) << ","
            << io::format_real(s.objective) << "\n";
    }
    out << "lambda \"" << to_text(m.lambda) << "\"\nrho " << io::format_real(m.rho) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

/// Oracle-backed self checks, including the two worked examples on the
/// binary distribution q(o)=0.2, q(0)=q(1)=0.15, q(xy)=0.125.
inline int cmd_selftest(std::ostream& out) {
    bool all = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        all = all && ok;
    };
    const auto bin = Alphabet::from_chars("01");
    const Str c00 = parse("00", bin);

    {
        std::ostringstream d;
        bool ok = true;
        const std::size_t want[] = {1, 7, 17};
        for (std::size_t r = 0; r < 3; ++r) {
            const BigCount got = sphere_size_levenshtein(c00, r);
            d << (r ? " " : "") << "|dU(00," << r << ")|=" << got;
            ok = ok && got == want[r] && oracle::brute_sphere_size(c00, r, DistanceKind::Levenshtein) == want[r];
        }
        report("levenshtein-spheres", ok, d.str());
    }

    oracle::FiniteDistribution ex;
    for (auto [text, p] : std::initializer_list<std::pair<const char*, double>>{
             {"", 0.2}, {"0", 0.15}, {"1", 0.15}, {"00", 0.125}, {"01", 0.125}, {"10", 0.125}, {"11", 0.125}}) {
        ex.support.push_back(parse(text, bin));
        ex.probs.push_back(p);
    }
    const char* centers[] = {"", "0", "00"};
    {
        const double want[] = {1.3, 0.975, 1.35};
        std::ostringstream d;
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
            const double v = oracle::expected_distance(ex, parse(centers[i], bin), DistanceKind::Levenshtein);
            d << (i ? " " : "") << "E d(s,\"" << centers[i] << "\")=" << v;
            ok = ok && std::abs(v - want[i]) <= 1e-12;
        }
        report("mean-absolute-deviation", ok, d.str());
    }
    {
        const double want[] = {2.8, 4.775, 11.0};
        std::ostringstream d;
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
            const double v = oracle::expected_phi(ex, parse(centers[i], bin), oracle::Phi::SphereSize,
                                                  DistanceKind::Levenshtein);
            d << (i ? " " : "") << "E|dU(\"" << centers[i] << "\",d)|=" << v;
            ok = ok && std::abs(v - want[i]) <= 1e-12;
        }
        report("mean-sphere-size", ok, d.str());
    }
    {
        std::size_t checked = 0, agree = 0;
        for (std::size_t a = 1; a <= 3; ++a) {
            const auto alpha = Alphabet::from_chars(std::string("abc").substr(0, a));
            for (std::size_t L = 0; L <= 3; ++L)
                for (std::size_t r = 0; r <= 4; ++r) {
                    const Str c(alpha, std::vector<Symbol>(L, 0));
                    ++checked;
                    agree += sphere_size_ext_hamming(L, r, a) ==
                             oracle::brute_sphere_size(c, r, DistanceKind::ExtHamming);
                }
        }
        report("ext-hamming-closed-form", agree == checked,
               std::to_string(agree) + "/" + std::to_string(checked) + " agree with enumeration");
    }
    {
        const LaplaceParams p(c00, 1.0);
        SphereCache cache;
        const std::size_t cap = 12;
        double mass = 0.0;
        for (std::size_t r = 0; r <= cap; ++r)
            for_each_in_sphere({c00, r, DistanceKind::ExtHamming},
                               [&](const Str& s) { mass += pmf(s, p, DistanceKind::ExtHamming, cache); });
        const double total = mass + radius_tail_mass(cap, 1.0);
        report("pmf-normalization", std::abs(total - 1.0) <= 1e-10,
               "mass+tail=" + io::format_real(total));
    }
    out << (all ? "selftest passed\n" : "selftest FAILED\n");
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Laplace-like distributions and mixtures on strings"};
    app.require_subcommand(1);

    auto add_corpus = [](CLI::App* sub, CorpusOptions& c) {
        sub->add_option("corpus", c.path, "Input corpus")->required();
        sub->add_option("--format", c.format, "lines or fasta")->check(CLI::IsMember({"lines", "fasta"}));
        sub->add_option("--alphabet", c.alphabet, "Letters, one character each (default: infer)");
    };
    const auto distances = CLI::IsMember({"ext-hamming", "levenshtein"});

    FitOptions fo;
    auto* fit = app.add_subcommand("fit", "Fit a single distribution (k=1) or a mixture");
    add_corpus(fit, fo.corpus);
    fit->add_option("--k", fo.k, "Number of components")->check(CLI::PositiveNumber);
    fit->add_option("--distance", fo.distance)->check(distances);
    fit->add_option("--epsilon", fo.epsilon, "Uniformity threshold for consensus truncation");
    fit->add_option("--max-iters", fo.max_iters);
    fit->add_option("--tol", fo.tol, "Convergence tolerance for pi and rho");
    fit->add_option("--restarts", fo.restarts);
    fit->add_option("--tau", fo.tau, "Iteration at which chains are compared");
    fit->add_option("--seed", fo.seed);
    fit->add_option("--out", fo.out, "Model JSON path")->required();
    fit->add_option("--assignments", fo.assignments, "Assignment CSV path (default: <out>.assignments.csv)");

    ClusterOptions co;
    auto* cluster = app.add_subcommand("cluster", "Assign strings to components of a saved model");
    add_corpus(cluster, co.corpus);
    cluster->add_option("--model", co.model)->required();
    cluster->add_option("--out", co.out, "Assignment CSV path (default: stdout)");

    SampleOptions so;
    auto* sample = app.add_subcommand("sample", "Draw strings from a model or a single distribution");
    sample->add_option("--model", so.model);
    sample->add_option("--center", so.center);
    sample->add_option("--rho", so.rho);
    sample->add_option("--alphabet", so.alphabet);
    sample->add_option("--distance", so.distance)->check(distances);
    sample->add_option("--n", so.n);
    sample->add_option("--seed", so.seed);
    sample->add_option("--out", so.out);

    SphereOptions sp;
    auto* sphere = app.add_subcommand("sphere", "Print the size of a sphere (or ball) of strings");
    sphere->add_option("--center", sp.center)->required();
    sphere->add_option("--alphabet", sp.alphabet)->required();
    sphere->add_option("--distance", sp.distance)->check(distances);
    sphere->add_option("--radius", sp.radius)->required();
    sphere->add_flag("--ball", sp.ball, "Print the ball size instead");
    sphere->add_flag("--table", sp.table, "Print sphere and ball sizes for every radius up to --radius");

    MedianOptions mo;
    auto* median = app.add_subcommand("median", "Levenshtein location estimate with its hill-climb trace");
    add_corpus(median, mo.corpus);

    auto* selftest = app.add_subcommand("selftest", "Run oracle-backed consistency checks");

    std::vector<const char*> argv{"strlap"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*fit)
            return cmd_fit(fo, out, err);
        if (*cluster)
            return cmd_cluster(co, out);
        if (*sample)
            return cmd_sample(so, out);
        if (*sphere)
            return cmd_sphere(sp, out);
        if (*median)
            return cmd_median(mo, out);
        if (*selftest)
            return cmd_selftest(out);
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace strlap::cli
