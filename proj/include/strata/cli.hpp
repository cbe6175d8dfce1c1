/*
 * Copyright 2026 The strata authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <strata/cache.hpp>
#include <strata/closedforms.hpp>
#include <strata/conditions.hpp>
#include <strata/engine.hpp>
#include <strata/interp.hpp>
#include <strata/serialize.hpp>
#include <strata/types.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace strata {

namespace cli {

enum ExitCode : int { Ok = 0, Mismatch = 1, Usage = 2, EngineFailure = 3 };

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
    case ErrorKind::OutOfValidity:
    case ErrorKind::UnknownVariable:
    case ErrorKind::InsufficientSamples:
        return Usage;
    case ErrorKind::InconsistentSamples:
        return Mismatch;
    default:
        return EngineFailure;
    }
}

inline int report(std::ostream &err, const std::string &kind, const std::string &message, int code,
                  std::optional<long> detail = std::nullopt) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    if (detail)
        j["detail"] = *detail;
    j["exit"] = code;
    err << j.dump() << '\n';
    return code;
}

struct Options {
    std::string cache_path;
    bool no_cache = false;
    std::string type;
    int n = 0;
    std::optional<long> d;
    std::string source = "engine";
    std::string view;
    std::string basis = "Q";
    bool text = false;
    std::string diagram;
    std::string labels = "auto";
    int n_lo = 0, n_hi = 0;
    std::optional<int> d_lo, d_hi, fit_n;
    bool parallel = false;
};

/// Engine results through the class cache: both the lifted and the minimal
/// class are stored, keyed by "<type>/lifted" and "<type>/minimal".
class Session {
  public:
    Session(const Options &opt, std::ostream &err) : opt_(opt), err_(err) {}

    ClassCache *cache() {
        if (opt_.no_cache)
            return nullptr;
        if (!cache_) {
            cache_.emplace(opt_.cache_path.empty() ? ClassCache::default_path()
                                                   : std::filesystem::path(opt_.cache_path));
            cache_->load();
            for (const auto &w : cache_->warnings()) {
                nlohmann::ordered_json j;
                j["warning"] = to_string(w.kind);
                j["line"] = w.line;
                j["message"] = w.message;
                err_ << j.dump() << '\n';
            }
        }
        return &*cache_;
    }

    ClassPoly engine_class(const TypeId &t, int n, const std::string &view) {
        const std::string name = t.name() + "/" + view;
        if (ClassCache *c = cache())
            for (const auto &[key, cls] : c->entries())
                if (key.type == name && key.n == n)
                    return cls;
        EngineResult r = compute_engine(t, n);
        if (ClassCache *c = cache()) {
            c->put({t.name() + "/lifted", n, CacheKey::basis_of(r.lifted.spec())}, r.lifted);
            c->put({t.name() + "/minimal", n, CacheKey::basis_of(r.minimal.spec())}, r.minimal);
        }
        return view == "lifted" ? r.lifted : r.minimal;
    }

    DPoly engine_degree(const TypeId &t, int n) { return stratum_degree(engine_class(t, n, "minimal")); }

    DPoly degree(const TypeId &t, int n) {
        return opt_.source == "oracle" ? closed_form_degree(t, n) : engine_degree(t, n);
    }

  private:
    const Options &opt_;
    std::ostream &err_;
    std::optional<ClassCache> cache_;
};

inline void require_n(int n) {
    if (n < 1)
        throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
}

inline std::string number_str(const mpq_class &v) { return v.get_str(); }

inline int cmd_class(const Options &opt, Session &s, std::ostream &out) {
    require_n(opt.n);
    const TypeId t = parse_type(opt.type);
    std::string view = opt.view.empty() ? (opt.source == "oracle" ? "minimal" : "lifted") : opt.view;
    ClassPoly cls = [&] {
        if (opt.source == "engine")
            return s.engine_class(t, opt.n, view);
        if (view == "lifted")
            throw Error(ErrorKind::InvalidArgument, "the closed-form tables hold minimal classes; use --view minimal");
        return closed_form_class(t, opt.n);
    }();
    if (opt.d)
        cls = specialize(cls, mpq_class(*opt.d),
                         cls.spec().basis == Basis::Q ? std::optional<int>(cls.spec().k) : std::nullopt);
    else if (opt.basis == "F")
        cls = to_f_basis(cls);
    if (opt.text)
        out << to_text(cls) << '\n';
    else
        out << to_json(cls).dump(2) << '\n';
    return Ok;
}

inline int cmd_degree(const Options &opt, Session &s, std::ostream &out) {
    require_n(opt.n);
    const TypeId t = parse_type(opt.type);
    DPoly p = s.degree(t, opt.n);
    if (opt.d)
        out << number_str(p.eval(mpq_class(*opt.d))) << '\n';
    else
        out << poly_str(p, 'd') << '\n';
    return Ok;
}

inline int cmd_conditions(const Options &opt, std::ostream &out) {
    NewtonDiagram d = [&] {
        if (!opt.diagram.empty()) {
            std::ifstream in(opt.diagram);
            if (!in)
                throw Error(ErrorKind::InvalidArgument, "cannot read diagram file " + opt.diagram);
            nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
            if (j.is_discarded())
                throw Error(ErrorKind::ParseError, "diagram file " + opt.diagram + " is not valid JSON");
            return diagram_from_json(j);
        }
        if (opt.type.empty())
            throw Error(ErrorKind::InvalidArgument, "conditions needs --diagram or --type with --n");
        require_n(opt.n);
        return representative_diagram(parse_type(opt.type), opt.n);
    }();
    static const std::map<std::string, LabelMode> modes{
        {"auto", LabelMode::Auto}, {"plain", LabelMode::Plain}, {"extended", LabelMode::Extended}};
    out << conditions_report(covariant_conditions(d, modes.at(opt.labels))).dump(2) << '\n';
    return Ok;
}

inline int cmd_compare(const Options &opt, Session &s, std::ostream &out, std::ostream &err) {
    require_n(opt.n);
    const TypeId t = parse_type(opt.type);
    ClassPoly engine = s.engine_class(t, opt.n, "minimal");
    DPoly engine_deg = stratum_degree(engine);
    ClassPoly oracle = closed_form_class(t, opt.n);
    DPoly oracle_deg = closed_form_degree(t, opt.n);
    const bool class_match = same_class(engine, oracle);
    const bool degree_match = engine_deg == oracle_deg;
    nlohmann::ordered_json j;
    j["type"] = t.name();
    j["n"] = opt.n;
    j["class_match"] = class_match;
    j["degree_match"] = degree_match;
    j["engine_degree"] = poly_str(engine_deg, 'd');
    j["oracle_degree"] = poly_str(oracle_deg, 'd');
    out << j.dump(2) << '\n';
    if (class_match && degree_match)
        return Ok;
    return report(err, "Mismatch",
                  "engine and closed form differ for " + t.name() + " at n=" + std::to_string(opt.n) +
                      (class_match ? " (degree)" : " (class)"),
                  Mismatch);
}

inline int cmd_sweep(const Options &opt, Session &s, std::ostream &out) {
    const TypeId t = parse_type(opt.type);
    const int n_lo = opt.n_lo, n_hi = opt.n_hi < opt.n_lo ? opt.n_lo : opt.n_hi;
    require_n(n_lo);
    int k = 2;
    for (int n = n_lo; n <= n_hi; ++n)
        k = std::max(k, basis_offset(t, n));
    SweepOptions so;
    so.type = t.name();
    so.n_lo = n_lo;
    so.n_hi = n_hi;
    so.d_lo = opt.d_lo.value_or(k + 2);
    so.d_hi = opt.d_hi.value_or(so.d_lo + n_hi + 2);
    so.n_degree_bound = opt.fit_n;
    so.parallel = opt.parallel;
    std::map<int, DPoly> per_n;
    for (int n = n_lo; n <= n_hi; ++n)
        per_n.emplace(n, s.degree(t, n));
    SweepReport rep = sweep([&](int n, long d) { return per_n.at(n).eval(mpq_class(d)); }, so);
    out << rep.to_json().dump(2) << '\n';
    return Ok;
}

inline int cmd_cache(const std::string &action, Session &s, std::ostream &out) {
    ClassCache *c = s.cache();
    if (!c)
        throw Error(ErrorKind::InvalidArgument, "the cache is disabled by --no-cache");
    if (action == "path") {
        out << c->path().string() << '\n';
    } else if (action == "clear") {
        c->clear();
        out << "{\"cleared\": " << nlohmann::json(c->path().string()).dump() << "}\n";
    } else {
        auto arr = nlohmann::ordered_json::array();
        for (const auto &[key, cls] : c->entries()) {
            nlohmann::ordered_json e;
            e["type"] = key.type;
            e["n"] = key.n;
            e["basis"] = key.basis;
            e["terms"] = cls.size();
            arr.push_back(e);
        }
        out << arr.dump(2) << '\n';
    }
    return Ok;
}

} // namespace cli

/// Entry point of the `strata` executable, with the streams injectable for
/// testing. Returns the process exit status.
inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    using namespace cli;
    Options opt;
    CLI::App app{"Classes and degrees of equisingular strata of projective hypersurfaces", "strata"};
    app.require_subcommand(1);
    app.add_option("--cache", opt.cache_path, "Class cache file (default: $STRATA_CACHE or the user cache dir)");
    app.add_flag("--no-cache", opt.no_cache, "Neither read nor write the class cache");

    auto add_type = [&](CLI::App *sub, bool required) {
        auto *o = sub->add_option("--type", opt.type, "Singularity type, e.g. A3, D5, corank(2), reducible(1x2,1x2|2)");
        if (required)
            o->required();
    };
    auto add_source = [&](CLI::App *sub) {
        sub->add_option("--source", opt.source, "engine or oracle (closed-form table)")
            ->check(CLI::IsMember({"engine", "oracle"}));
    };

    auto *cls = app.add_subcommand("class", "Print the class of a stratum");
    add_type(cls, true);
    cls->add_option("--n", opt.n, "Dimension of the projective space")->required();
    cls->add_option("--d", opt.d, "Specialize the degree of the hypersurfaces");
    add_source(cls);
    cls->add_option("--view", opt.view, "lifted (default for the engine) or minimal")
        ->check(CLI::IsMember({"lifted", "minimal"}));
    cls->add_option("--basis", opt.basis, "Q (default) or F")->check(CLI::IsMember({"Q", "F"}));
    cls->add_flag("--text", opt.text, "Print a polynomial instead of JSON");

    auto *deg = app.add_subcommand("degree", "Print the degree of a stratum");
    add_type(deg, true);
    deg->add_option("--n", opt.n, "Dimension of the projective space")->required();
    deg->add_option("--d", opt.d, "Specialize the degree of the hypersurfaces");
    add_source(deg);

    auto *cond = app.add_subcommand("conditions", "Print the covariant conditions of a Newton diagram");
    cond->add_option("--diagram", opt.diagram, "Diagram JSON file {\"n\", \"support\", \"name\"}");
    add_type(cond, false);
    cond->add_option("--n", opt.n, "Dimension, with --type");
    cond->add_option("--labels", opt.labels, "auto, plain or extended")
        ->check(CLI::IsMember({"auto", "plain", "extended"}));

    auto *cmp = app.add_subcommand("compare", "Compare the engine with the closed-form table");
    add_type(cmp, true);
    cmp->add_option("--n", opt.n, "Dimension of the projective space")->required();

    auto *swp = app.add_subcommand("sweep", "Fit degree polynomials in d over a range of n");
    add_type(swp, true);
    swp->add_option("--n-lo", opt.n_lo, "First dimension")->required();
    swp->add_option("--n-hi", opt.n_hi, "Last dimension (default: --n-lo)");
    swp->add_option("--d-lo", opt.d_lo, "First sample degree (default: k+2)");
    swp->add_option("--d-hi", opt.d_hi, "Last sample degree");
    swp->add_option("--fit-n", opt.fit_n, "Degree bound in n for the cross-n coefficient fit");
    swp->add_flag("--parallel", opt.parallel, "Evaluate samples concurrently");
    add_source(swp);

    std::string cache_action = "list";
    auto *cch = app.add_subcommand("cache", "Inspect or clear the class cache");
    cch->add_option("action", cache_action, "list, clear or path")->check(CLI::IsMember({"list", "clear", "path"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError &e) {
        return report(err, "UsageError", e.what(), Usage);
    }

    Session session(opt, err);
    try {
        if (*cls)
            return cmd_class(opt, session, out);
        if (*deg)
            return cmd_degree(opt, session, out);
        if (*cond)
            return cmd_conditions(opt, out);
        if (*cmp)
            return cmd_compare(opt, session, out, err);
        if (*swp)
            return cmd_sweep(opt, session, out);
        return cmd_cache(cache_action, session, out);
    } catch (const Error &e) {
        return report(err, to_string(e.kind()), e.what(), exit_code_for(e.kind()),
                      e.detail() ? std::optional<long>(e.detail()) : std::nullopt);
    } catch (const std::exception &e) {
        return report(err, "InternalError", e.what(), EngineFailure);
    }
}

} // namespace strata
