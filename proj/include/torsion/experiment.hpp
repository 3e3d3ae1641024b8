#pragma once

#include "torsion/counterexample.hpp"
#include "torsion/reidemeister_schreier.hpp"
#include "torsion/transversal.hpp"

#include "json.hpp"

#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

namespace torsion {

/// A cross-pipeline check failed: the two computations of the same group
/// disagree, or an emitted torsion exceeds its emitted bound.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// One experiment, read from a JSON document of the form
///
///   { "family": {"name": "heisenberg", "param": 0},
///     "chain": {"kind": "congruence", "depth": 3, "degree_cap": 65536},
///     "degree": 1,
///     "complex": "torus.complex",
///     "transversal": {"strategy": "weiss", "tile_level": 1, "budget": 1000, "random_starts": 0},
///     "pipelines": ["rs_n1", "induced", "bounds", "farber", "counterexample"],
///     "farber": {"max_word_length": 2},
///     "counterexample": {"growth": "x", "depth": 2, "p": 2},
///     "output": {"dir": "out", "csv": "growth.csv", "json": "growth.json"},
///     "seed": 0 }
///
/// Every key is optional. "complex" names a fixture in the format read by
/// read_complex, relative to the config file; without it the presentation
/// complex of the family is used.
struct ExperimentConfig {
    std::string family = "free_abelian";
    int family_param = 2;
    std::string chain_kind = "congruence";
    int depth = 1;
    std::size_t degree_cap = kDefaultDegreeCap;
    int degree = 1;
    std::optional<std::string> complex_path;
    std::string strategy = "tree";
    std::size_t tile_level = 1;
    std::size_t search_budget = 1000;
    std::size_t random_starts = 0;
    std::vector<std::string> pipelines;
    std::size_t farber_max_length = 2;
    std::string growth = "x";
    int counterexample_depth = 2;
    int counterexample_p = 2;
    std::string out_dir = ".";
    std::string csv_name = "growth.csv";
    std::string json_name = "growth.json";
    std::uint64_t seed = 0;
    std::size_t budget_bits = kDefaultBudgetBits;
    /// Problems met while reading the document (wrong types, unknown keys).
    std::vector<std::string> parse_errors;

    bool wants(const std::string& pipeline) const {
        return std::find(pipelines.begin(), pipelines.end(), pipeline) != pipelines.end();
    }
};

namespace detail {

template <class T>
void read_field(const nlohmann::json& obj, const std::string& key, T& dst, const std::string& path,
                std::vector<std::string>& errors) {
    if (!obj.contains(key)) return;
    try {
        dst = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        errors.push_back("'" + path + key + "' has the wrong type");
    }
}

inline void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> known, const std::string& path,
                       std::vector<std::string>& errors) {
    for (const auto& [key, value] : obj.items())
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
            errors.push_back("unknown key '" + path + key + "'");
}

inline const nlohmann::json* section(const nlohmann::json& doc, const std::string& key,
                                     std::vector<std::string>& errors) {
    if (!doc.contains(key)) return nullptr;
    if (!doc.at(key).is_object()) {
        errors.push_back("'" + key + "' must be an object");
        return nullptr;
    }
    return &doc.at(key);
}

}  // namespace detail

/// Reads a config; a relative "complex" path is resolved against `base_dir`.
/// Never throws on content problems; they land in parse_errors.
inline ExperimentConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {}) {
    ExperimentConfig c;
    auto& err = c.parse_errors;
    if (!doc.is_object()) {
        err.push_back("config must be a JSON object");
        return c;
    }
    detail::check_keys(doc,
                       {"family", "chain", "degree", "complex", "transversal", "pipelines", "farber", "counterexample",
                        "output", "seed"},
                       "", err);
    if (auto* s = detail::section(doc, "family", err)) {
        detail::check_keys(*s, {"name", "param"}, "family.", err);
        detail::read_field(*s, "name", c.family, "family.", err);
        detail::read_field(*s, "param", c.family_param, "family.", err);
    }
    if (auto* s = detail::section(doc, "chain", err)) {
        detail::check_keys(*s, {"kind", "depth", "degree_cap"}, "chain.", err);
        detail::read_field(*s, "kind", c.chain_kind, "chain.", err);
        detail::read_field(*s, "depth", c.depth, "chain.", err);
        detail::read_field(*s, "degree_cap", c.degree_cap, "chain.", err);
    }
    detail::read_field(doc, "degree", c.degree, "", err);
    if (doc.contains("complex")) {
        std::string path;
        detail::read_field(doc, "complex", path, "", err);
        if (!path.empty()) c.complex_path = (base_dir / path).string();
    }
    if (auto* s = detail::section(doc, "transversal", err)) {
        detail::check_keys(*s, {"strategy", "tile_level", "budget", "random_starts"}, "transversal.", err);
        detail::read_field(*s, "strategy", c.strategy, "transversal.", err);
        detail::read_field(*s, "tile_level", c.tile_level, "transversal.", err);
        detail::read_field(*s, "budget", c.search_budget, "transversal.", err);
        detail::read_field(*s, "random_starts", c.random_starts, "transversal.", err);
    }
    detail::read_field(doc, "pipelines", c.pipelines, "", err);
    if (auto* s = detail::section(doc, "farber", err)) {
        detail::check_keys(*s, {"max_word_length"}, "farber.", err);
        detail::read_field(*s, "max_word_length", c.farber_max_length, "farber.", err);
    }
    if (auto* s = detail::section(doc, "counterexample", err)) {
        detail::check_keys(*s, {"growth", "depth", "p"}, "counterexample.", err);
        detail::read_field(*s, "growth", c.growth, "counterexample.", err);
        detail::read_field(*s, "depth", c.counterexample_depth, "counterexample.", err);
        detail::read_field(*s, "p", c.counterexample_p, "counterexample.", err);
    }
    if (auto* s = detail::section(doc, "output", err)) {
        detail::check_keys(*s, {"dir", "csv", "json"}, "output.", err);
        detail::read_field(*s, "dir", c.out_dir, "output.", err);
        detail::read_field(*s, "csv", c.csv_name, "output.", err);
        detail::read_field(*s, "json", c.json_name, "output.", err);
    }
    detail::read_field(doc, "seed", c.seed, "", err);
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(doc, path.parent_path());
}

inline ChainComplexSpec load_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open complex fixture " + path);
    return read_complex(in);
}

inline const std::vector<std::string>& known_pipelines() {
    static const std::vector<std::string> names{"rs_n1", "induced", "bounds", "farber", "counterexample"};
    return names;
}

/// Every violated constraint; empty exactly when the config is runnable.
inline std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> out = c.parse_errors;
    std::optional<GroupFamily> family;
    try {
        family = builtin_family(c.family, c.family_param);
    } catch (const Error& e) {
        out.push_back(std::string("family: ") + e.what());
    }
    const bool cyclic = c.chain_kind == "cyclic_tower" || c.chain_kind == "cyclic_index";
    if (c.chain_kind != "congruence" && !cyclic)
        out.push_back("chain kind '" + c.chain_kind + "' is not one of congruence, cyclic_tower, cyclic_index");
    if (cyclic && family && family->kind() != FamilyKind::Lamplighter)
        out.push_back("chain kind '" + c.chain_kind + "' is only defined for the lamplighter family");
    if (c.depth < 1) out.push_back("chain depth must be at least 1");
    if (c.degree_cap < 1) out.push_back("chain degree_cap must be positive");
    if (c.degree < 1) out.push_back("degree n must be at least 1");

    if (c.strategy != "tree" && c.strategy != "weiss" && c.strategy != "local_search")
        out.push_back("transversal strategy '" + c.strategy + "' is not one of tree, weiss, local_search");
    if (c.strategy == "weiss") {
        if (c.chain_kind == "cyclic_index")
            out.push_back("weiss strategy needs a refining normal chain; 'cyclic_index' is not refining");
        if (c.depth >= 1 && (c.tile_level < 1 || c.tile_level > static_cast<std::size_t>(c.depth)))
            out.push_back("tile_level must lie in 1..depth");
    }
    if (c.random_starts > 0 && c.strategy != "local_search")
        out.push_back("random_starts is only used by the local_search strategy");

    for (const auto& p : c.pipelines)
        if (std::find(known_pipelines().begin(), known_pipelines().end(), p) == known_pipelines().end())
            out.push_back("unknown pipeline '" + p + "'");

    std::optional<ChainComplexSpec> cx;
    if (c.complex_path) {
        try {
            cx = load_complex(*c.complex_path);
        } catch (const Error& e) {
            out.push_back(std::string("complex: ") + e.what());
        }
        if (cx && family && cx->generator_count != family->generator_count())
            out.push_back("complex uses " + std::to_string(cx->generator_count) + " generators but the family has " +
                          std::to_string(family->generator_count()));
    } else if (family) {
        cx = presentation_complex(family->presentation());
    }
    if (cx && c.degree >= 1 && static_cast<std::size_t>(c.degree) + 1 > cx->top_degree())
        out.push_back("degree n = " + std::to_string(c.degree) + " exceeds complex top_degree - 1 = " +
                      std::to_string(static_cast<long>(cx->top_degree()) - 1));
    if (c.wants("rs_n1") && c.degree != 1) out.push_back("pipeline rs_n1 computes degree 1 only");
    if (c.wants("rs_n1") && c.complex_path && cx && (cx->acyclic_cover.size() < 2 || !cx->acyclic_cover[1]))
        out.push_back("rs_n1 next to a complex fixture needs the fixture to declare 'acyclic 1'");
    if (c.wants("bounds") && c.degree >= 1 && cx && static_cast<std::size_t>(c.degree) < cx->acyclic_cover.size() &&
        !cx->acyclic_cover[c.degree])
        out.push_back("relative bound in degree " + std::to_string(c.degree) +
                      " needs the complex to declare its universal cover acyclic there");
    if (c.wants("farber") && c.farber_max_length < 1) out.push_back("farber max_word_length must be at least 1");
    if (c.wants("counterexample")) {
        try {
            parse_growth(c.growth);
        } catch (const Error& e) {
            out.push_back(std::string("counterexample: ") + e.what());
        }
        if (c.counterexample_depth < 1) out.push_back("counterexample depth must be at least 1");
        if (!is_prime(c.counterexample_p)) out.push_back("counterexample p must be prime");
    }
    if (c.csv_name.empty() || c.json_name.empty()) out.push_back("output file names must be non-empty");
    return out;
}

/// One CSV row. Optional cells are empty when no selected pipeline
/// produces them.
struct LevelRecord {
    std::size_t level = 0;
    std::size_t index = 0;
    std::size_t transversal_size = 0;
    std::size_t boundary_edges = 0;
    std::optional<Integer> torsion;
    std::optional<std::size_t> betti;
    std::optional<Integer> bound;
    std::optional<Ratio> farber_min;
    nlohmann::json detail;

    double boundary_ratio() const { return static_cast<double>(boundary_edges) / static_cast<double>(index); }
    std::optional<double> log_torsion_over_index() const {
        if (!torsion) return std::nullopt;
        return log_integer(*torsion) / static_cast<double>(index);
    }
};

struct ExperimentOutput {
    bool has_table = false;
    std::string bound_column;
    std::vector<LevelRecord> rows;
    std::optional<ModuliCertificate> certificate;
    std::vector<M1Row> m1_rows;
    nlohmann::json sidecar;

    bool empty() const { return !has_table && !certificate; }
};

struct RunOptions {
    std::size_t jobs = 1;
    std::optional<std::uint64_t> seed;  // overrides the config seed
};

/// Shortest decimal that reads back as the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// RFC 4180 field: quoted when it holds a comma, quote or line break.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

inline std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
    return out + "\r\n";
}

inline std::string growth_csv(const ExperimentOutput& out) {
    std::string s = csv_line({"level", "index", "transversal_size", "boundary_edges", "boundary_ratio", "T_n", "betti",
                              "log_T_over_index", out.bound_column, "farber_min_ratio"});
    for (const auto& r : out.rows) {
        const auto log_ratio = r.log_torsion_over_index();
        s += csv_line({std::to_string(r.level), std::to_string(r.index), std::to_string(r.transversal_size),
                       std::to_string(r.boundary_edges), format_double(r.boundary_ratio()),
                       r.torsion ? to_string(*r.torsion) : "", r.betti ? std::to_string(*r.betti) : "",
                       log_ratio ? format_double(*log_ratio) : "", r.bound ? to_string(*r.bound) : "",
                       r.farber_min ? format_double(r.farber_min->value()) : ""});
    }
    return s;
}

inline std::string counterexample_csv(const ExperimentOutput& out) {
    std::string s = csv_line({"level", "modulus", "index_bound", "f_of_index_bound", "torsion_lower_bound", "exceeds"});
    if (!out.certificate) return s;
    for (const auto& l : out.certificate->levels) {
        if (l.level == 0) continue;
        s += csv_line({std::to_string(l.level), to_string(l.modulus), to_string(l.index_bound), to_string(l.f_of_index),
                       to_string(l.torsion_lower_bound), l.exceeds ? "true" : "false"});
    }
    return s;
}

/// The bounds pipeline uses k^{|E''|} for degree 1 on the presentation
/// complex and the relative-homology bound otherwise.
inline bool uses_bound_n1(const ExperimentConfig& c) { return c.degree == 1 && !c.complex_path; }

namespace detail {

inline ChainSpec build_chain(const ExperimentConfig& c, const GroupFamily& family) {
    if (c.chain_kind == "cyclic_index") return lamplighter_cyclic_index_chain(family, c.depth);
    return congruence_chain(family, c.depth, c.chain_kind == "cyclic_tower", c.degree_cap);
}

inline std::size_t longest_relator(const Presentation& p) {
    std::size_t k = 0;
    for (const Word& r : p.relators()) k = std::max(k, r.length());
    return k;
}

inline nlohmann::json factors_json(const std::vector<Integer>& f) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : f) a.push_back(to_string(x));
    return a;
}

struct LevelContext {
    const ExperimentConfig& config;
    const ChainSpec& chain;
    const ChainComplexSpec& complex;
    const std::vector<FarberRow>& farber;
    std::uint64_t seed;
};

inline Transversal choose_transversal(const LevelContext& ctx, std::size_t level, nlohmann::json& info) {
    const auto& c = ctx.config;
    const FiniteAction& act = ctx.chain.levels[level - 1];
    const GroupFamily& fam = ctx.chain.family;
    Transversal t;
    if (c.strategy == "weiss" && level >= c.tile_level) {
        TilingPatch patch;
        t = weiss_tiling(ctx.chain, c.tile_level, level, std::nullopt, &patch);
        info["tiling"] = {{"tile_level", c.tile_level}, {"removed", patch.removed}, {"added", patch.added}};
    } else if (c.strategy == "local_search") {
        t = local_search_boundary_min(schreier_tree_transversal(act, fam), act, fam, c.search_budget);
        std::size_t best_start = 0;
        std::seed_seq seq{ctx.seed, static_cast<std::uint64_t>(level)};
        std::mt19937_64 rng(seq);
        for (std::size_t s = 1; s <= c.random_starts; ++s) {
            Transversal cand = local_search_boundary_min(random_tree_transversal(act, fam, rng), act, fam, c.search_budget);
            if (cand.boundary_edges < t.boundary_edges) {
                t = std::move(cand);
                best_start = s;
            }
        }
        info["local_search"] = {{"budget", c.search_budget}, {"random_starts", c.random_starts},
                                {"best_start", best_start}};
    } else {
        t = schreier_tree_transversal(act, fam);
    }
    const std::size_t before = t.boundary_edges;
    t = connect_repair(t, act, fam);
    if (t.boundary_edges > before) throw InvariantViolation("connect_repair increased the boundary");
    return t;
}

inline LevelRecord run_level(const LevelContext& ctx, std::size_t level) {
    const auto& c = ctx.config;
    const FiniteAction& act = ctx.chain.levels[level - 1];
    const GroupFamily& fam = ctx.chain.family;
    const std::string where = "level " + std::to_string(level) + ": ";
    LevelRecord r;
    r.level = level;
    r.index = act.degree();
    nlohmann::json& info = r.detail;
    info["level"] = level;
    info["index"] = r.index;

    const Transversal t = choose_transversal(ctx, level, info);
    r.transversal_size = t.size();
    r.boundary_edges = t.boundary_edges;
    info["boundary_edges"] = t.boundary_edges;
    info["connected"] = t.is_connected;

    const std::size_t n = static_cast<std::size_t>(c.degree);
    const bool bound_n1 = uses_bound_n1(c);
    std::optional<SubgroupPresentation> sp;
    if (c.wants("rs_n1") || (c.wants("bounds") && bound_n1))
        sp = reidemeister_schreier(fam.presentation(), act, t, fam);
    if (sp) {
        info["schreier"] = {{"E", sp->generators.size()},
                            {"E_prime", sp->generators.size() - sp->surviving_count()},
                            {"E_double_prime", sp->surviving_count()},
                            {"relations", sp->relations.size()}};
    }
    if (c.wants("rs_n1")) {
        const HomologyGroup killed = subgroup_abelianization(*sp, true);
        const HomologyGroup full = subgroup_abelianization(*sp, false);
        if (killed.torsion != full.torsion || killed.betti != full.betti)
            throw InvariantViolation(where + "deleting E' changed H_1 (" + to_string(full.torsion) + ", " +
                                     std::to_string(full.betti) + " -> " + to_string(killed.torsion) + ", " +
                                     std::to_string(killed.betti) + ")");
        r.torsion = killed.torsion;
        r.betti = killed.betti;
        info["rs_n1"] = {{"torsion", to_string(killed.torsion)}, {"betti", killed.betti},
                         {"factors", factors_json(killed.torsion_factors)}};
    }
    if (c.wants("induced")) {
        const InducedComplex ic = induce(ctx.complex, act);
        const long long chi = euler_characteristic(ic);
        const long long expected = static_cast<long long>(r.index) * euler_characteristic(ctx.complex);
        if (chi != expected)
            throw InvariantViolation(where + "Euler characteristic " + std::to_string(chi) + " differs from index * chi = " +
                                     std::to_string(expected));
        const HomologyGroup h = homology(ic, n);
        if (r.torsion && (*r.torsion != h.torsion || *r.betti != h.betti))
            throw InvariantViolation(where + "pipelines disagree: rs_n1 gives T = " + to_string(*r.torsion) +
                                     ", b = " + std::to_string(*r.betti) + "; induced gives T = " + to_string(h.torsion) +
                                     ", b = " + std::to_string(h.betti));
        r.torsion = h.torsion;
        r.betti = h.betti;
        info["induced"] = {{"torsion", to_string(h.torsion)}, {"betti", h.betti},
                           {"factors", factors_json(h.torsion_factors)}, {"euler_characteristic", chi}};
    }
    if (c.wants("bounds")) {
        if (bound_n1) {
            const std::size_t k = longest_relator(fam.presentation());
            r.bound = torsion_bound_n1(*sp, k);
            info["bound_n1"] = {{"k", k}, {"exponent", sp->surviving_count()}, {"value", to_string(*r.bound)}};
        } else {
            const RelativeBound rb = relative_bound(ctx.complex, act, t, n, fam);
            r.bound = rb.bound;
            info["relative_bound"] = {{"interior", rb.interior}, {"boundary_cells", rb.boundary_cells},
                                      {"base", to_string(rb.base)}, {"value", to_string(rb.bound)}};
        }
        if (r.torsion && *r.torsion > *r.bound)
            throw InvariantViolation(where + "T_n = " + to_string(*r.torsion) + " exceeds its bound " +
                                     to_string(*r.bound));
    }
    if (c.wants("farber")) {
        std::optional<Ratio> lo, hi;
        nlohmann::json words = nlohmann::json::array();
        for (const auto& row : ctx.farber) {
            if (row.level != level) continue;
            const Ratio q = row.fixed_ratio;
            if (!lo || q.value() < lo->value()) lo = q;
            if (!hi || q.value() > hi->value()) hi = q;
            words.push_back({{"word", format_word(row.word)},
                             {"fixed", std::to_string(q.num) + "/" + std::to_string(q.den)}});
        }
        r.farber_min = lo;
        info["farber"] = {{"min", lo ? nlohmann::json(std::to_string(lo->num) + "/" + std::to_string(lo->den)) : nullptr},
                          {"max", hi ? nlohmann::json(std::to_string(hi->num) + "/" + std::to_string(hi->den)) : nullptr},
                          {"words", words}};
    }
    return r;
}

}  // namespace detail

/// Executes the selected pipelines level by level on a pool of
/// `options.jobs` workers; rows come back in level order whatever the
/// completion order. Throws InvariantViolation on any cross-pipeline
/// disagreement and BudgetExceeded when a quotient or certificate outgrows
/// its cap.
inline ExperimentOutput run_experiment(const ExperimentConfig& c, const RunOptions& options = {}) {
    if (auto diags = validate(c); !diags.empty()) throw InvalidArgument("invalid config: " + diags.front());
    ExperimentOutput out;
    const std::uint64_t seed = options.seed.value_or(c.seed);
    const bool table = c.wants("rs_n1") || c.wants("induced") || c.wants("bounds") || c.wants("farber");
    nlohmann::json& side = out.sidecar;
    if (table || c.wants("counterexample")) {
        side["config"] = {{"family", c.family},  {"param", c.family_param},       {"chain", c.chain_kind},
                          {"depth", c.depth},    {"degree", c.degree},            {"strategy", c.strategy},
                          {"pipelines", c.pipelines}, {"seed", seed}};
        if (c.complex_path) side["config"]["complex"] = std::filesystem::path(*c.complex_path).filename().string();
    }

    if (table) {
        out.has_table = true;
        out.bound_column = uses_bound_n1(c) ? "bound_n1" : "relative_bound";
        const GroupFamily family = builtin_family(c.family, c.family_param);
        const ChainSpec chain = detail::build_chain(c, family);
        const ChainComplexSpec cx =
            c.complex_path ? load_complex(*c.complex_path) : presentation_complex(family.presentation());
        verify_complex(cx, family);
        const std::vector<FarberRow> farber =
            c.wants("farber") ? farber_diagnostic(chain, c.farber_max_length) : std::vector<FarberRow>{};
        const detail::LevelContext ctx{c, chain, cx, farber, seed};

        const std::size_t depth = chain.depth();
        std::vector<std::optional<LevelRecord>> results(depth);
        std::vector<std::exception_ptr> errors(depth);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < depth; i = next++) {
                try {
                    results[i] = detail::run_level(ctx, i + 1);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(depth, 1));
        std::vector<std::thread> pool;
        for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);

        side["chain"] = {{"kind", chain.kind}, {"refining", chain.refining}, {"normal", chain.normal},
                         {"exhausting", chain.exhausting}, {"family", family.name()}};
        side["levels"] = nlohmann::json::array();
        for (auto& r : results) {
            side["levels"].push_back(r->detail);
            out.rows.push_back(std::move(*r));
        }
    }

    if (c.wants("counterexample")) {
        const GrowthFunction f = parse_growth(c.growth);
        out.certificate = choose_moduli(f, c.counterexample_depth + 1, c.counterexample_p, c.budget_bits);
        out.m1_rows = m1_torsion_report(f, c.counterexample_depth, c.counterexample_p, c.budget_bits);
        for (const auto& row : out.m1_rows)
            if (!row.exceeds)
                throw InvariantViolation("counterexample level " + std::to_string(row.level) +
                                         ": torsion lower bound does not exceed f(index bound)");
        side["counterexample"] = certificate_json(*out.certificate);
    }
    return out;
}

inline std::string counterexample_csv_name(const ExperimentConfig& c) {
    const std::filesystem::path p(c.csv_name);
    return p.stem().string() + "_counterexample" + p.extension().string();
}

/// Writes the artifacts of a finished run under `dir`; nothing is written
/// for an empty run. Returns the paths written.
inline std::vector<std::filesystem::path> write_artifacts(const ExperimentOutput& out, const ExperimentConfig& c,
                                                          const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    if (out.empty()) return written;
    std::filesystem::create_directories(dir);
    auto emit = [&](const std::string& name, const std::string& text) {
        const auto path = dir / name;
        std::ofstream f(path, std::ios::binary);
        if (!(f << text)) throw Error("cannot write " + path.string());
        written.push_back(path);
    };
    if (out.has_table) emit(c.csv_name, growth_csv(out));
    if (out.certificate) emit(counterexample_csv_name(c), counterexample_csv(out));
    emit(c.json_name, out.sidecar.dump(2) + "\n");
    return written;
}

}  // namespace torsion
