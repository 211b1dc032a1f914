#pragma once

/// JSON front end: Satake diagram ingestion, invariant reports, and the named
/// verification suites. Verify output is line-delimited JSON, one object per
/// check with a single summary object last; report order is canonical for a
/// fixed configuration. Exit codes: 0 all checks pass, 1 a check failed,
/// 2 invalid configuration (reported by throwing DomainError to the caller).

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qsp/common.hpp"
#include "qsp/gradedqsp.hpp"
#include "qsp/iqg.hpp"
#include "qsp/qnumber.hpp"
#include "qsp/rootdata.hpp"
#include "qsp/satake.hpp"
#include "qsp/twistedpoly.hpp"
#include "qsp/uq.hpp"

namespace qsp {

using OrderedJson = nlohmann::ordered_json;

/// Parsed command line. An empty ell list means the suite's default levels;
/// word_override holds 0-indexed letters for the w_0 w_bullet prefix of the
/// adapted word; an empty catalog_dir means the shipped fixture directory.
struct RunConfig {
    std::string command;
    std::string suite;
    std::string diagram_path;
    std::vector<long> ells;
    std::optional<Word> word_override;
    std::string catalog_dir;
    int jobs = 1;
};

inline std::string default_catalog_dir() {
#ifdef QSP_SOURCE_DIR
    return std::string(QSP_SOURCE_DIR) + "/data/diagrams";
#else
    return "data/diagrams";
#endif
}

namespace detail {

inline IntMat cartan_from_type(const std::string& type) {
    if (type.size() < 2 || !std::isalpha(static_cast<unsigned char>(type[0])))
        throw DomainError("diagram: Cartan type must be a letter followed by a rank, got \"" + type + "\"");
    for (size_t k = 1; k < type.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(type[k])))
            throw DomainError("diagram: Cartan type must be a letter followed by a rank, got \"" + type + "\"");
    return cartan_type(type[0], std::stoi(type.substr(1)));
}

inline int one_indexed_node(const OrderedJson& v, int n, const char* what) {
    if (!v.is_number_integer())
        throw DomainError(std::string("diagram: ") + what + " entries must be integers");
    long node = v.get<long>();
    if (node < 1 || node > n)
        throw DomainError(std::string("diagram: ") + what + " node " + std::to_string(node) +
                          " outside 1.." + std::to_string(n));
    return static_cast<int>(node - 1);
}

inline int node_key(const std::string& key, int n, const char* what) {
    try {
        size_t used = 0;
        long node = std::stol(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        return one_indexed_node(OrderedJson(node), n, what);
    } catch (const DomainError&) {
        throw;
    } catch (const std::exception&) {
        throw DomainError(std::string("diagram: ") + what + " keys must be node numbers, got \"" + key + "\"");
    }
}

}  // namespace detail

/// Build a diagram from {"type"|"cartan", "black", "tau", "signs"}; nodes are
/// 1-indexed, tau and signs are objects keyed by node. Signs, when present,
/// must cover exactly the white nodes.
inline SatakeDiagram diagram_from_json(const OrderedJson& j) {
    if (!j.is_object()) throw DomainError("diagram: top level must be a JSON object");
    if (j.contains("type") == j.contains("cartan"))
        throw DomainError("diagram: exactly one of \"type\" and \"cartan\" is required");
    IntMat cartan(0, 0);
    if (j.contains("type")) {
        if (!j.at("type").is_string()) throw DomainError("diagram: \"type\" must be a string");
        cartan = detail::cartan_from_type(j.at("type").get<std::string>());
    } else {
        const OrderedJson& rows = j.at("cartan");
        if (!rows.is_array() || rows.empty()) throw DomainError("diagram: \"cartan\" must be a nonempty array");
        const int n = static_cast<int>(rows.size());
        cartan = IntMat(n, n);
        for (int i = 0; i < n; ++i) {
            if (!rows[static_cast<size_t>(i)].is_array() ||
                static_cast<int>(rows[static_cast<size_t>(i)].size()) != n)
                throw DomainError("diagram: \"cartan\" must be a square integer matrix");
            for (int k = 0; k < n; ++k)
                cartan.at(i, k) = Int(rows[static_cast<size_t>(i)][static_cast<size_t>(k)].get<long>());
        }
    }
    const int n = cartan.rows;

    std::vector<int> black;
    if (j.contains("black"))
        for (const auto& v : j.at("black")) black.push_back(detail::one_indexed_node(v, n, "black"));

    std::vector<int> tau(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) tau[static_cast<size_t>(i)] = i;
    if (j.contains("tau")) {
        if (!j.at("tau").is_object()) throw DomainError("diagram: \"tau\" must be an object of node pairs");
        for (const auto& [key, val] : j.at("tau").items()) {
            int from = detail::node_key(key, n, "tau");
            tau[static_cast<size_t>(from)] = detail::one_indexed_node(val, n, "tau");
        }
    }

    std::optional<std::vector<int>> signs;
    if (j.contains("signs")) {
        if (!j.at("signs").is_object()) throw DomainError("diagram: \"signs\" must be an object of node signs");
        std::vector<bool> is_black(static_cast<size_t>(n), false);
        for (int b : black) is_black[static_cast<size_t>(b)] = true;
        std::vector<int> s(static_cast<size_t>(n), 0);
        std::vector<bool> seen(static_cast<size_t>(n), false);
        for (const auto& [key, val] : j.at("signs").items()) {
            int node = detail::node_key(key, n, "signs");
            if (is_black[static_cast<size_t>(node)])
                throw DomainError("diagram: signs are attached to white nodes only");
            long c = val.get<long>();
            if (c != 1 && c != -1) throw DomainError("diagram: signs must be +1 or -1");
            s[static_cast<size_t>(node)] = static_cast<int>(c);
            seen[static_cast<size_t>(node)] = true;
        }
        for (int i = 0; i < n; ++i)
            if (!is_black[static_cast<size_t>(i)] && !seen[static_cast<size_t>(i)])
                throw DomainError("diagram: signs must cover every white node");
        signs = std::move(s);
    }
    return make_satake(cartan, black, tau, signs);
}

inline SatakeDiagram read_diagram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("diagram: cannot open " + path);
    OrderedJson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DomainError("diagram: " + path + ": " + e.what());
    }
    return diagram_from_json(j);
}

struct CatalogEntry {
    std::string name;
    SatakeDiagram diagram;
};

/// All .json fixtures in the directory, sorted by name.
inline std::vector<CatalogEntry> load_catalog(const std::string& dir_in) {
    std::string dir = dir_in.empty() ? default_catalog_dir() : dir_in;
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    if (ec) throw DomainError("catalog: cannot read directory " + dir);
    std::sort(files.begin(), files.end());
    std::vector<CatalogEntry> out;
    for (const auto& f : files) out.push_back({f.stem().string(), read_diagram_file(f.string())});
    if (out.empty()) throw DomainError("catalog: no diagram fixtures in " + dir);
    return out;
}

namespace detail {

inline const SatakeDiagram& catalog_diagram(const std::vector<CatalogEntry>& entries, const std::string& name) {
    for (const auto& e : entries)
        if (e.name == name) return e.diagram;
    throw DomainError("catalog: missing fixture " + name);
}

inline std::vector<long> levels_or(const RunConfig& cfg, std::vector<long> fallback) {
    return cfg.ells.empty() ? std::move(fallback) : cfg.ells;
}

inline void require_levels(const RootSystem& rs, const std::vector<long>& ells, const char* where) {
    for (long ell : ells) require_graded_level(rs, ell, where);
}

inline bool coprime_level_quiet(const RootSystem& rs, long ell) {
    if (ell < 3 || ell % 2 == 0) return false;
    for (long e : rs.eps)
        if (std::gcd(ell, e) != 1) return false;
    return true;
}

inline OrderedJson json_int_matrix(const IntMat& m) {
    OrderedJson rows = OrderedJson::array();
    for (int i = 0; i < m.rows; ++i) {
        OrderedJson row = OrderedJson::array();
        for (int k = 0; k < m.cols; ++k) row.push_back(m.at(i, k).convert_to<long>());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline OrderedJson json_word_one_indexed(const Word& w) {
    OrderedJson out = OrderedJson::array();
    for (int letter : w) out.push_back(letter + 1);
    return out;
}

struct SuiteCase {
    std::string id;
    long ell = 0;
    std::function<std::vector<IdentityCheck>(OrderedJson& extra)> run;
};

struct CaseOutcome {
    std::vector<IdentityCheck> checks;
    OrderedJson extra = OrderedJson::object();
    double seconds = 0;
    bool pass = true;
};

inline CaseOutcome run_one_case(const SuiteCase& c) {
    CaseOutcome out;
    auto start = std::chrono::steady_clock::now();
    try {
        out.checks = c.run(out.extra);
    } catch (const std::exception& e) {
        out.checks.push_back({"case completes", false, e.what()});
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& ch : out.checks) out.pass = out.pass && ch.pass;
    out.pass = out.pass && !out.checks.empty();
    return out;
}

/// Execute the cases, on `jobs` threads when allowed, and return outcomes in
/// case order regardless of completion order.
inline std::vector<CaseOutcome> run_cases(const std::vector<SuiteCase>& cases, int jobs, bool parallel_safe) {
    std::vector<CaseOutcome> out(cases.size());
    if (jobs <= 1 || !parallel_safe || cases.size() <= 1) {
        for (size_t k = 0; k < cases.size(); ++k) out[k] = run_one_case(cases[k]);
        return out;
    }
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t k = next.fetch_add(1); k < cases.size(); k = next.fetch_add(1))
            out[k] = run_one_case(cases[k]);
    };
    std::vector<std::thread> pool;
    int workers = std::min<int>(jobs, static_cast<int>(cases.size()));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

inline double round_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

inline int emit_suite(const std::string& suite, const std::vector<SuiteCase>& cases,
                      const std::vector<CaseOutcome>& outcomes, std::ostream& out) {
    long checks = 0, failures = 0;
    double total = 0;
    for (size_t k = 0; k < cases.size(); ++k) {
        const SuiteCase& c = cases[k];
        const CaseOutcome& o = outcomes[k];
        for (const auto& ch : o.checks) {
            OrderedJson line;
            line["suite"] = suite;
            line["case"] = c.id;
            if (c.ell > 0) line["ell"] = c.ell;
            line["check"] = ch.name;
            line["pass"] = ch.pass;
            line["detail"] = ch.detail;
            out << line.dump() << "\n";
            ++checks;
            if (!ch.pass) ++failures;
        }
        OrderedJson line;
        line["suite"] = suite;
        line["case"] = c.id;
        if (c.ell > 0) line["ell"] = c.ell;
        line["pass"] = o.pass;
        line["seconds"] = round_ms(o.seconds);
        line["checks"] = o.checks.size();
        for (const auto& [key, value] : o.extra.items()) line[key] = value;
        out << line.dump() << "\n";
        total += o.seconds;
    }
    OrderedJson summary;
    summary["suite"] = suite;
    summary["cases"] = cases.size();
    summary["checks"] = checks;
    summary["failures"] = failures;
    summary["seconds"] = round_ms(total);
    summary["pass"] = failures == 0 && checks > 0;
    out << summary.dump() << "\n";
    return summary["pass"].get<bool>() ? 0 : 1;
}

inline SatakeDiagram split_a1a1_diagram() {
    return make_satake(direct_sum(cartan_type('A', 1), cartan_type('A', 1)), {}, {0, 1});
}

inline SatakeDiagram qs_a4_diagram() {
    return make_satake(cartan_type('A', 4), {}, std::vector<int>{3, 2, 1, 0});
}

}  // namespace detail

/// Targets of a diagram-driven suite: the --diagram file when given, else the
/// shipped catalog.
inline std::vector<CatalogEntry> resolve_targets(const RunConfig& cfg) {
    if (!cfg.diagram_path.empty()) {
        std::string name = std::filesystem::path(cfg.diagram_path).stem().string();
        return {{name, read_diagram_file(cfg.diagram_path)}};
    }
    return load_catalog(cfg.catalog_dir);
}

/// Invariant report: one JSON object per diagram holding the Satake
/// invariants, the adapted word (1-indexed), the skew matrix S, and the
/// polynomial-identity degree at each requested level.
inline int run_invariants(const RunConfig& cfg, std::ostream& out) {
    std::vector<CatalogEntry> targets = resolve_targets(cfg);
    std::vector<long> ells = detail::levels_or(cfg, {3, 5, 7});
    if (!cfg.ells.empty())
        for (const auto& t : targets) detail::require_levels(t.diagram.rs, ells, "invariants");
    for (const auto& t : targets) {
        GradedPresentation p = graded_presentation(t.diagram, cfg.word_override);
        SatakeInvariants inv = satake_invariants(t.diagram);
        OrderedJson rep;
        rep["name"] = t.name;
        rep["cartan"] = detail::json_int_matrix(t.diagram.rs.cartan);
        rep["black"] = [&] {
            OrderedJson a = OrderedJson::array();
            for (int b : t.diagram.black) a.push_back(b + 1);
            return a;
        }();
        rep["tau"] = [&] {
            OrderedJson o = OrderedJson::object();
            for (int i = 0; i < t.diagram.rank(); ++i)
                o[std::to_string(i + 1)] = t.diagram.tau[static_cast<size_t>(i)] + 1;
            return o;
        }();
        rep["signs"] = [&] {
            OrderedJson o = OrderedJson::object();
            for (int i = 0; i < t.diagram.rank(); ++i)
                if (t.diagram.white(i)) o[std::to_string(i + 1)] = t.diagram.signs[static_cast<size_t>(i)];
            return o;
        }();
        OrderedJson iv;
        iv["n"] = inv.n;
        iv["N"] = inv.N;
        iv["M"] = inv.M;
        iv["L"] = inv.L;
        iv["rank_p_theta"] = inv.rank_p_theta;
        iv["dim_k"] = inv.dim_k;
        iv["rank_k"] = inv.rank_k;
        iv["n0"] = inv.n0;
        iv["dim_g"] = inv.dim_g;
        iv["covering_degree"] = inv.covering_degree.str();
        iv["max_class_dim"] = inv.max_class_dim;
        iv["max_leaf_dim"] = inv.max_leaf_dim;
        iv["branching_exponents"] = {inv.branching_exponents.first, inv.branching_exponents.second};
        rep["invariants"] = std::move(iv);
        rep["adapted_word"] = detail::json_word_one_indexed(p.word.full);
        rep["black_word"] = detail::json_word_one_indexed(p.word.black_word);
        rep["S"] = detail::json_int_matrix(p.S);
        OrderedJson degrees = OrderedJson::object();
        for (long ell : ells) {
            if (!detail::coprime_level_quiet(t.diagram.rs, ell)) continue;
            degrees[std::to_string(ell)] = graded_degree(p, ell).str();
        }
        rep["degrees"] = std::move(degrees);
        out << rep.dump() << "\n";
    }
    return 0;
}

/// The named verification suites. Case lists are fixed and deterministic; the
/// --diagram flag retargets the diagram-driven suites, --ell narrows or sets
/// the levels. Returns 0 when every check passes, 1 otherwise.
inline int run_verify(const RunConfig& cfg, std::ostream& out) {
    std::vector<detail::SuiteCase> cases;
    bool parallel_safe = true;

    if (cfg.suite == "unity") {
        std::vector<long> ells = detail::levels_or(cfg, {3, 5, 7});
        for (long ell : ells)
            if (ell < 3 || ell % 2 == 0)
                throw DomainError("unity: levels must be odd and at least 3");
        for (long ell : ells)
            cases.push_back({"ell=" + std::to_string(ell), ell, [ell](OrderedJson&) {
                                 return verify_unity_identities(ell);
                             }});
    } else if (cfg.suite == "kernel") {
        std::vector<CatalogEntry> targets = resolve_targets(cfg);
        std::vector<long> ells = detail::levels_or(cfg, {3, 5, 7});
        if (!cfg.ells.empty())
            for (const auto& t : targets) detail::require_levels(t.diagram.rs, ells, "kernel");
        for (const auto& t : targets) {
            GradedPresentation p = graded_presentation(t.diagram, cfg.word_override);
            for (long ell : ells) {
                if (!detail::coprime_level_quiet(t.diagram.rs, ell)) continue;
                cases.push_back({t.name, ell, [p, ell](OrderedJson& extra) {
                                     KernelCertificate cert = verify_kernel_lemma(p, ell);
                                     extra["certificate"] =
                                         OrderedJson::parse(kernel_certificate_json(p, cert));
                                     return cert.checks;
                                 }});
            }
        }
    } else if (cfg.suite == "frobenius") {
        parallel_safe = false;
        auto add = [&](const std::string& name, const SatakeDiagram& d, int node, long ell, long multiple) {
            std::string id = name + " node=" + std::to_string(node + 1) +
                             (multiple > 1 ? " k=" + std::to_string(multiple) : "");
            cases.push_back({id, ell, [d, node, ell, multiple](OrderedJson&) {
                                 frobenius_generator_check(d, node, ell, multiple);
                                 return std::vector<IdentityCheck>{
                                     {"divided power equals (F^l + Y^l)^k", true,
                                      "checked at the root of unity"}};
                             }});
        };
        if (!cfg.diagram_path.empty()) {
            std::vector<CatalogEntry> targets = resolve_targets(cfg);
            const SatakeDiagram& d = targets[0].diagram;
            std::vector<long> ells = detail::levels_or(cfg, {3});
            detail::require_levels(d.rs, ells, "frobenius");
            for (long ell : ells)
                for (int i = 0; i < d.rank(); ++i)
                    if (d.white(i)) add(targets[0].name, d, i, ell, 1);
        } else {
            std::vector<CatalogEntry> cat = load_catalog(cfg.catalog_dir);
            const SatakeDiagram& a1 = detail::catalog_diagram(cat, "split_a1");
            const SatakeDiagram& diag = detail::catalog_diagram(cat, "diag_a1a1");
            const SatakeDiagram& qs = detail::catalog_diagram(cat, "qs_a2");
            detail::require_levels(a1.rs, detail::levels_or(cfg, {3}), "frobenius");
            auto wanted = [&](long ell) {
                return cfg.ells.empty() || std::find(cfg.ells.begin(), cfg.ells.end(), ell) != cfg.ells.end();
            };
            if (wanted(3)) {
                add("split_a1", a1, 0, 3, 1);
                add("split_a1", a1, 0, 3, 2);
                add("diag_a1a1", diag, 0, 3, 1);
                add("diag_a1a1", diag, 1, 3, 1);
                add("qs_a2", qs, 0, 3, 1);
                add("qs_a2", qs, 1, 3, 1);
            }
            if (wanted(5)) add("split_a1", a1, 0, 5, 1);
        }
    } else if (cfg.suite == "braid") {
        parallel_safe = false;
        std::vector<long> ells = detail::levels_or(cfg, {3});
        for (long ell : ells)
            if (ell != 3 && ell != 5) throw DomainError("braid: level must be 3 or 5");
        auto add = [&](const std::string& name, const SatakeDiagram& d, int i, int j, long ell) {
            std::string id = name + " i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1);
            cases.push_back({id, ell, [d, i, j, ell](OrderedJson&) {
                                 return braid_frobenius_check({d, i, j}, ell);
                             }});
        };
        if (!cfg.diagram_path.empty()) {
            std::vector<CatalogEntry> targets = resolve_targets(cfg);
            const SatakeDiagram& d = targets[0].diagram;
            int bi = -1, bj = -1;
            for (int i = 0; i < d.rank() && bi < 0; ++i)
                for (int j = 0; j < d.rank() && bi < 0; ++j)
                    if (j != i && j != d.tau[static_cast<size_t>(i)]) {
                        bi = i;
                        bj = j;
                    }
            if (bi < 0) throw DomainError("braid: diagram has no admissible node pair");
            for (long ell : ells) add(targets[0].name, d, bi, bj, ell);
        } else {
            std::vector<CatalogEntry> cat = load_catalog(cfg.catalog_dir);
            for (long ell : ells) {
                add("split_a2", detail::catalog_diagram(cat, "split_a2"), 0, 1, ell);
                add("split_a1a1", detail::split_a1a1_diagram(), 0, 1, ell);
                add("qs_a4", detail::qs_a4_diagram(), 0, 1, ell);
            }
        }
    } else if (cfg.suite == "smalldim") {
        parallel_safe = false;
        std::vector<long> ells = detail::levels_or(cfg, {3});
        auto add = [&](const std::string& name, const SatakeDiagram& d) {
            detail::require_levels(d.rs, ells, "smalldim");
            if (!d.black.empty() || d.rs.rank > 2 ||
                d.rs.positive.size() != static_cast<size_t>(d.rs.rank))
                throw DomainError("smalldim: supported diagrams are rank-one forms of products of A1");
            for (long ell : ells)
                cases.push_back({name, ell, [d, ell](OrderedJson& extra) {
                                     SmallIqgReport rep = small_iqg_dim_check(d, ell);
                                     extra["dim_k"] = rep.dim_k;
                                     extra["expected_dim"] = rep.expected_dim.str();
                                     extra["subalgebra_dim"] = rep.subalgebra_dim.str();
                                     extra["ambient_dim"] = rep.ambient_dim.str();
                                     return rep.checks;
                                 }});
        };
        if (!cfg.diagram_path.empty()) {
            std::vector<CatalogEntry> targets = resolve_targets(cfg);
            add(targets[0].name, targets[0].diagram);
        } else {
            std::vector<CatalogEntry> cat = load_catalog(cfg.catalog_dir);
            add("split_a1", detail::catalog_diagram(cat, "split_a1"));
            add("diag_a1a1", detail::catalog_diagram(cat, "diag_a1a1"));
        }
    } else if (cfg.suite == "rewrite") {
        struct TypeCase {
            char series;
            int n;
        };
        for (TypeCase t : {TypeCase{'A', 1}, TypeCase{'A', 2}, TypeCase{'B', 2}, TypeCase{'A', 3}}) {
            std::string id = std::string(1, t.series) + std::to_string(t.n);
            cases.push_back({id, 0, [t](OrderedJson& extra) {
                                 RewriteSystem<LaurentScalar> rw(build_root_system(cartan_type(t.series, t.n)),
                                                                 laurent_s_power());
                                 extra["rules"] = rw.rules().size();
                                 return std::vector<IdentityCheck>{rw.verify_confluent()};
                             }});
        }
    } else {
        throw DomainError("verify: unknown suite \"" + cfg.suite +
                          "\" (expected unity, kernel, frobenius, braid, smalldim, or rewrite)");
    }

    std::vector<detail::CaseOutcome> outcomes = detail::run_cases(cases, cfg.jobs, parallel_safe);
    return detail::emit_suite(cfg.suite, cases, outcomes, out);
}

/// Dispatch on cfg.command; throws DomainError on configuration problems,
/// which the binary maps to exit code 2.
inline int run_command(const RunConfig& cfg, std::ostream& out) {
    if (cfg.command == "invariants") return run_invariants(cfg, out);
    if (cfg.command == "verify") return run_verify(cfg, out);
    throw DomainError("unknown command \"" + cfg.command + "\" (expected invariants or verify)");
}

}  // namespace qsp
