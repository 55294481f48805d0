// exo: command-line front end.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "exotic/etale.hpp"
#include "exotic/expsums.hpp"
#include "exotic/glq.hpp"
#include "exotic/mks.hpp"
#include "exotic/repth.hpp"
#include "exotic/verify.hpp"

using namespace exo;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double round12(double x) {
    if (x == 0 || !std::isfinite(x)) return x == 0 ? 0.0 : x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    double y = std::strtod(buf, nullptr);
    return y == 0 ? 0.0 : y;
}
// components below 1e-12 of the modulus are round-off
json cjson(cplx z) {
    const double floor = 1e-12 * std::max(1.0, std::abs(z));
    double re = std::abs(z.real()) < floor ? 0.0 : z.real(), im = std::abs(z.imag()) < floor ? 0.0 : z.imag();
    return {{"re", round12(re)}, {"im", round12(im)}};
}

int env_int(const char* name, int fallback) {
    const char* s = std::getenv(name);
    if (!s || !*s) return fallback;
    return std::max(1, std::atoi(s));
}

const FieldTower& tower_for(int64_t q) {
    try {
        return shared_tower(q);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<MultChar> parse_char_list(const std::string& s) {
    std::vector<MultChar> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_char(tok));
    if (out.empty()) throw UsageError("empty character list");
    return out;
}

CompositeChar composite_from(const FieldTower& T, const std::string& lambda, const std::string& alpha) {
    return make_composite(T, parse_partition(lambda), parse_char_list(alpha));
}

std::string lambda_string(const std::vector<int>& la) {
    std::string s;
    for (size_t i = 0; i < la.size(); ++i) s += (i ? "+" : "") + std::to_string(la[i]);
    return s;
}

std::vector<ClassLabel> sorted_classes(const FieldTower& T, int n) {
    auto v = class_table(T, n).classes;
    std::sort(v.begin(), v.end());
    return v;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exotic Kloosterman sums, Gauss sums and GL_n(F_q) characters"};
    app.require_subcommand(1);
    app.fallthrough();
    int64_t budget = 0;
    int threads = env_int("EXOTIC_THREADS", 1);
    std::string format = "json";
    app.add_option("--budget", budget, "group-size cap (default 10^8, or EXOTIC_BUDGET)")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker threads for verify (default 1, or EXOTIC_THREADS)")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", format, "table output format")->check(CLI::IsMember({"json", "csv"}));

    int64_t q = 2;
    auto add_q = [&](CLI::App* s) { s->add_option("--q", q, "field size")->required(); };

    // field
    auto* field = app.add_subcommand("field", "describe F_{q^m}");
    add_q(field);
    int level = 1;
    field->add_option("--level", level, "extension degree m")->check(CLI::PositiveNumber);

    // gauss
    auto* gauss = app.add_subcommand("gauss", "Gauss sum tau(chi), or the exotic sum tau_{k,m}(alpha, chi)");
    add_q(gauss);
    std::string chi_s, alpha_s, lambda_s, class_s, path_s = "hl", pi_s;
    gauss->add_option("--chi", chi_s, "character m:j")->required();
    gauss->add_option("--alpha", alpha_s, "character k:j (exotic sum)");

    // kl
    auto* kl = app.add_subcommand("kl", "exotic Kloosterman sum Kl_{m,F_a}(alpha, psi, xi)");
    add_q(kl);
    int a = 1, m = 1;
    int64_t xi_log = 0;
    kl->add_option("--lambda", lambda_s, "partition, e.g. 2+1")->required();
    kl->add_option("--alpha", alpha_s, "characters k_i:j, comma separated")->required();
    kl->add_option("--a", a, "base field degree")->check(CLI::PositiveNumber);
    kl->add_option("--m", m, "extension degree over F_{q^a}")->check(CLI::PositiveNumber);
    kl->add_option("--xi", xi_log, "xi as a power of the generator of F_{q^{am}}");

    // lpoly
    auto* lp = app.add_subcommand("lpoly", "L-polynomial and normalized roots of Kl_{F_a}(alpha) at xi");
    add_q(lp);
    lp->add_option("--lambda", lambda_s, "partition")->required();
    lp->add_option("--alpha", alpha_s, "characters")->required();
    lp->add_option("--a", a, "base field degree")->check(CLI::PositiveNumber);
    lp->add_option("--xi", xi_log, "xi as a power of the generator of F_{q^a}");

    // mks
    auto* mks = app.add_subcommand("mks", "exotic matrix Kloosterman sum K(alpha, psi, h)");
    add_q(mks);
    mks->add_option("--lambda", lambda_s, "partition")->required();
    mks->add_option("--alpha", alpha_s, "characters")->required();
    mks->add_option("--class", class_s, "conjugacy class a:j:[mu];...")->required();
    mks->add_option("--path", path_s, "brute | conv | hl")->check(CLI::IsMember({"brute", "conv", "hl"}));

    // char-table
    auto* ct = app.add_subcommand("char-table", "character table of GL_n(F_q)");
    add_q(ct);
    int n = 2;
    ct->add_option("--n", n, "rank")->required()->check(CLI::PositiveNumber);

    // speh-table
    auto* st = app.add_subcommand("speh-table", "character of the Speh representation of a cuspidal tau");
    add_q(st);
    int k = 2, c = 2;
    int64_t theta_j = -1;
    st->add_option("--k", k, "rank of tau")->required()->check(CLI::PositiveNumber);
    st->add_option("--c", c, "number of copies")->required()->check(CLI::PositiveNumber);
    st->add_option("--theta", theta_j, "regular character k:j of tau as j (default: least regular j)");

    // bessel
    auto* bs = app.add_subcommand("bessel", "Bessel-Speh special value B_tau(h)");
    add_q(bs);
    bs->add_option("--lambda", lambda_s, "partition")->required();
    bs->add_option("--alpha", alpha_s, "regular characters of the cuspidal support")->required();
    bs->add_option("--class", class_s, "class of h")->required();

    // gamma
    auto* gm = app.add_subcommand("gamma", "Ginzburg-Kaplan gamma factor and epsilon factor of pi x tau");
    add_q(gm);
    gm->add_option("--lambda", lambda_s, "partition of tau's cuspidal support")->required();
    gm->add_option("--alpha", alpha_s, "regular characters")->required();
    gm->add_option("--pi", pi_s, "parameter of pi, a:j:[mu];...")->required();

    // verify
    auto* vf = app.add_subcommand("verify", "run identity checks; JSON lines");
    std::vector<std::string> ids;
    bool all = false, timing = false, list = false;
    std::map<std::string, int> fixed;
    int vq = 0, vk = 0, vc = 0;
    double tol = 0;
    vf->add_option("ids", ids, "check ids");
    vf->add_flag("--all", all, "run every check");
    vf->add_flag("--list", list, "list ids and default grids");
    vf->add_flag("--timing", timing, "include wall time in the reports");
    vf->add_option("--q", vq, "restrict the q sweep");
    vf->add_option("--k", vk, "restrict the k sweep");
    vf->add_option("--c", vc, "restrict the c sweep");
    vf->add_option("--tol", tol, "override the tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (budget > 0) setenv("EXOTIC_BUDGET", std::to_string(budget).c_str(), 1);
    const int64_t cap = default_budget();

    try {
        if (*field) {
            const auto& T = tower_for(q);
            if (!T.has_level(level)) throw UsageError("level outside the tower for this q");
            json j;
            j["p"] = T.p();
            j["f"] = T.f();
            j["q"] = T.q();
            j["level"] = level;
            j["size"] = T.size(level);
            j["modulus"] = T.modulus(level);
            j["generator_code"] = T.code(T.gen(level));
            j["orbits"] = orbits_of_degree(T, level).size();
            emit(j);
        } else if (*gauss) {
            const auto& T = tower_for(q);
            MultChar chi = parse_char(chi_s);
            json j;
            j["q"] = q;
            j["chi"] = format_char(chi);
            if (alpha_s.empty()) {
                j["value"] = cjson(gauss_sum(T, chi));
            } else {
                MultChar al = parse_char(alpha_s);
                j["alpha"] = format_char(al);
                j["value"] = cjson(exotic_gauss_product(T, al.level, chi.level, al, chi));
            }
            emit(j);
        } else if (*kl) {
            const auto& T = tower_for(q);
            auto A = composite_from(T, lambda_s, alpha_s);
            Elem xi = T.from_log(a * m, xi_log);
            json j;
            j["q"] = q;
            j["lambda"] = lambda_string(A.lambda);
            j["a"] = a;
            j["m"] = m;
            j["xi"] = xi_log;
            j["value"] = cjson(kloosterman(T, A, a, m, xi));
            j["normalized"] = cjson(kloosterman_normalized(T, A, a, m, xi));
            emit(j);
        } else if (*lp) {
            const auto& T = tower_for(q);
            auto A = composite_from(T, lambda_s, alpha_s);
            auto L = lpolynomial(T, A, a, T.from_log(a, xi_log));
            json j;
            j["q"] = q;
            j["lambda"] = lambda_string(A.lambda);
            j["a"] = a;
            j["xi"] = xi_log;
            j["coeffs"] = json::array();
            for (auto x : L.coeffs) j["coeffs"].push_back(cjson(x));
            auto roots = L.roots;
            std::sort(roots.begin(), roots.end(), [](cplx u, cplx v) {
                double au = std::arg(u), av = std::arg(v);
                return au != av ? au < av : std::abs(u) < std::abs(v);
            });
            j["roots"] = json::array();
            for (auto x : roots) j["roots"].push_back(cjson(x));
            emit(j);
        } else if (*mks) {
            const auto& T = tower_for(q);
            auto A = composite_from(T, lambda_s, alpha_s);
            auto h = parse_class(T, class_s);
            auto path = parse_path(path_s);
            cplx v = mks_value(T, A, h, path, cap);
            json j;
            auto cv = cjson(v);
            j["value_re"] = cv["re"];
            j["value_im"] = cv["im"];
            j["path"] = path_name(path);
            j["params"] = {{"q", q},
                           {"lambda", lambda_string(A.lambda)},
                           {"alpha", alpha_s},
                           {"class", format_class(h)}};
            emit(j);
        } else if (*ct) {
            const auto& T = tower_for(q);
            if (gl_cardinality(T.q(), n) > double(cap)) throw BudgetError("GL_n(F_q) above budget", gl_cardinality(T.q(), n));
            auto& tab = character_table(T, n);
            auto classes = sorted_classes(T, n);
            std::vector<size_t> order(tab.params.size());
            for (size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](size_t x, size_t y) { return format_parameter(tab.params[x]) < format_parameter(tab.params[y]); });
            if (format == "csv") {
                std::cout << "character,dim,class,re,im\n";
                for (size_t i : order)
                    for (auto& cl : classes) {
                        auto v = cjson(tab.chars[i](cl));
                        std::cout << '"' << format_parameter(tab.params[i]) << "\"," << tab.dims[i] << ",\""
                                  << format_class(cl) << "\"," << v["re"].dump() << ',' << v["im"].dump() << '\n';
                    }
            } else {
                json j;
                j["q"] = q;
                j["n"] = n;
                j["classes"] = json::array();
                j["class_sizes"] = json::array();
                for (auto& cl : classes) {
                    j["classes"].push_back(format_class(cl));
                    j["class_sizes"].push_back(tab.classes->sizes[size_t(tab.classes->find(cl))]);
                }
                j["characters"] = json::array();
                for (size_t i : order) {
                    json row;
                    row["parameter"] = format_parameter(tab.params[i]);
                    row["dim"] = tab.dims[i];
                    row["values"] = json::array();
                    for (auto& cl : classes) row["values"].push_back(cjson(tab.chars[i](cl)));
                    j["characters"].push_back(row);
                }
                emit(j);
            }
        } else if (*st) {
            const auto& T = tower_for(q);
            if (!T.has_level(k * c)) throw UsageError("level k*c outside the tower for this q");
            if (gl_cardinality(T.q(), k * c) > 1e30) throw UsageError("rank too large");
            MultChar theta{k, theta_j};
            if (theta_j < 0)
                for (int64_t j = 0; j < T.units(k); ++j)
                    if (is_regular(T, MultChar{k, j})) {
                        theta = {k, j};
                        break;
                    }
            if (theta.j < 0 || !is_regular(T, theta)) throw UsageError("no regular character at level k");
            auto sp = speh_character(T, theta, c);
            std::vector<json> rows;
            if (k == 2 && c == 2) {
                auto inst = speh_table_rows(T, theta);
                for (auto& type : speh_table_types()) {
                    json r;
                    r["type"] = type;
                    r["instances"] = json::array();
                    for (auto& x : inst) {
                        if (x.type != type) continue;
                        r["instances"].push_back(
                            {{"class", format_class(x.cls)}, {"table", cjson(x.table)}, {"value", cjson(sp(x.cls))}});
                    }
                    r["instantiable"] = !r["instances"].empty();
                    rows.push_back(r);
                }
            } else {
                for (auto& cl : sorted_classes(T, k * c)) {
                    cplx v = sp(cl);
                    if (std::abs(v) < 1e-9) continue;
                    rows.push_back({{"class", format_class(cl)}, {"value", cjson(v)}});
                }
            }
            if (format == "csv") {
                if (k == 2 && c == 2) {
                    std::cout << "type,class,table_re,table_im,re,im\n";
                    for (auto& r : rows) {
                        if (r["instances"].empty()) std::cout << '"' << r["type"].get<std::string>() << "\",,,,,\n";
                        for (auto& x : r["instances"])
                            std::cout << '"' << r["type"].get<std::string>() << "\",\"" << x["class"].get<std::string>()
                                      << "\"," << x["table"]["re"].dump() << ',' << x["table"]["im"].dump() << ','
                                      << x["value"]["re"].dump() << ',' << x["value"]["im"].dump() << '\n';
                    }
                } else {
                    std::cout << "class,re,im\n";
                    for (auto& r : rows)
                        std::cout << '"' << r["class"].get<std::string>() << "\"," << r["value"]["re"].dump() << ','
                                  << r["value"]["im"].dump() << '\n';
                }
            } else {
                for (auto& r : rows) emit(r);
            }
        } else if (*bs) {
            const auto& T = tower_for(q);
            auto A = composite_from(T, lambda_s, alpha_s);
            if (!is_regular(T, A)) throw UsageError("tau needs regular characters");
            auto h = parse_class(T, class_s);
            cplx v = bessel_speh_value(T, A, class_representative(T, h));
            json j;
            j["q"] = q;
            j["lambda"] = lambda_string(A.lambda);
            j["alpha"] = alpha_s;
            j["class"] = format_class(h);
            j["value"] = cjson(v);
            j["normalized"] = cjson(v * std::pow(double(q), 0.5 * (A.k() - 1) * h.n() * h.n()));
            emit(j);
        } else if (*gm) {
            const auto& T = tower_for(q);
            auto A = composite_from(T, lambda_s, alpha_s);
            if (!is_regular(T, A)) throw UsageError("tau needs regular characters");
            auto pi = parse_parameter(T, pi_s);
            json j;
            j["q"] = q;
            j["lambda"] = lambda_string(A.lambda);
            j["alpha"] = alpha_s;
            j["pi"] = format_parameter(pi);
            j["gamma"] = cjson(gamma_gk(T, pi, A));
            j["epsilon0"] = cjson(epsilon0(T, pi, generic_parameter(T, A)));
            emit(j);
        } else if (*vf) {
            if (list) {
                for (auto& id : check_ids()) {
                    json j;
                    j["id"] = id;
                    j["description"] = check_description(id);
                    j["grid"] = default_grid(id);
                    j["tol"] = check_tolerance(id);
                    emit(j);
                }
                return 0;
            }
            if (all) ids = check_ids();
            if (ids.empty()) throw UsageError("give check ids or --all");
            for (auto& id : ids)
                if (!has_check(id)) throw UsageError("unknown check id: " + id);
            CheckParams params;
            params.budget = cap;
            if (vq) params.fixed["q"] = vq;
            if (vk) params.fixed["k"] = vk;
            if (vc) params.fixed["c"] = vc;
            if (vc) params.fixed["n"] = vc;
            params.tol = tol;
            bool ok = true;
            for (auto& r : run_checks(ids, params, threads)) {
                std::cout << report_json(r, timing) << '\n';
                ok = ok && r.pass;
            }
            std::cout.flush();
            return ok ? 0 : 1;
        }
    } catch (const BudgetError& e) {
        std::ostringstream s;
        s.precision(15);
        s << e.cardinality;
        std::cerr << "budget exceeded: " << e.what() << " (cardinality " << s.str() << ", cap " << cap << ")\n";
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
