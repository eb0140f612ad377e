// chi3 -- exact differential and boomerang analysis of power maps x^r and
// chi-binomials x^r (1 + u*chi(x)) over F_{p^n}, specialized tables for p = 3.
//
// Exit codes: 0 ok; 1 domain error (bad input); 2 invariant falsified by
// computation (printed with reproduction parameters); 3 resource refusal
// (memory cap, or a long run without --long).

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "chi3/apn_exponents.hpp"
#include "chi3/closed_forms.hpp"
#include "chi3/scan.hpp"

using json = nlohmann::ordered_json;

namespace {

chi3::u64 memory_cap_from_env() {
    const char* s = std::getenv("CHI3_MEMORY_CAP");
    if (!s) return chi3::kDefaultMemoryCap;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0' || v == 0)
        throw chi3::domain_error("CHI3_MEMORY_CAP must be a positive integer");
    return chi3::u64(v);
}

struct FieldArgs {
    int p = 3;
    int n = 1;
    std::string modulus;  // digit string, constant term first; empty = default
};

void add_field_flags(CLI::App* cmd, FieldArgs& fa) {
    cmd->add_option("--p", fa.p, "characteristic (odd prime)")->capture_default_str();
    cmd->add_option("--n", fa.n, "extension degree")->required();
    cmd->add_option("--modulus", fa.modulus,
                    "modulus digits, constant term first (default: smallest monic "
                    "irreducible)");
}

chi3::FieldCtx make_ctx(const FieldArgs& fa) {
    if (fa.modulus.empty())
        return chi3::build_field(fa.p, fa.n, std::nullopt, memory_cap_from_env());
    return chi3::build_field(fa.p, fa.n, chi3::parse_digits(fa.modulus, fa.p),
                             memory_cap_from_env());
}

// Element arguments: a plain decimal is an element id; 'd' followed by base-p
// digits is a coefficient vector, constant term first (d120 = 1 + 2x).
chi3::elem parse_elem(const chi3::FieldCtx& ctx, const std::string& s) {
    if (s.empty()) throw chi3::domain_error("empty element argument");
    if (s[0] == 'd') {
        auto digits = chi3::parse_digits(s.substr(1), ctx.p);
        if (int(digits.size()) > ctx.n)
            throw chi3::domain_error("digit string '" + s + "' longer than degree n");
        return ctx.from_poly(chi3::detail::poly(digits.begin(), digits.end()));
    }
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw chi3::domain_error("element must be a decimal id or d<digits>, got '" +
                                 s + "'");
    if (v >= ctx.q)
        throw chi3::domain_error("element id " + s + " out of range for q=" +
                                 std::to_string(ctx.q));
    return chi3::elem(v);
}

std::string digit_string(const chi3::FieldCtx& ctx, chi3::elem a) {
    std::string s;
    for (int i = 0; i < ctx.n; ++i) {
        s += char('0' + a % unsigned(ctx.p));
        a /= unsigned(ctx.p);
    }
    return s;
}

enum class Fmt { json, csv, md };

Fmt parse_fmt(const std::string& s) {
    if (s == "json") return Fmt::json;
    if (s == "csv") return Fmt::csv;
    if (s == "md") return Fmt::md;
    throw chi3::domain_error("--format must be one of json, csv, md");
}

void write_all(const std::string& text, const std::string& out_path, bool append = false) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, append ? std::ios::app : std::ios::trunc);
    if (!f) throw chi3::resource_error("cannot open output file: " + out_path);
    f << text;
}

// Tabular emitter. json nests rows under `rows_key`; csv keeps the house
// style of one JSON meta line followed by plain rows; md prints a table.
void emit_table(json meta, const std::string& rows_key,
                const std::vector<std::string>& cols,
                const std::vector<std::vector<std::string>>& rows,
                const std::vector<json>& rows_json, Fmt fmt,
                const std::string& out_path, bool append = false) {
    std::ostringstream os;
    switch (fmt) {
        case Fmt::json: {
            meta[rows_key] = rows_json;
            os << meta.dump(2) << "\n";
            break;
        }
        case Fmt::csv: {
            os << meta.dump() << "\n";
            for (std::size_t i = 0; i < cols.size(); ++i)
                os << (i ? "," : "") << cols[i];
            os << "\n";
            for (const auto& row : rows) {
                for (std::size_t i = 0; i < row.size(); ++i)
                    os << (i ? "," : "") << row[i];
                os << "\n";
            }
            break;
        }
        case Fmt::md: {
            os << meta.dump() << "\n\n|";
            for (const auto& c : cols) os << " " << c << " |";
            os << "\n|";
            for (std::size_t i = 0; i < cols.size(); ++i) os << " --- |";
            os << "\n";
            for (const auto& row : rows) {
                os << "|";
                for (const auto& cell : row) os << " " << cell << " |";
                os << "\n";
            }
            break;
        }
    }
    write_all(os.str(), out_path, append);
}

json field_meta(const chi3::FieldCtx& ctx) {
    json j;
    j["p"] = ctx.p;
    j["n"] = ctx.n;
    j["q"] = ctx.q;
    j["modulus"] = ctx.modulus_string();
    return j;
}

chi3::FuncTable make_table(const chi3::FieldCtx& ctx, const std::string& kind, chi3::i64 r,
                           const std::string& u_arg) {
    if (kind == "power") return chi3::tabulate(ctx, chi3::FuncKind::power, r);
    if (kind == "binomial")
        return chi3::tabulate(ctx, chi3::FuncKind::binomial, r,
                              parse_elem(ctx, u_arg.empty() ? "1" : u_arg));
    throw chi3::domain_error("--kind must be power or binomial");
}

template <typename T>
std::string join(const std::vector<T>& v, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        if constexpr (std::is_same_v<T, std::string>)
            s += v[i];
        else
            s += std::to_string(v[i]);
    }
    return s;
}

json scan_record_json(const chi3::ScanRecord& rec) {
    json j;
    j["n"] = rec.n;
    j["r"] = rec.canon_r;
    j["coset"] = rec.coset_half;
    j["delta_at_zero"] = rec.delta_at_zero;
    j["max_delta"] = rec.max_delta_nonzero;
    if (rec.beta)
        j["beta"] = *rec.beta;
    else
        j["beta"] = nullptr;
    j["degree"] = rec.alg_degree;
    j["gcd"] = rec.gcd;
    j["tag"] = rec.tags.front();
    j["tags"] = rec.tags;
    return j;
}

// ------------------------------------------------------------ verify-tables

struct VerifyStats {
    int rows = 0;
    int failed = 0;
};

void row_result(VerifyStats& st, bool ok, const std::string& label,
                const std::string& why = "") {
    ++st.rows;
    if (!ok) ++st.failed;
    std::cout << (ok ? "PASS " : "FAIL ") << label;
    if (!ok && !why.empty()) std::cout << ": " << why;
    std::cout << "\n";
}

json load_dataset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw chi3::resource_error("cannot open expected-tables dataset: " + path);
    return json::parse(f);
}

void verify_scan_table(const json& data, const std::string& key, int n,
                       const std::vector<chi3::ScanRecord>& recs, VerifyStats& st) {
    struct Expected {
        const json* row;
        bool seen = false;
    };
    std::map<std::vector<chi3::u64>, Expected> expect;
    for (const auto& row : data.at(key)) {
        if (row.at("n").get<int>() != n) continue;
        auto cs = row.at("coset").get<std::vector<chi3::u64>>();
        std::sort(cs.begin(), cs.end());
        expect.emplace(std::move(cs), Expected{&row});
    }
    for (const auto& rec : recs) {
        auto it = expect.find(rec.coset_half);
        if (it == expect.end()) {
            row_result(st, false, key + " n=" + std::to_string(n) +
                                      " r=" + std::to_string(rec.canon_r),
                       "scan found a class missing from the expected table");
            continue;
        }
        it->second.seen = true;
        const json& row = *it->second.row;
        const std::string label = key + " n=" + std::to_string(n) +
                                  " r=" + std::to_string(row.at("r").get<chi3::u64>());
        std::string why;
        const auto want_delta = row.at("max_delta").get<std::uint32_t>();
        if (rec.max_delta_nonzero != want_delta)
            why += "max_delta " + std::to_string(rec.max_delta_nonzero) + " != " +
                   std::to_string(want_delta) + "; ";
        const int want_deg = row.at("degree").get<int>();
        if (rec.alg_degree != want_deg)
            why += "degree " + std::to_string(rec.alg_degree) + " != " +
                   std::to_string(want_deg) + "; ";
        if (key == "beta-zero" && (!rec.beta || *rec.beta != 0))
            why += "beta not confirmed 0; ";
        if (key == "beta-one" && (!rec.beta || *rec.beta != 1))
            why += "beta not confirmed 1; ";
        row_result(st, why.empty(), label, why);
    }
    for (const auto& [cs, ex] : expect)
        if (!ex.seen)
            row_result(st, false, key + " n=" + std::to_string(n) +
                                      " r=" + std::to_string(ex.row->at("r").get<chi3::u64>()),
                       "expected class not found by the scan");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "chi3: exact differential / boomerang analysis of x^r and "
        "x^r(1+u*chi(x)) over F_{p^n}.\n"
        "Element arguments are decimal ids or 'd' + base-p digits "
        "(constant term first)."};
    app.require_subcommand(1);
    std::function<int()> run;

    // ---------------------------------------------------------- field-info
    FieldArgs fi_field;
    std::string fi_out;
    {
        auto* sc = app.add_subcommand("field-info", "field parameters and tables summary");
        add_field_flags(sc, fi_field);
        sc->add_option("--out", fi_out, "write output to a file");
        sc->callback([&] {
            run = [&]() -> int {
                chi3::FieldCtx ctx = make_ctx(fi_field);
                json j = field_meta(ctx);
                j["modulus_poly"] = chi3::detail::poly_to_string(
                    chi3::detail::poly(ctx.modulus.begin(), ctx.modulus.end()));
                j["gen"] = ctx.gen;
                j["gen_order"] = ctx.q - 1;
                j["chi_gen"] = ctx.chi(ctx.gen);
                j["half"] = ctx.half();
                j["memory_cap"] = memory_cap_from_env();
                write_all(j.dump(2) + "\n", fi_out);
                return 0;
            };
        });
    }

    // ----------------------------------------------------------------- eval
    FieldArgs ev_field;
    std::string ev_kind = "power", ev_u, ev_x, ev_out;
    chi3::i64 ev_r = 1;
    {
        auto* sc = app.add_subcommand("eval", "evaluate F at one point");
        add_field_flags(sc, ev_field);
        sc->add_option("--r", ev_r, "exponent (any integer)")->required();
        sc->add_option("--u", ev_u, "binomial coefficient (element)");
        sc->add_option("--kind", ev_kind, "power|binomial")->capture_default_str();
        sc->add_flag_callback("--binomial", [&] { ev_kind = "binomial"; },
                              "shorthand for --kind binomial");
        sc->add_option("--x", ev_x, "evaluation point (element)")->required();
        sc->add_option("--out", ev_out, "write output to a file");
        sc->callback([&] {
            run = [&]() -> int {
                chi3::FieldCtx ctx = make_ctx(ev_field);
                const chi3::elem x = parse_elem(ctx, ev_x);
                chi3::elem value;
                if (ev_kind == "power") {
                    value = chi3::eval_power(ctx, ev_r, x);
                } else if (ev_kind == "binomial") {
                    value = chi3::eval_binomial(ctx, ev_r,
                                                parse_elem(ctx, ev_u.empty() ? "1" : ev_u), x);
                } else {
                    throw chi3::domain_error("--kind must be power or binomial");
                }
                json j = field_meta(ctx);
                j["kind"] = ev_kind;
                j["r"] = ev_r;
                if (ev_kind == "binomial") j["u"] = parse_elem(ctx, ev_u.empty() ? "1" : ev_u);
                j["x"] = x;
                j["x_digits"] = digit_string(ctx, x);
                j["value"] = value;
                j["value_digits"] = digit_string(ctx, value);
                write_all(j.dump(2) + "\n", ev_out);
                return 0;
            };
        });
    }

    // ------------------------------------------------------------ ddt / bct
    FieldArgs row_field;
    std::string row_kind = "power", row_u, row_a = "1", row_fmt = "json", row_out;
    chi3::i64 row_r = 1;
    bool row_is_bct = false;
    for (const char* name : {"ddt", "bct"}) {
        auto* sc = app.add_subcommand(
            name, std::string(name) == "ddt" ? "one differential row: counts of delta_F(a, b)"
                                             : "one boomerang row: counts of beta_F(a, b)");
        add_field_flags(sc, row_field);
        sc->add_option("--r", row_r, "exponent (any integer)")->required();
        sc->add_option("--u", row_u, "binomial coefficient (element)");
        sc->add_option("--kind", row_kind, "power|binomial")->capture_default_str();
        sc->add_flag_callback("--binomial", [&] { row_kind = "binomial"; },
                              "shorthand for --kind binomial");
        sc->add_option("--a", row_a, "row difference a != 0 (element)")->capture_default_str();
        sc->add_option("--format", row_fmt, "json|csv|md")->capture_default_str();
        sc->add_option("--out", row_out, "write output to a file");
        const bool is_bct = std::string(name) == "bct";
        sc->callback([&, is_bct] {
            run = [&, is_bct]() -> int {
                row_is_bct = is_bct;
                chi3::FieldCtx ctx = make_ctx(row_field);
                chi3::FuncTable F = make_table(ctx, row_kind, row_r, row_u);
                const chi3::elem a = parse_elem(ctx, row_a);
                std::vector<std::uint32_t> counts;
                if (row_is_bct)
                    counts = chi3::beta_row(ctx, F, a).counts;
                else
                    counts = chi3::delta_row(ctx, F, a).counts;
                json meta = field_meta(ctx);
                meta["kind"] = row_kind;
                meta["r"] = row_r;
                meta["u"] = F.label.u;
                meta["a"] = a;
                std::uint32_t mx = 0;
                json obj = json::object();
                std::vector<std::vector<std::string>> rows;
                std::vector<json> rows_json;
                for (chi3::u64 b = 0; b < ctx.q; ++b) {
                    if (b > 0 || row_is_bct) mx = std::max(mx, counts[b]);
                    if (counts[b] == 0) continue;
                    rows.push_back({std::to_string(b), std::to_string(counts[b])});
                    rows_json.push_back(json{{"b", b}, {"count", counts[b]}});
                }
                meta[row_is_bct ? "beta" : "max_delta_nonzero"] = mx;
                emit_table(meta, "counts", {"b", "count"}, rows, rows_json,
                           parse_fmt(row_fmt), row_out);
                return 0;
            };
        });
    }

    // ------------------------------------------------- diff-/boom- spectrum
    FieldArgs sp_field;
    std::string sp_kind = "power", sp_u, sp_fmt = "json", sp_out;
    chi3::i64 sp_r = 1;
    bool sp_bct_confirm = false;
    for (const char* name : {"diff-spectrum", "boom-spectrum"}) {
        auto* sc = app.add_subcommand(
            name, std::string(name) == "diff-spectrum"
                      ? "differential spectrum over the a = 1 row"
                      : "boomerang spectrum over the a = 1 row");
        add_field_flags(sc, sp_field);
        sc->add_option("--r", sp_r, "exponent (any integer)")->required();
        sc->add_option("--u", sp_u, "binomial coefficient (element)");
        sc->add_option("--kind", sp_kind, "power|binomial")->capture_default_str();
        sc->add_flag_callback("--binomial", [&] { sp_kind = "binomial"; },
                              "shorthand for --kind binomial");
        sc->add_option("--format", sp_fmt, "json|csv|md")->capture_default_str();
        sc->add_option("--out", sp_out, "write output to a file");
        const bool is_boom = std::string(name) == "boom-spectrum";
        if (is_boom)
            sc->add_flag("--bct-confirm", sp_bct_confirm,
                         "always compute the full BCT row, no shortcut");
        sc->callback([&, is_boom] {
            run = [&, is_boom]() -> int {
                chi3::FieldCtx ctx = make_ctx(sp_field);
                chi3::FuncTable F = make_table(ctx, sp_kind, sp_r, sp_u);
                json meta = field_meta(ctx);
                meta["kind"] = sp_kind;
                meta["r"] = sp_r;
                meta["u"] = F.label.u;
                std::map<std::uint32_t, chi3::u64> hist;
                if (is_boom) {
                    chi3::BoomSpectrum s = chi3::boom_spectrum(ctx, F, !sp_bct_confirm);
                    meta["beta"] = s.beta;
                    meta["method"] = s.method;
                    hist = s.nu;
                } else {
                    chi3::DiffSpectrum s = chi3::diff_spectrum(ctx, F);
                    meta["delta"] = s.delta;
                    hist = s.omega;
                }
                json obj = json::object();
                std::vector<std::vector<std::string>> rows;
                std::vector<json> rows_json;
                for (const auto& [count, mult] : hist) {
                    obj[std::to_string(count)] = mult;
                    rows.push_back({std::to_string(count), std::to_string(mult)});
                    rows_json.push_back(json{{"count", count}, {"multiplicity", mult}});
                }
                if (parse_fmt(sp_fmt) == Fmt::json) {
                    meta[is_boom ? "nu" : "omega"] = obj;
                    write_all(meta.dump(2) + "\n", sp_out);
                } else {
                    emit_table(meta, is_boom ? "nu" : "omega", {"count", "multiplicity"},
                               rows, rows_json, parse_fmt(sp_fmt), sp_out);
                }
                return 0;
            };
        });
    }

    // ---------------------------------------------------------------- coset
    int co_p = 3, co_n = 0;
    chi3::i64 co_r = 0;
    std::string co_out;
    {
        auto* sc = app.add_subcommand("coset",
                                      "cyclotomic cosets and degree of an exponent "
                                      "(pure integer arithmetic)");
        sc->add_option("--p", co_p, "characteristic")->capture_default_str();
        sc->add_option("--n", co_n, "extension degree")->required();
        sc->add_option("--r", co_r, "exponent (any integer)")->required();
        sc->add_option("--out", co_out, "write output to a file");
        sc->callback([&] {
            run = [&]() -> int {
                if (co_p < 2 || co_n < 1) throw chi3::domain_error("need p >= 2, n >= 1");
                chi3::u64 q = 1;
                for (int i = 0; i < co_n; ++i) {
                    if (q > (chi3::u64(1) << 62) / chi3::u64(co_p))
                        throw chi3::domain_error("p^n too large for coset arithmetic");
                    q *= chi3::u64(co_p);
                }
                if (q < 4) throw chi3::domain_error("q must be >= 4");
                chi3::ExponentClass cls = chi3::exponent_class(co_r, co_p, q);
                json j;
                j["p"] = co_p;
                j["n"] = co_n;
                j["q"] = q;
                j["r"] = co_r;
                j["canon_r"] = cls.canon;
                j["coset_half"] = cls.coset_half;
                j["coset_full"] = cls.coset_full;
                j["gcd"] = chi3::gcd_class(co_r, q);
                const chi3::u64 half = (q - 1) / 2;
                chi3::u64 e1 = chi3::u64(chi3::reduce_exponent(co_r, q));
                if (e1 % half == 0) {
                    j["degree"] = nullptr;  // degenerate binomial: no degree
                } else {
                    if (e1 == 0) e1 = q - 1;
                    chi3::u64 e2 = (e1 + half) % (q - 1);
                    if (e2 == 0) e2 = q - 1;
                    j["degree"] = std::max(chi3::digit_sum(e1, co_p),
                                           chi3::digit_sum(e2, co_p));
                }
                write_all(j.dump(2) + "\n", co_out);
                return 0;
            };
        });
    }

    // -------------------------------------------------------------- apn-gen
    int ag_n = 0, ag_m = 0;
    bool ag_all = false;
    std::string ag_out;
    {
        auto* sc = app.add_subcommand("apn-gen",
                                      "constructive APN exponents as JSON lines");
        sc->add_option("--n", ag_n, "extension degree (odd)")->required();
        auto* optm = sc->add_option("--m", ag_m, "single parameter m, gcd(m, n) = 1");
        sc->add_flag("--all", ag_all, "all m <= (n-1)/2 plus the divisor families");
        optm->excludes("--all");
        sc->add_option("--out", ag_out, "write output to a file");
        sc->callback([&] {
            run = [&]() -> int {
                const chi3::u64 q = chi3::detail::apn_modulus(ag_n) + 1;
                std::ostringstream os;
                auto line = [&](int m, json u, const std::string& branch, chi3::u64 r,
                                json k) {
                    chi3::ExponentClass cls = chi3::exponent_class(chi3::i64(r), 3, q);
                    json j;
                    j["n"] = ag_n;
                    j["m"] = m;
                    j["u"] = u;
                    j["branch"] = branch;
                    j["r"] = r;
                    j["coset_full_min"] = cls.coset_full.front();
                    j["coset_half_min"] = cls.canon;
                    j["k"] = k;
                    os << j.dump() << "\n";
                };
                auto general = [&](int m) {
                    chi3::ApnWitness w = chi3::apn_exponent(ag_n, m);
                    line(m, w.u, "general", w.r, w.k);
                };
                if (ag_m != 0) {
                    general(ag_m);
                } else {
                    for (int m = 1; 2 * m <= ag_n - 1; ++m)
                        if (std::gcd(m, ag_n) == 1) general(m);
                    for (const chi3::DivisorFamilyEntry& e : chi3::divisor_family(ag_n)) {
                        // identity witness: the even coset member satisfying the
                        // defining congruence for this m
                        chi3::ExponentClass cls = chi3::exponent_class(chi3::i64(e.r), 3, q);
                        json k = nullptr;
                        for (chi3::u64 mem : cls.coset_full)
                            if (auto kk = chi3::apn_condition_check(ag_n, e.m, mem)) {
                                k = *kk;
                                break;
                            }
                        if (k.is_null())
                            throw chi3::invariant_error(
                                "divisor-family exponent has no identity witness: n=" +
                                std::to_string(ag_n) + " m=" + std::to_string(e.m) +
                                " r=" + std::to_string(e.r));
                        line(e.m, nullptr,
                             e.branch == chi3::DivisorBranch::n_plus_1 ? "divisor(n+1)"
                                                                       : "divisor(n-1)",
                             e.r, k);
                    }
                }
                write_all(os.str(), ag_out);
                return 0;
            };
        });
    }

    // -------------------------------------------------------------- charsum
    int cs_n = 0, cs_p = 3;
    bool cs_long = false;
    std::string cs_modulus, cs_out;
    {
        auto* sc = app.add_subcommand("charsum",
                                      "gamma character sums and the closed-form "
                                      "boomerang spectrum of F_{3^n-3}");
        sc->add_option("--p", cs_p, "characteristic")->capture_default_str();
        sc->add_option("--n", cs_n, "extension degree (odd)")->required();
        sc->add_option("--modulus", cs_modulus, "modulus digits, constant term first");
        sc->add_flag("--long", cs_long, "allow n in {11, 13, 15}");
        sc->add_option("--out", cs_out, "write output to a file");
        sc->callback([&] {
            run = [&]() -> int {
                if (cs_n >= 11 && !cs_long)
                    throw chi3::resource_error(
                        "charsum for n >= 11 walks q = 3^" + std::to_string(cs_n) +
                        " elements; pass --long to proceed");
                FieldArgs fa{cs_p, cs_n, cs_modulus};
                chi3::FieldCtx ctx = make_ctx(fa);
                chi3::CharSumReport rep = chi3::gamma_sums(ctx);
                // Two identities and one bound come with the construction; a
                // violation is a falsified claim, not a user error.
                const std::string repro = " (reproduce: charsum --n " +
                                          std::to_string(cs_n) + " --modulus " +
                                          ctx.modulus_string() + ")";
                if (rep.quartic_sum != -1)
                    throw chi3::invariant_error(
                        "sum chi(x^4+x^3-1) = " + std::to_string(rep.quartic_sum) +
                        ", expected -1" + repro);
                if (rep.quartic_pair_sum != -1)
                    throw chi3::invariant_error(
                        "gamma1 + sum chi(x^4-1)chi(x^4+x^3-1) = " +
                        std::to_string(rep.quartic_pair_sum) + ", expected -1" + repro);
                if (std::abs(rep.gamma1) > rep.weil_bound ||
                    std::abs(rep.gamma2) > rep.weil_bound)
                    throw chi3::invariant_error("gamma sum exceeds the Weil bound" + repro);
                chi3::NuPair nu = chi3::nu_from_gamma(rep.n, rep.gamma1, rep.gamma2);
                json j;
                j["n"] = rep.n;
                j["gamma1"] = rep.gamma1;
                j["gamma2"] = rep.gamma2;
                j["quartic_sum"] = rep.quartic_sum;
                j["quartic_pair_sum"] = rep.quartic_pair_sum;
                j["weil_bound"] = rep.weil_bound;
                j["nu0"] = nu.nu0;
                j["nu1"] = nu.nu1;
                write_all(j.dump(2) + "\n", cs_out);
                return 0;
            };
        });
    }

    // ----------------------------------------------------------------- scan
    int sn_n = 0;
    int sn_threads = int(std::max(1u, std::thread::hardware_concurrency()));
    std::string sn_mode = "beta0", sn_fmt = "json", sn_out, sn_checkpoint, sn_modulus;
    bool sn_long = false, sn_bct_confirm = false;
    {
        auto* sc = app.add_subcommand("scan",
                                      "exhaustive scan over binomial exponent classes");
        sc->add_option("--n", sn_n, "extension degree (odd)")->required();
        sc->add_option("--modulus", sn_modulus, "modulus digits, constant term first");
        sc->add_option("--mode", sn_mode, "beta0|beta1|locally-pn")->capture_default_str();
        sc->add_option("--threads", sn_threads, "worker threads")->capture_default_str();
        sc->add_flag("--long", sn_long, "allow n >= 13");
        sc->add_flag("--bct-confirm", sn_bct_confirm,
                     "confirm shortcut results with full BCT rows");
        sc->add_option("--checkpoint", sn_checkpoint,
                       "progress file for locally-pn scans (resumable)");
        sc->add_option("--format", sn_fmt, "json|csv|md")->capture_default_str();
        sc->add_option("--out", sn_out, "write output to a file");
        sc->callback([&] {
            run = [&]() -> int {
                if (sn_n >= 13 && !sn_long)
                    throw chi3::resource_error(
                        "scans at n >= 13 cover " +
                        std::to_string((chi3::detail::pow3(unsigned(sn_n)) - 1) / 2) +
                        " exponents; pass --long to proceed");
                if (!sn_checkpoint.empty() && sn_mode != "locally-pn")
                    throw chi3::domain_error(
                        "--checkpoint only applies to --mode locally-pn");
                FieldArgs fa{3, sn_n, sn_modulus};
                chi3::FieldCtx ctx = make_ctx(fa);
                chi3::ScanOptions opts;
                opts.threads = sn_threads;
                opts.bct_confirm = sn_bct_confirm;
                opts.checkpoint_path = sn_checkpoint;
                opts.note = [](const std::string& s) { std::cerr << "[note] " << s << "\n"; };
                std::vector<chi3::ScanRecord> recs;
                if (sn_mode == "beta0")
                    recs = chi3::scan_beta_zero(ctx, opts);
                else if (sn_mode == "beta1")
                    recs = chi3::scan_beta_one(ctx, opts);
                else if (sn_mode == "locally-pn")
                    recs = chi3::scan_locally_pn(ctx, opts);
                else
                    throw chi3::domain_error("--mode must be beta0, beta1 or locally-pn");
                json meta;
                meta["n"] = sn_n;
                meta["mode"] = sn_mode;
                meta["classes"] = recs.size();
                std::vector<std::vector<std::string>> rows;
                std::vector<json> rows_json;
                for (const chi3::ScanRecord& rec : recs) {
                    rows_json.push_back(scan_record_json(rec));
                    rows.push_back({std::to_string(rec.canon_r), join(rec.coset_half, " "),
                                    std::to_string(rec.delta_at_zero),
                                    std::to_string(rec.max_delta_nonzero),
                                    rec.beta ? std::to_string(*rec.beta) : "",
                                    std::to_string(rec.alg_degree), std::to_string(rec.gcd),
                                    rec.tags.front(), join(rec.tags, ";")});
                }
                emit_table(meta, "records",
                           {"r", "coset", "delta_at_zero", "max_delta", "beta", "degree",
                            "gcd", "tag", "tags"},
                           rows, rows_json, parse_fmt(sn_fmt), sn_out,
                           /*append=*/!sn_checkpoint.empty());
                return 0;
            };
        });
    }

    // -------------------------------------------------------- verify-tables
    std::string vt_table, vt_data = CHI3_DATA_FILE;
    int vt_n = 0;
    int vt_threads = int(std::max(1u, std::thread::hardware_concurrency()));
    bool vt_long = false;
    {
        auto* sc = app.add_subcommand("verify-tables",
                                      "recompute expected table rows and diff them");
        sc->add_option("--table", vt_table,
                       "beta-zero|beta-one|locally-pn|attribution|char-sums "
                       "(numeric aliases 3-8)")
            ->required();
        sc->add_option("--n", vt_n, "restrict to one extension degree");
        sc->add_option("--threads", vt_threads, "worker threads")->capture_default_str();
        sc->add_flag("--long", vt_long, "include the n = 13 / n >= 11 rows");
        sc->add_option("--data", vt_data, "expected-tables JSON path")
            ->capture_default_str();
        sc->callback([&] {
            run = [&]() -> int {
                std::string table = vt_table;
                if (table == "3") table = "beta-zero";
                if (table == "4" || table == "5") table = "beta-one";
                if (table == "6") table = "locally-pn";
                if (table == "7") table = "attribution";
                if (table == "8") table = "char-sums";
                const json data = load_dataset(vt_data);
                VerifyStats st;
                chi3::ScanOptions opts;
                opts.threads = vt_threads;
                opts.note = [](const std::string& s) { std::cerr << "[note] " << s << "\n"; };

                auto pick_ns = [&](std::vector<int> defaults, std::vector<int> gated) {
                    std::vector<int> ns;
                    if (vt_n != 0) {
                        if (std::find(gated.begin(), gated.end(), vt_n) != gated.end() &&
                            !vt_long)
                            throw chi3::resource_error(
                                "n = " + std::to_string(vt_n) +
                                " is a long run; pass --long to proceed");
                        ns = {vt_n};
                    } else {
                        ns = defaults;
                        if (vt_long) ns.insert(ns.end(), gated.begin(), gated.end());
                    }
                    return ns;
                };

                if (table == "beta-zero") {
                    for (int n : pick_ns({3, 5, 7, 9}, {}))
                        verify_scan_table(data, table, n, chi3::scan_beta_zero(n, opts), st);
                } else if (table == "beta-one") {
                    for (int n : pick_ns({3, 5, 7}, {}))
                        verify_scan_table(data, table, n, chi3::scan_beta_one(n, opts), st);
                } else if (table == "locally-pn") {
                    for (int n : pick_ns({11}, {13}))
                        verify_scan_table(data, table, n, chi3::scan_locally_pn(n, opts), st);
                } else if (table == "attribution") {
                    for (const auto& row : data.at("attribution")) {
                        const int n = row.at("n").get<int>();
                        if (vt_n != 0 && n != vt_n) continue;
                        const chi3::u64 r = row.at("r").get<chi3::u64>();
                        const std::string want = row.at("tag").get<std::string>();
                        const auto tags = chi3::attribute(n, r);
                        row_result(st, tags.front() == want,
                                   "attribution n=" + std::to_string(n) +
                                       " r=" + std::to_string(r) + " tag=" + want,
                                   "computed primary tag '" + tags.front() + "'");
                    }
                } else if (table == "char-sums") {
                    for (int n : pick_ns({3, 5, 7, 9}, {11, 13, 15})) {
                        const json* row = nullptr;
                        for (const auto& cand : data.at("char-sums"))
                            if (cand.at("n").get<int>() == n) row = &cand;
                        if (!row)
                            throw chi3::domain_error("no expected char-sums row for n=" +
                                                     std::to_string(n));
                        chi3::FieldCtx ctx = chi3::build_field(3, n, std::nullopt,
                                                               memory_cap_from_env());
                        chi3::CharSumReport rep = chi3::gamma_sums(ctx);
                        chi3::NuPair nu = chi3::nu_from_gamma(n, rep.gamma1, rep.gamma2);
                        std::string why;
                        auto want = [&](const char* key) { return row->at(key).get<chi3::i64>(); };
                        if (rep.gamma1 != want("gamma1"))
                            why += "gamma1 " + std::to_string(rep.gamma1) + " != " +
                                   std::to_string(want("gamma1")) + "; ";
                        if (rep.gamma2 != want("gamma2"))
                            why += "gamma2 " + std::to_string(rep.gamma2) + " != " +
                                   std::to_string(want("gamma2")) + "; ";
                        if (chi3::i64(nu.nu0) != want("nu0")) why += "nu0 mismatch; ";
                        if (chi3::i64(nu.nu1) != want("nu1")) why += "nu1 mismatch; ";
                        row_result(st, why.empty(),
                                   "char-sums n=" + std::to_string(n) + " (gamma1=" +
                                       std::to_string(rep.gamma1) + " gamma2=" +
                                       std::to_string(rep.gamma2) + " nu0=" +
                                       std::to_string(nu.nu0) + " nu1=" +
                                       std::to_string(nu.nu1) + ")",
                                   why);
                    }
                } else {
                    throw chi3::domain_error("unknown table id '" + vt_table + "'");
                }
                if (st.rows == 0)
                    throw chi3::domain_error("no expected rows selected (check --table/--n)");
                std::cout << (st.failed == 0 ? "ALL PASS" : "FAILURES") << " (" << st.rows
                          << " rows, " << st.failed << " failed)\n";
                return st.failed == 0 ? 0 : 2;
            };
        });
    }

    try {
        app.parse(argc, argv);
        return run();
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const chi3::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const chi3::invariant_error& e) {
        std::cerr << "invariant falsified: " << e.what() << "\n";
        return 2;
    } catch (const chi3::resource_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
