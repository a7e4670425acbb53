// kfree: counts of k-free values of x*y^k + C over integer and prime boxes,
// local densities, Euler-product constants, and Diophantine box counts.
//
// One subcommand per capability; JSON to stdout (CSV for `scaling`), logs to
// stderr.  Exit codes: 0 success, 2 usage error, 3 budget/resource error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "kfree/box_counting.hpp"
#include "kfree/dioph.hpp"
#include "kfree/errors.hpp"
#include "kfree/euler_product.hpp"
#include "kfree/experiments.hpp"
#include "kfree/sieves.hpp"

using json = nlohmann::json;
using namespace kfree;

namespace {

struct CommonFlags {
    std::string output;     // empty = stdout
    std::string cache_dir;  // empty = caching off
    unsigned threads = 0;   // 0 = unset
};

// flag > environment > default
std::string effective_cache_dir(const CommonFlags& f) {
    if (!f.cache_dir.empty()) return f.cache_dir;
    if (const char* env = std::getenv("KFREE_CACHE_DIR")) return env;
    return {};
}

unsigned effective_threads(const CommonFlags& f) {
    if (f.threads != 0) return f.threads;
    if (const char* env = std::getenv("KFREE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

void emit(const CommonFlags& f, const std::string& document) {
    if (f.output.empty()) {
        std::cout << document << "\n";
        return;
    }
    std::ofstream os(f.output, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open output file " + f.output);
    os << document << "\n";
}

std::filesystem::path cache_file(const std::string& dir, int k, u64 lo, u64 hi) {
    std::ostringstream name;
    name << "kfsv_k" << k << "_" << lo << "_" << hi << ".kfsv";
    return std::filesystem::path(dir) / name.str();
}

// load-or-build with header verification on hits
struct CachedTable {
    KfreeTable table;
    bool hit = false;
    std::string file;
};

CachedTable sieve_with_cache(u64 lo, u64 hi, int k, const SieveOptions& so,
                             const std::string& dir) {
    CachedTable out;
    if (dir.empty()) {
        out.table = kfree_flags(lo, hi, k, so);
        return out;
    }
    std::filesystem::create_directories(dir);
    auto file = cache_file(dir, k, lo, hi);
    out.file = file.string();
    if (std::filesystem::exists(file)) {
        try {
            KfreeTable t = KfreeTable::load(file);
            if (t.k() == k && t.lo() == lo && t.hi() == hi) {
                out.table = std::move(t);
                out.hit = true;
                return out;
            }
            std::cerr << "cache header mismatch, rebuilding: " << out.file << "\n";
        } catch (const std::exception& e) {
            std::cerr << "cache unreadable, rebuilding: " << e.what() << "\n";
        }
    }
    out.table = kfree_flags(lo, hi, k, so);
    out.table.save(file);
    return out;
}

int run_app(int argc, char** argv) {
    CLI::App app{
        "kfree: k-free values of x*y^k + C -- exact box counts, local densities,\n"
        "Euler-product constants, and Diophantine box counts.\n"
        "Environment: KFREE_CACHE_DIR and KFREE_THREADS supply defaults for\n"
        "--cache-dir and --threads."};
    app.require_subcommand(1);
    // --h is a data flag on several subcommands, so help is --help only
    app.set_help_flag("--help", "print this help message and exit");

    int k = 2;
    i64 c = 1;
    CommonFlags common;

    auto add_common = [&](CLI::App* sub, bool cache, bool threads) {
        sub->add_option("--output", common.output, "write the document here instead of stdout");
        if (cache)
            sub->add_option("--cache-dir", common.cache_dir,
                            "directory for KFSV sieve caches (also KFREE_CACHE_DIR)");
        if (threads)
            sub->add_option("--threads", common.threads,
                            "worker ceiling for the sieve (also KFREE_THREADS)")
                ->check(CLI::PositiveNumber);
    };
    auto add_k = [&](CLI::App* sub) {
        sub->add_option("--k", k, "exponent k of x*y^k + C")
            ->required()
            ->check(CLI::Range(2, 62));
    };
    auto add_c = [&](CLI::App* sub) {
        sub->add_option("--c", c, "constant C of x*y^k + C (nonzero)")->required();
    };

    // sieve
    u64 lo = 1, hi = 1;
    u64 segment_width = u64{1} << 22;
    auto* sieve = app.add_subcommand("sieve", "k-free indicator table for [lo, hi]");
    add_k(sieve);
    sieve->add_option("--lo", lo, "interval start (>= 1)")->required();
    sieve->add_option("--hi", hi, "interval end")->required();
    sieve->add_option("--segment-width", segment_width, "entries per segment");
    add_common(sieve, true, true);

    // rho
    u64 modulus = 1;
    std::string variant = "plain";
    auto* rho = app.add_subcommand("rho", "local density rho(m) or rho'(m)");
    add_k(rho);
    add_c(rho);
    rho->add_option("--m", modulus, "modulus")->required()->check(CLI::PositiveNumber);
    rho->add_option("--variant", variant, "plain or coprime")
        ->check(CLI::IsMember({"plain", "coprime"}));

    // constant
    double precision = 1e-6;
    auto* constant = app.add_subcommand("constant", "Euler-product constant enclosure");
    add_k(constant);
    add_c(constant);
    constant->add_option("--precision", precision, "target enclosure width")->required();
    constant->add_option("--variant", variant, "plain or coprime")
        ->check(CLI::IsMember({"plain", "coprime"}));
    add_common(constant, false, false);

    // count
    u64 box_h = 1;
    std::string restriction = "all";
    std::string method = "auto";
    auto* count = app.add_subcommand("count", "count k-free values over the box [1,H]^2");
    add_k(count);
    add_c(count);
    count->add_option("--h", box_h, "box side H")->required()->check(CLI::PositiveNumber);
    count->add_option("--restriction", restriction, "all or primes")
        ->check(CLI::IsMember({"all", "primes"}));
    count->add_option("--method", method, "auto, sieve or factorize")
        ->check(CLI::IsMember({"auto", "sieve", "factorize"}));
    add_common(count, true, true);

    // congruence
    auto* congruence =
        app.add_subcommand("congruence", "count pairs with x*y^k + C == 0 (mod m), value != 0");
    add_k(congruence);
    add_c(congruence);
    congruence->add_option("--m", modulus, "modulus")->required()->check(CLI::PositiveNumber);
    congruence->add_option("--h", box_h, "box side H")->required()->check(CLI::PositiveNumber);
    add_common(congruence, false, false);

    // reuss
    double z = 16, dbox = 2, ebox = 2;
    int l = 1;
    i64 h_const = 1;
    double epsilon = 0.1;
    auto* reuss =
        app.add_subcommand("reuss", "count v^l e^k - u^l d^k = h over dyadic boxes and "
                                    "evaluate the determinant-method bound");
    add_k(reuss);
    reuss->add_option("--z", z, "size parameter z")->required();
    reuss->add_option("--dbox", dbox, "D of the dyadic box (D, 2D)")->required();
    reuss->add_option("--ebox", ebox, "E of the dyadic box (E, 2E)")->required();
    reuss->add_option("--l", l, "inner exponent l, 1 <= l < k")->required();
    reuss->add_option("--h-const", h_const, "right-hand side h (nonzero)")->required();
    reuss->add_option("--epsilon", epsilon, "epsilon of the z^epsilon factor");
    add_common(reuss, false, false);

    // scaling
    std::string h_list;
    auto* scaling = app.add_subcommand("scaling", "CSV scaling study of counts vs main terms");
    add_k(scaling);
    add_c(scaling);
    scaling->add_option("--h-list", h_list, "comma-separated ascending H values")->required();
    scaling->add_option("--restriction", restriction, "all or primes")
        ->check(CLI::IsMember({"all", "primes"}));
    add_common(scaling, true, true);

    // exponents
    auto* exponents = app.add_subcommand("exponents", "closed-form predicted error exponents");
    add_k(exponents);
    add_common(exponents, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (sieve->parsed()) {
        SieveOptions so;
        so.segment_width = segment_width;
        so.threads = effective_threads(common);
        std::string dir = effective_cache_dir(common);
        auto cached = sieve_with_cache(lo, hi, k, so, dir);
        json doc{{"k", k},
                 {"lo", lo},
                 {"hi", hi},
                 {"kfree_count", cached.table.count_set()},
                 {"cache", dir.empty() ? "off" : (cached.hit ? "hit" : "miss")}};
        if (!cached.file.empty()) doc["file"] = cached.file;
        emit(common, doc.dump());
    } else if (rho->parsed()) {
        PolySpec spec(k, c);
        LocalDensity d = variant == "coprime" ? density_coprime(spec, Modulus(modulus))
                                              : density(spec, Modulus(modulus));
        json doc{{"m", modulus}, {"k", k}, {"c", c}, {"variant", variant}, {"rho", d.value}};
        emit(common, doc.dump());
    } else if (constant->parsed()) {
        PolySpec spec(k, c);
        ProductBracket b = variant == "coprime" ? leading_constant_coprime(spec, precision)
                                                : leading_constant(spec, precision);
        json doc{{"variant", variant},
                 {"k", k},
                 {"c", c},
                 {"lower", b.lower},
                 {"upper", b.upper},
                 {"prime_cutoff", b.prime_cutoff},
                 {"tail_bound", b.tail_bound}};
        emit(common, doc.dump());
    } else if (count->parsed()) {
        PolySpec spec(k, c);
        BoxOptions opts;
        opts.threads = effective_threads(common);
        if (method == "sieve") opts.method = CountMethod::SieveTable;
        if (method == "factorize") opts.method = CountMethod::Factorize;

        // optional cached table for the sieve path
        std::string dir = effective_cache_dir(common);
        CachedTable cached;
        if (!dir.empty() && method != "factorize") {
            i64 hk = static_cast<i64>(checked_pow(box_h, k));
            i64 vmax = checked_add(checked_mul(static_cast<i64>(box_h), hk), c);
            u64 abs_hi = std::max<u64>(
                {vmax > 0 ? static_cast<u64>(vmax) : 0,
                 c < 0 ? static_cast<u64>(-(c + 1)) + 1 : 0, u64{1}});
            if (abs_hi <= opts.sieve_budget) {
                SieveOptions so;
                so.threads = opts.threads;
                cached = sieve_with_cache(1, abs_hi, k, so, dir);
                opts.table = &cached.table;
            }
        }

        BoxCount bc = restriction == "primes" ? count_kfree_prime_values(spec, box_h, opts)
                                              : count_kfree_values(spec, box_h, opts);
        json doc{{"k", k},
                 {"c", c},
                 {"h", box_h},
                 {"restriction", restriction},
                 {"count", bc.count},
                 {"main_term_lower", bc.main_lower},
                 {"main_term_upper", bc.main_upper},
                 {"relative_deviation", bc.relative_deviation}};
        emit(common, doc.dump());
    } else if (congruence->parsed()) {
        PolySpec spec(k, c);
        u64 n = count_congruent_pairs(spec, Modulus(modulus), box_h);
        json doc{{"k", k}, {"c", c}, {"m", modulus}, {"h", box_h}, {"count", n}};
        emit(common, doc.dump());
    } else if (reuss->parsed()) {
        DyadicInstance inst(z, dbox, ebox, EquationForm(k, l, h_const));
        u64 n = count_dyadic_solutions(inst);
        ReussBound rb = reuss_bound(inst, epsilon);
        json doc{{"count", n},
                 {"bound", rb.bound},
                 {"m", rb.m},
                 {"conditions",
                  {{"log_ratio_de", rb.log_ratio_de},
                   {"log_ratio_uv", rb.log_ratio_uv},
                   {"ratios_ok", rb.ratios_ok},
                   {"size_ok", rb.size_ok}}}};
        emit(common, doc.dump());
    } else if (scaling->parsed()) {
        PolySpec spec(k, c);
        std::vector<u64> hs;
        std::stringstream ss(h_list);
        for (std::string item; std::getline(ss, item, ',');) {
            if (item.empty()) continue;
            hs.push_back(std::stoull(item));
        }
        if (hs.empty()) {
            std::cerr << "--h-list: no H values given\n";
            return 2;
        }
        BoxOptions opts;
        opts.threads = effective_threads(common);
        std::string dir = effective_cache_dir(common);
        CachedTable cached;
        if (!dir.empty()) {
            u64 h_max = hs.back();
            u64 hi_val = checked_mul(h_max, checked_pow(h_max, k));
            u64 c_abs = c < 0 ? static_cast<u64>(-(c + 1)) + 1 : static_cast<u64>(c);
            u64 abs_hi = c > 0 ? hi_val + c_abs : std::max<u64>(hi_val, c_abs);
            if (abs_hi <= opts.sieve_budget) {
                SieveOptions so;
                so.threads = opts.threads;
                cached = sieve_with_cache(1, abs_hi, k, so, dir);
                opts.table = &cached.table;
            }
        }
        auto rows = run_scaling(spec, hs,
                                restriction == "primes" ? BoxRestriction::PrimesOnly
                                                        : BoxRestriction::AllIntegers,
                                opts);
        std::ostringstream csv;
        csv << "H,count,main_lower,main_upper,abs_dev,rel_dev";
        csv.precision(17);
        for (const auto& r : rows)
            csv << "\n"
                << r.h << "," << r.count << "," << r.main_lower << "," << r.main_upper << ","
                << r.abs_deviation << "," << r.rel_deviation;
        emit(common, csv.str());
    } else if (exponents->parsed()) {
        ExponentReport rep = predicted_exponents(k);
        json doc{{"k", rep.k}, {"delta", rep.delta}, {"g", rep.g}, {"G_k", rep.big_g}};
        emit(common, doc.dump());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const std::overflow_error& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
