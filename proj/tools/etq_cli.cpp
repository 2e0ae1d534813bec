// etq: batch command-line front end for the coefficient tables, the circle-method
// comparison and the lemma-level verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource or
// convergence failure (I/O, truncation, quadrature budget).

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "etq/circle_method.hpp"
#include "etq/fourier_extract.hpp"
#include "etq/modular.hpp"
#include "etq/parallel.hpp"
#include "etq/specfun.hpp"
#include "etq/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitVerify = 1, kExitUsage = 2, kExitResource = 3;
constexpr int kDefaultMCap = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int n_max = 0;  // 0: subcommand default
    int m_max = 0;
    std::vector<int> m_list;
    std::vector<long> n_grid;
    std::optional<double> tol;
    std::string precision = "double";
    std::string cache_dir;
    bool no_cache = false;
    std::string format = "csv";
    std::string out;
    int threads = 0;
    std::string method = "auto";
    bool quiet = false;
    // compare
    long wright_max_n = 50;
    std::optional<double> ratio_band;
    bool one_sided = false;
    // verify
    std::vector<std::string> suites;
    // bessel
    int order = 0;
    double x = 0;
};

RunConfig cfg;

void progress(const std::string& s) {
    if (!cfg.quiet) std::cerr << "[etq] " << s << std::endl;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit(const std::string& content) {
    if (cfg.out.empty()) {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to standard output");
        return;
    }
    const fs::path p(cfg.out);
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f << content;
        if (!f.flush()) throw IoError("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) throw IoError("cannot move output into place at " + p.string() + ": " + ec.message());
}

/// |m| bound used when --m-max is absent: the support of h plus 16, capped.
int default_m_max(int N) { return std::min(2 * N + 3 + 16, kDefaultMCap); }

etq::BTableMethod parse_method(const std::string& s) {
    if (s == "average") return etq::BTableMethod::average;
    if (s == "residue") return etq::BTableMethod::residue;
    return etq::BTableMethod::automatic;
}

// ---- cache ----

fs::path cache_root() {
    if (cfg.no_cache) return {};
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    if (const char* e = std::getenv("ETQ_CACHE_DIR"); e && *e) return e;
    return ".etq-cache";
}

class FileLock {
public:
    explicit FileLock(const fs::path& p) {
        fd_ = ::open(p.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) throw IoError("cannot open lockfile " + p.string());
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw IoError("cannot lock " + p.string());
        }
    }
    ~FileLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

etq::CoeffTable compute_table(int N, int M) {
    progress("computing b(m,n) for n <= " + std::to_string(N) + ", |m| <= " + std::to_string(M) + " (method " +
             cfg.method + ", threads " + std::to_string(etq::thread_count()) + ")");
    return etq::b_table(N, M, parse_method(cfg.method));
}

/// Cached by (N, M, format version). A single writer at a time holds the lockfile.
etq::CoeffTable load_or_compute(int N, int M) {
    const fs::path root = cache_root();
    if (root.empty()) return compute_table(N, M);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError("cannot create cache directory " + root.string() + ": " + ec.message());
    const std::string stem = "table_N" + std::to_string(N) + "_M" + std::to_string(M) + "_v" +
                             std::to_string(etq::kTableFormatVersion);
    const fs::path file = root / (stem + ".json");
    FileLock lock(root / (stem + ".lock"));
    if (fs::exists(file)) {
        std::ifstream f(file, std::ios::binary);
        try {
            json j = json::parse(f);
            etq::CoeffTable t = etq::table_from_json(j);
            progress("cache hit " + file.string());
            return t;
        } catch (const std::exception& e) {
            progress("discarding unreadable cache entry " + file.string() + ": " + e.what());
        }
    }
    etq::CoeffTable t = compute_table(N, M);
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write cache entry " + tmp.string());
        f << etq::table_to_json(t).dump() << "\n";
        if (!f.flush()) throw IoError("failed writing cache entry " + tmp.string());
    }
    fs::rename(tmp, file, ec);
    if (ec) throw IoError("cannot move cache entry into place: " + ec.message());
    progress("cached " + file.string());
    return t;
}

// ---- subcommands ----

int cmd_exact_table() {
    const int N = cfg.n_max ? cfg.n_max : 50;
    const int M = cfg.m_max ? cfg.m_max : default_m_max(N);
    const etq::CoeffTable t = load_or_compute(N, M);
    std::ostringstream os;
    if (cfg.format == "json")
        os << etq::table_to_json(t).dump(1) << "\n";
    else
        etq::write_table_csv(os, t);
    emit(os.str());
    return kExitOk;
}

int cmd_compare() {
    std::vector<int> ms = cfg.m_list.empty() ? std::vector<int>{1} : cfg.m_list;
    std::vector<long> ns = cfg.n_grid.empty() ? std::vector<long>{10, 20, 50} : cfg.n_grid;
    const long n_top = *std::max_element(ns.begin(), ns.end());
    int m_top = 0;
    for (int m : ms) m_top = std::max(m_top, std::abs(m));
    const int N = cfg.n_max ? cfg.n_max : static_cast<int>(n_top);
    if (n_top > N) throw UsageError("--n-grid exceeds --n-max");
    const int M = std::max(cfg.m_max ? cfg.m_max : default_m_max(N), m_top);
    etq::CoeffTable table = load_or_compute(N, M);
    if (cfg.one_sided) table = etq::one_sided_table(table);
    const double tol = cfg.tol.value_or(1e-4);

    std::vector<etq::ConvergenceRow> rows;
    for (int m : ms) {
        progress("compare m=" + std::to_string(m));
        auto r = etq::convergence_report(m, ns, table, {}, cfg.wright_max_n);
        rows.insert(rows.end(), r.begin(), r.end());
    }

    std::vector<std::string> failures;
    for (const auto& r : rows) {
        const std::string at = "(m=" + std::to_string(r.m) + ",n=" + std::to_string(r.n) + ")";
        if (!std::isnan(r.wright_ratio) && !(std::abs(r.wright_ratio - 1) <= tol))
            failures.push_back("wright/exact " + num(r.wright_ratio) + " outside 1 +- " + num(tol) + " at " + at);
        if (cfg.ratio_band && r.m != 0 && etq::theorem1_main(r.m, r.n).valid &&
            !(std::abs(r.ratio - 1) <= *cfg.ratio_band))
            failures.push_back("exact/asymptotic " + num(r.ratio) + " outside 1 +- " + num(*cfg.ratio_band) + " at " + at);
    }
    for (const auto& a : rows)  // rows for -m must negate rows for m
        for (const auto& b : rows)
            if (a.m > 0 && b.m == -a.m && a.n == b.n && !(a.exact_im == -b.exact_im))
                failures.push_back("antisymmetry broken at n=" + std::to_string(a.n));

    std::ostringstream os;
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"n", r.n},
                           {"m", r.m},
                           {"exact_im", jnum(r.exact_im)},
                           {"exact_log_abs", jnum(r.exact_log_abs)},
                           {"asymptotic_im", jnum(r.main_im)},
                           {"ratio", jnum(r.ratio)},
                           {"theorem_valid", r.m != 0 && etq::theorem1_main(r.m, r.n).valid},
                           {"wright_im", jnum(r.wright_im)},
                           {"wright_over_exact", jnum(r.wright_ratio)}});
        os << json{{"table", {{"N", N}, {"M", M}, {"method", table.method}}}, {"rows", arr}}.dump(1) << "\n";
    } else {
        os << "n,m,exact_im,exact_log_abs,asymptotic_im,ratio,theorem_valid,wright_im,wright_over_exact\n";
        for (const auto& r : rows)
            os << r.n << "," << r.m << "," << num(r.exact_im) << "," << num(r.exact_log_abs) << "," << num(r.main_im)
               << "," << num(r.ratio) << "," << (r.m != 0 && etq::theorem1_main(r.m, r.n).valid ? 1 : 0) << ","
               << num(r.wright_im) << "," << num(r.wright_ratio) << "\n";
    }
    emit(os.str());
    for (const auto& f : failures) std::cerr << "FAIL " << f << "\n";
    return failures.empty() ? kExitOk : kExitVerify;
}

int cmd_verify() {
    auto suites = etq::all_suites();
    for (const auto& s : cfg.suites)
        if (std::none_of(suites.begin(), suites.end(), [&](const etq::SuiteEntry& e) { return e.name == s; }))
            throw UsageError("unknown suite '" + s + "'");
    std::vector<etq::SuiteResult> results;
    for (const auto& e : suites) {
        if (!cfg.suites.empty() && std::find(cfg.suites.begin(), cfg.suites.end(), e.name) == cfg.suites.end())
            continue;
        progress("suite " + e.name);
        auto r = e.run();
        results.insert(results.end(), r.begin(), r.end());
    }
    bool ok = true;
    std::ostringstream os;
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& r : results) arr.push_back({{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        os << arr.dump(1) << "\n";
    }
    for (const auto& r : results) {
        ok = ok && r.pass;
        if (cfg.format != "json") os << (r.pass ? "PASS " : "FAIL ") << r.name << " " << r.detail << "\n";
        if (!r.pass) std::cerr << "FAIL " << r.name << "\n";
    }
    emit(os.str());
    return ok ? kExitOk : kExitVerify;
}

int cmd_bessel() {
    if (!(cfg.x > 0)) throw UsageError("--x must be positive");
    double log_value, scaled, ratio;
    if (cfg.precision == "extended") {
        const auto b = etq::bessel_i<etq::extended_real>(cfg.order, etq::extended_real(cfg.x));
        log_value = static_cast<double>(b.log_value);
        scaled = static_cast<double>(b.scaled);
        ratio = static_cast<double>(b.scaled / etq::bessel_i_main_term_scaled<etq::extended_real>(
                                                   cfg.order, etq::extended_real(cfg.x)));
    } else {
        const auto b = etq::bessel_i(cfg.order, cfg.x);
        log_value = b.log_value;
        scaled = b.scaled;
        ratio = b.scaled / etq::bessel_i_main_term_scaled(cfg.order, cfg.x);
    }
    std::ostringstream os;
    if (cfg.format == "json") {
        os << json{{"l", cfg.order},
                   {"x", cfg.x},
                   {"precision", cfg.precision},
                   {"log_value", log_value},
                   {"scaled", scaled},
                   {"main_term_ratio", ratio}}
                  .dump(1)
           << "\n";
    } else {
        os << "l,x,precision,log_value,scaled,main_term_ratio\n"
           << cfg.order << "," << num(cfg.x) << "," << cfg.precision << "," << num(log_value) << "," << num(scaled)
           << "," << num(ratio) << "\n";
    }
    emit(os.str());
    return kExitOk;
}

int cmd_residue_series() {
    const int N = cfg.n_max ? cfg.n_max : 50;
    const auto c = etq::residue_series(N).integer_coeffs();
    std::ostringstream os;
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& v : c) arr.push_back(v.get_str());
        os << json{{"N", N}, {"coeffs", arr}}.dump(1) << "\n";
    } else {
        os << "n,coefficient\n";
        for (int n = 0; n <= N; ++n) os << n << "," << c[n].get_str() << "\n";
    }
    emit(os.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact, numeric and asymptotic Fourier coefficients of theta(z)^4/(eta^9 theta(2z))"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--n-max", cfg.n_max, "largest q-exponent N_max")->check(CLI::PositiveNumber);
    app.add_option("--m-max", cfg.m_max, "largest |m| in the table (default: h support + 16, capped at 64)")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol", cfg.tol, "tolerance override for the subcommand's oracle checks")->check(CLI::PositiveNumber);
    app.add_option("--precision", cfg.precision, "double or extended")
        ->check(CLI::IsMember({"double", "extended"}));
    app.add_option("--cache-dir", cfg.cache_dir, "cache directory (default $ETQ_CACHE_DIR or ./.etq-cache)");
    app.add_flag("--no-cache", cfg.no_cache, "neither read nor write the table cache");
    app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", cfg.out, "output file (default standard output)");
    app.add_option("--threads", cfg.threads, "worker threads (default $ETQ_THREADS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--method", cfg.method, "table construction: auto, average or residue")
        ->check(CLI::IsMember({"auto", "average", "residue"}));
    app.add_flag("-q,--quiet", cfg.quiet, "no progress on standard error");

    auto* exact = app.add_subcommand("exact-table", "write the exact table b(m,n)");
    auto* compare = app.add_subcommand("compare", "exact vs asymptotic vs circle-method rows");
    compare->add_option("--m", cfg.m_list, "m values (repeatable or comma separated)")->delimiter(',');
    compare->add_option("--n-grid", cfg.n_grid, "n values (comma separated)")->delimiter(',')->check(CLI::PositiveNumber);
    compare->add_option("--wright-max-n", cfg.wright_max_n, "run the circle method for n up to this value")
        ->check(CLI::NonNegativeNumber);
    compare->add_option("--ratio-band", cfg.ratio_band, "fail when |exact/asymptotic - 1| exceeds this in the theorem range")
        ->check(CLI::PositiveNumber);
    compare->add_flag("--one-sided", cfg.one_sided, "compare the |zeta| > 1 expansion instead of the average");
    auto* verify = app.add_subcommand("verify", "run the lemma-level check suites");
    verify->add_option("--suite", cfg.suites, "restrict to these suites")->delimiter(',');
    auto* bessel = app.add_subcommand("bessel", "evaluate I_l(x)");
    bessel->add_option("--l", cfg.order, "integer order")->required();
    bessel->add_option("--x", cfg.x, "argument")->required();
    auto* residue = app.add_subcommand("residue-series", "coefficients of eta(2tau)^8/eta(tau)^16");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    if (cfg.threads > 0) etq::set_thread_count(cfg.threads);

    try {
        if (*exact) return cmd_exact_table();
        if (*compare) return cmd_compare();
        if (*verify) return cmd_verify();
        if (*bessel) return cmd_bessel();
        if (*residue) return cmd_residue_series();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const etq::OutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    }
    return kExitUsage;
}
