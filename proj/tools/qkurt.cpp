// qkurt: command-line front end to libquantkurt.

#include "quantkurt/quantkurt.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kExitMalformed = 1;
constexpr int kExitEstimation = 2;

struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

void check(qk_status s) {
    if (s == QK_OK) return;
    const int code = (s == QK_ERR_DEGENERATE_TIES || s == QK_ERR_NEGATIVE_DISCRIMINANT)
                         ? kExitEstimation
                         : kExitMalformed;
    std::string msg = qk_status_string(s);
    const std::string detail = qk_last_error();
    if (!detail.empty() && detail != msg) msg += ": " + detail;
    throw CliError(code, msg);
}

struct ModelHandle {
    std::unique_ptr<qk_model, void (*)(qk_model*)> ptr{nullptr, qk_model_free};
    const qk_model* get() const { return ptr.get(); }
};

ModelHandle parse_model(const std::string& spec) {
    qk_model* m = nullptr;
    check(qk_model_parse(spec.c_str(), &m));
    ModelHandle h;
    h.ptr.reset(m);
    return h;
}

std::string model_spec(const qk_model* m) {
    size_t needed = 0;
    qk_model_spec(m, nullptr, 0, &needed);
    std::string s(needed, '\0');
    check(qk_model_spec(m, s.data(), s.size(), &needed));
    s.resize(needed - 1);
    return s;
}

std::optional<double> parse_number(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
    return v;
}

// Accepts decimals and fractions such as "1/3".
double parse_real(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (auto v = parse_number(text)) return *v;
    } else {
        auto num = parse_number(std::string_view(text).substr(0, slash));
        auto den = parse_number(std::string_view(text).substr(slash + 1));
        if (num && den && *den != 0.0) return *num / *den;
    }
    throw CLI::ValidationError("not a number: '" + text + "'");
}

// A CLI11 option bound to a real that accepts fractions.
CLI::Option* add_real(CLI::App* app, const std::string& name, double& target,
                      const std::string& help) {
    return app->add_option_function<std::string>(
                  name, [&target](const std::string& s) { target = parse_real(s); }, help)
        ->type_name("REAL");
}

CLI::Option* add_optional_real(CLI::App* app, const std::string& name,
                               std::optional<double>& target, const std::string& help) {
    return app->add_option_function<std::string>(
                  name, [&target](const std::string& s) { target = parse_real(s); }, help)
        ->type_name("REAL");
}

CLI::Option* add_real_list(CLI::App* app, const std::string& name, std::vector<double>& target,
                           const std::string& help) {
    return app
        ->add_option_function<std::vector<std::string>>(
            name,
            [&target](const std::vector<std::string>& items) {
                target.clear();
                for (const auto& s : items) target.push_back(parse_real(s));
            },
            help)
        ->delimiter(',')
        ->type_name("REAL,...");
}

// Rows of cells printed either as CSV or as aligned columns.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& os, bool pretty) const {
        if (!pretty) {
            print_csv_row(os, header_);
            for (const auto& r : rows_) print_csv_row(os, r);
            return;
        }
        std::vector<size_t> width(header_.size(), 0);
        auto grow = [&](const std::vector<std::string>& r) {
            for (size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
        };
        grow(header_);
        for (const auto& r : rows_) grow(r);
        auto line = [&](const std::vector<std::string>& r) {
            for (size_t i = 0; i < r.size(); ++i) {
                if (i) os << "  ";
                os << std::string(width[i] - r[i].size(), ' ') << r[i];
            }
            os << '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
    }

private:
    static void print_csv_row(std::ostream& os, const std::vector<std::string>& r) {
        for (size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            if (r[i].find_first_of(",\"") != std::string::npos) {
                os << '"';
                for (char c : r[i]) os << (c == '"' ? "\"\"" : std::string(1, c));
                os << '"';
            } else {
                os << r[i];
            }
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string fmt(double v, bool precise, int decimals = 3) {
    char buf[64];
    if (precise) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
        if (std::string_view(buf).find_first_not_of("-0.") == std::string_view::npos && buf[0] == '-') {
            return buf + 1;  // no "-0.000"
        }
    }
    return buf;
}

std::string fmt_prob(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Catalogue {
    struct Entry {
        int number;
        std::string label;
        ModelHandle model;
    };
    std::vector<Entry> entries;

    Catalogue() {
        const size_t n = qk_catalogue_size();
        for (size_t i = 0; i < n; ++i) {
            Entry e;
            const char* label = nullptr;
            qk_model* m = nullptr;
            check(qk_catalogue_entry(i, &e.number, &label, &m));
            e.label = label;
            e.model.ptr.reset(m);
            entries.push_back(std::move(e));
        }
    }
};

double matched_p(double r) {
    double p = 0.0;
    check(qk_matched_p(r, &p));
    return p;
}

// Largest asymptotic relative width over the catalogue at (p(1/3), 1/3),
// skipping the skew-t models whose intervals converge too slowly to matter.
double catalogue_max_rw() {
    const double r = 1.0 / 3.0;
    const double p = matched_p(r);
    double best = 0.0;
    for (const auto& e : Catalogue().entries) {
        if (e.label.rfind("Skew-t", 0) == 0) continue;
        qk_vst_constants c;
        double kappa = 0.0, rw = 0.0;
        check(qk_model_vst_constants(e.model.get(), p, r, &c));
        check(qk_kurtosis_ratio(e.model.get(), p, r, &kappa));
        check(qk_asymptotic_width(&c, kappa, nullptr, &rw));
        best = std::max(best, rw);
    }
    return best;
}

std::vector<double> read_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(kExitMalformed, "cannot open '" + path + "'");
    std::vector<double> values;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto v = parse_number(line);
        if (!v) {
            if (line_no == 1) continue;  // header
            throw CliError(kExitMalformed,
                           path + ":" + std::to_string(line_no) + ": not a number: '" + line + "'");
        }
        if (!std::isfinite(*v)) {
            throw CliError(kExitMalformed, path + ":" + std::to_string(line_no) + ": non-finite value");
        }
        values.push_back(*v);
    }
    if (values.size() < qk_min_sample_size()) {
        throw CliError(kExitMalformed, "insufficient data: " + std::to_string(values.size()) +
                                           " values, need at least " +
                                           std::to_string(qk_min_sample_size()));
    }
    return values;
}

struct CiArgs {
    std::string file;
    std::optional<double> p, q;
    double r = 1.0 / 3.0;
    double alpha = 0.05;
    double bandwidth_a = qk_default_bandwidth_a();
    bool precise = false;
    bool pretty = false;
};

int run_ci(const CiArgs& a) {
    const auto data = read_data(a.file);
    const double p = a.p.value_or(matched_p(a.r));
    struct Row {
        const char* measure;
        double lo, hi;
    };
    std::vector<Row> rows{{"kappa", p, a.r}};
    if (a.q) {
        rows.push_back({"pi", *a.q, a.r});
        rows.push_back({"tau", p, *a.q});
    }
    Table t({"measure", "lower_prob", "upper_prob", "n", "estimate", "a0", "a1", "a2", "lower",
             "upper", "level", "relative_width"});
    for (const auto& row : rows) {
        qk_ratio_report rep;
        const qk_status s =
            qk_ratio_interval(data.data(), data.size(), row.lo, row.hi, a.alpha, a.bandwidth_a, &rep);
        if (s != QK_OK) {
            const std::string detail = qk_last_error();
            std::string why;
            if (s == QK_ERR_DEGENERATE_TIES) {
                why = "two order statistics needed for the estimate coincide (tied or constant data)";
            } else if (s == QK_ERR_NEGATIVE_DISCRIMINANT) {
                why = "estimated variance quadratic has 4 a0 a2 - a1^2 <= 0, so no interval exists; "
                      "try a larger sample or a different --bandwidth-a";
            }
            if (!why.empty()) {
                throw CliError(kExitEstimation,
                               std::string(row.measure) + ": " + qk_status_string(s) + ": " + why);
            }
            check(s);
        }
        const int d = 6;
        t.add({row.measure, fmt_prob(row.lo), fmt_prob(row.hi), std::to_string(rep.n),
               fmt(rep.interval.estimate, a.precise, d), fmt(rep.constants.a0, a.precise, d),
               fmt(rep.constants.a1, a.precise, d), fmt(rep.constants.a2, a.precise, d),
               fmt(rep.interval.lower, a.precise, d), fmt(rep.interval.upper, a.precise, d),
               fmt_prob(rep.interval.level), fmt(rep.interval.relative_width, a.precise, d)});
    }
    t.print(std::cout, a.pretty);
    return 0;
}

struct TablesArgs {
    int which = 1;
    std::optional<double> p, q, r;
    bool precise = false;
    bool pretty = false;
};

int run_tables(const TablesArgs& a) {
    const Catalogue cat;
    if (a.which == 1) {
        std::vector<double> rs = a.r ? std::vector<double>{*a.r}
                                     : std::vector<double>{0.3, 1.0 / 3.0, 0.35, 0.4};
        std::vector<std::string> header{"number", "model"};
        for (double r : rs) header.push_back("r=" + fmt_prob(r));
        Table t(header);
        for (const auto& e : cat.entries) {
            std::vector<std::string> row{std::to_string(e.number), e.label};
            for (double r : rs) {
                double k = 0.0;
                check(qk_kurtosis_ratio(e.model.get(), a.p.value_or(matched_p(r)), r, &k));
                row.push_back(fmt(k, a.precise));
            }
            t.add(row);
        }
        t.print(std::cout, a.pretty);
        return 0;
    }
    if (a.which == 2) {
        struct Triple {
            double p, q, r;
        };
        std::vector<Triple> triples;
        if (a.p || a.q || a.r) {
            if (!a.q) throw CliError(kExitMalformed, "tables 2 needs --q when --p or --r is given");
            const double r = a.r.value_or(1.0 / 3.0);
            triples.push_back({a.p.value_or(matched_p(r)), *a.q, r});
        } else {
            triples.push_back({0.125, 0.25, 0.375});
            triples.push_back({0.09815, 0.1586553, 1.0 / 3.0});
        }
        Table t({"number", "model", "p", "q", "r", "pi", "tau", "kappa"});
        for (const auto& tr : triples) {
            for (const auto& e : cat.entries) {
                qk_shape_summary s;
                check(qk_model_shape_summary(e.model.get(), tr.p, tr.q, tr.r, &s));
                t.add({std::to_string(e.number), e.label, fmt_prob(tr.p), fmt_prob(tr.q),
                       fmt_prob(tr.r), fmt(s.pi, a.precise), fmt(s.tau, a.precise),
                       fmt(s.kappa, a.precise)});
            }
        }
        t.print(std::cout, a.pretty);
        return 0;
    }
    const double r = a.r.value_or(1.0 / 3.0);
    const double p = a.p.value_or(matched_p(r));
    Table t({"number", "model", "kappa", "a0", "a1", "a2", "w_asym", "rw_asym"});
    for (const auto& e : cat.entries) {
        qk_vst_constants c;
        double kappa = 0.0, w = 0.0, rw = 0.0;
        check(qk_kurtosis_ratio(e.model.get(), p, r, &kappa));
        check(qk_model_vst_constants(e.model.get(), p, r, &c));
        check(qk_asymptotic_width(&c, kappa, &w, &rw));
        t.add({std::to_string(e.number), e.label, fmt(kappa, a.precise), fmt(c.a0, a.precise),
               fmt(c.a1, a.precise), fmt(c.a2, a.precise), fmt(w, a.precise), fmt(rw, a.precise)});
    }
    t.print(std::cout, a.pretty);
    return 0;
}

struct CoverageArgs {
    std::vector<std::string> models{"normal"};
    std::vector<size_t> ns{400};
    std::vector<double> alphas{0.05};
    qk_coverage_config cfg{};
    bool precise = false;
    bool pretty = false;
};

int run_coverage(const CoverageArgs& a) {
    Table t({"model", "n", "level", "mean_kappa", "coverage", "rw_hat", "failures"});
    for (const auto& spec : a.models) {
        const auto model = parse_model(spec);
        const std::string name = model_spec(model.get());
        for (size_t n : a.ns) {
            for (double alpha : a.alphas) {
                qk_coverage_config cfg = a.cfg;
                cfg.n = n;
                cfg.alpha = alpha;
                qk_coverage_report rep;
                check(qk_coverage_study(model.get(), &cfg, &rep));
                t.add({name, std::to_string(n), fmt_prob(rep.level), fmt(rep.mean_estimate, a.precise, 4),
                       fmt(rep.coverage, a.precise, 4), fmt(rep.mean_rw_asym_hat, a.precise, 4),
                       std::to_string(rep.failures)});
            }
        }
    }
    t.print(std::cout, a.pretty);
    return 0;
}

struct PowerArgs {
    std::string family = "beta";
    std::vector<double> grid;
    std::vector<size_t> ns{200};
    qk_power_config cfg{};
    bool precise = false;
    bool pretty = false;
};

int run_power(const PowerArgs& a) {
    std::vector<double> grid = a.grid;
    if (grid.empty()) {
        grid = a.family == "tmix" ? std::vector<double>{0, 0.5, 1, 1.5, 2, 3, 4, 6}
                                  : std::vector<double>{1.0 / 3.0, 0.5, 1, 2, 3};
    }
    Table t({"x", "parameter", "n", "rejection_rate", "failures"});
    for (size_t n : a.ns) {
        qk_power_config cfg = a.cfg;
        cfg.n = n;
        std::vector<qk_power_point> pts(grid.size());
        check(qk_power_study(a.family.c_str(), grid.data(), grid.size(), &cfg, pts.data()));
        for (const auto& pt : pts) {
            t.add({fmt(pt.x, a.precise, 4), fmt(pt.parameter, a.precise, 4), std::to_string(n),
                   fmt(pt.rejection_rate, a.precise, 4), std::to_string(pt.failures)});
        }
    }
    t.print(std::cout, a.pretty);
    return 0;
}

struct SampleSizeArgs {
    double alpha = 0.05;
    double target_rw = 0.2;
    std::optional<double> max_rw;
};

int run_samplesize(const SampleSizeArgs& a) {
    uint64_t n = 0;
    check(qk_required_sample_size(a.alpha, a.target_rw, a.max_rw.value_or(catalogue_max_rw()), &n));
    std::cout << n << '\n';
    return 0;
}

struct SampleArgs {
    std::string model = "normal";
    size_t n = 100;
    uint64_t seed = 1;
};

int run_sample(const SampleArgs& a) {
    const auto model = parse_model(a.model);
    std::vector<double> out(a.n);
    check(qk_model_sample(model.get(), a.seed, a.n, out.data()));
    for (double v : out) std::cout << fmt(v, true) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantile kurtosis, peakedness and tail-weight: population tables, "
                 "distribution-free intervals and Monte Carlo studies."};
    app.set_version_flag("--version", std::string(qk_version()));
    app.require_subcommand(1);

    CiArgs ci;
    auto* ci_cmd = app.add_subcommand("ci", "Interval for R_p/R_r (and R_q/R_r, R_p/R_q with --q) from a data file");
    ci_cmd->add_option("file", ci.file, "One value per line, optional header line")->required();
    add_optional_real(ci_cmd, "--p", ci.p, "Outer probability (default: matched to r)");
    add_optional_real(ci_cmd, "--q", ci.q, "Middle probability; adds pi and tau rows");
    add_real(ci_cmd, "--r", ci.r, "Inner probability")->default_str("1/3");
    add_real(ci_cmd, "--alpha", ci.alpha, "1 - confidence level")->default_str("0.05");
    add_real(ci_cmd, "--bandwidth-a", ci.bandwidth_a, "Sparsity bandwidth constant")->default_str("0.2");
    ci_cmd->add_flag("--precise", ci.precise, "Full precision output");
    ci_cmd->add_flag("--pretty", ci.pretty, "Aligned columns instead of CSV");

    TablesArgs tab;
    auto* tab_cmd = app.add_subcommand("tables", "Population values for the reference models");
    tab_cmd->add_option("which", tab.which, "1: kappa, 2: (pi, tau, kappa), 3: VST constants and widths")
        ->required()
        ->check(CLI::IsMember({1, 2, 3}));
    add_optional_real(tab_cmd, "--p", tab.p, "Outer probability");
    add_optional_real(tab_cmd, "--q", tab.q, "Middle probability (table 2)");
    add_optional_real(tab_cmd, "--r", tab.r, "Inner probability");
    tab_cmd->add_flag("--precise", tab.precise, "Full precision output");
    tab_cmd->add_flag("--pretty", tab.pretty, "Aligned columns instead of CSV");

    CoverageArgs cov;
    qk_coverage_config_init(&cov.cfg);
    auto* cov_cmd = app.add_subcommand("coverage", "Monte Carlo coverage and width of the kappa interval");
    cov_cmd->add_option("--model", cov.models, "Model spec(s), e.g. normal, t(2), beta(1/2,1/2)")
        ->delimiter(';');
    cov_cmd->add_option("--n", cov.ns, "Sample size(s)")->delimiter(',');
    add_real_list(cov_cmd, "--alpha", cov.alphas, "1 - confidence level(s)")->default_str("0.05");
    cov_cmd->add_option("--reps", cov.cfg.reps, "Replications")->capture_default_str();
    cov_cmd->add_option("--seed", cov.cfg.seed, "Master seed")->capture_default_str();
    add_real(cov_cmd, "--bandwidth-a", cov.cfg.bandwidth_a, "Sparsity bandwidth constant")->default_str("0.2");
    cov_cmd->add_option("--workers", cov.cfg.workers, "Worker threads (0: all cores)");
    add_real(cov_cmd, "--p", cov.cfg.p, "Outer probability (default: matched to r)");
    add_real(cov_cmd, "--r", cov.cfg.r, "Inner probability")->default_str("1/3");
    cov_cmd->add_flag("--precise", cov.precise, "Full precision output");
    cov_cmd->add_flag("--pretty", cov.pretty, "Aligned columns instead of CSV");

    PowerArgs pow;
    qk_power_config_init(&pow.cfg);
    auto* pow_cmd = app.add_subcommand("power", "Monte Carlo power of the two-sided peakedness test");
    pow_cmd->add_option("--family", pow.family, "beta: Beta(b,b); tmix: t_{1/2} location mixture")
        ->check(CLI::IsMember({"beta", "tmix"}))
        ->capture_default_str();
    add_real_list(pow_cmd, "--grid", pow.grid, "Family parameters (b or delta)");
    pow_cmd->add_option("--n", pow.ns, "Sample size(s)")->delimiter(',');
    pow_cmd->add_option("--reps", pow.cfg.reps, "Replications per grid point")->capture_default_str();
    add_real(pow_cmd, "--q", pow.cfg.q, "Outer probability of pi_{q,r}")->default_str("1/4");
    add_real(pow_cmd, "--r", pow.cfg.r, "Inner probability of pi_{q,r}")->default_str("3/8");
    add_real(pow_cmd, "--level", pow.cfg.level, "Test level")->default_str("0.05");
    add_real(pow_cmd, "--pi0", pow.cfg.pi0, "Null value (default (1-2q)/(1-2r))");
    pow_cmd->add_option("--seed", pow.cfg.seed, "Master seed")->capture_default_str();
    add_real(pow_cmd, "--bandwidth-a", pow.cfg.bandwidth_a, "Sparsity bandwidth constant")->default_str("0.2");
    pow_cmd->add_option("--workers", pow.cfg.workers, "Worker threads (0: all cores)");
    pow_cmd->add_flag("--precise", pow.precise, "Full precision output");
    pow_cmd->add_flag("--pretty", pow.pretty, "Aligned columns instead of CSV");

    SampleSizeArgs ss;
    auto* ss_cmd = app.add_subcommand("samplesize", "Sample size for a target relative interval width");
    add_real(ss_cmd, "--alpha", ss.alpha, "1 - confidence level")->default_str("0.05");
    add_real(ss_cmd, "--target-rw", ss.target_rw, "Target relative width")->default_str("0.2");
    add_optional_real(ss_cmd, "--max-rw", ss.max_rw,
                      "Largest asymptotic relative width (default: reference models without skew-t)");

    SampleArgs smp;
    auto* smp_cmd = app.add_subcommand("sample", "Draw a seeded sample, one value per line");
    smp_cmd->add_option("--model", smp.model, "Model spec")->capture_default_str();
    smp_cmd->add_option("--n", smp.n, "Sample size")->capture_default_str();
    smp_cmd->add_option("--seed", smp.seed, "Seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitMalformed;
    }

    try {
        if (*ci_cmd) return run_ci(ci);
        if (*tab_cmd) return run_tables(tab);
        if (*cov_cmd) return run_coverage(cov);
        if (*pow_cmd) return run_power(pow);
        if (*ss_cmd) return run_samplesize(ss);
        if (*smp_cmd) return run_sample(smp);
    } catch (const CliError& e) {
        std::cerr << "qkurt: " << e.what() << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "qkurt: " << e.what() << '\n';
        return kExitMalformed;
    }
    return kExitMalformed;
}
