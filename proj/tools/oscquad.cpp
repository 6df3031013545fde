// Command-line front end for the oscillatory product-rule library: runs
// convergence studies against a self- or oracle-reference, one-shot
// integrations of sampled data, and weight dumps, all as deterministic CSV.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "oscquad/oscquad.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitDomain = 4;

constexpr int kSelfReferenceDegree = 512;

double f1(double x) { return std::tanh(x + 1.0); }
double f2(double x) { return std::pow(std::abs(x + 1.0), 4.5); }

struct BuiltinFunction {
    std::string_view name;
    double a;
    oscquad::KernelVariant variant;
    double (*f)(double);
    std::array<double, 2> default_ys;
};

constexpr std::array<BuiltinFunction, 2> kBuiltins = {{
    {"f1", 1.0, oscquad::KernelVariant::sin, &f1, {-0.7, 0.5}},
    {"f2", 2.0, oscquad::KernelVariant::cos, &f2, {-1.5, 1.0}},
}};

const BuiltinFunction& builtin_by_name(const std::string& name) {
    for (const auto& b : kBuiltins)
        if (b.name == name) return b;
    throw std::invalid_argument("unknown built-in function: " + name);
}

oscquad::KernelVariant variant_by_name(const std::string& name) {
    if (name == "sin") return oscquad::KernelVariant::sin;
    if (name == "cos") return oscquad::KernelVariant::cos;
    throw std::invalid_argument("unknown kernel: " + name);
}

/// 17 significant digits: doubles survive a text round trip bit for bit and
/// repeated runs emit byte-identical files.
std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

/// Output sink: --out PATH or stdout.
class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::ios_base::failure("cannot open output file: " + path);
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

    void finish() {
        stream().flush();
        if (!stream()) throw std::ios_base::failure("write failure on output");
    }

private:
    std::ofstream file_;
};

struct MalformedSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_blank_or_comment(std::string_view line) {
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string_view::npos || line[pos] == '#';
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(std::string_view token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw MalformedSamples("bad numeric field: '" + std::string(token) + "'");
    return v;
}

int parse_int(std::string_view token) {
    int v = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw MalformedSamples("bad integer field: '" + std::string(token) + "'");
    return v;
}

/// Sample file: a header line "a=<real> m=<int>", then m+1 reals, one per
/// line; '#' comment lines and blank lines are skipped.
oscquad::GridFunction load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open samples file: " + path);

    std::string line;
    bool have_header = false;
    double a = 0.0;
    int m = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (is_blank_or_comment(line)) continue;
        const std::string_view body = trim(line);
        if (!have_header) {
            const auto space = body.find_first_of(" \t");
            if (space == std::string_view::npos)
                throw MalformedSamples("header must be 'a=<real> m=<int>'");
            const std::string_view a_tok = trim(body.substr(0, space));
            const std::string_view m_tok = trim(body.substr(space + 1));
            if (!a_tok.starts_with("a=") || !m_tok.starts_with("m="))
                throw MalformedSamples("header must be 'a=<real> m=<int>'");
            a = parse_real(a_tok.substr(2));
            m = parse_int(m_tok.substr(2));
            if (m < 1) throw MalformedSamples("degree in header must be >= 1");
            values.reserve(static_cast<std::size_t>(m) + 1);
            have_header = true;
            continue;
        }
        if (values.size() > static_cast<std::size_t>(m))
            throw MalformedSamples("more than m+1 sample values");
        const double v = parse_real(body);
        if (!std::isfinite(v)) throw MalformedSamples("sample values must be finite");
        values.push_back(v);
    }
    if (in.bad()) throw std::ios_base::failure("read failure on samples file: " + path);
    if (!have_header) throw MalformedSamples("missing header line");
    if (values.size() != static_cast<std::size_t>(m) + 1)
        throw MalformedSamples("expected exactly m+1 sample values");
    try {
        return oscquad::make_grid_function(oscquad::make_grid(m, a), std::move(values));
    } catch (const std::invalid_argument& e) {
        throw MalformedSamples(e.what());
    }
}

/// Samples a built-in on its native grid, cached per degree across the cells
/// of a study.
class BuiltinSampler {
public:
    explicit BuiltinSampler(const BuiltinFunction& fn) : fn_(fn) {}

    const oscquad::GridFunction& at_degree(int m) {
        auto it = cache_.find(m);
        if (it == cache_.end())
            it = cache_.emplace(m, oscquad::sample(oscquad::make_grid(m, fn_.a), fn_.f)).first;
        return it->second;
    }

private:
    const BuiltinFunction& fn_;
    std::map<int, oscquad::GridFunction> cache_;
};

struct ReportRow {
    int m;
    double omega;
    double y;
    double value;
    double error;
    std::string_view reference_kind;
};

void write_report_header(std::ostream& out) { out << "m,omega,y,value,error,reference_kind\n"; }

void write_report_row(std::ostream& out, const ReportRow& row) {
    out << row.m << ',' << fmt_real(row.omega) << ',' << fmt_real(row.y) << ','
        << fmt_real(row.value) << ',' << fmt_real(row.error) << ',' << row.reference_kind << '\n';
}

/// Least-squares slope of log(error) against log(m); rows with zero error
/// carry no information on the decay rate and are skipped.
std::optional<double> loglog_slope(const std::vector<ReportRow>& rows) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& r : rows) {
        if (r.error > 0.0) {
            lx.push_back(std::log(static_cast<double>(r.m)));
            ly.push_back(std::log(r.error));
        }
    }
    if (lx.size() < 2) return std::nullopt;
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

void check_y_domain(double y, double a) {
    if (!(y >= -a && y <= a))
        throw std::domain_error("evaluation point " + fmt_real(y) + " outside [-a, a]");
}

struct TableOptions {
    std::string function;
    int ell = 256;
    std::vector<int> ms;
    std::vector<double> omegas;
    std::vector<double> ys;
    std::string out_path;
};

const std::vector<int> kDefaultDegrees = {4, 8, 16, 32, 64, 128, 256};
const std::vector<double> kDefaultOmegas = {10.0, 100.0, 1000.0};

int run_table(const TableOptions& opt) {
    const BuiltinFunction& fn = builtin_by_name(opt.function);
    std::vector<int> ms = opt.ms.empty() ? kDefaultDegrees : opt.ms;
    std::vector<double> omegas = opt.omegas.empty() ? kDefaultOmegas : opt.omegas;
    std::vector<double> ys =
        opt.ys.empty() ? std::vector<double>(fn.default_ys.begin(), fn.default_ys.end()) : opt.ys;
    std::sort(ms.begin(), ms.end());
    std::sort(omegas.begin(), omegas.end());
    std::sort(ys.begin(), ys.end());
    for (double y : ys) check_y_domain(y, fn.a);

    BuiltinSampler sampler(fn);
    OutputSink sink(opt.out_path);
    write_report_header(sink.stream());
    for (double omega : omegas) {
        const auto kernel = oscquad::make_kernel(fn.variant, omega);
        for (double y : ys) {
            const double reference =
                oscquad::integrate(sampler.at_degree(kSelfReferenceDegree), kernel, opt.ell, y);
            for (int m : ms) {
                const double value =
                    m == kSelfReferenceDegree
                        ? reference
                        : oscquad::integrate(sampler.at_degree(m), kernel, opt.ell, y);
                write_report_row(sink.stream(), {m, omega, y, value, std::abs(reference - value),
                                                 "self_512"});
            }
        }
    }
    sink.finish();
    return kExitOk;
}

struct IntegrateOptions {
    std::string samples_path;
    std::string function;
    std::string kernel;
    double omega = 0.0;
    bool have_a = false;
    double a = 0.0;
    int ell = 256;
    std::vector<int> ms;
    std::vector<double> ys;
    std::string out_path;
};

int run_integrate(const IntegrateOptions& opt) {
    oscquad::GridFunction samples;
    oscquad::KernelVariant variant{};
    if (!opt.samples_path.empty()) {
        if (!opt.function.empty())
            throw std::invalid_argument("--samples and --function are mutually exclusive");
        if (opt.kernel.empty()) throw std::invalid_argument("--samples mode requires --kernel");
        if (!opt.ms.empty())
            throw std::invalid_argument("--m conflicts with --samples (degree comes from the file)");
        samples = load_samples(opt.samples_path);
        if (opt.have_a && opt.a != samples.grid.half_width)
            throw std::invalid_argument("--a disagrees with the samples file header");
        variant = variant_by_name(opt.kernel);
    } else if (!opt.function.empty()) {
        if (!opt.kernel.empty() || opt.have_a)
            throw std::invalid_argument("built-in functions fix their own kernel and interval");
        if (opt.ms.size() != 1)
            throw std::invalid_argument("built-in mode requires exactly one --m");
        const BuiltinFunction& fn = builtin_by_name(opt.function);
        samples = oscquad::sample(oscquad::make_grid(opt.ms.front(), fn.a), fn.f);
        variant = fn.variant;
    } else {
        throw std::invalid_argument("need either --samples or --function");
    }
    if (opt.ys.empty()) throw std::invalid_argument("need at least one --y");
    for (double y : opt.ys) check_y_domain(y, samples.grid.half_width);

    const auto kernel = oscquad::make_kernel(variant, opt.omega);
    const std::vector<double> values =
        oscquad::integrate_many(samples, kernel, opt.ell, opt.ys);
    OutputSink sink(opt.out_path);
    sink.stream() << "y,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        sink.stream() << fmt_real(opt.ys[i]) << ',' << fmt_real(values[i]) << '\n';
    sink.finish();
    return kExitOk;
}

struct ConvergeOptions {
    std::string function;
    double omega = 10.0;
    int ell = 256;
    std::vector<int> ms;
    bool have_y = false;
    double y = 0.0;
    std::string reference = "self";
    std::string out_path;
};

int run_converge(const ConvergeOptions& opt) {
    const BuiltinFunction& fn = builtin_by_name(opt.function);
    std::vector<int> ms = opt.ms.empty() ? kDefaultDegrees : opt.ms;
    std::sort(ms.begin(), ms.end());
    const double y = opt.have_y ? opt.y : fn.default_ys[0];
    check_y_domain(y, fn.a);
    if (opt.reference != "self" && opt.reference != "oracle")
        throw std::invalid_argument("--reference must be self or oracle");

    const auto kernel = oscquad::make_kernel(fn.variant, opt.omega);
    BuiltinSampler sampler(fn);
    double reference = 0.0;
    std::string_view kind;
    if (opt.reference == "self") {
        reference = oscquad::integrate(sampler.at_degree(kSelfReferenceDegree), kernel, opt.ell, y);
        kind = "self_512";
    } else {
        const auto ref = oscquad::reference_integral(fn.f, kernel, fn.a, y);
        if (!ref.converged)
            std::cerr << "warning: oracle stopped at interlevel difference "
                      << fmt_real(ref.achieved_tol) << " above its target\n";
        reference = ref.value;
        kind = "oracle";
    }

    std::vector<ReportRow> rows;
    rows.reserve(ms.size());
    for (int m : ms) {
        const double value =
            opt.reference == "self" && m == kSelfReferenceDegree
                ? reference
                : oscquad::integrate(sampler.at_degree(m), kernel, opt.ell, y);
        rows.push_back({m, opt.omega, y, value, std::abs(reference - value), kind});
    }

    OutputSink sink(opt.out_path);
    write_report_header(sink.stream());
    for (const auto& row : rows) write_report_row(sink.stream(), row);
    const auto slope = loglog_slope(rows);
    sink.stream() << "# slope," << (slope ? fmt_real(*slope) : std::string()) << '\n';
    sink.finish();
    return kExitOk;
}

struct WeightsOptions {
    int m = 0;
    double a = 0.0;
    int ell = 256;
    std::string kernel;
    double omega = 0.0;
    double y = 0.0;
    std::string out_path;
};

int run_weights(const WeightsOptions& opt) {
    check_y_domain(opt.y, opt.a);
    const auto kernel = oscquad::make_kernel(variant_by_name(opt.kernel), opt.omega);
    const auto rw = oscquad::compute_weights(opt.m, opt.a, opt.ell, kernel, opt.y);
    const auto grid = oscquad::make_grid(opt.m, opt.a);
    OutputSink sink(opt.out_path);
    sink.stream() << "j,t_j,w_j\n";
    for (std::size_t j = 0; j < rw.weights.size(); ++j)
        sink.stream() << j << ',' << fmt_real(grid.nodes[j]) << ',' << fmt_real(rw.weights[j])
                      << '\n';
    sink.finish();
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Product integration of oscillatory integrals from equispaced samples"};
    app.require_subcommand(1);

    TableOptions table_opt;
    auto* table = app.add_subcommand(
        "table", "Convergence table for a built-in function against the m=512 self-reference");
    table->add_option("--function", table_opt.function, "Built-in integrand (f1 or f2)")
        ->required()
        ->check(CLI::IsMember({"f1", "f2"}));
    table->add_option("--ell", table_opt.ell, "Boolean-sum iteration count")
        ->check(CLI::PositiveNumber);
    table->add_option("--m", table_opt.ms, "Degrees (repeatable; default 4..256 doubling)")
        ->check(CLI::PositiveNumber);
    table->add_option("--omega", table_opt.omegas,
                      "Frequencies (repeatable; default 10, 100, 1000)")
        ->check(CLI::NonNegativeNumber);
    table->add_option("--y", table_opt.ys, "Evaluation points (repeatable; default per function)");
    table->add_option("--out", table_opt.out_path, "Output CSV path (default stdout)");

    IntegrateOptions int_opt;
    auto* integ = app.add_subcommand("integrate", "Integrate sampled or built-in data at given y");
    integ->add_option("--samples", int_opt.samples_path, "Sample file ('a=<real> m=<int>' header)");
    integ->add_option("--function", int_opt.function, "Built-in integrand instead of samples")
        ->check(CLI::IsMember({"f1", "f2"}));
    integ->add_option("--kernel", int_opt.kernel, "Kernel for sampled data (sin or cos)")
        ->check(CLI::IsMember({"sin", "cos"}));
    integ->add_option("--omega", int_opt.omega, "Kernel frequency")
        ->required()
        ->check(CLI::NonNegativeNumber);
    integ->add_option("--a", int_opt.a, "Half-width consistency check for sampled data")
        ->check(CLI::PositiveNumber);
    integ->add_option("--ell", int_opt.ell, "Boolean-sum iteration count")
        ->check(CLI::PositiveNumber);
    integ->add_option("--m", int_opt.ms, "Degree for built-in sampling")
        ->check(CLI::PositiveNumber);
    integ->add_option("--y", int_opt.ys, "Evaluation points (repeatable)");
    integ->add_option("--out", int_opt.out_path, "Output CSV path (default stdout)");

    ConvergeOptions conv_opt;
    auto* conv = app.add_subcommand("converge",
                                    "Convergence report with self- or oracle-reference and slope");
    conv->add_option("--function", conv_opt.function, "Built-in integrand (f1 or f2)")
        ->required()
        ->check(CLI::IsMember({"f1", "f2"}));
    conv->add_option("--omega", conv_opt.omega, "Kernel frequency")
        ->check(CLI::NonNegativeNumber);
    conv->add_option("--ell", conv_opt.ell, "Boolean-sum iteration count")
        ->check(CLI::PositiveNumber);
    conv->add_option("--m", conv_opt.ms, "Degrees (repeatable; default 4..256 doubling)")
        ->check(CLI::PositiveNumber);
    conv->add_option("--reference", conv_opt.reference, "Error reference: self or oracle")
        ->check(CLI::IsMember({"self", "oracle"}));
    conv->add_option("--out", conv_opt.out_path, "Output CSV path (default stdout)");
    auto* conv_y = conv->add_option("--y", conv_opt.y, "Evaluation point (default per function)");

    WeightsOptions w_opt;
    auto* weights = app.add_subcommand("weights", "Dump the m+1 per-sample weights as CSV");
    weights->add_option("--m", w_opt.m, "Degree")->required()->check(CLI::PositiveNumber);
    weights->add_option("--a", w_opt.a, "Half-width of the interval")
        ->required()
        ->check(CLI::PositiveNumber);
    weights->add_option("--ell", w_opt.ell, "Boolean-sum iteration count")
        ->check(CLI::PositiveNumber);
    weights->add_option("--kernel", w_opt.kernel, "Kernel (sin or cos)")
        ->required()
        ->check(CLI::IsMember({"sin", "cos"}));
    weights->add_option("--omega", w_opt.omega, "Kernel frequency")
        ->required()
        ->check(CLI::NonNegativeNumber);
    weights->add_option("--y", w_opt.y, "Evaluation point")->required();
    weights->add_option("--out", w_opt.out_path, "Output CSV path (default stdout)");

    auto* int_a = integ->get_option("--a");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    int_opt.have_a = int_a->count() > 0;
    conv_opt.have_y = conv_y->count() > 0;

    try {
        if (table->parsed()) return run_table(table_opt);
        if (integ->parsed()) return run_integrate(int_opt);
        if (conv->parsed()) return run_converge(conv_opt);
        return run_weights(w_opt);
    } catch (const MalformedSamples& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
