#include "mergelab/cli.hpp"

#include "mergelab/analysis.hpp"
#include "mergelab/generators.hpp"
#include "mergelab/policy.hpp"
#include "mergelab/runs.hpp"
#include "mergelab/sorter.hpp"
#include "mergelab/trace_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mergelab {

namespace {

using nlohmann::json;

// Bad flags or unreadable input; maps to kExitUsage.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string read_all(std::istream& in)
{
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot open " + path);
    return read_all(f);
}

// Integers separated by whitespace and/or commas.
template <class T>
std::vector<T> parse_numbers(const std::string& text)
{
    std::vector<T> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != ',' && !std::isspace(static_cast<unsigned char>(text[j])))
            ++j;
        T value{};
        const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, value);
        if (ec != std::errc() || ptr != text.data() + j)
            throw UsageError("not an integer: '" + text.substr(i, j - i) + "'");
        out.push_back(value);
        i = j;
    }
    return out;
}

RunProfile parse_profile(const std::string& text)
{
    auto lengths = parse_numbers<Length>(text);
    if (lengths.empty())
        throw UsageError("empty profile");
    try {
        return RunProfile(std::move(lengths));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::int64_t> parse_array(const std::string& text)
{
    auto values = parse_numbers<std::int64_t>(text);
    if (values.empty())
        throw UsageError("empty input");
    return values;
}

PolicyVariant variant_of(const std::string& s)
{
    const auto v = parse_variant(s);
    if (!v)
        throw UsageError("unknown variant " + s);
    return *v;
}

std::optional<std::size_t> capacity_of(const std::string& s)
{
    if (s.empty())
        return std::nullopt;
    if (s == "java")
        return kJavaStackCapacity;
    const auto v = parse_numbers<std::size_t>(s);
    if (v.size() != 1 || v[0] == 0)
        throw UsageError("--capacity expects a positive integer or 'java'");
    return v[0];
}

// Where a profile comes from: --profile, --input FILE (an array) or --stdin.
struct Source {
    std::string profile;
    std::string input;
    bool use_stdin = false;
};

struct Loaded {
    RunProfile profile;
    std::optional<std::vector<std::int64_t>> array;
};

void add_source(CLI::App* cmd, Source& src)
{
    auto* p = cmd->add_option("--profile", src.profile, "comma-separated run lengths");
    auto* i = cmd->add_option("--input", src.input, "file of newline-separated integers (decomposed into runs)");
    auto* s = cmd->add_flag("--stdin", src.use_stdin,
                            "read from stdin: a comma-separated profile, one line of lengths, or an array");
    p->excludes(i)->excludes(s);
    i->excludes(s);
}

Loaded load(const Source& src, std::istream& in)
{
    Loaded l;
    auto from_array = [&](std::vector<std::int64_t> a) {
        l.profile = profile_of(decompose(a));
        l.array = std::move(a);
    };
    if (!src.profile.empty()) {
        l.profile = parse_profile(src.profile);
    } else if (!src.input.empty()) {
        from_array(parse_array(read_file(src.input)));
    } else if (src.use_stdin) {
        const std::string text = read_all(in);
        std::size_t lines = 0;
        std::istringstream ls(text);
        for (std::string line; std::getline(ls, line);)
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                ++lines;
        if (text.find(',') != std::string::npos || lines <= 1)
            l.profile = parse_profile(text);
        else
            from_array(parse_array(text));
    } else {
        throw UsageError("one of --profile, --input or --stdin is required");
    }
    return l;
}

std::string join(const std::vector<Length>& v, char sep)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

// --- decompose ---------------------------------------------------------------------

int cmd_decompose(const std::string& input, const std::string& format, std::istream& in, std::ostream& out)
{
    const auto a = parse_array(input.empty() ? read_all(in) : read_file(input));
    const auto runs = decompose(a);
    const RunProfile p = profile_of(runs);
    auto dir = [](Direction d) { return d == Direction::Decreasing ? "decreasing" : "nondecreasing"; };
    if (format == "csv") {
        out << "offset,length,direction\n";
        for (const auto& r : runs)
            out << r.offset << ',' << r.length << ',' << dir(r.direction) << '\n';
    } else if (format == "pretty") {
        out << "n = " << p.total() << ", rho = " << p.size() << ", realizable = " << (p.realizable() ? "yes" : "no")
            << '\n';
        for (const auto& r : runs)
            out << "  [" << r.offset << ", " << r.end() << ")  length " << r.length << "  " << dir(r.direction)
                << '\n';
    } else {
        json j;
        j["n"] = p.total();
        j["rho"] = p.size();
        j["realizable"] = p.realizable();
        j["profile"] = p.lengths();
        j["runs"] = json::array();
        for (const auto& r : runs)
            j["runs"].push_back({{"offset", r.offset}, {"length", r.length}, {"direction", dir(r.direction)}});
        out << j.dump(2) << '\n';
    }
    return kExitOk;
}

// --- sort ------------------------------------------------------------------------------

int cmd_sort(const std::string& input, const std::string& variant, const std::string& metrics_path,
             std::istream& in, std::ostream& out, std::ostream& err)
{
    auto a = parse_array(input.empty() ? read_all(in) : read_file(input));
    const auto v = variant_of(variant);
    const SortMetrics m = timsort_lite(a, v);
    std::string buf;
    for (auto x : a) {
        buf += std::to_string(x);
        buf += '\n';
    }
    out << buf;

    json j;
    j["variant"] = to_string(v);
    j["n"] = a.size();
    j["runs"] = m.runs;
    j["comparisons"] = m.comparisons;
    j["runComparisons"] = m.run_comparisons;
    j["mergeComparisons"] = m.merge_comparisons;
    j["mainLoopCost"] = m.main_loop_cost;
    j["forceCost"] = m.force_cost;
    j["mergeCost"] = m.merge_cost();
    j["maxHeight"] = m.max_height;
    j["moved"] = m.moved;
    if (metrics_path.empty()) {
        err << j.dump() << '\n';
    } else {
        std::ofstream f(metrics_path);
        if (!f)
            throw UsageError("cannot write " + metrics_path);
        f << j.dump(2) << '\n';
    }
    return kExitOk;
}

// --- simulate ----------------------------------------------------------------------------

int cmd_simulate(const Source& src, const std::string& variant, const std::string& capacity, bool trace_mode,
                 const std::string& format, std::istream& in, std::ostream& out)
{
    const Loaded l = load(src, in);
    const Trace t = simulate(l.profile, variant_of(variant), capacity_of(capacity));
    if (trace_mode) {
        if (format == "pretty") {
            for (const auto& e : t.events) {
                char head[32];
                std::snprintf(head, sizeof head, "%-5s %8llu  ", std::string(to_string(e.kind)).c_str(),
                              static_cast<unsigned long long>(e.cost));
                out << head << '(' << join(e.snapshot, ',') << ")\n";
            }
        } else {
            std::ostringstream buf;
            write_trace(buf, t);
            out << buf.str();
        }
        return kExitOk;
    }

    std::size_t merges[4] = {0, 0, 0, 0};
    for (const auto& e : t.events)
        if (is_merge(e.kind))
            ++merges[static_cast<int>(e.kind) - static_cast<int>(EventKind::Merge2)];
    json j;
    j["variant"] = to_string(t.variant);
    j["profile"] = t.profile.lengths();
    j["n"] = t.profile.total();
    j["rho"] = t.profile.size();
    j["capacity"] = t.capacity ? json(*t.capacity) : json(nullptr);
    j["mainLoopCost"] = t.main_loop_cost();
    j["forceCost"] = t.force_cost();
    j["totalCost"] = t.total_cost();
    j["maxHeight"] = t.max_height();
    j["overflows"] = t.overflow_count();
    j["merges"] = {{"M2", merges[0]}, {"M3", merges[1]}, {"M4", merges[2]}, {"M5", merges[3]}};
    j["mainLoopFinal"] = t.main_loop_final();
    if (format == "pretty") {
        out << "variant " << to_string(t.variant) << ", n " << t.profile.total() << ", rho " << t.profile.size()
            << "\nmain-loop cost " << t.main_loop_cost() << ", force cost " << t.force_cost() << ", max height "
            << t.max_height() << ", overflows " << t.overflow_count() << "\nmain loop ends at ("
            << join(t.main_loop_final(), ',') << ")\n";
    } else {
        out << j.dump(2) << '\n';
    }
    return kExitOk;
}

// --- gen ---------------------------------------------------------------------------------

struct GenOptions {
    bool realize = false;
    std::uint64_t seed = 0;
    std::string format = "csv";
};

void add_gen_options(CLI::App* cmd, GenOptions& g)
{
    cmd->add_flag("--realize", g.realize, "emit an integer array with this run decomposition");
    cmd->add_option("--seed", g.seed, "seed (random profiles and array realization; 0 = canonical array)");
    cmd->add_option("--format", g.format, "csv (comma-separated lengths) or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void emit_profile(const RunProfile& p, const GenOptions& g, std::ostream& out, json extra = json::object())
{
    if (g.realize) {
        if (!p.realizable())
            throw UsageError("profile is not realizable (a run before the last has length 1)");
        std::string buf;
        for (auto x : realize_array(p, g.seed)) {
            buf += std::to_string(x);
            buf += '\n';
        }
        out << buf;
        return;
    }
    if (g.format == "json") {
        extra["profile"] = p.lengths();
        extra["n"] = p.total();
        extra["rho"] = p.size();
        out << extra.dump() << '\n';
        return;
    }
    out << join(p.lengths(), ',') << '\n';
}

// --- check ---------------------------------------------------------------------------------

int cmd_check(const std::string& input, const std::string& format, double envelope, std::istream& in,
              std::ostream& out)
{
    TraceDocument doc;
    try {
        if (input.empty()) {
            doc = read_trace(in);
        } else {
            std::ifstream f(input);
            if (!f)
                throw UsageError("cannot open " + input);
            doc = read_trace(f);
        }
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
    if (!doc.has_events)
        doc.trace = simulate(doc.trace.profile, doc.trace.variant, doc.trace.capacity);

    const auto checks = audit_trace(doc.trace, AuditOptions{envelope});
    const bool ok = all_passed(checks);
    if (format == "csv") {
        out << "check,checked,violations,status,first_violation\n";
        for (const auto& c : checks)
            out << c.name << ',' << c.checked << ',' << c.violations << ',' << (c.passed() ? "pass" : "fail") << ",\""
                << c.first_violation << "\"\n";
    } else if (format == "json") {
        json j;
        j["variant"] = to_string(doc.trace.variant);
        j["passed"] = ok;
        j["checks"] = json::array();
        for (const auto& c : checks)
            j["checks"].push_back({{"name", c.name},
                                   {"checked", c.checked},
                                   {"violations", c.violations},
                                   {"firstViolation", c.first_violation}});
        out << j.dump(2) << '\n';
    } else {
        out << "variant " << to_string(doc.trace.variant) << ", n " << doc.trace.profile.total() << ", rho "
            << doc.trace.profile.size() << ", " << doc.trace.events.size() << " events\n";
        for (const auto& c : checks) {
            char line[128];
            std::snprintf(line, sizeof line, "  %-20s %-4s %10llu checked %6llu violations", c.name.c_str(),
                          c.passed() ? "PASS" : "FAIL", static_cast<unsigned long long>(c.checked),
                          static_cast<unsigned long long>(c.violations));
            out << line;
            if (!c.passed())
                out << "  first: " << c.first_violation;
            out << '\n';
        }
        out << (ok ? "all checks passed" : "some checks FAILED") << '\n';
    }
    return ok ? kExitOk : kExitCheckFailed;
}

// --- report --------------------------------------------------------------------------------

json to_json(const CostReport& r)
{
    auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
    json j;
    j["variant"] = to_string(r.variant);
    j["n"] = r.n;
    j["rho"] = r.rho;
    j["H"] = r.entropy;
    j["mainLoopCost"] = r.main_loop_cost;
    j["forceCost"] = r.force_cost;
    j["totalCost"] = r.total_cost;
    j["comparisons"] = r.comparisons ? json(*r.comparisons) : json(nullptr);
    j["maxHeight"] = r.max_height;
    j["referenceLower"] = r.reference_lower;
    j["costPerNH"] = opt(r.cost_per_nh);
    j["costPerNLogRho"] = opt(r.cost_per_nlogrho);
    j["alpha"] = {{"num", r.alpha.num}, {"den", r.alpha.den}, {"value", r.alpha.value()}};
    json checks = json::object();
    for (const auto& [name, b] : r.bound_checks)
        checks[name] = {{"value", b.value}, {"limit", b.limit}, {"satisfied", b.satisfied}};
    j["boundChecks"] = checks;
    return j;
}

int cmd_report(const Source& src, const std::string& variant, double envelope, std::istream& in, std::ostream& out)
{
    Loaded l = load(src, in);
    const auto v = variant_of(variant);
    CostReport r = report(l.profile, v, AuditOptions{envelope});
    if (l.array)
        r.comparisons = timsort_lite(*l.array, v).comparisons;
    out << to_json(r).dump(2) << '\n';
    return r.all_satisfied() ? kExitOk : kExitCheckFailed;
}

// --- bench ---------------------------------------------------------------------------------

struct BenchRow {
    std::string generator;
    std::string variant;
    std::uint64_t n = 0;
    std::uint64_t rho = 0;
    double entropy = 0;
    Length cost = 0;
    std::size_t max_height = 0;
    double margin = 0;

    auto key() const { return std::tie(generator, n, variant); }
};

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
            out.push_back(item);
    return out;
}

int cmd_bench(const std::string& gens, const std::string& ns, const std::string& variants, std::uint64_t rho_opt,
              std::uint64_t seed, unsigned threads, double envelope, std::ostream& out)
{
    struct Job {
        std::string generator;
        RunProfile profile;
    };
    std::vector<Job> jobs;
    const auto sizes = parse_numbers<std::uint64_t>(ns);
    for (const auto& g : split_list(gens)) {
        if (g == "paper") {
            for (auto id : {PaperVectorId::Fig2, PaperVectorId::Fig5, PaperVectorId::Prop81})
                jobs.push_back({"paper:" + std::string(to_string(id)), paper_vector(id)});
            continue;
        }
        for (std::uint64_t n : sizes) {
            if (n == 0)
                throw UsageError("--n values must be positive");
            if (g == "random") {
                const std::uint64_t rho = std::min(rho_opt ? rho_opt : std::max<std::uint64_t>(1, n / 8), (n + 1) / 2);
                jobs.push_back({g, random_profile(n, rho, seed + n)});
            } else if (g == "rtim") {
                jobs.push_back({g, rtim(static_cast<std::int64_t>(n))});
            } else if (g == "fib") {
                std::size_t h = 1;
                while (fib_tower_sum(h + 1) <= n)
                    ++h;
                jobs.push_back({g, fib_tower(h)});
            } else {
                throw UsageError("unknown generator " + g);
            }
        }
    }
    std::vector<PolicyVariant> vs;
    for (const auto& s : split_list(variants))
        vs.push_back(variant_of(s));

    auto run = [&](const Job& job, PolicyVariant v) {
        const auto s = simulate_summary(job.profile, v);
        BenchRow row;
        row.generator = job.generator;
        row.variant = to_string(v);
        row.n = job.profile.total();
        row.rho = job.profile.size();
        row.entropy = entropy(job.profile);
        row.cost = s.main_loop_cost;
        row.max_height = s.max_height;
        const double n = static_cast<double>(row.n);
        row.margin = (constants().kappa * n * row.entropy + envelope * n - static_cast<double>(row.cost)) / n;
        return row;
    };

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::pair<std::size_t, PolicyVariant>> tasks;
    for (std::size_t i = 0; i < jobs.size(); ++i)
        for (auto v : vs)
            tasks.emplace_back(i, v);
    std::vector<BenchRow> rows(tasks.size());
    std::vector<std::future<void>> workers;
    const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(1, tasks.size()));
    for (std::size_t c = 0; c < chunks; ++c)
        workers.push_back(std::async(std::launch::async, [&, c] {
            for (std::size_t t = c; t < tasks.size(); t += chunks)
                rows[t] = run(jobs[tasks[t].first], tasks[t].second);
        }));
    for (auto& w : workers)
        w.get();
    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) { return a.key() < b.key(); });

    out << "generator,variant,n,rho,H,cost,cost_per_nH,maxHeight,boundMargin\n";
    for (const auto& r : rows) {
        out << r.generator << ',' << r.variant << ',' << r.n << ',' << r.rho << ',' << format_double(r.entropy) << ','
            << r.cost << ',';
        if (r.entropy > 0)
            out << format_double(static_cast<double>(r.cost) / (static_cast<double>(r.n) * r.entropy));
        out << ',' << r.max_height << ',' << format_double(r.margin) << '\n';
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Merge-policy laboratory: run decomposition, merge-collapse simulation and bound checks",
                 "mergelab"};
    app.require_subcommand(1);

    std::string variant = "patched";
    auto add_variant = [&](CLI::App* cmd) {
        cmd->add_option("--variant", variant, "patched (python) or unpatched (java)")
            ->check(CLI::IsMember({"patched", "unpatched", "python", "java"}));
    };

    // decompose
    std::string dec_input, dec_format = "json";
    auto* dec = app.add_subcommand("decompose", "split an integer array into runs");
    dec->add_option("--input", dec_input, "file of integers (default: stdin)");
    dec->add_flag("--stdin", "read the array from stdin (the default)");
    dec->add_option("--format", dec_format, "json, csv or pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));

    // sort
    std::string sort_input, sort_metrics;
    auto* srt = app.add_subcommand("sort", "sort integers; metrics JSON goes to stderr or --metrics");
    srt->add_option("--input", sort_input, "file of integers (default: stdin)");
    srt->add_flag("--stdin", "read the array from stdin (the default)");
    srt->add_option("--metrics", sort_metrics, "write metrics JSON to this file instead of stderr");
    add_variant(srt);

    // simulate
    Source sim_src;
    std::string sim_capacity, sim_format = "json";
    bool sim_trace = false;
    auto* sim = app.add_subcommand("simulate", "run the merge policy on run lengths");
    add_source(sim, sim_src);
    add_variant(sim);
    sim->add_option("--capacity", sim_capacity, "run-stack capacity N, or 'java' for 49 (default: unbounded)");
    sim->add_flag("--trace", sim_trace, "emit the JSON-lines trace instead of a summary");
    sim->add_option("--format", sim_format, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));

    // gen
    auto* gen = app.add_subcommand("gen", "generate run profiles");
    gen->require_subcommand(1);
    GenOptions gopt;
    std::int64_t rtim_n = 0;
    auto* g_rtim = gen->add_subcommand("rtim", "worst-case family R(n) of the patched policy");
    g_rtim->add_option("--n", rtim_n, "total length")->required();
    add_gen_options(g_rtim, gopt);
    std::size_t fib_h = 0;
    auto* g_fib = gen->add_subcommand("fib", "Fibonacci tower of a given height");
    g_fib->add_option("--height", fib_h, "stack height")->required()->check(CLI::PositiveNumber);
    add_gen_options(g_fib, gopt);
    std::string paper_id;
    auto* g_paper = gen->add_subcommand("paper", "published run sequences");
    g_paper->add_option("--id", paper_id, "fig2, fig5 or prop81")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig5", "prop81", "FIG2", "FIG5", "PROP81"}));
    add_gen_options(g_paper, gopt);
    std::uint64_t rnd_n = 0, rnd_rho = 0;
    auto* g_rand = gen->add_subcommand("random", "random realizable profile");
    g_rand->add_option("--n", rnd_n, "total length")->required();
    g_rand->add_option("--rho", rnd_rho, "number of runs")->required();
    add_gen_options(g_rand, gopt);
    std::uint64_t mh_n = 0, mh_len = 0;
    std::size_t mh_beam = kDefaultBeamWidth;
    unsigned mh_threads = 0;
    auto* g_mh = gen->add_subcommand("maxheight", "profile maximising the stack height");
    g_mh->add_option("--n-max", mh_n, "largest total length")->required();
    g_mh->add_option("--len-max", mh_len, "largest run length (default: n-max)");
    g_mh->add_option("--beam", mh_beam, "beam width above the exhaustive limit");
    g_mh->add_option("--threads", mh_threads, "worker threads (0 = hardware)");
    add_variant(g_mh);
    add_gen_options(g_mh, gopt);

    // check
    std::string chk_input, chk_format = "pretty";
    double envelope = AuditOptions{}.envelope;
    auto* chk = app.add_subcommand("check", "audit a JSON-lines trace (or a header to re-simulate)");
    chk->add_option("--input", chk_input, "trace file (default: stdin)");
    chk->add_flag("--stdin", "read the trace from stdin (the default)");
    chk->add_option("--format", chk_format, "pretty, csv or json")->check(CLI::IsMember({"pretty", "csv", "json"}));
    chk->add_option("--envelope", envelope, "additive slack per element of the patched cost envelope");

    // report
    Source rep_src;
    auto* rep = app.add_subcommand("report", "cost report with bound checks, as JSON");
    add_source(rep, rep_src);
    add_variant(rep);
    rep->add_option("--envelope", envelope, "additive slack per element of the patched cost envelope");

    // bench
    std::string b_gens = "random,rtim,fib,paper", b_ns = "1000,10000,100000", b_variants = "patched,unpatched";
    std::uint64_t b_rho = 0, b_seed = 0;
    unsigned b_threads = 0;
    auto* bench = app.add_subcommand("bench", "CSV of cost and height per generator, n and variant");
    bench->add_option("--gen", b_gens, "comma-separated generators: random, rtim, fib, paper");
    bench->add_option("--n", b_ns, "comma-separated sizes");
    bench->add_option("--variants", b_variants, "comma-separated variants");
    bench->add_option("--rho", b_rho, "runs per random profile (default n/8)");
    bench->add_option("--seed", b_seed, "seed for random profiles");
    bench->add_option("--threads", b_threads, "worker threads (0 = hardware)");
    bench->add_option("--envelope", envelope, "additive slack per element of the patched cost envelope");

    std::vector<const char*> argv{"mergelab"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*dec)
            return cmd_decompose(dec_input, dec_format, in, out);
        if (*srt)
            return cmd_sort(sort_input, variant, sort_metrics, in, out, err);
        if (*sim)
            return cmd_simulate(sim_src, variant, sim_capacity, sim_trace, sim_format, in, out);
        if (*g_rtim) {
            emit_profile(rtim(rtim_n), gopt, out);
            return kExitOk;
        }
        if (*g_fib) {
            emit_profile(fib_tower(fib_h), gopt, out);
            return kExitOk;
        }
        if (*g_paper) {
            emit_profile(paper_vector(*parse_paper_vector(paper_id)), gopt, out);
            return kExitOk;
        }
        if (*g_rand) {
            emit_profile(random_profile(rnd_n, rnd_rho, gopt.seed), gopt, out);
            return kExitOk;
        }
        if (*g_mh) {
            const auto v = variant_of(variant);
            const auto r = max_height_search(mh_n, mh_len ? mh_len : mh_n, v, mh_beam, mh_threads);
            emit_profile(r.profile, gopt, out,
                         {{"variant", to_string(v)}, {"height", r.height}, {"exhaustive", r.exhaustive}});
            return kExitOk;
        }
        if (*chk)
            return cmd_check(chk_input, chk_format, envelope, in, out);
        if (*rep)
            return cmd_report(rep_src, variant, envelope, in, out);
        if (*bench)
            return cmd_bench(b_gens, b_ns, b_variants, b_rho, b_seed, b_threads, envelope, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

} // namespace mergelab
