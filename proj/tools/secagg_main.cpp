// Command-line front end: feasibility checks, dealing, simulation,
// verification, and rate reporting for the two-round aggregation protocol.
//
// Exit codes: 0 success, 1 usage or I/O or budget error, 2 infeasible
// parameters, 3 verification or decode failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "secagg/analyzer.hpp"
#include "secagg/dealer.hpp"
#include "secagg/io.hpp"
#include "secagg/protocol.hpp"
#include "secagg/session.hpp"
#include "secagg/simulator.hpp"

namespace fs = std::filesystem;
using namespace secagg;

namespace {

struct Options {
    int K = 0;
    int U = 0;
    int T = -1;
    std::uint64_t p = 0;  // 0 = pick the smallest sufficient field
    unsigned m = 1;
    int B = 1;
    long L = 0;  // 0 = default (U-T)*B
    std::uint64_t seed = 0;
    long budget = 100000;
    std::string out = "secagg_out";
    bool allow_large = false;
};

bool is_prime_power(std::uint64_t q, std::uint64_t* p_out, unsigned* m_out) {
    if (q < 2) return false;
    for (std::uint64_t p = 2; p * p <= q; ++p) {
        if (q % p != 0) continue;
        std::uint64_t v = q;
        unsigned m = 0;
        while (v % p == 0) { v /= p; ++m; }
        if (v != 1) return false;
        *p_out = p;
        *m_out = m;
        return true;
    }
    *p_out = q;  // q itself is prime
    *m_out = 1;
    return true;
}

// Smallest prime power q with q^grouping >= n.
std::pair<std::uint64_t, unsigned> smallest_field_for(std::uint64_t n, int grouping) {
    for (std::uint64_t q = 2;; ++q) {
        unsigned __int128 qb = 1;
        for (int i = 0; i < grouping; ++i) qb *= q;
        if (qb < n) continue;
        std::uint64_t p = 0;
        unsigned m = 0;
        if (is_prime_power(q, &p, &m)) return {p, m};
    }
}

std::string field_name(std::uint64_t p, unsigned m) {
    return m == 1 ? "GF(" + std::to_string(p) + ")"
                  : "GF(" + std::to_string(p) + "^" + std::to_string(m) + ")";
}

int require_kut(const Options& o) {
    if (o.K <= 0 || o.U <= 0 || o.T < 0) {
        std::cerr << "error: --K, --U and --T are required\n";
        return 1;
    }
    return 0;
}

SessionParams make_params(const Options& o) {
    std::uint64_t p = o.p;
    unsigned m = o.m;
    if (p == 0) {
        auto pm = smallest_field_for(static_cast<std::uint64_t>(o.K + o.U), o.B);
        p = pm.first;
        m = pm.second;
    }
    auto base = std::make_shared<const Field>(p, m);
    return SessionParams::make(o.K, o.U, o.T, base, o.B, o.L, o.allow_large);
}

UserSet parse_user_list(const std::string& text) {
    std::vector<int> users;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        users.push_back(std::stoi(item));
    }
    if (users.empty()) throw std::invalid_argument("empty user list: " + text);
    return set_of(users);
}

// ---- check -------------------------------------------------------------------

int cmd_check(const Options& o) {
    if (int rc = require_kut(o)) return rc;
    auto reject = [](const std::string& rule) {
        std::cout << "feasible: no\nrule: " << rule << "\n";
        return 2;
    };
    if (o.K < 2) return reject("at least two users are required");
    if (o.U < 1 || o.U > o.K - 1)
        return reject("response threshold must lie in [1, K-1]; got U=" + std::to_string(o.U) +
                      " with K=" + std::to_string(o.K));
    if (o.T < 0 || o.T > o.K - 2)
        return reject("collusion threshold must lie in [0, K-2]; got T=" + std::to_string(o.T) +
                      " with K=" + std::to_string(o.K));
    if (o.U <= o.T)
        return reject("no scheme exists unless the response threshold exceeds the collusion "
                      "threshold (U > T); got U=" + std::to_string(o.U) + ", T=" + std::to_string(o.T));

    std::uint64_t need = static_cast<std::uint64_t>(o.K + o.U);
    std::cout << "feasible: yes\n";
    std::cout << "rule: response threshold exceeds collusion threshold (U=" << o.U << " > T=" << o.T
              << ")\n";
    std::cout << "field requirement: q^B >= K + U = " << need << "\n";
    auto pm = smallest_field_for(need, 1);
    int b2 = 1;
    while ((1ull << b2) < need) ++b2;
    std::cout << "suggested: " << field_name(pm.first, pm.second) << " with B=1, or GF(2) with B=" << b2
              << "\n";

    if (o.p != 0) {
        unsigned __int128 qb = 1;
        std::uint64_t q = 1;
        for (unsigned i = 0; i < o.m; ++i) q *= o.p;
        for (int i = 0; i < o.B; ++i) qb *= q;
        std::cout << "configured field: " << field_name(o.p, o.m) << " with B=" << o.B << ": ";
        if (qb >= need) {
            std::cout << "sufficient\n";
        } else {
            int b = 1;
            unsigned __int128 acc = q;
            while (acc < need) { acc *= q; ++b; }
            std::cout << "too small (q^B = " << static_cast<std::uint64_t>(qb)
                      << "); smallest sufficient grouping is B=" << b << "\n";
            return 2;
        }
    }
    return 0;
}

// ---- deal --------------------------------------------------------------------

int cmd_deal(const Options& o, bool structured, bool zero_noise) {
    if (int rc = require_kut(o)) return rc;
    SessionParams sp = make_params(o);
    Rng rng(o.seed);
    SchemeOptions opt;
    opt.structured = structured;
    opt.zero_noise = zero_noise;
    DealerOutput out = deal(sp, rng, opt);

    fs::create_directories(o.out);
    fs::path path = fs::path(o.out) / "dealer.bin";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open " + path.string() + " for writing");
    write_dealer_output(os, out);
    os.flush();

    std::cout << params_line(sp) << "\n";
    std::cout << "field " << sp.base_field->describe() << " effective " << sp.eff_field->describe()
              << "\n";
    std::cout << "qualifying sets " << out.scheme->qual_sets.size() << "\n";
    std::cout << "shares per user " << out.users.front().shares.size() << "\n";
    std::cout << "wrote " << path.string() << " (" << fs::file_size(path) << " bytes)\n";
    return 0;
}

// ---- simulate ------------------------------------------------------------------

int cmd_simulate(const Options& o, const std::string& inputs_file, bool random_inputs,
                 const std::string& u1_text, const std::string& u2_text, bool exhaustive,
                 int samples) {
    if (int rc = require_kut(o)) return rc;
    SessionParams sp = make_params(o);

    ExperimentPlan plan;
    plan.params = sp;
    plan.seed = o.seed;
    plan.budget = o.budget;

    std::optional<std::vector<InputVector>> fixed;
    if (!inputs_file.empty()) {
        std::ifstream is(inputs_file);
        if (!is) throw io_error("cannot open inputs file " + inputs_file);
        fixed = parse_inputs(is, sp);
    } else if (!random_inputs && u1_text.empty() && !exhaustive && samples == 0) {
        std::cerr << "error: choose --inputs FILE or --random, and a schedule "
                     "(--u1/--u2, --exhaustive, or --samples)\n";
        return 1;
    }

    ExperimentReport rep;
    if (!u1_text.empty()) {
        DropoutSchedule sched;
        sched.survivors = parse_user_list(u1_text);
        sched.responders = u2_text.empty() ? sched.survivors : parse_user_list(u2_text);
        rep = run_experiment_with_schedules(plan, {sched}, fixed);
    } else if (samples > 0) {
        plan.schedule_mode = ScheduleMode::sampled;
        plan.schedule_samples = samples;
        rep = run_experiment(plan, fixed);
    } else {
        rep = run_experiment(plan, fixed);  // exhaustive default
    }

    fs::create_directories(fs::path(o.out) / "transcripts");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rep.transcripts.size(); ++i) {
        std::ostringstream name;
        name << "transcripts/transcript_" << i << ".bin";
        names.push_back(name.str());
        std::ofstream ts(fs::path(o.out) / name.str(), std::ios::binary);
        write_transcript(ts, sp, rep.transcripts[i]);
    }
    fs::path rpath = fs::path(o.out) / "experiment_report.txt";
    std::string text = format_experiment_report(rep, names);
    std::ofstream rs(rpath);
    rs << text;
    rs.flush();

    std::cout << "schedules " << rep.transcripts.size() << " records " << rep.records.size() << "\n";
    std::cout << "decodes " << (rep.all_decodes_ok() ? "all exact" : "FAILED") << "\n";
    std::cout << "wrote " << rpath.string() << "\n";
    return rep.all_decodes_ok() ? 0 : 3;
}

// ---- verify --------------------------------------------------------------------

int cmd_verify(const Options& o, const std::string& dealer_file) {
    std::shared_ptr<const Scheme> scheme;
    if (!dealer_file.empty()) {
        std::ifstream is(dealer_file, std::ios::binary);
        if (!is) throw io_error("cannot open dealer file " + dealer_file);
        DealerOutput out = read_dealer_output(is);
        scheme = out.scheme;
        std::cout << "# scheme loaded from " << dealer_file << "\n";
    } else {
        if (int rc = require_kut(o)) return rc;
        scheme = Scheme::build(make_params(o));
    }
    const SessionParams& sp = scheme->params;

    std::ostringstream rep;
    long checks = 0, failures = 0;
    auto line = [&](const std::string& id, const std::string& args, const std::string& expected,
                    const std::string& got, bool pass) {
        rep << "check " << id << (args.empty() ? "" : " " + args) << " expected=" << expected
            << " got=" << got << (pass ? " PASS" : " FAIL") << "\n";
        ++checks;
        if (!pass) ++failures;
    };

    rep << "# verification report\n" << params_line(sp) << "\n";
    rep << "# entropy units: effective-field symbols unless stated\n";

    SecurityReport sec = verify_security(*scheme, o.budget);
    for (const SecurityCase& c : sec.cases)
        line("security", "survivors=" + set_hex(c.survivors) + " colluders=" + set_hex(c.colluders),
             "0", std::to_string(c.mi), c.mi == 0);

    IdentityReport ids = verify_independence_identities(*scheme, o.budget);
    for (const IdentityCase& c : ids.cases)
        line("independence." + c.id, "colluders=" + set_hex(c.colluders) + " other=" + set_hex(c.other),
             std::to_string(c.expected), std::to_string(c.got), c.pass());

    RateReport rates = verify_rates(sp);
    line("rate.round1", "", "1", rates.r1.str(), rates.r1_optimal);
    line("rate.round2", "", "1/" + std::to_string(sp.min_responders - sp.max_colluders),
         rates.r2.str(), rates.r2_optimal);

    RandomnessReport rnd = randomness_report(*scheme);
    if (sp.max_colluders == 0) {
        long expect_total = static_cast<long>(sp.users) * sp.input_len;
        line("randomness.total", "units=base", std::to_string(expect_total),
             std::to_string(rnd.total), rnd.total == expect_total);
        if (sp.min_responders == 1)
            for (int k = 1; k <= sp.users; ++k)
                line("randomness.user." + std::to_string(k), "units=base",
                     std::to_string(expect_total),
                     std::to_string(rnd.per_user[static_cast<std::size_t>(k - 1)]),
                     rnd.per_user[static_cast<std::size_t>(k - 1)] == expect_total);
    } else {
        rep << "# randomness audit (descriptive): total=" << rnd.total << " rate=" << rnd.total_rate.str();
        for (std::size_t k = 0; k < rnd.per_user.size(); ++k)
            rep << " user" << (k + 1) << "=" << rnd.per_user[k];
        rep << "\n";
    }

    rep << "summary checks=" << checks << " failures=" << failures << "\n";

    fs::create_directories(o.out);
    fs::path rpath = fs::path(o.out) / "verification_report.txt";
    std::ofstream rs(rpath);
    rs << rep.str();
    rs.flush();
    std::cout << rep.str();
    std::cout << "wrote " << rpath.string() << "\n";
    return failures == 0 ? 0 : 3;
}

// ---- rates --------------------------------------------------------------------

int cmd_rates(const Options& o) {
    if (int rc = require_kut(o)) return rc;
    SessionParams sp = make_params(o);
    RateReport r = verify_rates(sp);
    std::cout << params_line(sp) << "\n";
    std::cout << "round1 symbols per user: " << r.round1_len << " (rate " << r.r1.str() << ")\n";
    std::cout << "round2 symbols per user: " << r.round2_len << " (rate " << r.r2.str() << ")\n";
    std::cout << "optimal: " << (r.r1_optimal && r.r2_optimal ? "yes" : "no") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-round secure aggregation with dropout tolerance"};
    app.fallthrough(true);
    app.set_config("--config", "", "configuration file (flat key=value lines)");

    Options o;
    if (const char* env = std::getenv("SECAGG_BUDGET")) o.budget = std::atol(env);

    app.add_option("--K", o.K, "number of users");
    app.add_option("--U", o.U, "response threshold (round-2 start)");
    app.add_option("--T", o.T, "collusion threshold");
    app.add_option("--p", o.p, "field characteristic (0 = auto-pick smallest sufficient field)");
    app.add_option("--m", o.m, "field extension degree");
    app.add_option("--B", o.B, "grouping factor (base symbols per effective symbol)");
    app.add_option("--L", o.L, "input length in base symbols (0 = default (U-T)*B)");
    app.add_option("--seed", o.seed, "deterministic seed");
    app.add_option("--budget", o.budget, "enumeration budget (env SECAGG_BUDGET overrides default)");
    app.add_option("--out", o.out, "output directory");
    app.add_flag("--allow-large-k", o.allow_large, "permit K > 20 (share tables grow combinatorially)");

    CLI::App* check = app.add_subcommand("check", "feasibility verdict and field suggestion");

    CLI::App* dealc = app.add_subcommand("deal", "sample randomness and write a dealer file");
    bool structured = false, zero_noise = false;
    dealc->add_flag("--structured", structured, "fixed-matrix K=3 U=2 T=0 variant");
    dealc->add_flag("--unsafe-zero-noise", zero_noise,
                    "omit the noise block (insecure; for exercising the analyzer)");

    CLI::App* sim = app.add_subcommand("simulate", "run sessions under dropout schedules");
    std::string inputs_file, u1_text, u2_text;
    bool random_inputs = false, exhaustive = false;
    int samples = 0;
    auto non_empty = [](const std::string& s) {
        return s.empty() ? std::string("must not be empty") : std::string();
    };
    auto* inputs_opt =
        sim->add_option("--inputs", inputs_file, "inputs file (one line per user, L integers)");
    sim->add_flag("--random", random_inputs, "draw inputs from the seed")->excludes(inputs_opt);
    auto* u1_opt = sim->add_option("--u1", u1_text, "survivor set, e.g. 1,3,4")
                       ->check(non_empty, "", "NONEMPTY");
    sim->add_option("--u2", u2_text, "responder set (defaults to --u1)")
        ->check(non_empty, "", "NONEMPTY")
        ->needs(u1_opt);
    sim->add_flag("--exhaustive", exhaustive, "all schedules (default when no --u1/--samples)");
    sim->add_option("--samples", samples, "number of sampled schedules");

    CLI::App* ver = app.add_subcommand("verify", "security, independence, rate and randomness checks");
    std::string dealer_file;
    ver->add_option("--dealer", dealer_file, "dealer file to verify (otherwise built from params)");

    CLI::App* ratesc = app.add_subcommand("rates", "communication rate table");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (check->parsed()) return cmd_check(o);
        if (dealc->parsed()) return cmd_deal(o, structured, zero_noise);
        if (sim->parsed())
            return cmd_simulate(o, inputs_file, random_inputs, u1_text, u2_text, exhaustive, samples);
        if (ver->parsed()) return cmd_verify(o, dealer_file);
        if (ratesc->parsed()) return cmd_rates(o);
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 1;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
