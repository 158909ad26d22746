// Copyright 2026 The nsqbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nsqbc/cli.h"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "nsqbc/adversary.h"
#include "nsqbc/errors.h"
#include "nsqbc/protocol.h"

namespace nsqbc {

namespace {

constexpr const char *kFormatsFooter = R"(Formats:
  complex numbers are [re, im] pairs; qubit states are [c0, c1]; matrices are
  row-major [[m00, m01], [m10, m11]] with complex entries. Run configs are JSON
  objects with fields rounds, seed (mandatory), basis_source, quadruple, tolerance,
  chi, alice, ttp, bob. Sweeps emit CSV. See FORMATS.md for the full schema.

Exit codes: 0 success, 2 config error, 3 numerical validation error,
  4 protocol-level abort.)";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Json read_json_file(const std::string &path, const std::string &what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(what, "cannot read '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw ConfigError(what, "'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("--out", "cannot write '" + path + "'");
    }
    out << content;
    if (!out.flush()) {
        throw ConfigError("--out", "write failed for '" + path + "'");
    }
}

std::string joined(const std::vector<std::string> &args) {
    std::string s = "nsqbc";
    for (const auto &a : args) {
        s += ' ';
        s += a;
    }
    return s;
}

void write_manifest(const std::string &out_path, RunManifest manifest) {
    manifest.outputs.insert(manifest.outputs.begin(), out_path);
    write_file(out_path + ".manifest.json", to_json(manifest).dump(2) + "\n");
}

unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

CoefficientMatrix named_or_inline_matrix(const std::string &text) {
    if (text == "identity" || text == "I") {
        return CoefficientMatrix::identity();
    }
    if (text == "hadamard" || text == "H") {
        return CoefficientMatrix::hadamard();
    }
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error &) {
        throw ConfigError("--S", "expected identity, hadamard or a JSON 2x2 complex matrix");
    }
    return CoefficientMatrix::from(matrix_from_json(j, "--S"));
}

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> rounds;
    std::string out_path;
    double tol = kUnitarityTol;
    std::int64_t samples = 0;
    std::string sampler = "bloch";
    std::int64_t trials = 1;
    std::string range;
    bool range_given = false;
    std::string S;
    std::string sweep_kind;
};

Json simulate_trials(const RunConfig &rc, std::int64_t trials) {
    std::int64_t undetected = 0;
    std::int64_t aborted = 0;
    double pass_sum = 0;
    for (std::int64_t t = 0; t < trials; t++) {
        ProtocolConfig cfg = rc.protocol;
        cfg.seed = Rng::substream(rc.protocol.seed, StreamDomain::trial, static_cast<std::uint64_t>(t)).next_u64();
        Transcript tr = run_protocol(cfg, rc.chi, rc.alice, rc.ttp, rc.bob);
        TranscriptSummary s = summarize(tr);
        if (tr.verdict.kind == Verdict::Kind::abort) {
            aborted++;
            continue;
        }
        undetected += tr.verdict.kind == Verdict::Kind::accept ? 1 : 0;
        pass_sum += s.pass_rate;
    }
    std::int64_t completed = trials - aborted;
    double frac = completed > 0 ? static_cast<double>(undetected) / static_cast<double>(completed) : 0;
    return Json{{"trials", trials},
                {"aborted_runs", aborted},
                {"undetected_runs", undetected},
                {"undetected_fraction", frac},
                {"std_error", completed > 0 ? std::sqrt(frac * (1 - frac) / static_cast<double>(completed)) : 0.0},
                {"mean_pass_rate", completed > 0 ? pass_sum / static_cast<double>(completed) : 0.0}};
}

int cmd_simulate(const Options &o, const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    if (o.config_path.empty()) {
        throw ConfigError("--config", "simulate needs a run config");
    }
    Json raw = read_json_file(o.config_path, "--config");
    if (raw.is_object()) {
        if (o.seed) {
            raw["seed"] = *o.seed;
        }
        if (o.rounds) {
            raw["rounds"] = *o.rounds;
        }
    }
    RunConfig rc = run_config_from_json(raw);
    if (o.trials < 1) {
        throw ConfigError("--trials", "must be >= 1");
    }
    Json effective{{"protocol", to_json(rc.protocol)},
                   {"chi", to_int(rc.chi)},
                   {"alice", to_json(rc.alice)},
                   {"ttp", to_json(rc.ttp)},
                   {"bob", to_json(rc.bob)}};
    RunManifest manifest{joined(args), config_digest(effective), rc.protocol.seed};

    if (o.trials > 1) {
        Json report = simulate_trials(rc, o.trials);
        std::string text = report.dump(2) + "\n";
        if (!o.out_path.empty()) {
            write_file(o.out_path, text);
            write_manifest(o.out_path, manifest);
        }
        out << text;
        return 0;
    }

    Transcript t = run_protocol(rc.protocol, rc.chi, rc.alice, rc.ttp, rc.bob);
    if (!o.out_path.empty()) {
        write_file(o.out_path, to_json(t).dump(2) + "\n");
        write_manifest(o.out_path, manifest);
    }
    out << to_json(summarize(t)).dump(2) << "\n";
    if (t.verdict.kind == Verdict::Kind::abort) {
        err << "error: protocol aborted: " << t.verdict.reason << "\n";
        return 4;
    }
    return 0;
}

int cmd_audit(const Options &o, const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    if (o.config_path.empty()) {
        throw ConfigError("--config", "audit needs an operators file");
    }
    if (!(o.tol > 0)) {
        throw ConfigError("--tol", "must be positive");
    }
    Json raw = read_json_file(o.config_path, "--config");
    if (raw.is_object() && raw.contains("quadruple")) {
        raw = Json(raw["quadruple"]);
    }
    auto mats = raw_quadruple_from_json(raw, "quadruple");
    const char *names[] = {"M", "N", "J", "K"};
    Json residuals = Json::object();
    bool unitary = true;
    for (int i = 0; i < 4; i++) {
        double r = mats[i].unitarity_residual();
        residuals[names[i]] = r;
        unitary = unitary && r <= kUnitarityTol;
    }
    if (!unitary) {
        Json report{{"error", "non_unitary"}, {"unitarity_residuals", residuals}};
        out << report.dump(2) << "\n";
        err << "error: operators are not unitary (tolerance " << fmt(kUnitarityTol) << ")\n";
        return 3;
    }
    OperatorQuadruple q{Unitary2(mats[0]), Unitary2(mats[1]), Unitary2(mats[2]), Unitary2(mats[3])};
    ConcealmentReport rep = concealment_check(q, o.tol);
    Json report{{"unitarity_residuals", residuals}, {"concealment", to_json(rep)}};
    Json flags = Json::array();
    if (rep.passes) {
        try {
            AttackSynthesis syn = synthesize_attack(q, o.tol);
            report["attack"] = to_json(syn);
            report["verification"] = {{"norm_J_minus_aM_bN", syn.residual_j}, {"norm_K_minus_cM_dN", syn.residual_k}};
        } catch (const AttackError &e) {
            if (e.kind() != AttackErrorKind::proportional_operators) {
                throw;
            }
            flags.push_back("proportional_operators");
            report["attack"] = nullptr;
        }
    } else {
        ProbeWitness w = strongest_probe(q);
        report["witness"] = {{"name", w.name}, {"state", to_json(w.probe.vec())}, {"distance", w.distance}};
    }
    report["flags"] = flags;
    std::string text = report.dump(2) + "\n";
    if (!o.out_path.empty()) {
        write_file(o.out_path, text);
        write_manifest(o.out_path, {joined(args), config_digest(to_json(q)), 0});
    }
    out << text;
    return 0;
}

int cmd_sweep(const Options &o, const std::vector<std::string> &args, std::ostream &out) {
    if (!o.seed) {
        throw ConfigError("--seed", "sweeps need an explicit seed");
    }
    std::ostringstream csv;
    Json params{{"kind", o.sweep_kind}, {"seed", *o.seed}};
    if (o.sweep_kind == "detection") {
        std::string range = o.range_given ? o.range : "1:20";
        auto rounds = parse_round_range(range);
        std::int64_t trials = o.trials > 1 ? o.trials : 1000;
        params["range"] = range;
        params["trials"] = trials;
        csv << "rounds,analytic,empirical,std_error\n";
        for (auto n : rounds) {
            DetectionPoint p = detection_trials(n, trials, *o.seed);
            csv << n << ',' << fmt(p.analytic) << ',' << fmt(p.empirical) << ',' << fmt(p.std_error) << '\n';
        }
    } else {
        std::string range = o.range_given ? o.range : "17:8";
        int n_mod = 0;
        int n_phase = 0;
        char tail = 0;
        if (std::sscanf(range.c_str(), "%d:%d%c", &n_mod, &n_phase, &tail) != 2 || n_mod < 2 || n_phase < 1) {
            throw ConfigError("--range", "fidelity sweep expects n_modulus:n_phase with n_modulus >= 2, n_phase >= 1");
        }
        std::int64_t samples = o.samples > 0 ? o.samples : 10000;
        if (samples < 100) {
            throw ConfigError("--samples", "need at least 100 samples");
        }
        StateSource sampler = parse_sampler(o.sampler);
        params["range"] = range;
        params["samples"] = samples;
        params["sampler"] = to_json(sampler);
        csv << "abs_a,arg_ab,closed_form,mc_estimate,std_error\n";
        for (const auto &p : fidelity_grid(n_mod, n_phase, sampler, samples, *o.seed)) {
            csv << fmt(p.abs_a) << ',' << fmt(p.arg_ab) << ',' << fmt(p.closed_form) << ',' << fmt(p.mc.mean) << ','
                << fmt(p.mc.std_error) << '\n';
        }
    }
    std::string text = csv.str();
    if (!o.out_path.empty()) {
        write_file(o.out_path, text);
        write_manifest(o.out_path, {joined(args), config_digest(params), *o.seed});
    } else {
        out << text;
    }
    return 0;
}

int cmd_fidelity(const Options &o, const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CoefficientMatrix S = CoefficientMatrix::identity();
    OperatorQuadruple q = paper_quadruple();
    if (!o.config_path.empty()) {
        Json raw = read_json_file(o.config_path, "--config");
        if (!raw.is_object() || !raw.contains("S")) {
            throw ConfigError("S", "fidelity config needs an S matrix");
        }
        S = CoefficientMatrix::from(matrix_from_json(raw["S"], "S"));
        if (raw.contains("quadruple")) {
            q = quadruple_from_json(raw["quadruple"], "quadruple");
        }
    }
    if (!o.S.empty()) {
        S = named_or_inline_matrix(o.S);
    } else if (o.config_path.empty()) {
        throw ConfigError("--S", "fidelity needs --S or --config");
    }
    ClosedFormFidelity cf = expected_cheat_fidelity_closed(S);
    Json report{{"S", to_json(S)},
                {"unitarity_residual", S.unitarity_residual()},
                {"unitary", cf.unitary_evaluation},
                {"closed_form", cf.value}};
    std::uint64_t seed = 0;
    if (o.samples > 0) {
        if (!o.seed) {
            throw ConfigError("--seed", "Monte Carlo estimation needs an explicit seed");
        }
        if (S.unitarity_residual() > kUnitarityTol) {
            err << "error: Monte Carlo estimation needs a unitary S (residual " << fmt(S.unitarity_residual())
                << ")\n";
            return 3;
        }
        seed = *o.seed;
        Rng rng(seed);
        report["monte_carlo"] =
            to_json(expected_cheat_fidelity_mc(q, S, parse_sampler(o.sampler), o.samples, rng, worker_count()));
    }
    std::string text = report.dump(2) + "\n";
    if (!o.out_path.empty()) {
        write_file(o.out_path, text);
        Json params{{"S", to_json(S)}, {"quadruple", to_json(q)}, {"samples", o.samples}, {"sampler", o.sampler}};
        write_manifest(o.out_path, {joined(args), config_digest(params), seed});
    }
    out << text;
    return 0;
}

}  // namespace

Json to_json(const RunManifest &m) {
    return Json{{"command", m.command},
                {"config_digest", m.config_digest},
                {"seed", m.seed},
                {"tool_version", m.tool_version},
                {"outputs", m.outputs}};
}

std::string sha256_hex(const std::string &text) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string s;
    for (unsigned i = 0; i < len; i++) {
        s += hex[digest[i] >> 4];
        s += hex[digest[i] & 15];
    }
    return s;
}

std::string config_digest(const Json &config) {
    return sha256_hex(config.dump());
}

DetectionPoint detection_trials(std::int64_t rounds, std::int64_t trials, std::uint64_t seed) {
    if (rounds < 1 || trials < 1) {
        throw ConfigError("--range", "rounds and trials must be positive");
    }
    ProtocolConfig cfg;
    cfg.rounds = rounds;
    cfg.basis_source = StateSource::full_bloch();
    DelayedAlice alice;
    alice.S = CoefficientMatrix::hadamard();
    CommitBit chi = committed_bit(alice, CommitBit::zero);
    DetectionPoint p;
    p.rounds = rounds;
    p.trials = trials;
    for (std::int64_t t = 0; t < trials; t++) {
        cfg.seed = Rng::substream(seed, StreamDomain::trial, static_cast<std::uint64_t>(t)).next_u64();
        Transcript tr = run_protocol(cfg, chi, alice, HonestTtp{}, HonestBob{});
        if (tr.verdict.kind == Verdict::Kind::abort) {
            throw ProtocolAbort("detection trial aborted: " + tr.verdict.reason);
        }
        p.undetected += tr.verdict.kind == Verdict::Kind::accept ? 1 : 0;
    }
    p.analytic = detection_probability(rounds, 2.0 / 3.0);
    p.empirical = 1 - static_cast<double>(p.undetected) / static_cast<double>(trials);
    p.std_error = std::sqrt(p.empirical * (1 - p.empirical) / static_cast<double>(trials));
    return p;
}

CoefficientMatrix grid_coefficients(double abs_a, double arg_ab) {
    double abs_b = std::sqrt(std::max(0.0, 1 - abs_a * abs_a));
    Complex a{abs_a, 0};
    Complex b = std::polar(abs_b, -arg_ab);
    return CoefficientMatrix{a, b, -std::conj(b), std::conj(a)};
}

std::vector<FidelityPoint> fidelity_grid(int n_modulus, int n_phase, const StateSource &sampler,
                                         std::int64_t samples, std::uint64_t seed) {
    std::vector<FidelityPoint> grid;
    const OperatorQuadruple q = paper_quadruple();
    std::uint64_t index = 0;
    for (int j = 0; j < n_modulus; j++) {
        double abs_a = std::cos(std::numbers::pi * j / (2.0 * (n_modulus - 1)));
        if (2 * j == n_modulus - 1) {
            abs_a = std::numbers::sqrt2 / 2;
        }
        for (int k = 0; k < n_phase; k++) {
            FidelityPoint p;
            p.abs_a = abs_a;
            p.arg_ab = 2 * std::numbers::pi * k / n_phase;
            p.S = grid_coefficients(abs_a, p.arg_ab);
            p.closed_form = expected_cheat_fidelity_closed(p.S).value;
            if (samples > 0) {
                Rng rng = Rng::substream(seed, StreamDomain::trial, index);
                p.mc = expected_cheat_fidelity_mc(q, p.S, sampler, samples, rng, worker_count());
            }
            index++;
            grid.push_back(p);
        }
    }
    return grid;
}

std::vector<std::int64_t> parse_round_range(const std::string &text) {
    std::vector<std::int64_t> out;
    auto bad = [&] { return ConfigError("--range", "expected lo:hi or a comma list of positive integers"); };
    auto to_int = [&](const std::string &s) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &used);
        } catch (const std::exception &) {
            throw bad();
        }
        if (used != s.size() || v < 1) {
            throw bad();
        }
        return static_cast<std::int64_t>(v);
    };
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        std::int64_t lo = to_int(text.substr(0, colon));
        std::int64_t hi = to_int(text.substr(colon + 1));
        for (std::int64_t n = lo; n <= hi; n++) {
            out.push_back(n);
        }
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(to_int(item));
        }
    }
    if (out.empty()) {
        throw ConfigError("--range", "empty range");
    }
    return out;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Simulator and analysis toolkit for non-static quantum bit commitment.", "nsqbc"};
    app.footer(kFormatsFooter);
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Options o;
    std::uint64_t seed = 0;
    std::int64_t rounds = 0;

    auto *simulate = app.add_subcommand("simulate", "Run the protocol from a JSON config; print a summary.");
    simulate->add_option("--config", o.config_path, "Run config JSON")->required();
    simulate->add_option("--seed", seed, "Override the config seed");
    simulate->add_option("--rounds", rounds, "Override the round count")->check(CLI::PositiveNumber);
    simulate->add_option("--out", o.out_path, "Write the transcript JSON here");
    simulate->add_option("--trials", o.trials, "Repeat over this many derived seeds and report aggregates");

    auto *audit = app.add_subcommand("audit", "Check concealment of four operators; synthesize the attack.");
    audit->add_option("--config,operators", o.config_path, "Operators JSON: {M, N, J, K} or \"reference\"")->required();
    audit->add_option("--tol", o.tol, "Concealment tolerance");
    audit->add_option("--out", o.out_path, "Write the report JSON here");

    auto *sweep = app.add_subcommand("sweep", "Emit CSV plot data.");
    sweep->add_option("kind", o.sweep_kind, "detection or fidelity")
        ->required()
        ->check(CLI::IsMember({"detection", "fidelity"}));
    sweep->add_option("--range", o.range, "detection: lo:hi or a,b,c; fidelity: n_modulus:n_phase");
    sweep->add_option("--seed", seed, "Base seed (mandatory)");
    sweep->add_option("--trials", o.trials, "Detection trials per point (default 1000)");
    sweep->add_option("--samples", o.samples, "Monte Carlo samples per fidelity point (default 10000)");
    sweep->add_option("--sampler", o.sampler, "bloch, subcircle or subcircle-k:K");
    sweep->add_option("--out", o.out_path, "Write the CSV here");

    auto *fidelity = app.add_subcommand("fidelity", "Expected cheat fidelity of one coefficient matrix.");
    fidelity->add_option("--S", o.S, "identity, hadamard or a JSON 2x2 complex matrix");
    fidelity->add_option("--config", o.config_path, "JSON with S and optional quadruple");
    fidelity->add_option("--samples", o.samples, "Monte Carlo samples (0 for closed form only)");
    fidelity->add_option("--sampler", o.sampler, "bloch, subcircle or subcircle-k:K");
    fidelity->add_option("--seed", seed, "Seed (mandatory with --samples)");
    fidelity->add_option("--out", o.out_path, "Write the report JSON here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion &) {
        out << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    for (auto *sub : {simulate, sweep, fidelity}) {
        if (sub->parsed() && sub->count("--seed") > 0) {
            o.seed = seed;
        }
    }
    o.range_given = sweep->count("--range") > 0;
    if (simulate->parsed() && simulate->count("--rounds") > 0) {
        o.rounds = rounds;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(o, args, out, err);
        }
        if (audit->parsed()) {
            return cmd_audit(o, args, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(o, args, out);
        }
        return cmd_fidelity(o, args, out, err);
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const AttackError &e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return e.kind() == AttackErrorKind::non_unitary ? 3 : 4;
    } catch (const ProtocolAbort &e) {
        err << "error: protocol aborted: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace nsqbc
