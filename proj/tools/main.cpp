/**************************************************************************
 * main.cpp
 *
 * Copyright 2026 the dualdec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualdec/bcjr.hpp"
#include "dualdec/channel.hpp"
#include "dualdec/convcode.hpp"
#include "dualdec/dual.hpp"
#include "dualdec/sim.hpp"

using json = nlohmann::json;
using namespace dualdec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitNumerical = 3;

std::vector<Symbol> parse_symbols(const Field& f, const std::string& text) {
    std::vector<Symbol> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int v = std::stoi(tok);
        if (v < 0 || v >= f.q()) throw ParseError("symbol out of range: " + tok);
        out.push_back(static_cast<Symbol>(v));
    }
    return out;
}

std::vector<double> parse_ebn0(const std::string& text) {
    std::vector<double> out;
    auto to_db = [](const std::string& s) {
        if (s == "inf") return std::numeric_limits<double>::infinity();
        return std::stod(s);
    };
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
            throw ParseError("Eb/N0 range must be start:stop:step");
        double start = to_db(a), stop = to_db(b), step = to_db(c);
        if (step <= 0) throw ParseError("Eb/N0 step must be positive");
        for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    } else {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(to_db(tok));
    }
    if (out.empty()) throw ParseError("empty Eb/N0 list");
    return out;
}

TransformMode parse_mode(const std::string& text) {
    if (text == "direct") return TransformMode::direct;
    if (text == "fast" || text == "fft") return TransformMode::fast;
    throw ParseError("transform mode must be 'direct' or 'fast'");
}

std::string gnuplot_path_for(const std::string& csv_path) {
    auto dot = csv_path.rfind('.');
    auto slash = csv_path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".gp";
    return csv_path.substr(0, dot) + ".gp";
}

void apply_config_file(SimConfig& cfg, std::string& out_path, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path);
    json j = json::parse(in);
    static const std::vector<std::string> known = {
        "code", "decoder", "frame_length", "ebn0_db", "max_frames", "target_errors",
        "seed", "transform_mode", "threads", "out"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ParseError("unknown config key '" + it.key() + "'");
    }
    if (j.contains("code")) cfg.code = j["code"].get<std::string>();
    if (j.contains("decoder")) cfg.decoder = parse_decoder(j["decoder"].get<std::string>());
    if (j.contains("frame_length")) cfg.frame_length = j["frame_length"].get<int>();
    if (j.contains("ebn0_db")) {
        cfg.ebn0_db.clear();
        for (const auto& v : j["ebn0_db"]) cfg.ebn0_db.push_back(v.get<double>());
    }
    if (j.contains("max_frames")) cfg.max_frames = j["max_frames"].get<std::uint64_t>();
    if (j.contains("target_errors")) cfg.target_errors = j["target_errors"].get<std::uint64_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("transform_mode")) cfg.mode = parse_mode(j["transform_mode"].get<std::string>());
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("out")) out_path = j["out"].get<std::string>();
}

int cmd_codes() {
    for (const auto& desc : builtin_code_descriptors()) {
        CodeSpec code = CodeSpec::parse(desc);
        DualSpec dual = dual_taps(code);
        std::cout << desc << "\n";
        std::cout << "  memory n = " << code.memory() << ", constraint length K = "
                  << code.constraint_length() << "\n";
        std::cout << "  complementary z = " << dual.z.to_string() << " (l = " << dual.l << ")\n";
        std::cout << "  decoder registers N = " << dual.regs << ", feedback coefficient = "
                  << static_cast<int>(dual.fb_coeff) << "\n";
        GfPoly fz(code.field, dual.taps);
        std::cout << "  taps f(x)z(x) = " << fz.to_string() << "\n";
    }
    return kExitOk;
}

int cmd_encode(const std::string& code_desc, const std::string& info_text, bool terminate) {
    CodeSpec code = CodeSpec::parse(code_desc);
    std::vector<Symbol> info = parse_symbols(code.field, info_text);
    std::vector<Symbol> out;
    if (terminate) {
        DualSpec dual = dual_taps(code);
        out = encode_terminated(code, dual, info).code_syms;
    } else {
        out = encode(code, info);
    }
    for (std::size_t i = 0; i < out.size(); ++i) std::cout << (i ? "," : "") << static_cast<int>(out[i]);
    std::cout << "\n";
    return kExitOk;
}

int cmd_decode(const std::string& code_desc, const std::string& pmfs_path, const std::string& decoder_name_str,
               const std::string& mode_str, const std::string& out_path) {
    CodeSpec code = CodeSpec::parse(code_desc);
    DualSpec dual = dual_taps(code);
    DecoderKind kind = parse_decoder(decoder_name_str);
    TransformMode mode = parse_mode(mode_str);

    std::ifstream in(pmfs_path);
    if (!in) throw ParseError("cannot open " + pmfs_path);
    json j = json::parse(in);
    if (!j.contains("pmfs")) throw ParseError("input JSON needs a 'pmfs' array");
    std::vector<Pmf> pmfs;
    for (const auto& row : j["pmfs"]) {
        std::vector<double> mass;
        for (const auto& v : row) mass.push_back(v.get<double>());
        pmfs.emplace_back(code.field, std::move(mass));
    }

    Trellis trellis = build_trellis(expanded_code(dual));
    auto posteriors = decode_frame(kind, dual, trellis, pmfs, mode);

    json out;
    out["code"] = code.descriptor();
    out["decoder"] = decoder_name(kind);
    out["posteriors"] = json::array();
    out["hard_decisions"] = json::array();
    for (const auto& p : posteriors) {
        out["posteriors"].push_back(p.mass());
        out["hard_decisions"].push_back(static_cast<int>(p.argmax()));
    }
    if (out_path.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream os(out_path);
        os << out.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_simulate(SimConfig cfg, const std::string& out_path) {
    if (cfg.code.empty()) throw ParseError("simulate needs --code");
    if (cfg.ebn0_db.empty()) throw ParseError("simulate needs --ebn0");

    std::vector<BerRecord> records;
    std::cout << ber_csv_header() << "\n";
    for (double e : cfg.ebn0_db) {
        std::cerr << "point: " << cfg.code << " " << decoder_name(cfg.decoder) << " @ " << e << " dB\n";
        BerRecord rec = run_point(cfg, e);
        if (rec.decode_failures)
            std::cerr << "warning: " << rec.decode_failures << " frames aborted by decoder errors\n";
        records.push_back(rec);
        std::cout << to_csv_line(rec) << "\n";
    }
    if (!out_path.empty()) {
        write_ber_csv(records, out_path);
        write_gnuplot(records, out_path, gnuplot_path_for(out_path));
        std::cerr << "wrote " << out_path << " and " << gnuplot_path_for(out_path) << "\n";
    }
    return kExitOk;
}

int cmd_verify(bool all, std::vector<std::string> code_list, std::uint64_t frames, std::uint64_t seed,
               int length, double ebn0) {
    if (all) code_list = builtin_code_descriptors();
    if (code_list.empty()) throw ParseError("verify needs --all or --code");
    VerifyReport report = verify_theorems(code_list, frames, seed, length, ebn0);
    std::cout << report.to_string();
    return report.all_pass() ? kExitOk : kExitVerifyFailed;
}

int cmd_bench(const std::string& field_desc, const std::string& memories_text, std::uint64_t frames,
              int length, std::uint64_t seed, const std::string& out_path) {
    std::vector<int> memories;
    {
        std::stringstream ss(memories_text);
        std::string tok;
        while (std::getline(ss, tok, ',')) memories.push_back(std::stoi(tok));
    }
    BenchResult result = bench_complexity(field_desc, memories, frames, length, seed);
    if (out_path.empty()) {
        std::cout << result.csv();
    } else {
        std::ofstream os(out_path);
        os << result.csv();
        std::cerr << "wrote " << out_path << "\n";
    }
    if (result.rows.empty()) return kExitOk;

    bool ok = true;
    Field f = Field::parse(field_desc);
    if (result.rows.size() >= 3) {
        std::cerr << "dual direct time vs registers: R^2 = " << result.dual_direct_r2 << "\n";
        ok = ok && result.dual_direct_r2 > 0.99;
    }
    for (std::size_t i = 0; i < result.bcjr_ratios.size(); ++i) {
        std::cerr << "trellis reference time ratio " << result.rows[i].code << " -> "
                  << result.rows[i + 1].code << ": " << result.bcjr_ratios[i] << "\n";
        ok = ok && result.bcjr_ratios[i] > f.q() / 2.0;
    }
    std::cerr << (ok ? "bench checks passed\n" : "bench checks FAILED\n");
    return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SISO MAP decoding of rate-1 convolutional codes over GF(q) with shift-register decoders"};
    app.require_subcommand(1);

    app.add_subcommand("codes", "list the built-in codes and their decoder parameters");

    auto* enc = app.add_subcommand("encode", "encode an information symbol sequence");
    std::string enc_code, enc_info;
    bool enc_term = false;
    enc->add_option("--code", enc_code, "code descriptor, e.g. \"gf4:(1+x)/(1+2x)\"")->required();
    enc->add_option("--info", enc_info, "comma-separated information symbols")->required();
    enc->add_flag("--terminate", enc_term, "append the termination tail");

    auto* dec = app.add_subcommand("decode", "soft-decode one frame of symbol pmfs");
    std::string dec_code, dec_pmfs, dec_decoder = "dual-combined", dec_mode = "direct", dec_out;
    dec->add_option("--code", dec_code, "code descriptor")->required();
    dec->add_option("--pmfs-in", dec_pmfs, "JSON file with a 'pmfs' array (tail included)")->required();
    dec->add_option("--decoder", dec_decoder,
                    "bcjr | dual-combined | dual-fft | dual-fb-product | dual-forward-only");
    dec->add_option("--mode", dec_mode, "direct | fast convolution arithmetic");
    dec->add_option("--out", dec_out, "output JSON path (default: stdout)");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo BER simulation");
    std::string sim_code, sim_decoder, sim_ebn0, sim_mode, sim_out, sim_config;
    std::uint64_t sim_frames = 0, sim_errors = 0, sim_seed = 0;
    int sim_length = 0, sim_threads = -1;
    sim->add_option("--config", sim_config, "JSON config file (flags override it)");
    sim->add_option("--code", sim_code, "code descriptor");
    sim->add_option("--decoder", sim_decoder,
                    "bcjr | dual-combined | dual-fft | dual-fb-product | dual-forward-only");
    sim->add_option("--ebn0", sim_ebn0, "Eb/N0 points in dB: list \"0,2,4\" or range \"0:6:1\"");
    sim->add_option("--frames", sim_frames, "frame cap per point (default 20000)");
    sim->add_option("--errors", sim_errors, "bit-error target per point (default 200)");
    sim->add_option("--length", sim_length, "information symbols per frame (default 256)");
    auto* seed_opt = sim->add_option("--seed", sim_seed, "master seed (required)");
    sim->add_option("--mode", sim_mode, "direct | fast");
    sim->add_option("--threads", sim_threads, "worker threads (default: hardware)");
    sim->add_option("--out", sim_out, "CSV output path; a gnuplot script is written beside it");

    auto* ver = app.add_subcommand("verify", "equivalence and termination checks");
    bool ver_all = false;
    std::vector<std::string> ver_codes;
    std::uint64_t ver_frames = 100, ver_seed = 1;
    int ver_length = 32;
    double ver_ebn0 = 2.0;
    ver->add_flag("--all", ver_all, "check all built-in codes");
    ver->add_option("--code", ver_codes, "code descriptor (repeatable)");
    ver->add_option("--frames", ver_frames, "random frames per code (default 100)");
    ver->add_option("--seed", ver_seed, "master seed (default 1)");
    ver->add_option("--length", ver_length, "information symbols per frame (default 32)");
    ver->add_option("--ebn0", ver_ebn0, "Eb/N0 in dB for the noisy frames (default 2)");

    auto* ben = app.add_subcommand("bench", "decode-time scaling benchmark");
    std::string ben_field = "gf4", ben_memories = "1,2,3", ben_out;
    std::uint64_t ben_frames = 20, ben_seed = 1;
    int ben_length = 256;
    ben->add_option("--field", ben_field, "field descriptor (default gf4)");
    ben->add_option("--memories", ben_memories, "code memories to sweep (default 1,2,3)");
    ben->add_option("--frames", ben_frames, "frames per timing point (default 20)");
    ben->add_option("--length", ben_length, "information symbols per frame (default 256)");
    ben->add_option("--seed", ben_seed, "master seed (default 1)");
    ben->add_option("--out", ben_out, "CSV output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("codes")) return cmd_codes();
        if (app.got_subcommand("encode")) return cmd_encode(enc_code, enc_info, enc_term);
        if (app.got_subcommand("decode")) return cmd_decode(dec_code, dec_pmfs, dec_decoder, dec_mode, dec_out);
        if (app.got_subcommand("simulate")) {
            SimConfig cfg;
            cfg.frame_length = 256;
            std::string out_path;
            if (!sim_config.empty()) apply_config_file(cfg, out_path, sim_config);
            if (!sim_code.empty()) cfg.code = sim_code;
            if (!sim_decoder.empty()) cfg.decoder = parse_decoder(sim_decoder);
            if (!sim_ebn0.empty()) cfg.ebn0_db = parse_ebn0(sim_ebn0);
            if (sim_frames) cfg.max_frames = sim_frames;
            if (sim_errors) cfg.target_errors = sim_errors;
            if (sim_length) cfg.frame_length = sim_length;
            if (!sim_mode.empty()) cfg.mode = parse_mode(sim_mode);
            if (sim_threads >= 0) cfg.threads = sim_threads;
            if (!sim_out.empty()) out_path = sim_out;
            if (seed_opt->count()) {
                cfg.seed = sim_seed;
            } else if (sim_config.empty() || cfg.seed == 0) {
                throw ParseError("simulate needs an explicit --seed for reproducibility");
            }
            return cmd_simulate(cfg, out_path);
        }
        if (app.got_subcommand("verify"))
            return cmd_verify(ver_all, ver_codes, ver_frames, ver_seed, ver_length, ver_ebn0);
        if (app.got_subcommand("bench"))
            return cmd_bench(ben_field, ben_memories, ben_frames, ben_length, ben_seed, ben_out);
    } catch (const AllZeroMassError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NotTerminatedError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SearchExhaustedError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
