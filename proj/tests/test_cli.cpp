#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef DUALDEC_CLI_PATH
#define DUALDEC_CLI_PATH "./dualdec"
#endif

namespace {

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(DUALDEC_CLI_PATH) + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file;
    cmd += " 2> cli_stderr.txt";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("codes subcommand lists the stock codes") {
    REQUIRE(run("codes", "cli_out.txt") == 0);
    std::string out = slurp("cli_out.txt");
    CHECK(out.find("gf4:(1+x)") != std::string::npos);
    CHECK(out.find("gf4:(1+3x+2x^2)/(1+x+2x^2)") != std::string::npos);
    std::remove("cli_out.txt");
}

TEST_CASE("encode subcommand") {
    REQUIRE(run("encode --code 'gf4:(1+x)' --info 1,2,3", "cli_out.txt") == 0);
    CHECK(slurp("cli_out.txt") == "1,3,1\n");

    REQUIRE(run("encode --code 'gf4:(1+x)' --info 1,2,3 --terminate", "cli_out.txt") == 0);
    std::string out = slurp("cli_out.txt");
    CHECK(count_lines(out) == 1);
    // L = 3 information symbols plus 2 tail symbols.
    CHECK(std::count(out.begin(), out.end(), ',') == 4);

    CHECK(run("encode --code 'gf4:(1+x)' --info 1,9") == 1);
    CHECK(run("encode --code 'gf4:(x)' --info 1") == 1);
    std::remove("cli_out.txt");
}

TEST_CASE("decode subcommand round trip") {
    REQUIRE(run("encode --code 'gf4:(1+x)' --info 1,2,3 --terminate", "cli_out.txt") == 0);
    std::string syms = slurp("cli_out.txt");

    // Point-mass pmfs of the transmitted frame.
    std::ofstream js("cli_frame.json");
    js << "{\"pmfs\": [";
    bool first = true;
    std::stringstream ss(syms);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int v = std::stoi(tok);
        if (!first) js << ",";
        first = false;
        js << "[";
        for (int j = 0; j < 4; ++j) js << (j ? "," : "") << (j == v ? 1.0 : 0.0);
        js << "]";
    }
    js << "]}";
    js.close();

    for (const char* dec : {"bcjr", "dual-combined", "dual-fft", "dual-fb-product", "dual-forward-only"}) {
        REQUIRE(run(std::string("decode --code 'gf4:(1+x)' --pmfs-in cli_frame.json --decoder ") + dec,
                    "cli_out.txt") == 0);
        std::string out = slurp("cli_out.txt");
        CHECK(out.find("\"hard_decisions\": [\n    1,\n    2,\n    3") != std::string::npos);
    }

    CHECK(run("decode --code 'gf4:(1+x)' --pmfs-in cli_frame.json --decoder viterbi") == 1);
    CHECK(run("decode --code 'gf4:(1+x)' --pmfs-in missing.json") == 1);
    std::remove("cli_frame.json");
    std::remove("cli_out.txt");
}

TEST_CASE("simulate subcommand") {
    std::remove("cli_ber.csv");
    std::remove("cli_ber.gp");
    REQUIRE(run("simulate --code 'gf4:(1+x)' --decoder dual-combined --ebn0 0:6:1 --frames 2 --length 8 "
                "--seed 7 --out cli_ber.csv",
                "cli_out.txt") == 0);
    std::string csv = slurp("cli_ber.csv");
    CHECK(count_lines(csv) == 8);  // header + 7 points
    CHECK(csv.rfind("code,decoder,ebn0_db", 0) == 0);
    CHECK(slurp("cli_ber.gp").find("logscale") != std::string::npos);

    // A master seed is required.
    CHECK(run("simulate --code 'gf4:(1+x)' --ebn0 0 --frames 1") == 1);

    // Config file path, with an unknown key rejected.
    {
        std::ofstream cfg("cli_cfg.json");
        cfg << "{\"code\": \"gf4:(1+x)\", \"decoder\": \"dual-combined\", \"ebn0_db\": [1.0], "
               "\"frame_length\": 8, \"max_frames\": 2, \"seed\": 5}";
    }
    CHECK(run("simulate --config cli_cfg.json", "cli_out.txt") == 0);
    {
        std::ofstream cfg("cli_cfg.json");
        cfg << "{\"code\": \"gf4:(1+x)\", \"ebn0_db\": [1.0], \"seed\": 5, \"bogus\": 1}";
    }
    CHECK(run("simulate --config cli_cfg.json") == 1);

    std::remove("cli_cfg.json");
    std::remove("cli_ber.csv");
    std::remove("cli_ber.gp");
    std::remove("cli_out.txt");
}

TEST_CASE("verify subcommand") {
    REQUIRE(run("verify --code 'gf4:(1+x)/(1+2x)' --frames 3 --seed 1 --length 16", "cli_out.txt") == 0);
    std::string out = slurp("cli_out.txt");
    CHECK(out.find("verification PASSED") != std::string::npos);
    CHECK(run("verify --frames 1") == 1);  // neither --all nor --code
    std::remove("cli_out.txt");
}

TEST_CASE("bench subcommand") {
    REQUIRE(run("bench --field gf4 --memories 1,2 --frames 0", "cli_out.txt") == 0);
    std::string out = slurp("cli_out.txt");
    CHECK(count_lines(out) == 1);  // header only for a zero-frame run
    std::remove("cli_out.txt");
    std::remove("cli_stderr.txt");
}
