#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(UWOC_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return std::string(::testing::TempDir()) + "/" + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

TEST(CliLmax, BlueChannelHeadlineNumber) {
    const RunResult r = run_cli("lmax --channel blue --p 0 --q 0");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("L_max = 58.1"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("blue"), std::string::npos);
}

TEST(CliLmax, CustomAttenuation) {
    const RunResult r = run_cli("lmax --k 0.02 --p 0 --q 0");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("58.1"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("custom"), std::string::npos);
}

TEST(CliLmax, FromFovAperture) {
    const RunResult r = run_cli("lmax --channel blue --p 0 --q 0 --aperture from-fov");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("60.2"), std::string::npos) << r.output;
}

TEST(CliOptimizeQ, ReportsBestSplit) {
    const RunResult r = run_cli("optimize-q --p 0.5");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("q* = 0.6"), std::string::npos) << r.output;
}

TEST(CliFecLimit, PurePam2) {
    const RunResult r = run_cli("fec-limit --p 0 --q 0 --tol-db 1e-4");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("8.6481"), std::string::npos) << r.output;
}

TEST(CliFecLimit, NoSolutionExitsOne) {
    const RunResult r = run_cli("fec-limit --p 0.5 --q 1");
    EXPECT_EQ(r.exit_code, 1) << r.output;
    EXPECT_NE(r.output.find("floor"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("0.25"), std::string::npos) << r.output;
}

TEST(CliMc, DeterministicArtifacts) {
    const std::string out1 = temp_path("mc1.csv");
    const std::string out2 = temp_path("mc2.csv");
    const std::string args = "mc --p 0 --q 0 --snr-db 8.648 --symbols 200000 --seed 7 --out ";
    EXPECT_EQ(run_cli(args + out1).exit_code, 0);
    EXPECT_EQ(run_cli(args + out2).exit_code, 0);
    const std::string a = slurp(out1), b = slurp(out2);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("seed"), std::string::npos);
    EXPECT_NE(a.find(",7,"), std::string::npos); // recorded seed column
}

TEST(CliMc, ThreadCountDoesNotChangeResults) {
    const std::string out1 = temp_path("mc_t1.csv");
    const std::string out4 = temp_path("mc_t4.csv");
    const std::string base =
        "mc --p 0.5 --q 0 --snr-db 10 --symbols 400000 --chunk-symbols 50000 --seed 11 ";
    EXPECT_EQ(run_cli(base + "--threads 1 --out " + out1).exit_code, 0);
    EXPECT_EQ(run_cli(base + "--threads 4 --out " + out4).exit_code, 0);
    EXPECT_EQ(slurp(out1), slurp(out4));
}

TEST(CliMc, AutoSeedIsReported) {
    const RunResult r = run_cli("mc --p 0 --q 0 --snr-db 6 --symbols 10000");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("seed "), std::string::npos) << r.output;
}

TEST(CliBer, CsvCurve) {
    const RunResult r = run_cli("ber --p 0.5 --q 0 --snr-grid 0:10:5");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("snr_db,ber_pam2,ber_pam4,ber_tdhp"), std::string::npos);
    EXPECT_NE(r.output.find("0,0.158655,0.264546,0.211601"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("10,0.000782701,0.0869991,0.0438909"), std::string::npos) << r.output;
}

TEST(CliSweep, CsvHeaderAndSvg) {
    const std::string csv = temp_path("sweep.csv");
    const std::string svg = temp_path("sweep.svg");
    const RunResult r = run_cli("sweep --variable p --grid 0:1:0.5 --channels blue --out " + csv +
                                " --svg " + svg);
    EXPECT_EQ(r.exit_code, 0) << r.output;
    const std::string body = slurp(csv);
    EXPECT_EQ(body.substr(0, body.find('\n')),
              "variable,value,channel,p,q_used,mode,fec_limit_db,lmax_m");
    const std::string plot = slurp(svg);
    EXPECT_NE(plot.find("<svg"), std::string::npos);
    EXPECT_NE(plot.find("polyline"), std::string::npos);
    EXPECT_NE(plot.find("L_max"), std::string::npos);
}

TEST(CliSweep, QVariantUsesFixedP) {
    const RunResult r = run_cli("sweep --variable q --grid 0:0.9:0.1 --p 0.5 --channels blue");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("q,0.6,blue,0.5"), std::string::npos) << r.output;
}

TEST(CliSweep, RowsReplayAsSingleCells) {
    const std::string csv = temp_path("replay.csv");
    ASSERT_EQ(run_cli("sweep --variable p --grid 0:1:0.5 --channels green --no-optimize --out " +
                      csv)
                  .exit_code,
              0);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        // variable,value,channel,p,q_used,mode,fec_limit_db,lmax_m
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(row, field, ',')) f.push_back(field);
        ASSERT_EQ(f.size(), 8u);
        const RunResult cell =
            run_cli("lmax --channel " + f[2] + " --p " + f[3] + " --q " + f[4]);
        EXPECT_EQ(cell.exit_code, 0);
        EXPECT_NE(cell.output.find("L_max = " + f[7] + " m"), std::string::npos)
            << "row: " << line << "\ncell: " << cell.output;
    }
}

TEST(CliEye, RequiresNoiseChoice) {
    EXPECT_EQ(run_cli("eye --eye-format pam2 --traces 5").exit_code, 2);
    const RunResult ok = run_cli("eye --eye-format pam2 --noise-free --traces 5 --seed 3");
    EXPECT_EQ(ok.exit_code, 0) << ok.output;
    EXPECT_NE(ok.output.find("trace_id,sample_index,amplitude"), std::string::npos);
}

TEST(CliConfig, FileAppliesAndFlagsWin) {
    const std::string cfg = temp_path("run.cfg");
    write_file(cfg, "p = 0.3\nq = 0\nchannel = green\n");
    const RunResult from_file = run_cli("fec-limit --config " + cfg);
    EXPECT_EQ(from_file.exit_code, 0) << from_file.output;
    EXPECT_NE(from_file.output.find("p=0.3"), std::string::npos) << from_file.output;

    const RunResult overridden = run_cli("fec-limit --config " + cfg + " --p 0.5");
    const RunResult direct = run_cli("fec-limit --p 0.5 --q 0");
    EXPECT_EQ(overridden.exit_code, 0);
    EXPECT_EQ(overridden.output, direct.output);
}

TEST(CliConfig, BadKeyAndRangeExitTwo) {
    const std::string cfg = temp_path("bad.cfg");
    write_file(cfg, "theta_deg = 95\n");
    const RunResult range = run_cli("lmax --config " + cfg + " --channel blue");
    EXPECT_EQ(range.exit_code, 2) << range.output;
    EXPECT_NE(range.output.find("theta_deg"), std::string::npos);

    write_file(cfg, "no_such_key = 1\n");
    const RunResult unknown = run_cli("lmax --config " + cfg + " --channel blue");
    EXPECT_EQ(unknown.exit_code, 2) << unknown.output;
    EXPECT_NE(unknown.output.find("unknown key 'no_such_key'"), std::string::npos);

    const RunResult missing = run_cli("lmax --config /does/not/exist.cfg");
    EXPECT_EQ(missing.exit_code, 2) << missing.output;
}

TEST(CliConfig, ShippedExampleWorks) {
    const RunResult r = run_cli(std::string("lmax --config ") + UWOC_EXAMPLE_CONFIG);
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("L_max"), std::string::npos);
}

TEST(CliErrors, BadFlagValueExitsTwo) {
    EXPECT_EQ(run_cli("fec-limit --p 1.5").exit_code, 2);
    EXPECT_EQ(run_cli("lmax --channel violet").exit_code, 2);
    EXPECT_EQ(run_cli("mc --p 0.5").exit_code, 2); // missing required --snr-db
    EXPECT_EQ(run_cli("definitely-not-a-command").exit_code, 2);
    EXPECT_EQ(run_cli("").exit_code, 2); // no subcommand: help + error status
}

TEST(CliJson, McRecordRoundTrips) {
    const RunResult r =
        run_cli("mc --p 0 --q 0 --snr-db 6 --symbols 10000 --seed 5 --format json");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("\"seed\": 5"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("\"n_symbols\": 10000"), std::string::npos);
}

} // namespace
