#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

const std::string kBin = KOLMO_BIN;
const fs::path kWork = "/tmp/kolmo_cli_test";

std::string tiny_stokes_cfg(const std::string& outdir) {
    std::ostringstream os;
    os << "[model]\nkind = stokes\nnu = 1\n"
       << "[force]\nshape = ball\namplitude = 0.5\nell0 = 1\nc = 2.5\n"
       << "[damping]\nrule = from_force\n"
       << "[grid]\nL = 8\nn = 16\n"
       << "[time]\ndt = 2e-3\nt_end = 2.0\nburn_in = 0.6\n"
       << "[output]\ndirectory = " << outdir << "\nregimes = stokes\n";
    return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    REQUIRE(out);
    out << text;
}

}  // namespace

TEST_CASE("cli: version and preset emission") {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    CHECK(run_cmd(kBin + " --version > /dev/null") == 0);
    CHECK(run_cmd(kBin + " preset section5 --emit-config > " + (kWork / "s5.cfg").string()) == 0);
    std::ifstream in(kWork / "s5.cfg");
    std::string first;
    std::getline(in, first);
    CHECK(first == "[model]");
    CHECK(run_cmd(kBin + " preset does_not_exist 2> /dev/null") == 2);
}

TEST_CASE("cli: run, audit, and the exit-code contract") {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "stokes.cfg";
    const std::string outdir = (kWork / "out").string();
    write_file(cfg, tiny_stokes_cfg(outdir));

    CHECK(run_cmd(kBin + " run " + cfg.string() + " > /dev/null") == 0);
    const fs::path report = fs::path(outdir) / "report.json";
    REQUIRE(fs::exists(report));
    CHECK(run_cmd(kBin + " audit " + report.string() + " > /dev/null") == 0);

    SUBCASE("tampered report fails the audit") {
        std::ifstream in(report);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        const auto pos = text.find("\"lhs\": ");
        REQUIRE(pos != std::string::npos);
        text.replace(pos + 7, 1, "9");  // clobber a digit
        write_file(report, text);
        CHECK(run_cmd(kBin + " audit " + report.string() + " > /dev/null") == 1);
    }

    SUBCASE("invalid config exits 2 with the field named") {
        const fs::path bad = kWork / "bad.cfg";
        std::string text = tiny_stokes_cfg(outdir);
        text += "[time]\nburn_in = 99\n";
        write_file(bad, text);
        CHECK(run_cmd(kBin + " run " + bad.string() + " 2> " + (kWork / "err.txt").string()) == 2);
        std::ifstream err(kWork / "err.txt");
        std::stringstream ebuf;
        ebuf << err.rdbuf();
        CHECK(ebuf.str().find("burn_in") != std::string::npos);
    }

    SUBCASE("missing config exits 2") {
        CHECK(run_cmd(kBin + " run /nonexistent.cfg 2> /dev/null") == 2);
    }
}

TEST_CASE("cli: sweep runs every config in a directory") {
    fs::remove_all(kWork);
    fs::create_directories(kWork / "sweep");
    write_file(kWork / "sweep/a.cfg", tiny_stokes_cfg((kWork / "sweep_out/a").string()));
    write_file(kWork / "sweep/b.cfg", tiny_stokes_cfg((kWork / "sweep_out/b").string()));
    CHECK(run_cmd(kBin + " sweep " + (kWork / "sweep").string() + " > /dev/null") == 0);
    CHECK(fs::exists(kWork / "sweep_out/a/report.json"));
    CHECK(fs::exists(kWork / "sweep_out/b/report.json"));
}
