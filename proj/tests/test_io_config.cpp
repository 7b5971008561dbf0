#include <gtest/gtest.h>

#include <filesystem>

#include <wigdev/config.hpp>
#include <wigdev/io.hpp>

using namespace wigdev;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("wigdev_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST(Config, ParsesCommentsAndOverrides) {
    auto c = Config::parse("# header\ngrid.n_x = 256  # trailing\n\napprox.eps=1e-6\nflag = yes\nsizes = 1, 2,4\n");
    EXPECT_EQ(c.get_int("grid.n_x", 0), 256);
    EXPECT_DOUBLE_EQ(c.get_double("approx.eps", 0), 1e-6);
    EXPECT_TRUE(c.get_bool("flag", false));
    EXPECT_EQ(c.get_list("sizes", {}), (std::vector<double>{1, 2, 4}));
    EXPECT_EQ(c.get_int("missing", 7), 7);
    c.apply_override("grid.n_x=512");
    EXPECT_EQ(c.get_int("grid.n_x", 0), 512);
}

TEST(Config, ReportsErrorsWithLocation) {
    try {
        (void)Config::parse("a=1\nnot a pair\n", "cfg.txt");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("cfg.txt:2"), std::string::npos);
    }
    const auto c = Config::parse("n = 1.5\nb = maybe\n");
    EXPECT_THROW((void)c.get_int("n", 0), ConfigError);
    EXPECT_THROW((void)c.get_bool("b", false), ConfigError);
    EXPECT_THROW((void)c.get_double("b", 0), ConfigError);
    EXPECT_THROW(Config{}.apply_override("bad key=1"), ConfigError);
    EXPECT_THROW(Config::load("/nonexistent/wigdev.cfg"), ConfigError);
}

TEST(Config, HashIsCanonical) {
    const auto a = Config::parse("x=1\ny=2\n");
    const auto b = Config::parse("y = 2\nx = 1\n");
    const auto c = Config::parse("x=1\ny=3\n");
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_NE(a.hash(), c.hash());
    EXPECT_EQ(a.hash().size(), 16u);
    EXPECT_EQ(a.unknown_keys({"x"}), std::vector<std::string>{"y"});
}

TEST(Io, FieldCsvAndBinaryRoundTrip) {
    const auto dir = scratch("field");
    const auto pg = PhaseGrid::wigner_dual(Grid1D(-1, 3, 32, 0.5));
    const auto F = RealField::sample(pg, [](double x, double p) { return std::sin(x) * std::exp(-p * p) + 1e-17 * x; });
    io::write_field_csv(dir / "f.csv", F);
    EXPECT_EQ(sup_distance(io::read_field_csv(dir / "f.csv", pg), F), 0.0);
    io::write_field_binary(dir / "f", F);
    const auto B = io::read_field_binary(dir / "f");
    EXPECT_TRUE(B.grid().same_as(pg));
    EXPECT_EQ(sup_distance(B, F), 0.0);
    EXPECT_EQ(fs::file_size(dir / "f.bin"), 32u * 32u * sizeof(double));
    const auto header = io::read_json(dir / "f.json");
    EXPECT_EQ(header["order"], "column-major");
    EXPECT_EQ(header["shape"], (io::json{32, 32}));
}

TEST(Io, BinaryLayoutIsColumnMajor) {
    const auto dir = scratch("layout");
    const auto pg = PhaseGrid::wigner_dual(Grid1D(0, 1, 8));
    RealField F(pg);
    F(1, 0) = 1.0;
    F(0, 1) = 2.0;
    io::write_field_binary(dir / "f", F);
    std::ifstream in(dir / "f.bin", std::ios::binary);
    std::vector<double> v(64);
    in.read(reinterpret_cast<char*>(v.data()), 64 * sizeof(double));
    EXPECT_EQ(v[1], 1.0);
    EXPECT_EQ(v[8], 2.0);
}

TEST(Io, ProfileCsvRoundTrip) {
    const auto dir = scratch("profile");
    Profile g{Grid1D::centered(0.0, 0.125, 64), {}, 0.25};
    for (std::size_t k = 0; k < 64; ++k) g.values.push_back(std::exp(-g.p_grid[k] * g.p_grid[k]));
    io::write_profile_csv(dir / "g.csv", g);
    const auto r = io::read_profile_csv(dir / "g.csv", 0.25, 1.0);
    EXPECT_TRUE(r.p_grid.same_as(g.p_grid));
    EXPECT_EQ(r.values, g.values);
    std::ofstream(dir / "bad.csv") << "p,g\n0,1\n0.5,1\n2,1\n3,1\n4,1\n5,1\n6,1\n7,1\n";
    EXPECT_THROW(io::read_profile_csv(dir / "bad.csv", 0, 1), io::IoError);
}

TEST(Io, SeriesManifests) {
    const auto dir = scratch("series");
    const auto pg = PhaseGrid::balanced(16);
    io::write_field_series(dir, {0.0, 1.0}, {harmonic_wigner(0, pg), harmonic_wigner(1, pg)}, "flow");
    const auto m = io::read_json(dir / "flow_manifest.json");
    ASSERT_EQ(m["snapshots"].size(), 2u);
    EXPECT_EQ(m["snapshots"][1]["file"], "flow_0001.csv");
    EXPECT_TRUE(fs::exists(dir / "flow_0001.csv"));
    TimeProfile tp{pg.p(), {0.0, 0.5}, {std::vector<double>(16, 1.0), std::vector<double>(16, 2.0)}, 0.0};
    io::write_time_profile(dir, tp, "g0");
    EXPECT_EQ(io::read_json(dir / "g0_manifest.json")["snapshots"][1]["t"], 0.5);
}

TEST(Io, ResultJsonShapes) {
    WitnessReport w;
    w.N_bound = 1;
    const auto wj = io::witness_json(w);
    for (const char* k : {"N_bound", "N_used", "overlap", "tolerance"}) EXPECT_TRUE(wj.contains(k)) << k;
    EXPECT_EQ(wj.size(), 4u);
    const auto cj = io::certificate_json(Certificate{});
    for (const char* k : {"N", "eps", "tail", "lambda_1", "eigen_gap", "bound_13", "bound_15"}) EXPECT_TRUE(cj.contains(k)) << k;
    EXPECT_EQ(cj.size(), 7u);
}
