#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "lmpt/config.hpp"

using namespace lmpt;
using cli::CliConfig;

namespace {

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p, const std::string& text)
        : path(std::move(p))
    {
        write_file(path, text);
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("token maps cover every enum value both ways")
{
    for (auto kind :
         {DetectorKind::Im1Bit, DetectorKind::Clmpt, DetectorKind::OneBit})
        CHECK(cli::detector_from_token(cli::detector_token(kind)) == kind);
    for (auto kind : {GeneratorKind::Exact, GeneratorKind::Asymptotic})
        CHECK(cli::generator_from_token(cli::generator_token(kind)) == kind);
    for (auto kind : {QuantizerKind::LR, QuantizerKind::Direct})
        CHECK(cli::quantizer_from_token(cli::quantizer_token(kind)) == kind);

    CHECK_THROWS_AS(cli::detector_from_token("two-bit"), std::invalid_argument);
    CHECK_THROWS_AS(cli::generator_from_token("montecarlo"),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::quantizer_from_token("sign"), std::invalid_argument);
}

TEST_CASE("defaults select the published comparison setup")
{
    const CliConfig cfg = cli::default_config();
    CHECK(cfg.experiment.q_sensors == 300);
    CHECK(cfg.experiment.n_dims == 1000);
    CHECK(cfg.experiment.sparsity == 0.05);
    CHECK(cfg.experiment.nonzero_var == 8.0);
    CHECK(cfg.experiment.seed == 7);
    CHECK(cfg.experiment.detectors ==
          std::vector<DetectorKind>{DetectorKind::Im1Bit, DetectorKind::OneBit});
    CHECK(cfg.experiment.pfa_grid ==
          std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.5});
    CHECK(cfg.diag_detectors.size() == 3);
    CHECK_NOTHROW(cfg.experiment.validate());
}

TEST_CASE("presets configure the two published experiments")
{
    CliConfig fig1 = cli::default_config();
    cli::apply_preset(fig1, "fig1");
    CHECK(fig1.experiment.q_sensors == 300);
    CHECK(fig1.experiment.trials_h0 == 10000);
    CHECK(fig1.experiment.generator == GeneratorKind::Exact);
    CHECK(!fig1.equivalence_mode);

    CliConfig fig2 = cli::default_config();
    cli::apply_preset(fig2, "fig2");
    CHECK(fig2.equivalence_mode);
    CHECK(fig2.q_reference == 100);
    CHECK(fig2.forced_ratio == 0.0);
    CHECK(fig2.experiment.sparsity == 0.05);

    CliConfig bad = cli::default_config();
    CHECK_THROWS_AS(cli::apply_preset(bad, "fig3"), std::invalid_argument);
}

TEST_CASE("key-value files parse with comments, blanks and whitespace")
{
    const TempFile file("kv_parse_test.cfg",
                        "# full-line comment\n"
                        "\n"
                        "  q = 42   # trailing comment\n"
                        "detectors = im1bit , clmpt\n"
                        "pfa_grid=0.1,0.2\n"
                        "fast_mode = true\n");
    const auto kv = cli::read_kv_file(file.path);
    CHECK(kv.size() == 4);
    CHECK(kv.at("q") == "42");
    CHECK(kv.at("detectors") == "im1bit , clmpt");

    CliConfig cfg = cli::default_config();
    cli::apply_kv(cfg, kv);
    CHECK(cfg.experiment.q_sensors == 42);
    CHECK(cfg.experiment.detectors ==
          std::vector<DetectorKind>{DetectorKind::Im1Bit, DetectorKind::Clmpt});
    CHECK(cfg.experiment.pfa_grid == std::vector<double>{0.1, 0.2});
    CHECK(cfg.fast_mode);
}

TEST_CASE("malformed files and unknown keys are rejected loudly")
{
    {
        const TempFile file("kv_noeq_test.cfg", "q 42\n");
        CHECK_THROWS_WITH_AS(cli::read_kv_file(file.path),
                             doctest::Contains("kv_noeq_test.cfg:1"),
                             std::invalid_argument);
    }
    {
        const TempFile file("kv_nokey_test.cfg", "ok = 1\n = 3\n");
        CHECK_THROWS_WITH_AS(cli::read_kv_file(file.path),
                             doctest::Contains(":2"), std::invalid_argument);
    }
    CHECK_THROWS_AS(cli::read_kv_file("does_not_exist.cfg"),
                    std::runtime_error);

    CliConfig cfg = cli::default_config();
    CHECK_THROWS_WITH_AS(cli::apply_kv(cfg, {{"qq", "1"}}),
                         doctest::Contains("qq"), std::invalid_argument);
    CHECK_THROWS_AS(cli::apply_kv(cfg, {{"q", "many"}}), std::invalid_argument);
    CHECK_THROWS_AS(cli::apply_kv(cfg, {{"noise_var", "1.0x"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::apply_kv(cfg, {{"fast_mode", "maybe"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::apply_kv(cfg, {{"detectors", "im1bit,fourbit"}}),
                    std::invalid_argument);
}

TEST_CASE("serialization round-trips every field through a file")
{
    CliConfig cfg = cli::default_config();
    cfg.command = "simulate-roc";
    cfg.experiment.q_sensors = 123;
    cfg.experiment.n_dims = 77;
    cfg.experiment.noise_var = 2.25;
    cfg.experiment.sparsity = 1.0 / 3.0; // exercises the 17-digit format
    cfg.experiment.nonzero_var = 8.0;
    cfg.experiment.generator = GeneratorKind::Asymptotic;
    cfg.experiment.detectors = {DetectorKind::Clmpt};
    cfg.experiment.trials_h0 = 11;
    cfg.experiment.trials_h1 = 22;
    cfg.experiment.pfa_grid = {0.05, 1.0 / 7.0, 0.9};
    cfg.experiment.seed = 987654321;
    cfg.experiment.workers = 5;
    cfg.out_dir = "some/dir";
    cfg.fast_mode = true;
    cfg.format_version = 1;
    cfg.equivalence_mode = true;
    cfg.q_reference = 100;
    cfg.forced_ratio = 1.5;
    cfg.diag_detectors = {DetectorKind::OneBit};
    cfg.opt_kind = QuantizerKind::Direct;
    cfg.opt_sigma_w = 0.125;

    const std::string text = cli::serialize(cfg);
    const TempFile file("kv_roundtrip_test.cfg", text);
    CliConfig back = cli::default_config();
    cli::apply_kv(back, cli::read_kv_file(file.path));

    CHECK(back.command == cfg.command);
    CHECK(back.experiment.q_sensors == cfg.experiment.q_sensors);
    CHECK(back.experiment.n_dims == cfg.experiment.n_dims);
    CHECK(back.experiment.noise_var == cfg.experiment.noise_var);
    CHECK(back.experiment.sparsity == cfg.experiment.sparsity);
    CHECK(back.experiment.generator == cfg.experiment.generator);
    CHECK(back.experiment.detectors == cfg.experiment.detectors);
    CHECK(back.experiment.trials_h0 == cfg.experiment.trials_h0);
    CHECK(back.experiment.trials_h1 == cfg.experiment.trials_h1);
    CHECK(back.experiment.pfa_grid == cfg.experiment.pfa_grid);
    CHECK(back.experiment.seed == cfg.experiment.seed);
    CHECK(back.experiment.workers == cfg.experiment.workers);
    CHECK(back.out_dir == cfg.out_dir);
    CHECK(back.fast_mode == cfg.fast_mode);
    CHECK(back.equivalence_mode == cfg.equivalence_mode);
    CHECK(back.q_reference == cfg.q_reference);
    CHECK(back.forced_ratio == cfg.forced_ratio);
    CHECK(back.diag_detectors == cfg.diag_detectors);
    CHECK(back.opt_kind == cfg.opt_kind);
    CHECK(back.opt_sigma_w == cfg.opt_sigma_w);

    // Canonical form: serializing the reparsed config gives the same bytes.
    CHECK(cli::serialize(back) == text);
}

TEST_CASE("bank files broadcast a scalar when thresholds agree")
{
    CHECK(cli::serialize_bank(QuantizerKind::LR, {1.5, 1.5, 1.5}) ==
          "kind = lr\nthresholds = 1.5\n");
    CHECK(cli::serialize_bank(QuantizerKind::Direct, {0.5, -1.0}) ==
          "kind = direct\nthresholds = 0.5,-1\n");
    CHECK_THROWS_AS(cli::serialize_bank(QuantizerKind::LR, {}),
                    std::invalid_argument);

    cli::write_bank_file("bank_write_test.txt", QuantizerKind::LR, {2.0});
    std::ifstream in("bank_write_test.txt");
    std::string line1, line2;
    REQUIRE(std::getline(in, line1));
    REQUIRE(std::getline(in, line2));
    CHECK(line1 == "kind = lr");
    CHECK(line2 == "thresholds = 2");
    in.close();
    std::remove("bank_write_test.txt");
}
