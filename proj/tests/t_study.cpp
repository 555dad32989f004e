#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "alloc.hpp"
#include "config.hpp"
#include "csvio.hpp"
#include "errors.hpp"
#include "study.hpp"

namespace study = nosched::study;
namespace alloc = nosched::alloc;
namespace csvio = nosched::csvio;
using nosched::cfg::Config;
using alloc::Sched;

namespace {

struct NomRow {
    const char* topo;
    double delta_ms;
    Sched s;
    double delta_eff, margin, gamma_eff, auc, xbar, theta, p999, maxq;
};

// frozen from an out-of-tree reimplementation of the whole pipeline
const NomRow kNominal[] = {
    {"pair2", 5, Sched::NOS, 5, 0.358158383524, 0.699595833333, 0.629312663391, 0.662434381819, 0.00905280853283, 27.6233791305, 2.19584112936},
    {"pair2", 5, Sched::PF, 5, 0.363918395828, 0.614333333333, 0.553495962253, 0.582627328074, 0.00711554542458, 31.1576270052, 2.17839419654},
    {"pair2", 5, Sched::BP, 5.75, 0.337622921284, 0.4776125, 0.42702102654, 0.449495816937, 0.00392921429768, 41.929107087, 2.26163498922},
    {"pair2", 12, Sched::NOS, 12, 0.174956514843, 0.699595833333, 0.569412138488, 0.599381197778, 0.00362041897888, 43.6806462692, 3.14176296967},
    {"pair2", 12, Sched::PF, 12, 0.180716527147, 0.614333333333, 0.502998973143, 0.529472602751, 0.00291814817924, 48.653579938, 3.09128851235},
    {"pair2", 12, Sched::BP, 13.8, 0.150947131836, 0.4776125, 0.377561245937, 0.397432890041, 0.00137333016202, 70.9220029865, 3.38240839373},
    {"pair2", 20, Sched::NOS, 20, 0.0754411576381, 0.699595833333, 0.45718806555, 0.48125059481, 0.00100640639095, 82.8479523006, 4.78447515881},
    {"pair2", 20, Sched::PF, 20, 0.081201169942, 0.614333333333, 0.411585015433, 0.43324738421, 0.000877923488508, 88.7033736063, 4.61166055026},
    {"pair2", 20, Sched::BP, 23, 0.0601553062337, 0.4776125, 0.286863744708, 0.301961836217, 0.000315937036909, 147.865958004, 5.35798514314},
    {"line4", 5, Sched::NOS, 5, 0.354598500144, 0.699477083333, 0.628571889008, 0.661654619312, 0.0089417407775, 27.7944083622, 2.20683584206},
    {"line4", 5, Sched::PF, 5, 0.363918395828, 0.614333333333, 0.553495962253, 0.582627328074, 0.00711554542458, 31.1576270052, 2.17839419654},
    {"line4", 5, Sched::BP, 5.75, 0.337622921284, 0.477335416667, 0.426773293473, 0.449235045288, 0.00392465661132, 41.9534460661, 2.26163498922},
    {"line4", 12, Sched::NOS, 12, 0.171396631464, 0.699477083333, 0.567123586783, 0.596972195985, 0.00351830085878, 44.310023927, 3.17422227454},
    {"line4", 12, Sched::PF, 12, 0.180716527147, 0.614333333333, 0.502998973143, 0.529472602751, 0.00291814817924, 48.653579938, 3.09128851235},
    {"line4", 12, Sched::BP, 13.8, 0.150947131836, 0.477335416667, 0.377342206593, 0.397202322311, 0.00137173716971, 70.9631717419, 3.38240839373},
    {"line4", 20, Sched::NOS, 20, 0.0718812742588, 0.699477083333, 0.449398743426, 0.473051308372, 0.000926519889658, 86.3457762792, 4.90151789295},
    {"line4", 20, Sched::PF, 20, 0.081201169942, 0.614333333333, 0.411585015433, 0.43324738421, 0.000877923488508, 88.7033736063, 4.61166055026},
    {"line4", 20, Sched::BP, 23, 0.0601553062337, 0.477335416667, 0.286697322843, 0.301786655307, 0.000315570566206, 147.951791133, 5.35798514314},
    {"ring8", 5, Sched::NOS, 5, 0.35239837122, 0.699358333333, 0.628067687436, 0.661123880816, 0.0088720108759, 27.9034201822, 2.21371409267},
    {"ring8", 5, Sched::PF, 5, 0.363918395828, 0.614333333333, 0.553495962253, 0.582627328074, 0.00711554542458, 31.1576270052, 2.17839419654},
    {"ring8", 5, Sched::BP, 5.75, 0.337622921284, 0.477058333333, 0.426525560406, 0.448974273639, 0.00392010156983, 41.9778133182, 2.26163498922},
    {"ring8", 12, Sched::NOS, 12, 0.16919650254, 0.699358333333, 0.565635575095, 0.595405867895, 0.00345493662813, 44.7145051491, 3.1947934495},
    {"ring8", 12, Sched::PF, 12, 0.180716527147, 0.614333333333, 0.502998973143, 0.529472602751, 0.00291814817924, 48.653579938, 3.09128851235},
    {"ring8", 12, Sched::BP, 13.8, 0.150947131836, 0.477058333333, 0.377123167249, 0.396971754581, 0.00137014510184, 71.0043883202, 3.38240839373},
    {"ring8", 20, Sched::NOS, 20, 0.0696811453343, 0.699358333333, 0.444306899944, 0.467691473133, 0.000877923487149, 88.703373675, 4.97829738071},
    {"ring8", 20, Sched::PF, 20, 0.081201169942, 0.614333333333, 0.411585015433, 0.43324738421, 0.000877923488508, 88.7033736063, 4.61166055026},
    {"ring8", 20, Sched::BP, 23, 0.0601553062337, 0.477058333333, 0.286530900979, 0.301611474398, 0.00031520430817, 148.037723969, 5.35798514314},
};

struct EffRow {
    const char* topo;
    double delta_ms;
    Sched s;
    double xbar, theta, p999;
};

const EffRow kEffective[] = {
    {"pair2", 5, Sched::NOS, 0.899537465071, 0.0166930662474, 20.342316789},
    {"pair2", 5, Sched::PF, 0.900970094441, 0.0170155990933, 20.1485988083},
    {"pair2", 5, Sched::BP, 0.894074224703, 0.0155453876459, 21.0798586099},
    {"pair2", 12, Sched::NOS, 0.813915850472, 0.00667592754653, 32.1671559355},
    {"pair2", 12, Sched::PF, 0.818772065639, 0.00697824784327, 31.462648378},
    {"pair2", 12, Sched::BP, 0.790517930636, 0.00543338899766, 35.6560370386},
    {"pair2", 20, Sched::NOS, 0.653503127254, 0.00185577862329, 61.0106128964},
    {"pair2", 20, Sched::PF, 0.669970181382, 0.0020994025368, 57.3615149651},
    {"pair2", 20, Sched::BP, 0.600620260372, 0.00124996076527, 74.3396104639},
    {"line4", 5, Sched::NOS, 0.898631139013, 0.0164938600317, 20.4647912647},
    {"line4", 5, Sched::PF, 0.900970094441, 0.0170155990933, 20.1485988083},
    {"line4", 5, Sched::BP, 0.894074224703, 0.0155453876459, 21.0798586099},
    {"line4", 12, Sched::NOS, 0.810782225015, 0.00648982825136, 32.6251013795},
    {"line4", 12, Sched::PF, 0.818772065639, 0.00697824784327, 31.462648378},
    {"line4", 12, Sched::BP, 0.790517930636, 0.00543338899766, 35.6560370386},
    {"line4", 20, Sched::NOS, 0.642478150452, 0.00170905081649, 63.5756755502},
    {"line4", 20, Sched::PF, 0.669970181382, 0.0020994025368, 57.3615149651},
    {"line4", 20, Sched::BP, 0.600620260372, 0.00124996076527, 74.3396104639},
    {"ring8", 5, Sched::NOS, 0.898062776409, 0.0163707948975, 20.5415678319},
    {"ring8", 5, Sched::PF, 0.900970094441, 0.0170155990933, 20.1485988083},
    {"ring8", 5, Sched::BP, 0.894074224703, 0.0155453876459, 21.0798586099},
    {"ring8", 12, Sched::NOS, 0.808792213272, 0.00637511154055, 32.9173282197},
    {"ring8", 12, Sched::PF, 0.818772065639, 0.00697824784327, 31.462648378},
    {"ring8", 12, Sched::BP, 0.790517930636, 0.00543338899766, 35.6560370386},
    {"ring8", 20, Sched::NOS, 0.635306506166, 0.00161996029365, 65.3004669451},
    {"ring8", 20, Sched::PF, 0.669970181382, 0.0020994025368, 57.3615149651},
    {"ring8", 20, Sched::BP, 0.600620260372, 0.00124996076527, 74.3396104639},
};

const study::StudyPoint& find_point(const study::SweepResult& r, const std::string& topo,
                                    double delta, Sched s) {
    for (const auto& p : r.points)
        if (p.topology == topo && p.delta_ms == delta && p.scheduler == s)
            return p;
    throw std::runtime_error("sweep point missing: " + topo);
}

doctest::Approx near(double want) { return doctest::Approx(want).epsilon(1e-9); }

} // namespace

TEST_CASE("calibration pins tail parity at the worst case") {
    study::StudyConfig c = study::from_config(Config::defaults());
    study::Calibration cal = study::calibrate_gain(c);
    CHECK(cal.g == doctest::Approx(0.00960002050637).epsilon(1e-8));
    CHECK_FALSE(cal.floored);
    CHECK(cal.iters > 0);
    CHECK(cal.iters <= 200);

    study::SweepResult r = study::run_sweep(c);
    CHECK(r.calib.g == cal.g);

    const auto& nos = find_point(r, "ring8", 20.0, Sched::NOS);
    const auto& pf = find_point(r, "ring8", 20.0, Sched::PF);
    CHECK(std::abs(nos.p999_ms - pf.p999_ms) <= 1e-6 * pf.p999_ms);
    // the max-queue proxies land close together at the parity point too,
    // though not exactly: the exponent still differs through xbar
    CHECK(std::abs(nos.maxq / pf.maxq - 1.0) < 0.15);

    // the calibrated gain leaves headroom everywhere else
    CHECK(find_point(r, "pair2", 5.0, Sched::NOS).delta_margin ==
          near(0.358158383524));
    CHECK(find_point(r, "pair2", 5.0, Sched::NOS).delta_margin > 0.0);
}

TEST_CASE("nominal sweep matches the frozen reference table") {
    study::StudyConfig c = study::from_config(Config::defaults());
    study::SweepResult r = study::run_sweep(c);
    REQUIRE(r.points.size() == 27);

    for (const NomRow& row : kNominal) {
        const auto& p = find_point(r, row.topo, row.delta_ms, row.s);
        CAPTURE(row.topo);
        CAPTURE(row.delta_ms);
        CAPTURE(static_cast<int>(row.s));
        CHECK(p.delta_eff_ms == near(row.delta_eff));
        CHECK(p.delta_margin == near(row.margin));
        CHECK(p.gamma_eff == near(row.gamma_eff));
        CHECK(p.auc == near(row.auc));
        CHECK(p.xbar == near(row.xbar));
        CHECK(p.theta == near(row.theta));
        CHECK(p.p999_ms == near(row.p999));
        CHECK(p.maxq == near(row.maxq));
        CHECK(p.spill_ms == 0.0);
        CHECK_FALSE(p.clamped);
        CHECK(p.auc <= p.gamma_eff + 1e-12);
    }
}

TEST_CASE("effective mode rescales the tails but not the margins") {
    Config cfg = Config::defaults();
    cfg.set("study.mode", "effective");
    study::StudyConfig c = study::from_config(cfg);
    CHECK(c.effective_mode);
    study::SweepResult r = study::run_sweep(c);
    REQUIRE(r.points.size() == 27);

    for (const EffRow& row : kEffective) {
        const auto& p = find_point(r, row.topo, row.delta_ms, row.s);
        CAPTURE(row.topo);
        CAPTURE(row.delta_ms);
        CHECK(p.xbar == near(row.xbar));
        CHECK(p.theta == near(row.theta));
        CHECK(p.p999_ms == near(row.p999));
    }

    // margin, cap, and AUC never depend on the reporting mode
    study::SweepResult nom = study::run_sweep(study::from_config(Config::defaults()));
    for (const NomRow& row : kNominal) {
        const auto& pe = find_point(r, row.topo, row.delta_ms, row.s);
        const auto& pn = find_point(nom, row.topo, row.delta_ms, row.s);
        CHECK(pe.delta_margin == doctest::Approx(pn.delta_margin).epsilon(1e-12));
        CHECK(pe.gamma_eff == doctest::Approx(pn.gamma_eff).epsilon(1e-12));
        CHECK(pe.auc == doctest::Approx(pn.auc).epsilon(1e-12));
        CHECK(pe.delta_eff_ms == doctest::Approx(pn.delta_eff_ms).epsilon(1e-12));
    }
    CHECK(r.calib.g == doctest::Approx(nom.calib.g).epsilon(1e-12));
}

TEST_CASE("compute headroom eats the cap and can spill into delay") {
    study::StudyConfig c = study::from_config(Config::defaults());

    auto nos2 = study::headroom(c, Sched::NOS, "pair2");
    CHECK(nos2.gamma_eff == near(0.699595833333));
    CHECK(nos2.spill_ms == 0.0);
    auto nos8 = study::headroom(c, Sched::NOS, "ring8");
    CHECK(nos8.gamma_eff == near(0.699358333333));
    auto pf = study::headroom(c, Sched::PF, "line4");
    CHECK(pf.gamma_eff == near(0.614333333333));
    auto bp = study::headroom(c, Sched::BP, "ring8");
    CHECK(bp.gamma_eff == near(0.477058333333));
    CHECK(bp.spill_ms == 0.0);

    // budget exactly consumed: no radio left, nothing spills yet
    study::StudyConfig tight = c;
    tight.budget_us = alloc::du_cost(Sched::NOS, 8.0, 0.5);
    auto drained = study::headroom(tight, Sched::NOS, "pair2");
    CHECK(drained.gamma_eff == 0.0);
    CHECK(drained.spill_ms == 0.0);

    // overshoot spills, capped at the configured ceiling
    study::StudyConfig over = c;
    over.budget_us = alloc::du_cost(Sched::NOS, 8.0, 0.5) / 3.0;
    auto spilled = study::headroom(over, Sched::NOS, "pair2");
    CHECK(spilled.gamma_eff == 0.0);
    CHECK(spilled.spill_ms == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("effective delay adds the observation lag and the spill") {
    study::StudyConfig c = study::from_config(Config::defaults());
    CHECK(study::delta_eff(c, Sched::NOS, 20.0, 0.0) == doctest::Approx(20.0));
    CHECK(study::delta_eff(c, Sched::PF, 20.0, 0.5) == doctest::Approx(20.5));
    CHECK(study::delta_eff(c, Sched::BP, 20.0, 0.0) == doctest::Approx(23.0));
    CHECK(study::delta_eff(c, Sched::BP, 20.0, 0.5) == doctest::Approx(23.5));
}

TEST_CASE("margin proxy subtracts coupling only for the spiking scheduler") {
    study::StudyConfig c = study::from_config(Config::defaults());
    CHECK(study::margin_proxy(c, Sched::PF, 20.0, 0.5, 1.2) == near(0.081201169942));
    CHECK(study::margin_proxy(c, Sched::BP, 23.0, 0.5, 1.2) == near(0.0601553062337));

    double kstar20 = study::margin_proxy(c, Sched::PF, 20.0, 0.0, 1.2);
    double g_parity = kstar20 / 1.2;
    CHECK(study::margin_proxy(c, Sched::NOS, 20.0, g_parity, 1.2) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(study::margin_proxy(c, Sched::NOS, 20.0, 0.01, 1.2) ==
          near(kstar20 - 0.012));
}

TEST_CASE("utilisation map saturates and clamps") {
    study::StudyConfig c = study::from_config(Config::defaults());
    double cap = 0.7;
    CHECK(study::auc_map(c, 0.0, cap) == doctest::Approx(0.05 * cap).epsilon(1e-12));
    CHECK(study::auc_map(c, -3.0, cap) == doctest::Approx(0.05 * cap).epsilon(1e-12));
    CHECK(study::auc_map(c, 0.04, cap) == doctest::Approx(cap / 2.0).epsilon(1e-12));
    CHECK(study::auc_map(c, 1e6, cap) == doctest::Approx(cap).epsilon(1e-6));
    CHECK(study::auc_map(c, 0.04, cap) < cap);
}

TEST_CASE("tail quantiles follow the margin") {
    study::StudyConfig c = study::from_config(Config::defaults());

    study::Tails t = study::tails(c, 0.08120, 0.95, 0.95);
    CHECK_FALSE(t.clamped);
    CHECK(t.xbar == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(t.maxq == near(4.6116937729));
    CHECK(t.p999 == near(38.4307814813));
    CHECK(t.theta == doctest::Approx(4.0 * 0.08120 * 0.12 * t.xbar * 0.12 * t.xbar)
                         .epsilon(1e-12));

    // p999 shrinks as the margin grows
    double prev = 1e300;
    for (double d : {0.01, 0.05, 0.2, 1.0, 10.0}) {
        study::Tails ti = study::tails(c, d, 0.95, 0.95);
        CHECK(ti.p999 < prev);
        prev = ti.p999;
    }

    // halving the normalised utilisation doubles the quantile
    study::Tails hi = study::tails(c, 0.1, 0.8, 1.0);
    study::Tails lo = study::tails(c, 0.1, 0.4, 1.0);
    CHECK(lo.maxq == doctest::Approx(hi.maxq).epsilon(1e-12));
    CHECK(lo.p999 == doctest::Approx(2.0 * hi.p999).epsilon(1e-6));

    // non-positive margins blow the tails up and flag the point
    study::Tails flat = study::tails(c, 0.0, 0.95, 0.95);
    CHECK(flat.clamped);
    CHECK(std::isinf(flat.p999));
    CHECK(std::isinf(flat.maxq));
    study::Tails neg = study::tails(c, -0.1, 0.95, 0.95);
    CHECK(neg.clamped);
    CHECK(neg.theta < 0.0);
    CHECK(std::isinf(neg.p999));
}

TEST_CASE("tail curves are gaussian in tau with the point's exponent") {
    study::StudyConfig c = study::from_config(Config::defaults());
    study::SweepResult r = study::run_sweep(c);
    REQUIRE(r.curves.size() == 3u * 3u * 31u);

    std::map<std::pair<int, double>, double> theta;
    for (const auto& p : r.points)
        if (p.topology == "line4")
            theta[{static_cast<int>(p.scheduler), p.delta_ms}] = p.theta;

    double last_tau = -1.0;
    for (const auto& pt : r.curves) {
        double th = theta.at({static_cast<int>(pt.scheduler), pt.delta_ms});
        CHECK(pt.bound == doctest::Approx(std::exp(-th * pt.tau * pt.tau)).epsilon(1e-12));
        CHECK(pt.tau >= 0.0);
        CHECK(pt.tau <= 150.0);
        last_tau = pt.tau;
    }
    CHECK(last_tau == 150.0);

    // steepest decay belongs to the spiking scheduler at every delay
    for (double d : {5.0, 12.0, 20.0}) {
        double t_nos = theta.at({static_cast<int>(Sched::NOS), d});
        double t_pf = theta.at({static_cast<int>(Sched::PF), d});
        double t_bp = theta.at({static_cast<int>(Sched::BP), d});
        CHECK(t_nos >= t_pf - 1e-12);
        CHECK(t_pf >= t_bp - 1e-12);
    }
}

TEST_CASE("study outputs land on disk deterministically") {
    namespace fs = std::filesystem;
    study::StudyConfig c = study::from_config(Config::defaults());
    study::SweepResult r = study::run_sweep(c);

    auto written = study::write_outputs(r, c, "t_study_out", "feedfacefeedface");
    REQUIRE(written.size() == 5);
    for (const auto& p : written)
        CHECK(fs::exists(p));

    csvio::Table summary = csvio::read("t_study_out/summary.csv");
    CHECK(summary.manifest_hash == "feedfacefeedface");
    REQUIRE(summary.header.size() == 14);
    CHECK(summary.header[0] == "topology");
    CHECK(summary.header[3] == "delta_eff_ms");
    CHECK(summary.header[12] == "clamped");
    CHECK(summary.header[13] == "mode");
    CHECK(summary.rows.size() == 27);
    for (const auto& row : summary.rows)
        CHECK(row[13] == "nominal");

    csvio::Table auc = csvio::read("t_study_out/auc.csv");
    CHECK(auc.header.size() == 7);
    CHECK(auc.rows.size() == 27);
    csvio::Table tails = csvio::read("t_study_out/tails_line4.csv");
    CHECK(tails.rows.size() == 279);

    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    std::string first = slurp("t_study_out/summary.csv");
    study::write_outputs(r, c, "t_study_out", "feedfacefeedface");
    CHECK(slurp("t_study_out/summary.csv") == first);

    fs::remove_all("t_study_out");
}

TEST_CASE("study config validation") {
    auto bad = [](const char* key, const char* value) {
        Config cfg = Config::defaults();
        cfg.set(key, value);
        CHECK_THROWS_AS((void)study::from_config(cfg), nosched::ConfigError);
    };
    bad("study.mode", "banana");
    bad("study.coupling", "-0.5");
    bad("study.topologies", "");
    bad("study.delays_ms", "5,-2");
    bad("study.phi_obs", "-0.1");
    bad("study.dbar", "0");

    Config pinned = Config::defaults();
    pinned.set("study.coupling", "0.02");
    study::StudyConfig c = study::from_config(pinned);
    CHECK_FALSE(c.auto_gain);
    CHECK(c.gain == doctest::Approx(0.02));
    study::SweepResult r = study::run_sweep(c);
    CHECK(r.calib.g == doctest::Approx(0.02));
}
