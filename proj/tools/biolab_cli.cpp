// biolab: desk-scale biometric attack/defense laboratory CLI.
//
// Exit codes: 0 success, 2 usage error, 3 data error (parse/bounds),
// 4 attack terminated by a rate limiter (Blocked).

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "biolab/attack.hpp"
#include "biolab/defense.hpp"
#include "biolab/harness.hpp"
#include "biolab/pgm.hpp"
#include "biolab/sidechannel.hpp"
#include "biolab/synthesis.hpp"
#include "biolab/template_io.hpp"

using namespace biolab;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitBlocked = 4;

MinutiaeTemplate load_btm(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw io::StorageFailure("cannot open: " + p.string());
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
    return io::parse_template(bytes);
}

void save_btm(const MinutiaeTemplate& t, const fs::path& p) {
    auto bytes = io::serialize_template(t);
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw io::StorageFailure("cannot open for write: " + p.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

defense::DefensePolicy parse_policy(const std::string& spec) {
    defense::DefensePolicy p;
    std::string head = spec;
    auto plus = spec.find('+');
    std::string limit_part;
    if (plus != std::string::npos) {
        head = spec.substr(0, plus);
        limit_part = spec.substr(plus + 1);
    }
    if (head == "full") {
        p.visibility = defense::ScoreVisibility::Full;
    } else if (head == "hidden") {
        p.visibility = defense::ScoreVisibility::Hidden;
    } else if (head == "jittered") {
        p.visibility = defense::ScoreVisibility::Jittered;
    } else if (head.rfind("quantized:", 0) == 0) {
        p.visibility = defense::ScoreVisibility::Quantized;
        p.quant_step = std::stod(head.substr(10));
    } else {
        throw harness::ConfigError("unknown policy: " + spec);
    }
    if (!limit_part.empty()) {
        if (limit_part.rfind("limit:", 0) != 0) {
            throw harness::ConfigError("unknown policy suffix: " + limit_part);
        }
        defense::RateLimit rl;
        rl.budget = std::stoull(limit_part.substr(6));
        rl.epoch_ticks = 1;
        p.rate_limit = rl;
    }
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"biolab: biometric hill-climbing attack & defense laboratory"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    app.add_option("--seed", seed, "master RNG seed")->capture_default_str();

    // gen-fp
    auto* gen_fp = app.add_subcommand("gen-fp", "generate a random minutiae template");
    std::string gen_out, gen_pgm;
    int gen_n = 25, gen_w = 256, gen_h = 288;
    gen_fp->add_option("--out", gen_out, "output .btm path")->required();
    gen_fp->add_option("--pgm", gen_pgm, "also reconstruct to this PGM path");
    gen_fp->add_option("--minutiae", gen_n, "minutiae count")->capture_default_str();
    gen_fp->add_option("--width", gen_w)->capture_default_str();
    gen_fp->add_option("--height", gen_h)->capture_default_str();

    // gen-faces
    auto* gen_faces = app.add_subcommand("gen-faces", "generate a synthetic face database");
    std::string faces_dir;
    int faces_count = 64, faces_w = 32, faces_h = 32;
    gen_faces->add_option("--out-dir", faces_dir, "output directory")->required();
    gen_faces->add_option("--count", faces_count)->capture_default_str();
    gen_faces->add_option("--width", faces_w)->capture_default_str();
    gen_faces->add_option("--height", faces_h)->capture_default_str();

    // enroll
    auto* enroll = app.add_subcommand("enroll", "store a template under a user id");
    std::string enroll_store, enroll_user, enroll_tpl;
    enroll->add_option("--store", enroll_store, "store directory")->required();
    enroll->add_option("--user", enroll_user, "user id")->required();
    enroll->add_option("--template", enroll_tpl, ".btm file")->required();

    // match
    auto* match_cmd = app.add_subcommand("match", "compare two templates or two images");
    std::vector<std::string> match_files;
    double match_tau = kDefaultTau;
    match_cmd->add_option("files", match_files, "two .btm files or two .pgm files")
        ->expected(2);
    match_cmd->add_option("--tau", match_tau, "acceptance threshold")->capture_default_str();

    // reconstruct
    auto* recon = app.add_subcommand("reconstruct", "render a fingerprint from a template");
    std::string recon_in, recon_out;
    recon->add_option("--template", recon_in, ".btm file")->required();
    recon->add_option("--out", recon_out, "output PGM")->required();

    // extract
    auto* extract = app.add_subcommand("extract", "extract minutiae from a PGM image");
    std::string extract_in, extract_out;
    extract->add_option("--image", extract_in, "input PGM")->required();
    extract->add_option("--out", extract_out, "output .btm")->required();

    // obliterate
    auto* oblit = app.add_subcommand("obliterate", "apply digital scars to a print");
    std::string oblit_in, oblit_out, oblit_style = "scramble";
    int oblit_radius = 20;
    oblit->add_option("--image", oblit_in, "input PGM")->required();
    oblit->add_option("--out", oblit_out, "output PGM")->required();
    oblit->add_option("--radius", oblit_radius)->capture_default_str();
    oblit->add_option("--style", oblit_style, "erase | scramble")->capture_default_str();

    // attack-fp
    auto* atk_fp = app.add_subcommand("attack-fp", "hill-climb the minutiae matcher");
    std::string atk_store, atk_target, atk_trace;
    uint64_t atk_budget = 20000;
    std::string atk_policy = "full";
    atk_fp->add_option("--store", atk_store, "template store directory")->required();
    atk_fp->add_option("--target", atk_target, "enrolled user id")->required();
    atk_fp->add_option("--budget", atk_budget, "max oracle calls")->capture_default_str();
    atk_fp->add_option("--trace", atk_trace, "trace CSV output path");
    atk_fp->add_option("--policy", atk_policy, "full | quantized:STEP | hidden | jittered, optionally +limit:N")
        ->capture_default_str();

    // attack-timing
    auto* atk_tm = app.add_subcommand("attack-timing", "timing-guided minutiae attack");
    std::string tm_store, tm_target, tm_trace;
    uint64_t tm_budget = 20000;
    bool tm_const_time = false;
    atk_tm->add_option("--store", tm_store, "template store directory")->required();
    atk_tm->add_option("--target", tm_target, "enrolled user id")->required();
    atk_tm->add_option("--budget", tm_budget)->capture_default_str();
    atk_tm->add_option("--trace", tm_trace, "trace CSV output path");
    atk_tm->add_flag("--constant-time", tm_const_time, "harden the oracle to fixed work");

    // attack-face
    auto* atk_face = app.add_subcommand("attack-face", "eigenface-space hill climb");
    std::string face_trace, face_policy = "full";
    int face_db_count = 64, face_dim = 32, face_k = 32, face_imax = 3000;
    uint64_t face_target_idx = 0;
    atk_face->add_option("--db-count", face_db_count)->capture_default_str();
    atk_face->add_option("--dim", face_dim, "face image side length")->capture_default_str();
    atk_face->add_option("--k", face_k, "eigenface count")->capture_default_str();
    atk_face->add_option("--i-max", face_imax)->capture_default_str();
    atk_face->add_option("--target-index", face_target_idx,
                         "db index used to build the in-span target")
        ->capture_default_str();
    atk_face->add_option("--trace", face_trace, "trace CSV output path");
    atk_face->add_option("--policy", face_policy)->capture_default_str();

    // eval-defenses
    auto* eval = app.add_subcommand("eval-defenses", "attack x policy success-rate grid");
    std::string eval_out;
    int eval_trials = 20;
    uint64_t eval_budget = 20000;
    std::vector<std::string> eval_policies = {"full", "quantized:0.05", "hidden", "jittered"};
    eval->add_option("--out", eval_out, "report CSV path")->required();
    eval->add_option("--trials", eval_trials)->capture_default_str();
    eval->add_option("--budget", eval_budget)->capture_default_str();
    eval->add_option("--policies", eval_policies, "policy specs")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen_fp) {
            Rng rng(Seed{seed});
            MinutiaeTemplate t = random_template(rng, gen_n, gen_w, gen_h);
            save_btm(t, gen_out);
            if (!gen_pgm.empty()) {
                GrayImage img = synth::reconstruct(t, {}, derive_seed(Seed{seed}, 1));
                pgm::write_pgm(img, gen_pgm);
            }
            std::cout << "wrote " << gen_out << " (" << gen_n << " minutiae)\n";
        } else if (*gen_faces) {
            face::FaceDb db = face::gen_face_db(Seed{seed}, faces_count, faces_w, faces_h);
            fs::create_directories(faces_dir);
            for (size_t i = 0; i < db.images.size(); ++i) {
                pgm::write_pgm(db.images[i],
                               fs::path(faces_dir) / ("face_" + std::to_string(i) + ".pgm"));
            }
            std::cout << "wrote " << db.images.size() << " faces to " << faces_dir << "\n";
        } else if (*enroll) {
            io::TemplateStore store(enroll_store);
            store.enroll(enroll_user, load_btm(enroll_tpl));
            std::cout << "enrolled " << enroll_user << "\n";
        } else if (*match_cmd) {
            MatchScore s;
            if (fs::path(match_files[0]).extension() == ".pgm") {
                GrayImage a = pgm::read_pgm(match_files[0]);
                GrayImage b = pgm::read_pgm(match_files[1]);
                MinutiaeTemplate ta = analysis::extract_minutiae(a);
                MinutiaeTemplate tb = analysis::extract_minutiae(b);
                s = match::compare_minutiae(ta, tb, {});
            } else {
                s = match::compare_minutiae(load_btm(match_files[0]), load_btm(match_files[1]),
                                            {});
            }
            Decision d = decide(s, match_tau);
            std::printf("score %.6f decision %s\n", s.value,
                        d == Decision::Accept ? "Accept" : "Reject");
        } else if (*recon) {
            MinutiaeTemplate t = load_btm(recon_in);
            pgm::write_pgm(synth::reconstruct(t, {}, Seed{seed}), recon_out);
            std::cout << "wrote " << recon_out << "\n";
        } else if (*extract) {
            GrayImage img = pgm::read_pgm(extract_in);
            MinutiaeTemplate t = analysis::extract_minutiae(img);
            save_btm(t, extract_out);
            std::cout << "extracted " << t.minutiae.size() << " minutiae\n";
        } else if (*oblit) {
            GrayImage img = pgm::read_pgm(oblit_in);
            synth::Scar scar;
            scar.cx = img.width / 2;
            scar.cy = img.height / 2;
            scar.radius = oblit_radius;
            scar.style = oblit_style == "erase" ? synth::ScarStyle::Erase
                                                : synth::ScarStyle::Scramble;
            pgm::write_pgm(synth::obliterate(img, {scar}, Seed{seed}), oblit_out);
            std::cout << "wrote " << oblit_out << "\n";
        } else if (*atk_fp) {
            io::TemplateStore store(atk_store);
            MinutiaeTemplate target = store.lookup(atk_target);
            match::MatchParams mp;
            oracle::MatcherOracle base(target, mp);
            defense::PolicyOracle<MinutiaeTemplate> wrapped(base, parse_policy(atk_policy),
                                                            mp.tau,
                                                            derive_seed(Seed{seed}, 101));
            attack::FpAttackConfig cfg;
            cfg.max_oracle_calls = atk_budget;
            auto res = attack::attack_fp(wrapped, cfg, target.width, target.height, Seed{seed});
            if (!atk_trace.empty()) harness::export_trace_csv(res.trace, atk_trace);
            std::cout << "outcome " << attack::outcome_name(res.trace.outcome) << " after "
                      << wrapped.calls() << " calls\n";
            if (res.trace.outcome == attack::Outcome::Blocked) return kExitBlocked;
        } else if (*atk_tm) {
            io::TemplateStore store(tm_store);
            MinutiaeTemplate target = store.lookup(tm_target);
            match::MatchParams mp;
            sidechannel::TimedMatcherOracle orc(target, mp, {}, derive_seed(Seed{seed}, 77),
                                                tm_const_time);
            attack::FpAttackConfig cfg;
            cfg.max_oracle_calls = tm_budget;
            auto res = attack::timing_attack(orc, cfg, target.width, target.height, Seed{seed});
            if (!tm_trace.empty()) harness::export_trace_csv(res.trace, tm_trace);
            std::cout << "outcome " << attack::outcome_name(res.trace.outcome) << " after "
                      << orc.calls() << " calls\n";
            if (res.trace.outcome == attack::Outcome::Blocked) return kExitBlocked;
        } else if (*atk_face) {
            face::FaceDb db = face::gen_face_db(Seed{seed}, face_db_count, face_dim, face_dim);
            face::FaceModel model = face::train_eigenfaces(db, face_k);
            // in-span target: a projected database image rendered back
            face::FaceCoefficients tc =
                face::project(model, db.images[face_target_idx % db.images.size()]);
            GrayImage target = face::render_from_coefficients(model, tc);
            oracle::EigenfaceOracle base(model, target, kDefaultTau);
            defense::PolicyOracle<GrayImage> wrapped(base, parse_policy(face_policy),
                                                     kDefaultTau, derive_seed(Seed{seed}, 5));
            attack::FaceAttackConfig cfg;
            cfg.i_max = face_imax;
            auto res = attack::attack_face(wrapped, db, model, cfg, Seed{seed});
            if (!face_trace.empty()) harness::export_trace_csv(res.trace, face_trace);
            double final_score = face::compare_faces(model, res.best, target).value;
            std::printf("outcome %s final_score %.6f calls %llu\n",
                        attack::outcome_name(res.trace.outcome).c_str(), final_score,
                        static_cast<unsigned long long>(wrapped.calls()));
            if (res.trace.outcome == attack::Outcome::Blocked) return kExitBlocked;
        } else if (*eval) {
            std::vector<defense::DefensePolicy> policies;
            for (const std::string& spec : eval_policies) policies.push_back(parse_policy(spec));
            defense::DefenseEvalSetup setup;
            setup.attack_cfg.max_oracle_calls = eval_budget;
            auto report = defense::evaluate_defenses(
                {defense::AttackKind::FpHillClimb, defense::AttackKind::FpTiming}, policies,
                eval_trials, Seed{seed}, setup);
            harness::export_defense_csv(report, eval_out);
            std::cout << "wrote " << eval_out << " (" << report.cells.size() << " cells)\n";
        }
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const io::OutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const pgm::PgmError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const harness::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
